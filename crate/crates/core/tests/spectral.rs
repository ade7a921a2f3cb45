//! Ring-size stability and band-structure behavior of the bound states.

use pairwalk::boundstates::catalog;
use pairwalk::spectral::{band_scan, build_bloch, eigensystem, ExchangeLabel};
use pairwalk::{Parity, WalkParams};

/// Bound-state quasienergies are insensitive to enlarging the ring: the
/// states are localized, so the periodic boundary is invisible to them.
#[test]
fn catalog_is_stable_under_ring_enlargement() {
    let k = 0.0;
    let small = WalkParams::new(1.0, 0.0, Parity::Odd, 121).unwrap();
    let large = WalkParams::new(1.0, 0.0, Parity::Odd, 123).unwrap();
    let recs_small: Vec<_> = catalog(&small, k)
        .unwrap()
        .into_iter()
        .filter(|r| r.support_radius <= 12)
        .collect();
    let recs_large = catalog(&large, k).unwrap();
    assert!(!recs_small.is_empty());
    for r in &recs_small {
        let nearest = recs_large
            .iter()
            .map(|s| (s.omega - r.omega).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(
            nearest < 1e-6,
            "omega = {} moved by {nearest:.2e} when N grew",
            r.omega
        );
    }
}

/// The interacting odd-sector scan shows tightly localized branches at
/// every momentum, and the free scan shows none.
#[test]
fn interacting_scan_keeps_tight_branches_at_every_k() {
    let params = WalkParams::new(1.0, 0.0, Parity::Odd, 95).unwrap();
    let grid: Vec<f64> = (0..9).map(|j| -1.5 + j as f64 * (3.0 / 8.0)).collect();
    let table = band_scan(&params, &grid).unwrap();
    for &k in &grid {
        let kk = pairwalk::spectral::wrap_momentum(k);
        let tight = table
            .rows
            .iter()
            .filter(|r| (r.k - kk).abs() < 1e-12 && r.support_radius <= 3)
            .count();
        assert!(tight >= 3, "only {tight} tight states at k = {k}");
    }
}

/// The triply degenerate omega = phi family at k = 0 splits with momentum
/// into two dispersing boson branches and one near-stationary fermion.
#[test]
fn pinned_family_splits_into_two_bosons_and_a_fermion() {
    let params = WalkParams::new(1.0, 0.0, Parity::Odd, 41).unwrap();
    let op = build_bloch(0.1, &params).unwrap();
    let states = eigensystem(&op).unwrap();
    let family: Vec<_> = states
        .iter()
        .filter(|s| (s.omega - 1.0).abs() < 0.2 && s.support_radius <= 3)
        .collect();
    assert_eq!(family.len(), 3);
    let bosons = family
        .iter()
        .filter(|s| s.exchange == ExchangeLabel::Boson)
        .count();
    let fermions = family
        .iter()
        .filter(|s| s.exchange == ExchangeLabel::Fermion)
        .count();
    assert_eq!((bosons, fermions), (2, 1));
    // the fermion branch stays closest to omega = phi
    let fermion = family
        .iter()
        .find(|s| s.exchange == ExchangeLabel::Fermion)
        .unwrap();
    for s in &family {
        assert!((fermion.omega - 1.0).abs() <= (s.omega - 1.0).abs() + 1e-12);
    }
}
