//! One-step and multi-step time evolution.
//!
//! A step applies the pair coin, the coin-conditioned displacement, and the
//! inverse-distance phase at the displaced positions, fused into one stencil.
//! On the `(x1, x2)` plane the update at each destination cell reads the four
//! diagonal neighbors:
//!
//! ```text
//! R'(x1,x2) = g(x1-x2) [R + D + U + L](x1-1, x2-1)
//! D'(x1,x2) = g(x1-x2) [R - D + U - L](x1-1, x2+1)
//! U'(x1,x2) = g(x1-x2) [R + D - U - L](x1+1, x2-1)
//! L'(x1,x2) = g(x1-x2) [R - D - U + L](x1+1, x2+1)
//! ```
//!
//! and in relative/center coordinates `(rho, sigma)`:
//!
//! ```text
//! R'(rho,sigma) = g(rho) [R + D + U + L](rho,   sigma-2)
//! D'(rho,sigma) = g(rho) [R - D + U - L](rho-2, sigma)
//! U'(rho,sigma) = g(rho) [R + D - U - L](rho+2, sigma)
//! L'(rho,sigma) = g(rho) [R - D - U + L](rho,   sigma+2)
//! ```
//!
//! with `g(rho) = (1/2) exp(i phi / |rho|)` and `g(0) = (1/2) exp(i phi0)`.
//! Both formulations are the same unitary under the change of variables.
//! Amplitude support grows by at most one stored site per axis per step, so
//! a box padded by the step count evolves exactly; stepping refuses to run
//! when nonzero amplitude sits on the box edge.

use rayon::prelude::*;

use crate::coin::CoinVector;
use crate::error::WalkError;
use crate::field::{AmplitudeField, Boundary, Coords};
use crate::observables::{record, ObservableSeries};
use crate::params::{line_coupling, WalkParams};
use crate::{C64, Parity};

fn clip_error(field: &AmplitudeField, step: usize) -> WalkError {
    WalkError::BoundaryClipped {
        step,
        a_lo: *field.a_range().start(),
        a_hi: *field.a_range().end(),
        b_lo: *field.b_range().start(),
        b_hi: *field.b_range().end(),
    }
}

struct Fetch<'a> {
    data: &'a [CoinVector],
    na: isize,
    nb: isize,
    periodic: bool,
}

impl<'a> Fetch<'a> {
    #[inline]
    fn at(&self, ia: isize, ib: isize) -> CoinVector {
        let (ia, ib) = if self.periodic {
            (ia.rem_euclid(self.na), ib.rem_euclid(self.nb))
        } else {
            if ia < 0 || ib < 0 || ia >= self.na || ib >= self.nb {
                return CoinVector::ZERO;
            }
            (ia, ib)
        };
        self.data[(ia * self.nb + ib) as usize]
    }
}

/// Advance an `(x1, x2)` field by one step.
pub fn step_x1x2(field: &AmplitudeField, params: &WalkParams) -> Result<AmplitudeField, WalkError> {
    if field.coords() != Coords::X1X2 {
        return Err(WalkError::FieldContract(
            "step_x1x2 requires a field in (x1, x2) coordinates".into(),
        ));
    }
    if field.boundary() == Boundary::HardWall && field.edge_occupied() {
        return Err(clip_error(field, 0));
    }
    let (na, nb) = field.dims();
    let a_lo = *field.a_range().start();
    let b_hi = *field.b_range().end();
    let rho_min = a_lo - b_hi;
    let couplings: Vec<C64> = (0..na + nb - 1)
        .map(|i| line_coupling(rho_min + i as i64, params.phi, params.phi0))
        .collect();
    let fetch = Fetch {
        data: field.data(),
        na: na as isize,
        nb: nb as isize,
        periodic: field.boundary() == Boundary::Periodic,
    };

    let mut out = field.clone();
    out.data_mut()
        .par_chunks_mut(nb)
        .enumerate()
        .for_each(|(ia, row)| {
            let ia = ia as isize;
            for (ib_u, cell) in row.iter_mut().enumerate() {
                let ib = ib_u as isize;
                let g = couplings[(ia - ib + nb as isize - 1) as usize];
                let mm = fetch.at(ia - 1, ib - 1);
                let mp = fetch.at(ia - 1, ib + 1);
                let pm = fetch.at(ia + 1, ib - 1);
                let pp = fetch.at(ia + 1, ib + 1);
                *cell = CoinVector {
                    r: g * (mm.r + mm.d + mm.u + mm.l),
                    d: g * (mp.r - mp.d + mp.u - mp.l),
                    u: g * (pm.r + pm.d - pm.u - pm.l),
                    l: g * (pp.r - pp.d - pp.u + pp.l),
                };
            }
        });
    Ok(out)
}

/// Advance a `(rho, sigma)` field one step on the parity sublattice of `params`.
pub fn step_rhosigma(
    field: &AmplitudeField,
    params: &WalkParams,
) -> Result<AmplitudeField, WalkError> {
    if field.coords() != Coords::RhoSigma {
        return Err(WalkError::FieldContract(
            "step_rhosigma requires a field in (rho, sigma) coordinates".into(),
        ));
    }
    if field.parity() != Some(params.parity) {
        return Err(WalkError::FieldContract(format!(
            "field lives on the {:?} sublattice but params select {:?}",
            field.parity().unwrap(),
            params.parity
        )));
    }
    if field.boundary() == Boundary::HardWall && field.edge_occupied() {
        return Err(clip_error(field, 0));
    }
    let (na, nb) = field.dims();
    let a_lo = *field.a_range().start();
    let couplings: Vec<C64> = (0..na)
        .map(|ia| line_coupling(a_lo + 2 * ia as i64, params.phi, params.phi0))
        .collect();
    let fetch = Fetch {
        data: field.data(),
        na: na as isize,
        nb: nb as isize,
        periodic: field.boundary() == Boundary::Periodic,
    };

    let mut out = field.clone();
    out.data_mut()
        .par_chunks_mut(nb)
        .enumerate()
        .for_each(|(ia_u, row)| {
            let ia = ia_u as isize;
            let g = couplings[ia_u];
            for (ib_u, cell) in row.iter_mut().enumerate() {
                let ib = ib_u as isize;
                let sm = fetch.at(ia, ib - 1);
                let dm = fetch.at(ia - 1, ib);
                let dp = fetch.at(ia + 1, ib);
                let sp = fetch.at(ia, ib + 1);
                *cell = CoinVector {
                    r: g * (sm.r + sm.d + sm.u + sm.l),
                    d: g * (dm.r - dm.d + dm.u - dm.l),
                    u: g * (dp.r + dp.d - dp.u - dp.l),
                    l: g * (sp.r - sp.d - sp.u + sp.l),
                };
            }
        });
    Ok(out)
}

/// One step in whichever coordinate system the field uses.
pub fn step(field: &AmplitudeField, params: &WalkParams) -> Result<AmplitudeField, WalkError> {
    match field.coords() {
        Coords::X1X2 => step_x1x2(field, params),
        Coords::RhoSigma => step_rhosigma(field, params),
    }
}

/// Apply `n` steps.
pub fn run_steps(
    field: &AmplitudeField,
    params: &WalkParams,
    n: usize,
) -> Result<AmplitudeField, WalkError> {
    let mut f = field.clone();
    for t in 1..=n {
        f = step(&f, params).map_err(|e| match e {
            WalkError::BoundaryClipped {
                a_lo,
                a_hi,
                b_lo,
                b_hi,
                ..
            } => WalkError::BoundaryClipped {
                step: t,
                a_lo,
                a_hi,
                b_lo,
                b_hi,
            },
            other => other,
        })?;
    }
    Ok(f)
}

/// Location of a point initial state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointSite {
    X1X2 { x1: i64, x2: i64 },
    RhoSigma { rho: i64, sigma: i64 },
}

/// Description of the initial walker-pair state.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialStateSpec {
    /// Both walkers sharply localized, one coin vector.
    Point { site: PointSite, coin: CoinVector },
    /// A fixed profile over the relative coordinate repeated with uniform
    /// amplitude over a contiguous window of same-parity `sigma` sites.
    SigmaSegment {
        rho_profile: Vec<(i64, CoinVector)>,
        sigma_lo: i64,
        sigma_hi: i64,
    },
    /// Product of two Gaussian wavepackets
    /// `exp(-(x - x0)^2 / (4 w^2)) exp(i k x)` (position spread `w` per
    /// walker) sharing one coin vector.
    GaussianPair {
        center1: f64,
        center2: f64,
        width: f64,
        kx: f64,
        ky: f64,
        coin: CoinVector,
    },
}

/// Gaussian amplitudes are cut off at this many widths from the center; the
/// discarded tail mass is far below every tolerance in use.
const GAUSSIAN_CUTOFF_WIDTHS: f64 = 12.0;

impl InitialStateSpec {
    pub fn validate(&self) -> Result<(), WalkError> {
        let unit_coin = |coin: &CoinVector| -> Result<(), WalkError> {
            if !coin.is_finite() {
                return Err(WalkError::InvalidInitialState(
                    "coin has non-finite components".into(),
                ));
            }
            if (coin.norm_sqr().sqrt() - 1.0).abs() > 1e-12 {
                return Err(WalkError::InvalidInitialState(
                    "coin vector must have unit norm".into(),
                ));
            }
            Ok(())
        };
        match self {
            InitialStateSpec::Point { site, coin } => {
                unit_coin(coin)?;
                if let PointSite::RhoSigma { rho, sigma } = site {
                    if !Parity::of(*rho).matches(*sigma) {
                        return Err(WalkError::InvalidInitialState(format!(
                            "rho = {rho} and sigma = {sigma} must share parity"
                        )));
                    }
                }
                Ok(())
            }
            InitialStateSpec::SigmaSegment {
                rho_profile,
                sigma_lo,
                sigma_hi,
            } => {
                if rho_profile.is_empty() {
                    return Err(WalkError::InvalidInitialState(
                        "rho profile is empty".into(),
                    ));
                }
                if sigma_lo > sigma_hi {
                    return Err(WalkError::InvalidInitialState(
                        "empty sigma window".into(),
                    ));
                }
                let parity = Parity::of(rho_profile[0].0);
                for (rho, cv) in rho_profile {
                    if !parity.matches(*rho) {
                        return Err(WalkError::InvalidInitialState(
                            "rho profile mixes parities".into(),
                        ));
                    }
                    if !cv.is_finite() {
                        return Err(WalkError::InvalidInitialState(
                            "rho profile has non-finite amplitudes".into(),
                        ));
                    }
                }
                if !parity.matches(*sigma_lo) || !parity.matches(*sigma_hi) {
                    return Err(WalkError::InvalidInitialState(
                        "sigma window must share the rho parity".into(),
                    ));
                }
                let total: f64 = rho_profile.iter().map(|(_, cv)| cv.norm_sqr()).sum();
                if total <= 0.0 {
                    return Err(WalkError::InvalidInitialState(
                        "rho profile has zero norm".into(),
                    ));
                }
                Ok(())
            }
            InitialStateSpec::GaussianPair {
                center1,
                center2,
                width,
                kx,
                ky,
                coin,
            } => {
                unit_coin(coin)?;
                if !(width.is_finite() && *width > 0.0) {
                    return Err(WalkError::InvalidInitialState(
                        "width must be positive".into(),
                    ));
                }
                if ![center1, center2, kx, ky].iter().all(|v| v.is_finite()) {
                    return Err(WalkError::InvalidInitialState(
                        "centers and momenta must be finite".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Coordinate system the state is naturally built in.
    pub fn natural_coords(&self) -> Coords {
        match self {
            InitialStateSpec::Point {
                site: PointSite::X1X2 { .. },
                ..
            } => Coords::X1X2,
            InitialStateSpec::Point {
                site: PointSite::RhoSigma { .. },
                ..
            } => Coords::RhoSigma,
            InitialStateSpec::SigmaSegment { .. } => Coords::RhoSigma,
            InitialStateSpec::GaussianPair { .. } => Coords::X1X2,
        }
    }
}

fn gaussian_samples(center: f64, width: f64, k: f64) -> Vec<(i64, C64)> {
    let radius = (GAUSSIAN_CUTOFF_WIDTHS * width).ceil() as i64;
    let c = center.round() as i64;
    (c - radius..=c + radius)
        .map(|x| {
            let dx = x as f64 - center;
            let amp = (-dx * dx / (4.0 * width * width)).exp();
            let phase = k * x as f64;
            (x, amp * C64::new(phase.cos(), phase.sin()))
        })
        .collect()
}

/// Construct the normalized initial field described by `spec`.
pub fn build_initial(
    spec: &InitialStateSpec,
    _params: &WalkParams,
) -> Result<AmplitudeField, WalkError> {
    spec.validate()?;
    let field = match spec {
        InitialStateSpec::Point { site, coin } => {
            let (coords, a, b) = match *site {
                PointSite::X1X2 { x1, x2 } => (Coords::X1X2, x1, x2),
                PointSite::RhoSigma { rho, sigma } => (Coords::RhoSigma, rho, sigma),
            };
            AmplitudeField::from_amplitudes(coords, &[((a, b), *coin)])?
        }
        InitialStateSpec::SigmaSegment {
            rho_profile,
            sigma_lo,
            sigma_hi,
        } => {
            let mut sites = Vec::new();
            for (rho, cv) in rho_profile {
                let mut sigma = *sigma_lo;
                while sigma <= *sigma_hi {
                    sites.push(((*rho, sigma), *cv));
                    sigma += 2;
                }
            }
            AmplitudeField::from_amplitudes(Coords::RhoSigma, &sites)?
        }
        InitialStateSpec::GaussianPair {
            center1,
            center2,
            width,
            kx,
            ky,
            coin,
        } => {
            let psi1 = gaussian_samples(*center1, *width, *kx);
            let psi2 = gaussian_samples(*center2, *width, *ky);
            let mut sites = Vec::with_capacity(psi1.len() * psi2.len());
            for &(x1, a1) in &psi1 {
                for &(x2, a2) in &psi2 {
                    sites.push(((x1, x2), coin.mul(a1 * a2)));
                }
            }
            AmplitudeField::from_amplitudes(Coords::X1X2, &sites)?
        }
    };
    field.normalized()
}

/// Options for [`evolve`].
#[derive(Debug, Clone)]
pub struct EvolveOptions {
    /// Record observables every `stride` steps (t = 0 and t = t_max always).
    pub stride: usize,
    /// Steps at which the marginal arrays are kept in the record.
    pub marginal_times: Vec<usize>,
    /// Steps at which the full joint probability grid is kept.
    pub joint_times: Vec<usize>,
    /// Extra padding beyond the light cone when sizing the box.
    pub margin: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            stride: 1,
            marginal_times: Vec::new(),
            joint_times: Vec::new(),
            margin: 4,
        }
    }
}

/// Build the initial state, apply `t_max` steps, and collect observables.
///
/// Deterministic: identical inputs give bit-identical results.
pub fn evolve(
    init: &InitialStateSpec,
    params: &WalkParams,
    t_max: usize,
    opts: &EvolveOptions,
) -> Result<ObservableSeries, WalkError> {
    evolve_observed(init, params, t_max, opts, |_, _| Ok(()))
}

/// [`evolve`] with a per-record callback on the current field. An observer
/// error aborts the run.
pub fn evolve_observed(
    init: &InitialStateSpec,
    params: &WalkParams,
    t_max: usize,
    opts: &EvolveOptions,
    mut observer: impl FnMut(usize, &AmplitudeField) -> Result<(), String>,
) -> Result<ObservableSeries, WalkError> {
    if opts.stride == 0 {
        return Err(WalkError::InvalidParameter("stride must be >= 1".into()));
    }
    let pad = t_max + opts.margin;
    let mut field = build_initial(init, params)?.padded(pad, pad);
    let coords = field.coords();
    let parity = field.parity();

    let mut records = Vec::new();
    let take = |t: usize,
                    field: &AmplitudeField,
                    records: &mut Vec<_>,
                    observer: &mut dyn FnMut(usize, &AmplitudeField) -> Result<(), String>|
     -> Result<(), WalkError> {
        let keep_marginal = opts.marginal_times.contains(&t);
        let keep_joint = opts.joint_times.contains(&t);
        if t == 0 || t == t_max || t % opts.stride == 0 || keep_marginal || keep_joint {
            records.push(record(field, t, keep_marginal, keep_joint));
            observer(t, field).map_err(|message| WalkError::ObserverAborted {
                step: t,
                completed: records.len(),
                message,
            })?;
        }
        Ok(())
    };

    take(0, &field, &mut records, &mut observer)?;
    for t in 1..=t_max {
        field = step(&field, params).map_err(|e| match e {
            WalkError::BoundaryClipped {
                a_lo,
                a_hi,
                b_lo,
                b_hi,
                ..
            } => WalkError::BoundaryClipped {
                step: t,
                a_lo,
                a_hi,
                b_lo,
                b_hi,
            },
            other => other,
        })?;
        take(t, &field, &mut records, &mut observer)?;
    }

    Ok(ObservableSeries {
        coords,
        parity,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{joint_probability, marginals};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn params_free() -> WalkParams {
        WalkParams::new(0.0, 0.0, Parity::Odd, 21).unwrap()
    }

    fn params_odd(phi: f64) -> WalkParams {
        WalkParams::new(phi, 0.0, Parity::Odd, 21).unwrap()
    }

    fn random_field_x1x2(rng: &mut impl Rng, half: i64) -> AmplitudeField {
        let mut sites = Vec::new();
        for x1 in -half..=half {
            for x2 in -half..=half {
                let cv = CoinVector::from_array(std::array::from_fn(|_| {
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }));
                sites.push(((x1, x2), cv));
            }
        }
        AmplitudeField::from_amplitudes(Coords::X1X2, &sites)
            .unwrap()
            .normalized()
            .unwrap()
    }

    #[test]
    fn zero_field_steps_to_zero_field() {
        let f = AmplitudeField::new_zero(Coords::X1X2, -3..=3, -3..=3).unwrap();
        let g = step_x1x2(&f, &params_odd(1.3)).unwrap();
        assert!(g.support_bounds().is_none());
    }

    #[test]
    fn point_state_spreads_to_four_corners() {
        let coin = CoinVector::from_re(1.0, 0.0, 0.0, 0.0);
        let f = AmplitudeField::from_amplitudes(Coords::X1X2, &[((0, 5), coin)])
            .unwrap()
            .padded(2, 2);
        let g = step_x1x2(&f, &params_odd(0.77)).unwrap();
        let expect = [(1i64, 6i64), (1, 4), (-1, 6), (-1, 4)];
        let joint = joint_probability(&g);
        for (x1, x2) in expect {
            assert!(
                (joint.get(x1, x2) - 0.25).abs() < 1e-15,
                "({x1},{x2}): {}",
                joint.get(x1, x2)
            );
        }
        assert!((g.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn norm_is_conserved_over_fifty_steps() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let f = random_field_x1x2(&mut rng, 5).padded(55, 55);
        let g = run_steps(&f, &params_odd(1.0), 50).unwrap();
        assert!((g.norm_sqr() - 1.0).abs() < 5e-12);
    }

    #[test]
    fn coordinate_systems_implement_the_same_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for parity in [0i64, 1] {
            let mut sites = Vec::new();
            for _ in 0..10 {
                let rho = 2 * rng.gen_range(-4i64..4) + parity;
                let sigma = 2 * rng.gen_range(-4i64..4) + parity;
                let cv = CoinVector::from_array(std::array::from_fn(|_| {
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }));
                sites.push(((rho, sigma), cv));
            }
            let f_rs = AmplitudeField::from_amplitudes(Coords::RhoSigma, &sites)
                .unwrap()
                .normalized()
                .unwrap()
                .padded(6, 6);
            let params = WalkParams::new(
                1.0,
                0.9,
                if parity == 0 { Parity::Even } else { Parity::Odd },
                21,
            )
            .unwrap();
            let a = run_steps(&f_rs, &params, 5).unwrap();
            let b = run_steps(&f_rs.to_x1x2().unwrap().padded(12, 12), &params, 5)
                .unwrap()
                .to_rho_sigma()
                .unwrap();
            assert!(a.max_abs_diff(&b) < 1e-14);
        }
    }

    #[test]
    fn parity_sublattice_is_exactly_conserved_in_x1x2() {
        let coin = CoinVector::from_re(0.5, 0.5, 0.5, 0.5);
        let f = AmplitudeField::from_amplitudes(Coords::X1X2, &[((0, 1), coin)])
            .unwrap()
            .padded(12, 12);
        let g = run_steps(&f, &params_odd(1.0), 10).unwrap();
        for (x1, x2, cv) in g.iter() {
            if (x1 + x2).rem_euclid(2) == 0 {
                assert!(cv.is_zero(), "even-parity cell ({x1},{x2}) leaked");
            }
        }
    }

    #[test]
    fn light_cone_grows_by_one_site_per_axis() {
        let coin = CoinVector::from_re(0.5, 0.5, 0.5, 0.5);
        let f = AmplitudeField::from_amplitudes(Coords::X1X2, &[((2, -1), coin)])
            .unwrap()
            .padded(8, 8);
        let mut g = f.clone();
        for t in 1..=6 {
            g = step_x1x2(&g, &params_odd(0.3)).unwrap();
            let (alo, ahi, blo, bhi) = g.support_bounds().unwrap();
            assert!(alo >= 2 - t && ahi <= 2 + t);
            assert!(blo >= -1 - t && bhi <= -1 + t);
        }
    }

    #[test]
    fn clipping_is_detected_not_silent() {
        let coin = CoinVector::from_re(1.0, 0.0, 0.0, 0.0);
        let f = AmplitudeField::from_amplitudes(Coords::X1X2, &[((0, 0), coin)])
            .unwrap()
            .padded(1, 1);
        // one step is fine, the second would clip
        let g = step_x1x2(&f, &params_free()).unwrap();
        assert!(matches!(
            step_x1x2(&g, &params_free()),
            Err(WalkError::BoundaryClipped { .. })
        ));
    }

    #[test]
    fn exchange_equivariance_under_stepping() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let mut sites = Vec::new();
        for _ in 0..12 {
            let rho = 2 * rng.gen_range(-4i64..4) + 1;
            let sigma = 2 * rng.gen_range(-4i64..4) + 1;
            let cv = CoinVector::from_array(std::array::from_fn(|_| {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }));
            sites.push(((rho, sigma), cv));
        }
        let f = AmplitudeField::from_amplitudes(Coords::RhoSigma, &sites)
            .unwrap()
            .normalized()
            .unwrap()
            .padded(5, 5);
        let params = params_odd(1.0);
        let a = step_rhosigma(&f.exchange(), &params).unwrap();
        let b = step_rhosigma(&f, &params).unwrap().exchange();
        assert!(a.max_abs_diff(&b) < 1e-13);
    }

    #[test]
    fn segment_spreads_uniformly_over_columns() {
        let spec = InitialStateSpec::SigmaSegment {
            rho_profile: vec![(1, CoinVector::from_re(0.0, 0.0, 0.5f64.sqrt(), 0.5f64.sqrt()))],
            sigma_lo: -13,
            sigma_hi: 13,
        };
        let params = params_odd(1.0);
        let f = build_initial(&spec, &params).unwrap();
        let (_, p_sigma) = marginals(&f);
        let occupied: Vec<(i64, f64)> = p_sigma.iter().filter(|(_, p)| *p > 0.0).collect();
        assert_eq!(occupied.len(), 14);
        for (_, p) in occupied {
            assert!((p - 1.0 / 14.0).abs() < 1e-14);
        }
    }

    #[test]
    fn gaussian_pair_means_match_centers() {
        let spec = InitialStateSpec::GaussianPair {
            center1: 300.0,
            center2: -300.0,
            width: 10.0,
            kx: 0.3,
            ky: -1.1,
            coin: CoinVector::from_re(1.0, 0.0, 0.0, 0.0),
        };
        let params = params_odd(1.0);
        let f = build_initial(&spec, &params).unwrap();
        assert!((f.norm_sqr() - 1.0).abs() < 1e-12);
        let r = record(&f, 0, false, false);
        assert!((r.mean_x1() - 300.0).abs() < 0.01);
        assert!((r.mean_x2() + 300.0).abs() < 0.01);
        assert!((r.mean_rho - 600.0).abs() < 0.02);
    }

    #[test]
    fn evolve_with_zero_steps_records_initial_state() {
        let spec = InitialStateSpec::Point {
            site: PointSite::RhoSigma { rho: 1, sigma: 0 },
            coin: CoinVector::from_re(1.0, 0.0, 0.0, 0.0),
        };
        // rho=1, sigma=0 mix parity -> invalid
        assert!(spec.validate().is_err());

        let spec = InitialStateSpec::Point {
            site: PointSite::RhoSigma { rho: 1, sigma: 1 },
            coin: CoinVector::from_re(1.0, 0.0, 0.0, 0.0),
        };
        let series = evolve(&spec, &params_odd(0.5), 0, &EvolveOptions::default()).unwrap();
        assert_eq!(series.records.len(), 1);
        assert_eq!(series.records[0].t, 0);
        assert!((series.records[0].norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn evolve_is_deterministic() {
        let spec = InitialStateSpec::Point {
            site: PointSite::X1X2 { x1: 0, x2: 0 },
            coin: CoinVector::from_re(0.5, 0.5, 0.5, 0.5),
        };
        let params = WalkParams::new(0.8, 0.4, Parity::Even, 21).unwrap();
        let a = evolve(&spec, &params, 12, &EvolveOptions::default()).unwrap();
        let b = evolve(&spec, &params, 12, &EvolveOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn observer_abort_carries_step() {
        let spec = InitialStateSpec::Point {
            site: PointSite::X1X2 { x1: 0, x2: 0 },
            coin: CoinVector::from_re(1.0, 0.0, 0.0, 0.0),
        };
        let err = evolve_observed(
            &spec,
            &params_odd(0.1),
            10,
            &EvolveOptions::default(),
            |t, _| if t >= 3 { Err("stop".into()) } else { Ok(()) },
        )
        .unwrap_err();
        match err {
            WalkError::ObserverAborted {
                step, completed, ..
            } => {
                assert_eq!(step, 3);
                assert_eq!(completed, 4);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn norm_preserved_per_step_within_tolerance() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let f = random_field_x1x2(&mut rng, 4).padded(3, 3);
        let g = step_x1x2(&f, &params_odd(2.2)).unwrap();
        assert!((g.norm_sqr() - f.norm_sqr()).abs() < 1e-13);
    }
}
