//! Fixed-momentum Bloch operator on the relative-coordinate ring and its
//! eigendecomposition.
//!
//! Plane waves `C(rho, sigma, t) = e^{i(omega t - k sigma)} C(rho)` reduce
//! the walk to a `4N x 4N` unitary per pseudo-momentum `k`:
//!
//! ```text
//! e^{i omega} R(rho) = g(rho) e^{+2ik} [R + D + U + L](rho)
//! e^{i omega} D(rho) = g(rho)          [R - D + U - L](rho - 2)
//! e^{i omega} U(rho) = g(rho)          [R + D - U - L](rho + 2)
//! e^{i omega} L(rho) = g(rho) e^{-2ik} [R - D - U + L](rho)
//! ```
//!
//! with periodic wrap-around on the ring. Eigenphases are the quasienergies
//! `omega` in `[-pi, pi)`; `k` lives in `[-pi/2, pi/2)` (the operator is
//! `pi`-periodic in `k` because `sigma` steps by two).
//!
//! Eigenvectors within a numerically degenerate eigenphase cluster are
//! rotated to diagonalize the particle-exchange operator
//! `P: (R, D, U, L)(rho) -> (R, U, D, L)(-rho)` so every state carries a
//! boson/fermion label whenever `P` preserves the cluster.

use faer::{c64, Mat};
use rayon::prelude::*;

use crate::error::WalkError;
use crate::params::{line_coupling, WalkParams};
use crate::ring::RingGeometry;
use crate::{wrap_phase, C64};

/// Eigenphase gap below which states are treated as one degenerate cluster.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Exchange-symmetry class of an eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExchangeLabel {
    Boson,
    Fermion,
    /// The exchange operator did not preserve the degenerate cluster (or the
    /// diagonalized exchange eigenvalue was not `+-1`); flagged loudly
    /// instead of silently mislabeled.
    Mixed,
}

impl std::fmt::Display for ExchangeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExchangeLabel::Boson => write!(f, "boson"),
            ExchangeLabel::Fermion => write!(f, "fermion"),
            ExchangeLabel::Mixed => write!(f, "mixed"),
        }
    }
}

/// The one-step walk operator at fixed pseudo-momentum.
#[derive(Debug, Clone)]
pub struct BlochOperator {
    k: f64,
    params: WalkParams,
    ring: RingGeometry,
    matrix: Mat<c64>,
}

/// One eigenpair of a [`BlochOperator`].
#[derive(Debug, Clone)]
pub struct EigenState {
    /// Eigenphase (quasienergy) in `[-pi, pi)`.
    pub omega: f64,
    /// Normalized eigenvector, site-major with coin order `(R, D, U, L)`.
    pub vector: Vec<C64>,
    pub k: f64,
    pub exchange: ExchangeLabel,
    /// Inverse participation ratio of the site probabilities: ~1 for a
    /// state pinned to one site, ~1/N for an extended state.
    pub ipr: f64,
    /// Smallest `|rho|` radius containing 99% of the probability.
    pub support_radius: i64,
}

/// Wrap any finite `k` into the fundamental domain `[-pi/2, pi/2)`.
pub fn wrap_momentum(k: f64) -> f64 {
    0.5 * wrap_phase(2.0 * k)
}

/// Build the `4N x 4N` Bloch operator for `params` at pseudo-momentum `k`.
pub fn build_bloch(k: f64, params: &WalkParams) -> Result<BlochOperator, WalkError> {
    if !k.is_finite() {
        return Err(WalkError::InvalidParameter("k must be finite".into()));
    }
    let k = wrap_momentum(k);
    let ring = params.ring();
    let n = ring.n_sites();
    let dim = ring.dim();
    let fwd = c64::from_polar(1.0, 2.0 * k);
    let bwd = fwd.conj();

    let mut m: Mat<c64> = Mat::zeros(dim, dim);
    for s in 0..n {
        let g = line_coupling(ring.label(s), params.phi, params.phi0);
        let gf = g * fwd;
        let gb = g * bwd;
        let (prev, next) = (ring.prev(s), ring.next(s));
        let row = 4 * s;
        for (c, sign) in [1.0, 1.0, 1.0, 1.0].iter().enumerate() {
            m[(row, 4 * s + c)] += gf.scale(*sign);
        }
        for (c, sign) in [1.0, -1.0, 1.0, -1.0].iter().enumerate() {
            m[(row + 1, 4 * prev + c)] += g.scale(*sign);
        }
        for (c, sign) in [1.0, 1.0, -1.0, -1.0].iter().enumerate() {
            m[(row + 2, 4 * next + c)] += g.scale(*sign);
        }
        for (c, sign) in [1.0, -1.0, -1.0, 1.0].iter().enumerate() {
            m[(row + 3, 4 * s + c)] += gb.scale(*sign);
        }
    }

    Ok(BlochOperator {
        k,
        params: *params,
        ring,
        matrix: m,
    })
}

impl BlochOperator {
    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn params(&self) -> &WalkParams {
        &self.params
    }

    pub fn ring(&self) -> &RingGeometry {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    pub fn matrix(&self) -> &Mat<c64> {
        &self.matrix
    }

    /// `M v` for a basis-ordered vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let dim = self.dim();
        assert_eq!(v.len(), dim);
        let mut out = vec![C64::new(0.0, 0.0); dim];
        for i in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..dim {
                let mij = self.matrix[(i, j)];
                if mij != c64::new(0.0, 0.0) {
                    acc += mij * v[j];
                }
            }
            out[i] = acc;
        }
        out
    }

    /// `max |(M^H M - I)_ij|`; < 1e-12 for every valid operator.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.matrix.adjoint() * &self.matrix;
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p[(i, j)] - c64::new(expect, 0.0)).norm());
            }
        }
        worst
    }
}

/// Apply the particle-exchange operator to a basis-ordered ring vector.
pub fn apply_exchange(ring: &RingGeometry, v: &[C64]) -> Vec<C64> {
    assert_eq!(v.len(), ring.dim());
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for s in 0..ring.n_sites() {
        let t = ring.exchange_site(s);
        out[4 * t] = v[4 * s];
        out[4 * t + 1] = v[4 * s + 2];
        out[4 * t + 2] = v[4 * s + 1];
        out[4 * t + 3] = v[4 * s + 3];
    }
    out
}

pub(crate) fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn vec_norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize_vec(v: &mut [C64]) {
    let n = vec_norm(v);
    if n > 0.0 {
        let s = 1.0 / n;
        for x in v.iter_mut() {
            *x = x.scale(s);
        }
    }
}

/// Modified Gram-Schmidt, in place.
fn orthonormalize(vs: &mut [Vec<C64>]) {
    for i in 0..vs.len() {
        for j in 0..i {
            let proj = dot(&vs[j], &vs[i]);
            let (head, tail) = vs.split_at_mut(i);
            for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                *x -= proj * y;
            }
        }
        normalize_vec(&mut vs[i]);
    }
}

/// Probability per ring site carried by a basis-ordered vector.
pub fn site_probabilities(ring: &RingGeometry, v: &[C64]) -> Vec<f64> {
    (0..ring.n_sites())
        .map(|s| (0..4).map(|c| v[4 * s + c].norm_sqr()).sum())
        .collect()
}

/// Inverse participation ratio of the site probabilities.
pub fn inverse_participation_ratio(ring: &RingGeometry, v: &[C64]) -> f64 {
    site_probabilities(ring, v).iter().map(|p| p * p).sum()
}

/// Smallest radius `r` with `sum_{|rho| <= r} P >= 0.99` of the total.
pub fn support_radius(ring: &RingGeometry, v: &[C64]) -> i64 {
    let probs = site_probabilities(ring, v);
    let total: f64 = probs.iter().sum();
    let mut by_radius: Vec<(i64, f64)> = probs
        .iter()
        .enumerate()
        .map(|(s, &p)| (ring.label(s).abs(), p))
        .collect();
    by_radius.sort_by_key(|&(r, _)| r);
    let mut acc = 0.0;
    for (r, p) in by_radius {
        acc += p;
        if acc >= 0.99 * total {
            return r;
        }
    }
    ring.max_abs_label()
}

/// A state counts as bound (discrete branch) when it is well localized on
/// the ring: `ipr > 5/N` and 99% of its probability fits within `|rho| < N/8`.
pub fn is_bound(state: &EigenState, ring: &RingGeometry) -> bool {
    let n = ring.n_sites() as f64;
    state.ipr > 5.0 / n && (state.support_radius as f64) < n / 8.0
}

/// Diagonalize a small Hermitian matrix, returning eigenvalues ascending
/// with their (column) eigenvectors.
fn small_hermitian_eigen(m: &Mat<c64>) -> Result<(Vec<f64>, Mat<c64>), WalkError> {
    let evd = m
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| WalkError::Eigensolver(format!("self-adjoint EVD failed: {e:?}")))?;
    let vals: Vec<f64> = (0..m.nrows()).map(|i| evd.S()[i].re).collect();
    Ok((vals, evd.U().to_owned()))
}

/// Rotate one degenerate cluster into the exchange eigenbasis and split any
/// accidental near-degeneracy inside each exchange sector. Returns the new
/// vectors with `(omega, label)` per vector.
fn rotate_cluster(
    op: &BlochOperator,
    vectors: Vec<Vec<C64>>,
) -> Result<Vec<(f64, Vec<C64>, ExchangeLabel)>, WalkError> {
    let ring = op.ring();
    let m = vectors.len();
    let mut vs = vectors;
    orthonormalize(&mut vs);

    // exchange operator restricted to the cluster
    let pvs: Vec<Vec<C64>> = vs.iter().map(|v| apply_exchange(ring, v)).collect();
    let mut x = Mat::<c64>::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            x[(a, b)] = dot(&vs[a], &pvs[b]);
        }
    }
    // leakage: P must map the cluster span onto itself
    let mut leakage: f64 = 0.0;
    for b in 0..m {
        let mut residual = pvs[b].clone();
        for a in 0..m {
            let w = x[(a, b)];
            for (r, v) in residual.iter_mut().zip(&vs[a]) {
                *r -= w * v;
            }
        }
        leakage = leakage.max(vec_norm(&residual));
    }

    let rayleigh_omega = |v: &[C64]| -> f64 { wrap_phase(dot(v, &op.apply(v)).arg()) };

    if leakage > 1e-6 {
        return Ok(vs
            .into_iter()
            .map(|v| {
                let omega = rayleigh_omega(&v);
                (omega, v, ExchangeLabel::Mixed)
            })
            .collect());
    }

    let (etas, y) = small_hermitian_eigen(&x)?;

    // columns of V * Y grouped by exchange eigenvalue
    let rotated: Vec<Vec<C64>> = (0..m)
        .map(|j| {
            let mut w = vec![C64::new(0.0, 0.0); vs[0].len()];
            for (a, v) in vs.iter().enumerate() {
                let c = y[(a, j)];
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi += c * vi;
                }
            }
            w
        })
        .collect();

    let label_of = |eta: f64| -> ExchangeLabel {
        if (eta - 1.0).abs() < CLUSTER_TOL {
            ExchangeLabel::Boson
        } else if (eta + 1.0).abs() < CLUSTER_TOL {
            ExchangeLabel::Fermion
        } else {
            ExchangeLabel::Mixed
        }
    };

    // group consecutive equal exchange eigenvalues
    let mut out = Vec::with_capacity(m);
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && (etas[end] - etas[start]).abs() < CLUSTER_TOL {
            end += 1;
        }
        let label = label_of(etas[start]);
        let group: Vec<Vec<C64>> = rotated[start..end].to_vec();

        // split accidental near-degeneracies of omega inside the sector
        let omegas: Vec<f64> = group.iter().map(|v| rayleigh_omega(v)).collect();
        let spread = omegas.iter().cloned().fold(f64::MIN, f64::max)
            - omegas.iter().cloned().fold(f64::MAX, f64::min);
        if group.len() > 1 && spread > 1e-11 {
            let gm = group.len();
            let mut a = Mat::<c64>::zeros(gm, gm);
            let images: Vec<Vec<C64>> = group.iter().map(|v| op.apply(v)).collect();
            for i in 0..gm {
                for j in 0..gm {
                    a[(i, j)] = dot(&group[i], &images[j]);
                }
            }
            let evd = a
                .eigen()
                .map_err(|e| WalkError::Eigensolver(format!("block EVD failed: {e:?}")))?;
            let mut refined: Vec<Vec<C64>> = (0..gm)
                .map(|j| {
                    let mut w = vec![C64::new(0.0, 0.0); group[0].len()];
                    for (i, v) in group.iter().enumerate() {
                        let c: c64 = evd.U()[(i, j)];
                        for (wi, vi) in w.iter_mut().zip(v) {
                            *wi += c * vi;
                        }
                    }
                    w
                })
                .collect();
            orthonormalize(&mut refined);
            for v in refined {
                let omega = rayleigh_omega(&v);
                out.push((omega, v, label));
            }
        } else {
            for (v, omega) in group.into_iter().zip(omegas) {
                out.push((omega, v, label));
            }
        }
        start = end;
    }
    Ok(out)
}

/// Full eigendecomposition: all `4N` states sorted by ascending eigenphase,
/// degenerate clusters rotated to the exchange eigenbasis.
pub fn eigensystem(op: &BlochOperator) -> Result<Vec<EigenState>, WalkError> {
    let dim = op.dim();
    let evd = op
        .matrix
        .eigen()
        .map_err(|e| WalkError::Eigensolver(format!("dense EVD failed ({dim}x{dim}): {e:?}")))?;

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..dim)
        .map(|j| {
            let omega = wrap_phase(evd.S()[j].arg());
            let mut v: Vec<C64> = (0..dim).map(|i| evd.U()[(i, j)]).collect();
            normalize_vec(&mut v);
            (omega, v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    // chain states into clusters, merging across the -pi/pi seam
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in 0..pairs.len() {
        let new_cluster = match clusters.last() {
            Some(c) => pairs[i].0 - pairs[*c.last().unwrap()].0 >= CLUSTER_TOL,
            None => true,
        };
        if new_cluster {
            clusters.push(vec![i]);
        } else {
            clusters.last_mut().unwrap().push(i);
        }
    }
    if clusters.len() > 1 {
        let first = pairs[*clusters[0].last().unwrap()].0;
        let last = pairs[clusters.last().unwrap()[0]].0;
        if (first + 2.0 * std::f64::consts::PI) - last < CLUSTER_TOL {
            let tail = clusters.pop().unwrap();
            clusters[0].splice(0..0, tail);
        }
    }

    let ring = op.ring();
    let mut states = Vec::with_capacity(dim);
    for cluster in clusters {
        let vectors: Vec<Vec<C64>> = cluster.iter().map(|&i| pairs[i].1.clone()).collect();
        for (omega, vector, exchange) in rotate_cluster(op, vectors)? {
            let ipr = inverse_participation_ratio(ring, &vector);
            let radius = support_radius(ring, &vector);
            states.push(EigenState {
                omega,
                vector,
                k: op.k(),
                exchange,
                ipr,
                support_radius: radius,
            });
        }
    }
    states.sort_by(|a, b| a.omega.partial_cmp(&b.omega).unwrap());
    Ok(states)
}

/// Eigenphases only (no eigenvectors), sorted ascending in `[-pi, pi)`.
pub fn eigenphases(op: &BlochOperator) -> Result<Vec<f64>, WalkError> {
    let evd = op
        .matrix
        .eigen()
        .map_err(|e| WalkError::Eigensolver(format!("dense EVD failed: {e:?}")))?;
    let mut phases: Vec<f64> = (0..op.dim())
        .map(|i| wrap_phase(evd.S()[i].arg()))
        .collect();
    phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(phases)
}

/// One row of a band-structure scan.
#[derive(Debug, Clone)]
pub struct SpectrumRow {
    pub k: f64,
    pub state_index: usize,
    pub omega: f64,
    pub ipr: f64,
    pub support_radius: i64,
    pub exchange: ExchangeLabel,
    pub bound: bool,
    pub cluster_multiplicity: usize,
}

/// Quasienergy bands over a `k` grid.
#[derive(Debug, Clone)]
pub struct SpectrumTable {
    pub params: WalkParams,
    pub rows: Vec<SpectrumRow>,
}

/// Cluster multiplicity per state, from ascending eigenphases.
pub(crate) fn cluster_multiplicities(omegas: &[f64]) -> Vec<usize> {
    let n = omegas.len();
    let mut mult = vec![1usize; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && omegas[end] - omegas[end - 1] < CLUSTER_TOL {
            end += 1;
        }
        for i in start..end {
            mult[i] = end - start;
        }
        start = end;
    }
    mult
}

/// Diagonalize at every `k` in the grid (independently, in parallel) and
/// tabulate the per-state localization and exchange data.
pub fn band_scan(params: &WalkParams, k_grid: &[f64]) -> Result<SpectrumTable, WalkError> {
    let per_k: Result<Vec<Vec<EigenState>>, WalkError> = k_grid
        .par_iter()
        .map(|&k| {
            let op = build_bloch(k, params)?;
            eigensystem(&op)
                .map_err(|e| WalkError::Eigensolver(format!("at k = {k}: {e}")))
        })
        .collect();
    let per_k = per_k?;

    let ring = params.ring();
    let mut rows = Vec::new();
    for (states, &k) in per_k.iter().zip(k_grid) {
        let omegas: Vec<f64> = states.iter().map(|s| s.omega).collect();
        let mults = cluster_multiplicities(&omegas);
        for (idx, state) in states.iter().enumerate() {
            rows.push(SpectrumRow {
                k: wrap_momentum(k),
                state_index: idx,
                omega: state.omega,
                ipr: state.ipr,
                support_radius: state.support_radius,
                exchange: state.exchange,
                bound: is_bound(state, &ring),
                cluster_multiplicity: mults[idx],
            });
        }
    }
    Ok(SpectrumTable {
        params: *params,
        rows,
    })
}
