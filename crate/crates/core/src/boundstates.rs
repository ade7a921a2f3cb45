//! Bound states ("molecules") of the walker pair: analytical constructors,
//! exchange-symmetry classification, and the catalog of localized states.
//!
//! For indistinguishable walkers an eigenstate must be symmetric (boson) or
//! antisymmetric (fermion) under the exchange
//! `P: (R, D, U, L)(rho) -> (R, U, D, L)(-rho)`. `P` commutes with the Bloch
//! operator at every `k`, so classification is done per fixed-`k`
//! eigenproblem, inside each degenerate eigenphase cluster.
//!
//! Two families of bound states exist in closed form at `k = 0`:
//!
//! * a pair pinned at relative distance `rho0` (`|rho0| >= 3` odd sector,
//!   `|rho0| >= 2` even sector) with amplitudes `R = L`, `D = U = 0` and
//!   quasienergy `omega = phi / |rho0|`;
//! * the triply degenerate `omega = phi` family supported on `rho = +-1`
//!   (odd sector), and the `omega = phi0` state at `rho = 0` (even sector).

use faer::{c64, Mat};

use crate::coin::CoinVector;
use crate::error::WalkError;
use crate::params::WalkParams;
use crate::ring::RingGeometry;
use crate::spectral::{
    apply_exchange, build_bloch, cluster_multiplicities, dot, eigensystem,
    inverse_participation_ratio, is_bound, site_probabilities, support_radius, BlochOperator,
    EigenState, ExchangeLabel, CLUSTER_TOL,
};
use crate::{wrap_phase, C64};

/// Residual tolerance the analytical constructors must meet.
const CONSTRUCTOR_RESIDUAL: f64 = 1e-12;

/// One bound state with its probability profiles over the relative
/// coordinate (total and per coin component).
#[derive(Debug, Clone)]
pub struct MoleculeRecord {
    pub omega: f64,
    pub k: f64,
    pub exchange: ExchangeLabel,
    /// Size of the degenerate eigenphase cluster this state belongs to.
    pub multiplicity: usize,
    pub ipr: f64,
    pub support_radius: i64,
    /// Ring site labels, ascending; all profile vectors are indexed by it.
    pub labels: Vec<i64>,
    pub p_rho: Vec<f64>,
    pub p_r: Vec<f64>,
    pub p_d: Vec<f64>,
    pub p_u: Vec<f64>,
    pub p_l: Vec<f64>,
}

fn eigen_residual(op: &BlochOperator, omega: f64, v: &[C64]) -> f64 {
    let lam = C64::from_polar(1.0, omega);
    op.apply(v)
        .iter()
        .zip(v)
        .map(|(m, x)| (m - lam * x).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn state_from_profile(
    params: &WalkParams,
    omega: f64,
    profile: &[(i64, CoinVector)],
    exchange: ExchangeLabel,
) -> Result<EigenState, WalkError> {
    let ring = params.ring();
    let mut vector = vec![C64::new(0.0, 0.0); ring.dim()];
    for (rho, cv) in profile {
        if !ring.contains_label(*rho) {
            return Err(WalkError::RhoOutOfDomain {
                rho: *rho,
                parity: params.parity,
                n_sites: params.ring_sites,
            });
        }
        let s = ring.site_of_label(*rho).unwrap();
        let a = cv.as_array();
        for c in 0..4 {
            vector[4 * s + c] = a[c];
        }
    }
    let norm: f64 = vector.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for x in &mut vector {
        *x = x.scale(1.0 / norm);
    }

    let op = build_bloch(0.0, params)?;
    let residual = eigen_residual(&op, omega, &vector);
    if residual > CONSTRUCTOR_RESIDUAL {
        return Err(WalkError::Eigensolver(format!(
            "constructed state misses the eigen-equation: residual {residual:.3e}"
        )));
    }

    let ipr = inverse_participation_ratio(&ring, &vector);
    let radius = support_radius(&ring, &vector);
    Ok(EigenState {
        omega,
        vector,
        k: 0.0,
        exchange,
        ipr,
        support_radius: radius,
    })
}

/// The pinned-pair eigenstate at relative distance `rho0`, `k = 0`:
/// `R = L = 1/sqrt(2)`, `D = U = 0`, `omega = phi / |rho0|`.
///
/// Requires `|rho0| >= 3` in the odd sector or `|rho0| >= 2` in the even
/// sector; the `rho = +-1` family and the `rho = 0` state obey different
/// amplitude equations (see [`build_near_dimer`] and [`build_phi0_state`]).
pub fn build_dimer(rho0: i64, phi: f64, params: &WalkParams) -> Result<EigenState, WalkError> {
    if phi != params.phi {
        return Err(WalkError::InvalidParameter(
            "phi argument disagrees with params.phi".into(),
        ));
    }
    let min_abs = match params.parity {
        crate::Parity::Odd => 3,
        crate::Parity::Even => 2,
    };
    if rho0.abs() < min_abs {
        return Err(WalkError::InvalidParameter(format!(
            "|rho0| = {} is below {min_abs}; use build_near_dimer or build_phi0_state \
             for the inner family",
            rho0.abs()
        )));
    }
    let omega = wrap_phase(phi / rho0.abs() as f64);
    let half = 0.5f64.sqrt();
    state_from_profile(
        params,
        omega,
        &[(rho0, CoinVector::from_re(half, 0.0, 0.0, half))],
        ExchangeLabel::Mixed, // one-sided support is not exchange-definite
    )
}

/// Which member of the triply degenerate `omega = phi` family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NearDimerBranch {
    /// Supported on `rho = +1` with `L = R`.
    PlusOne,
    /// Supported on `rho = -1` with `L = R`.
    MinusOne,
    /// Supported on both `rho = +-1` through `U(-1) = D(+1)`; a boson.
    Symmetric,
}

/// One of the three degenerate `omega = phi` eigenstates of the odd sector
/// at `k = 0`.
pub fn build_near_dimer(
    branch: NearDimerBranch,
    phi: f64,
    params: &WalkParams,
) -> Result<EigenState, WalkError> {
    if params.parity != crate::Parity::Odd {
        return Err(WalkError::InvalidParameter(
            "the omega = phi family lives in the odd sector".into(),
        ));
    }
    if phi != params.phi {
        return Err(WalkError::InvalidParameter(
            "phi argument disagrees with params.phi".into(),
        ));
    }
    let omega = wrap_phase(phi);
    let half = 0.5f64.sqrt();
    let (profile, label): (Vec<(i64, CoinVector)>, ExchangeLabel) = match branch {
        NearDimerBranch::PlusOne => (
            vec![(1, CoinVector::from_re(half, 0.0, 0.0, half))],
            ExchangeLabel::Mixed,
        ),
        NearDimerBranch::MinusOne => (
            vec![(-1, CoinVector::from_re(half, 0.0, 0.0, half))],
            ExchangeLabel::Mixed,
        ),
        NearDimerBranch::Symmetric => (
            vec![
                (1, CoinVector::from_re(0.0, 0.5, 0.0, -0.5)),
                (-1, CoinVector::from_re(0.0, 0.0, 0.5, -0.5)),
            ],
            ExchangeLabel::Boson,
        ),
    };
    state_from_profile(params, omega, &profile, label)
}

/// The even-sector eigenstate pinned at `rho = 0` with `omega = phi0`.
pub fn build_phi0_state(params: &WalkParams) -> Result<EigenState, WalkError> {
    if params.parity != crate::Parity::Even {
        return Err(WalkError::InvalidParameter(
            "the rho = 0 state lives in the even sector".into(),
        ));
    }
    let omega = wrap_phase(params.phi0);
    let half = 0.5f64.sqrt();
    state_from_profile(
        params,
        omega,
        &[(0, CoinVector::from_re(half, 0.0, 0.0, half))],
        ExchangeLabel::Boson,
    )
}

/// Nonzero `(rho, coin)` profile of a ring eigenstate, for use as an
/// initial-state building block.
pub fn state_rho_profile(ring: &RingGeometry, state: &EigenState) -> Vec<(i64, CoinVector)> {
    (0..ring.n_sites())
        .filter_map(|s| {
            let cv = CoinVector::new(
                state.vector[4 * s],
                state.vector[4 * s + 1],
                state.vector[4 * s + 2],
                state.vector[4 * s + 3],
            );
            (!cv.is_zero()).then(|| (ring.label(s), cv))
        })
        .collect()
}

/// Rotate one degenerate cluster into the exchange eigenbasis.
///
/// All states must share `k` and eigenphase (within [`CLUSTER_TOL`]). The
/// returned states form an orthonormal basis of the same span in which each
/// vector is a `+-1` eigenvector of the exchange operator, labeled
/// accordingly; if the exchange operator does not preserve the cluster the
/// states come back flagged [`ExchangeLabel::Mixed`] instead.
pub fn classify(
    ring: &RingGeometry,
    cluster: &[EigenState],
) -> Result<Vec<EigenState>, WalkError> {
    if cluster.is_empty() {
        return Ok(Vec::new());
    }
    let k0 = cluster[0].k;
    if cluster.iter().any(|s| (s.k - k0).abs() > 1e-15) {
        return Err(WalkError::ClusterContract(
            "cluster states have differing pseudo-momentum".into(),
        ));
    }
    let w0 = cluster[0].omega;
    if cluster
        .iter()
        .any(|s| (s.omega - w0).abs() > 10.0 * CLUSTER_TOL)
    {
        return Err(WalkError::ClusterContract(
            "cluster states are not degenerate".into(),
        ));
    }

    let m = cluster.len();
    let mut vs: Vec<Vec<C64>> = cluster.iter().map(|s| s.vector.clone()).collect();
    // orthonormalize defensively (inputs are usually orthonormal already)
    for i in 0..m {
        for j in 0..i {
            let proj = dot(&vs[j], &vs[i]);
            let (head, tail) = vs.split_at_mut(i);
            for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                *x -= proj * y;
            }
        }
        let n = vs[i].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in vs[i].iter_mut() {
            *x = x.scale(1.0 / n);
        }
    }

    let pvs: Vec<Vec<C64>> = vs.iter().map(|v| apply_exchange(ring, v)).collect();
    let mut x = Mat::<c64>::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            x[(a, b)] = dot(&vs[a], &pvs[b]);
        }
    }
    let mut leakage: f64 = 0.0;
    for b in 0..m {
        let mut residual = pvs[b].clone();
        for a in 0..m {
            let w = x[(a, b)];
            for (r, v) in residual.iter_mut().zip(&vs[a]) {
                *r -= w * v;
            }
        }
        let res = residual.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        leakage = leakage.max(res);
    }

    let build_state = |vector: Vec<C64>, omega: f64, exchange: ExchangeLabel| EigenState {
        ipr: inverse_participation_ratio(ring, &vector),
        support_radius: support_radius(ring, &vector),
        omega,
        vector,
        k: k0,
        exchange,
    };

    if leakage > 1e-6 {
        return Ok(vs
            .into_iter()
            .zip(cluster)
            .map(|(v, s)| build_state(v, s.omega, ExchangeLabel::Mixed))
            .collect());
    }

    let evd = x
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| WalkError::Eigensolver(format!("exchange block EVD failed: {e:?}")))?;
    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let eta = evd.S()[j].re;
        let mut w = vec![C64::new(0.0, 0.0); vs[0].len()];
        for (a, v) in vs.iter().enumerate() {
            let c: c64 = evd.U()[(a, j)];
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi += c * vi;
            }
        }
        let label = if (eta - 1.0).abs() < CLUSTER_TOL {
            ExchangeLabel::Boson
        } else if (eta + 1.0).abs() < CLUSTER_TOL {
            ExchangeLabel::Fermion
        } else {
            ExchangeLabel::Mixed
        };
        out.push(build_state(w, w0, label));
    }
    Ok(out)
}

/// Expectation value of the exchange operator, `<v|P|v>`.
pub fn exchange_expectation(ring: &RingGeometry, v: &[C64]) -> C64 {
    dot(v, &apply_exchange(ring, v))
}

/// All bound states of `params` at pseudo-momentum `k`, sorted by ascending
/// quasienergy, with probability profiles.
pub fn catalog(params: &WalkParams, k: f64) -> Result<Vec<MoleculeRecord>, WalkError> {
    let op = build_bloch(k, params)?;
    let states = eigensystem(&op)?;
    let ring = op.ring();
    let omegas: Vec<f64> = states.iter().map(|s| s.omega).collect();
    let mults = cluster_multiplicities(&omegas);
    let labels = ring.labels();

    let mut records = Vec::new();
    for (state, mult) in states.iter().zip(mults) {
        if !is_bound(state, &ring) {
            continue;
        }
        let p_rho = site_probabilities(&ring, &state.vector);
        let comp = |c: usize| -> Vec<f64> {
            (0..ring.n_sites())
                .map(|s| state.vector[4 * s + c].norm_sqr())
                .collect()
        };
        records.push(MoleculeRecord {
            omega: state.omega,
            k: op.k(),
            exchange: state.exchange,
            multiplicity: mult,
            ipr: state.ipr,
            support_radius: state.support_radius,
            labels: labels.clone(),
            p_rho,
            p_r: comp(0),
            p_d: comp(1),
            p_u: comp(2),
            p_l: comp(3),
        });
    }
    Ok(records)
}
