//! Error type shared by all modules.

use crate::Parity;

#[derive(Debug, thiserror::Error)]
pub enum WalkError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The relative coordinate is not a site of the requested ring.
    #[error("rho = {rho} lies outside the {parity:?}-parity ring with {n_sites} sites")]
    RhoOutOfDomain {
        rho: i64,
        parity: Parity,
        n_sites: usize,
    },

    /// `rho = 0` was requested in the odd parity sector, where it does not exist.
    #[error("rho = 0 is not a site of the odd parity sector")]
    RhoZeroInOddSector,

    /// Nonzero amplitude reached the lattice edge; stepping would lose norm.
    #[error(
        "nonzero amplitude at the lattice edge before step {step}; \
         re-run with larger extents than {a_lo}..={a_hi} x {b_lo}..={b_hi}"
    )]
    BoundaryClipped {
        step: usize,
        a_lo: i64,
        a_hi: i64,
        b_lo: i64,
        b_hi: i64,
    },

    /// A field or initial-state description violates a structural contract
    /// (coordinate system, parity sublattice, extents).
    #[error("field contract violated: {0}")]
    FieldContract(String),

    #[error("initial state is invalid: {0}")]
    InvalidInitialState(String),

    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    /// States passed to `classify` must share pseudo-momentum and eigenphase.
    #[error("cluster contract violated: {0}")]
    ClusterContract(String),

    #[error("observer aborted at step {step} after {completed} records: {message}")]
    ObserverAborted {
        step: usize,
        completed: usize,
        message: String,
    },

    #[error("oracle basis size {size} exceeds the cap {cap}")]
    OracleTooLarge { size: usize, cap: usize },
}

impl WalkError {
    /// True for errors rooted in numerical linear algebra rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, WalkError::Eigensolver(_))
    }
}
