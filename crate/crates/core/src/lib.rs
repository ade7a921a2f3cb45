//! Simulation and spectral analysis of a two-walker coined quantum walk on
//! the line, where the walkers pick up an inverse-distance phase
//! `exp(i*phi/|x1-x2|)` at every step.
//!
//! The crate is organized around three views of the same dynamics:
//!
//! * position-space evolution of an [`AmplitudeField`] in either `(x1, x2)`
//!   or relative/center `(rho, sigma)` coordinates ([`evolution`]),
//! * the one-step Bloch operator at fixed pseudo-momentum `k` on a ring in
//!   the relative coordinate, whose eigenphases are the quasienergies
//!   ([`spectral`]),
//! * bound-state ("molecule") construction and exchange-symmetry
//!   classification ([`boundstates`]).
//!
//! [`observables`] extracts probabilities and moments from fields, and
//! [`oracle`] holds deliberately naive reference implementations (dense
//! one-step matrix, Hermitian-pair eigenphase solver) used to cross-check
//! the production paths in tests.

pub mod boundstates;
pub mod coin;
pub mod error;
pub mod evolution;
pub mod field;
pub mod observables;
pub mod oracle;
pub mod params;
pub mod ring;
pub mod spectral;

pub use coin::{coin_apply, CoinVector};
pub use error::WalkError;
pub use field::{AmplitudeField, Boundary, Coords};
pub use params::{Parity, WalkParams};
pub use ring::RingGeometry;

/// Complex double-precision scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Reduce a phase to the canonical interval `[-pi, pi)`.
pub fn wrap_phase(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut y = x.rem_euclid(two_pi);
    if y >= std::f64::consts::PI {
        y -= two_pi;
    }
    y
}
