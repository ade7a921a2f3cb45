//! Walk parameters and the inverse-distance interaction coupling.

use crate::error::WalkError;
use crate::ring::RingGeometry;
use crate::{wrap_phase, C64};

/// Parity sector of the relative coordinate `rho = x1 - x2`.
///
/// Steps couple `rho` only to `rho +- 2`, so the even and odd sublattices
/// never mix and can be treated as independent problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(value: i64) -> Parity {
        if value.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn matches(&self, value: i64) -> bool {
        Parity::of(value) == *self
    }
}

/// Parameters of the interacting walk.
///
/// * `phi` — interaction strength; the per-step phase at relative distance
///   `rho != 0` is `exp(i*phi/|rho|)`.
/// * `phi0` — self-energy phase applied at `rho = 0`, where the inverse
///   distance is undefined. Only ever consumed in the even sector.
/// * `parity` — which `rho` sublattice the ring models.
/// * `ring_sites` — number of `rho` sites on the periodic ring used for the
///   fixed-`k` eigenproblem.
///
/// Phases are stored raw; exponentials are periodic so no reduction is
/// applied in arithmetic. Use [`WalkParams::phi_reported`] /
/// [`WalkParams::phi0_reported`] for display.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    pub phi: f64,
    pub phi0: f64,
    pub parity: Parity,
    pub ring_sites: usize,
}

impl WalkParams {
    pub fn new(phi: f64, phi0: f64, parity: Parity, ring_sites: usize) -> Result<Self, WalkError> {
        if !phi.is_finite() || !phi0.is_finite() {
            return Err(WalkError::InvalidParameter(
                "phi and phi0 must be finite".into(),
            ));
        }
        if ring_sites == 0 {
            return Err(WalkError::InvalidParameter(
                "ring_sites must be positive".into(),
            ));
        }
        Ok(WalkParams {
            phi,
            phi0,
            parity,
            ring_sites,
        })
    }

    /// Ring sized from the circumference `lc` of the underlying line with
    /// periodic boundary conditions: the odd sublattice of an odd-length
    /// circle visits all `lc` sites, while the even sublattice of an
    /// even-length circle has `lc/2` sites.
    pub fn from_circle_length(
        phi: f64,
        phi0: f64,
        parity: Parity,
        lc: usize,
    ) -> Result<Self, WalkError> {
        let ring_sites = match parity {
            Parity::Odd => lc,
            Parity::Even => {
                if lc % 2 != 0 {
                    return Err(WalkError::InvalidParameter(format!(
                        "even sector requires an even circle length, got lc = {lc}"
                    )));
                }
                lc / 2
            }
        };
        WalkParams::new(phi, phi0, parity, ring_sites)
    }

    pub fn ring(&self) -> RingGeometry {
        RingGeometry::new(self.parity, self.ring_sites)
    }

    /// `phi` reduced to `[-pi, pi)` for reporting.
    pub fn phi_reported(&self) -> f64 {
        wrap_phase(self.phi)
    }

    /// `phi0` reduced to `[-pi, pi)` for reporting.
    pub fn phi0_reported(&self) -> f64 {
        wrap_phase(self.phi0)
    }

    /// The interaction coupling `g_rho` on the ring.
    ///
    /// Returns `(1/2) exp(i*phi/|rho|)` for `rho != 0` and
    /// `(1/2) exp(i*phi0)` at `rho = 0`. `rho` must be a site label of the
    /// centered fundamental domain of the ring; `rho = 0` does not exist in
    /// the odd sector.
    pub fn coupling(&self, rho: i64) -> Result<C64, WalkError> {
        if rho == 0 && self.parity == Parity::Odd {
            return Err(WalkError::RhoZeroInOddSector);
        }
        let ring = self.ring();
        if !ring.contains_label(rho) {
            return Err(WalkError::RhoOutOfDomain {
                rho,
                parity: self.parity,
                n_sites: self.ring_sites,
            });
        }
        Ok(line_coupling(rho, self.phi, self.phi0))
    }
}

/// The coupling on the infinite line: `(1/2) exp(i*phi/|rho|)`, with the
/// `rho = 0` phase fixed by `phi0`. Modulus is exactly `1/2`.
pub fn line_coupling(rho: i64, phi: f64, phi0: f64) -> C64 {
    let theta = if rho == 0 {
        phi0
    } else {
        phi / (rho.unsigned_abs() as f64)
    };
    0.5 * C64::new(theta.cos(), theta.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn odd_params(phi: f64) -> WalkParams {
        WalkParams::new(phi, 0.0, Parity::Odd, 191).unwrap()
    }

    fn even_params(phi: f64, phi0: f64) -> WalkParams {
        WalkParams::new(phi, phi0, Parity::Even, 95).unwrap()
    }

    #[test]
    fn coupling_reference_values() {
        // rho = 1, phi = 1: 0.5 e^{i}
        let g = odd_params(1.0).coupling(1).unwrap();
        assert!((g - C64::new(0.27015115293406988, 0.42073549240394825)).norm() < 1e-15);

        // zero interaction is a bare 1/2 regardless of distance
        let g = odd_params(0.0).coupling(7).unwrap();
        assert_eq!(g, C64::new(0.5, 0.0));

        // self-energy phase pi/2 at rho = 0
        let g = even_params(1.0, std::f64::consts::FRAC_PI_2).coupling(0).unwrap();
        assert!((g - C64::new(0.0, 0.5)).norm() < 1e-16);

        // depends on |rho| only
        let p = odd_params(1.0);
        assert_eq!(p.coupling(-3).unwrap(), p.coupling(3).unwrap());
        let expect = 0.5 * C64::new((1.0f64 / 3.0).cos(), (1.0f64 / 3.0).sin());
        assert!((p.coupling(-3).unwrap() - expect).norm() < 1e-16);
    }

    #[test]
    fn coupling_modulus_is_exactly_half() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let phi = rng.gen_range(-20.0..20.0);
            let phi0 = rng.gen_range(-20.0..20.0);
            let p = even_params(phi, phi0);
            let ring = p.ring();
            let rho = *ring.labels().choose(&mut rng).unwrap();
            let g = p.coupling(rho).unwrap();
            // |exp(i theta)| = 1 exactly in IEEE double via cos^2+sin^2? Not
            // guaranteed bitwise, so allow one ulp.
            assert!((g.norm() - 0.5).abs() < 1e-16);
        }
    }

    #[test]
    fn coupling_conjugates_under_phi_negation() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let phi = rng.gen_range(-10.0..10.0);
            let p = odd_params(phi);
            let m = odd_params(-phi);
            let rho = 2 * rng.gen_range(-40i64..40) + 1;
            assert_eq!(p.coupling(rho).unwrap(), m.coupling(rho).unwrap().conj());
        }
    }

    #[test]
    fn coupling_domain_errors() {
        let p = odd_params(1.0);
        assert!(matches!(
            p.coupling(0),
            Err(WalkError::RhoZeroInOddSector)
        ));
        // even label in the odd sector
        assert!(matches!(
            p.coupling(4),
            Err(WalkError::RhoOutOfDomain { .. })
        ));
        // beyond the centered domain (odd ring of 191 sites spans labels -189..=191)
        assert!(matches!(
            p.coupling(193),
            Err(WalkError::RhoOutOfDomain { .. })
        ));
        let e = even_params(1.0, 0.0);
        assert!(e.coupling(0).is_ok());
        assert!(matches!(
            e.coupling(96),
            Err(WalkError::RhoOutOfDomain { .. })
        ));
    }

    #[test]
    fn reported_phases_are_reduced() {
        let p = WalkParams::new(7.0, -7.0, Parity::Even, 10).unwrap();
        assert!(p.phi_reported() >= -std::f64::consts::PI && p.phi_reported() < std::f64::consts::PI);
        assert!((p.phi_reported() - (7.0 - 2.0 * std::f64::consts::PI)).abs() < 1e-12);
        assert!((p.phi0_reported() - (2.0 * std::f64::consts::PI - 7.0)).abs() < 1e-12);
        // raw values untouched
        assert_eq!(p.phi, 7.0);
    }

    #[test]
    fn circle_length_maps_to_ring_sites() {
        let odd = WalkParams::from_circle_length(1.0, 0.0, Parity::Odd, 191).unwrap();
        assert_eq!(odd.ring_sites, 191);
        let even = WalkParams::from_circle_length(1.0, 0.0, Parity::Even, 190).unwrap();
        assert_eq!(even.ring_sites, 95);
        assert!(WalkParams::from_circle_length(1.0, 0.0, Parity::Even, 191).is_err());
    }
}
