//! The four-sided coin of the two-walker pair.
//!
//! Each walker carries a qubit `(u_i, d_i)`; the pair coin is their tensor
//! product in the fixed order
//!
//! ```text
//! index 0: r = u1 u2     index 1: d = u1 d2
//! index 2: u = d1 u2     index 3: l = d1 d2
//! ```
//!
//! The coin operation applied every step is the two-fold Hadamard
//! `H = H1 (x) H1`, a real symmetric unitary with entries `+-1/2`.

use crate::C64;

/// Complex amplitudes over the pair-coin basis, ordered `col(r, d, u, l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinVector {
    pub r: C64,
    pub d: C64,
    pub u: C64,
    pub l: C64,
}

impl CoinVector {
    pub const ZERO: CoinVector = CoinVector {
        r: C64::new(0.0, 0.0),
        d: C64::new(0.0, 0.0),
        u: C64::new(0.0, 0.0),
        l: C64::new(0.0, 0.0),
    };

    pub fn new(r: C64, d: C64, u: C64, l: C64) -> Self {
        CoinVector { r, d, u, l }
    }

    /// Build from real components.
    pub fn from_re(r: f64, d: f64, u: f64, l: f64) -> Self {
        CoinVector {
            r: C64::new(r, 0.0),
            d: C64::new(d, 0.0),
            u: C64::new(u, 0.0),
            l: C64::new(l, 0.0),
        }
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.r, self.d, self.u, self.l]
    }

    pub fn from_array(a: [C64; 4]) -> Self {
        CoinVector {
            r: a[0],
            d: a[1],
            u: a[2],
            l: a[3],
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.r.norm_sqr() + self.d.norm_sqr() + self.u.norm_sqr() + self.l.norm_sqr()
    }

    pub fn is_zero(&self) -> bool {
        self.r == C64::new(0.0, 0.0)
            && self.d == C64::new(0.0, 0.0)
            && self.u == C64::new(0.0, 0.0)
            && self.l == C64::new(0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.as_array()
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Rescale to unit norm. Returns `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        Some(self.scale(1.0 / n))
    }

    pub fn scale(&self, s: f64) -> Self {
        self.mul(C64::new(s, 0.0))
    }

    pub fn mul(&self, z: C64) -> Self {
        CoinVector {
            r: self.r * z,
            d: self.d * z,
            u: self.u * z,
            l: self.l * z,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        CoinVector {
            r: self.r + other.r,
            d: self.d + other.d,
            u: self.u + other.u,
            l: self.l + other.l,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        CoinVector {
            r: self.r - other.r,
            d: self.d - other.d,
            u: self.u - other.u,
            l: self.l - other.l,
        }
    }

    /// Swap the mixed components `d <-> u` (walker-index exchange acting on
    /// the coin alone).
    pub fn swap_du(&self) -> Self {
        CoinVector {
            r: self.r,
            d: self.u,
            u: self.d,
            l: self.l,
        }
    }
}

/// Apply the pair coin `H = H1 (x) H1` to `v`.
///
/// `H` is real, symmetric, and its own inverse; the 2-norm of `v` is
/// preserved up to rounding.
pub fn coin_apply(v: &CoinVector) -> CoinVector {
    let s = v.r + v.d + v.u + v.l;
    CoinVector {
        r: s.scale(0.5),
        d: (v.r - v.d + v.u - v.l).scale(0.5),
        u: (v.r + v.d - v.u - v.l).scale(0.5),
        l: (v.r - v.d - v.u + v.l).scale(0.5),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_coin(rng: &mut impl Rng) -> CoinVector {
        CoinVector::from_array(std::array::from_fn(|_| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }))
    }

    #[test]
    fn first_basis_vector_spreads_evenly() {
        let v = CoinVector::from_re(1.0, 0.0, 0.0, 0.0);
        let w = coin_apply(&v);
        for c in w.as_array() {
            assert_eq!(c, C64::new(0.5, 0.0));
        }
    }

    #[test]
    fn uniform_vector_collapses_back() {
        let v = CoinVector::from_re(0.5, 0.5, 0.5, 0.5);
        let w = coin_apply(&v);
        assert!((w.r - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(w.d.norm() < 1e-15 && w.u.norm() < 1e-15 && w.l.norm() < 1e-15);
    }

    #[test]
    fn involution_and_isometry_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let v = random_coin(&mut rng);
            let w = coin_apply(&v);
            assert!((w.norm_sqr().sqrt() - v.norm_sqr().sqrt()).abs() < 1e-15);
            let back = coin_apply(&w);
            for (a, b) in back.as_array().iter().zip(v.as_array()) {
                assert!((a - b).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn coin_commutes_with_du_swap() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let v = random_coin(&mut rng);
            let a = coin_apply(&v.swap_du());
            let b = coin_apply(&v).swap_du();
            for (x, y) in a.as_array().iter().zip(b.as_array()) {
                assert!((x - y).norm() < 1e-15);
            }
        }
    }
}
