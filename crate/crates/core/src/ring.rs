//! Periodic geometry of one parity sublattice of the relative coordinate.
//!
//! Sites of a fixed parity couple only to `rho +- 2`, so each sector is a
//! plain cycle of `n` sites. Site labels are the centered representatives of
//! the parity class modulo `2n`: stepping by two in the label wraps around
//! the ring. For an odd number of sites the label set cannot be symmetric
//! about zero and the single unpaired boundary label is its own image under
//! `rho -> -rho` (the antipode of the ring).

use crate::Parity;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingGeometry {
    parity: Parity,
    n: usize,
}

impl RingGeometry {
    pub fn new(parity: Parity, n_sites: usize) -> Self {
        assert!(n_sites > 0, "ring must have at least one site");
        RingGeometry { parity, n: n_sites }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    /// Dimension of the fixed-`k` eigenproblem: four coin components per site.
    pub fn dim(&self) -> usize {
        4 * self.n
    }

    /// Smallest site label. Labels ascend in steps of two from here.
    fn label_lo(&self) -> i64 {
        let n = self.n as i64;
        match self.parity {
            Parity::Even => -2 * (n / 2),
            Parity::Odd => {
                if n % 2 == 1 {
                    -(n - 2)
                } else {
                    -(n - 1)
                }
            }
        }
    }

    /// Label of site `s` (sites are ordered by ascending label).
    pub fn label(&self, s: usize) -> i64 {
        debug_assert!(s < self.n);
        self.label_lo() + 2 * s as i64
    }

    /// All labels in ascending order.
    pub fn labels(&self) -> Vec<i64> {
        (0..self.n).map(|s| self.label(s)).collect()
    }

    /// Does `rho` name a site of the centered fundamental domain?
    pub fn contains_label(&self, rho: i64) -> bool {
        self.parity.matches(rho) && {
            let lo = self.label_lo();
            rho >= lo && rho <= lo + 2 * (self.n as i64 - 1)
        }
    }

    /// Site index of an arbitrary label of the right parity, wrapping around
    /// the ring (labels are residues modulo `2n`).
    pub fn site_of_label(&self, rho: i64) -> Option<usize> {
        if !self.parity.matches(rho) {
            return None;
        }
        let period = 2 * self.n as i64;
        Some(((rho - self.label_lo()).rem_euclid(period) / 2) as usize)
    }

    /// Neighbor reached by `rho -> rho + 2`.
    pub fn next(&self, s: usize) -> usize {
        (s + 1) % self.n
    }

    /// Neighbor reached by `rho -> rho - 2`.
    pub fn prev(&self, s: usize) -> usize {
        (s + self.n - 1) % self.n
    }

    /// Image of site `s` under `rho -> -rho` (modulo the ring period).
    pub fn exchange_site(&self, s: usize) -> usize {
        self.site_of_label(-self.label(s))
            .expect("negation preserves parity")
    }

    /// Largest |label| on the ring, i.e. half the circumference in label units.
    pub fn max_abs_label(&self) -> i64 {
        let lo = self.label_lo();
        lo.abs().max((lo + 2 * (self.n as i64 - 1)).abs())
    }
}
