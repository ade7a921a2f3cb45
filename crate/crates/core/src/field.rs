//! The walker-pair state: four complex amplitudes per lattice site.
//!
//! A field lives either on the plain integer plane `(x1, x2)` or on the
//! relative/center plane `(rho, sigma) = (x1 - x2, x1 + x2)`. In the latter
//! case `rho` and `sigma` always share one fixed parity (they differ by
//! `2 x2`), so only that sublattice is stored; amplitudes on the opposite
//! parity are exactly zero by construction.
//!
//! Fields are immutable once built: evolution and symmetry operations return
//! fresh values.

use std::ops::RangeInclusive;

use crate::coin::CoinVector;
use crate::error::WalkError;
use crate::observables::KahanSum;
use crate::Parity;

/// Coordinate system the field is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coords {
    X1X2,
    RhoSigma,
}

/// Boundary handling during stepping.
///
/// `HardWall` is the production mode: the walk has a strict light cone, so a
/// sufficiently padded box is exact, and any nonzero amplitude on the edge
/// aborts the step instead of silently losing norm. `Periodic` wraps both
/// axes and exists for cross-checks against dense torus operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    HardWall,
    Periodic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeField {
    coords: Coords,
    boundary: Boundary,
    a_lo: i64,
    b_lo: i64,
    /// Lattice spacing along both axes: 1 on the `(x1, x2)` plane, 2 on the
    /// parity sublattice of the `(rho, sigma)` plane.
    step: i64,
    na: usize,
    nb: usize,
    data: Vec<CoinVector>,
}

impl AmplitudeField {
    /// An all-zero field covering `a_range x b_range`.
    ///
    /// For `RhoSigma` coordinates the endpoints fix the stored parity: all
    /// four range endpoints must share one parity.
    pub fn new_zero(
        coords: Coords,
        a_range: RangeInclusive<i64>,
        b_range: RangeInclusive<i64>,
    ) -> Result<Self, WalkError> {
        let (a_lo, a_hi) = (*a_range.start(), *a_range.end());
        let (b_lo, b_hi) = (*b_range.start(), *b_range.end());
        if a_lo > a_hi || b_lo > b_hi {
            return Err(WalkError::FieldContract(format!(
                "empty extents {a_lo}..={a_hi} x {b_lo}..={b_hi}"
            )));
        }
        let step = match coords {
            Coords::X1X2 => 1,
            Coords::RhoSigma => 2,
        };
        if coords == Coords::RhoSigma {
            let p = Parity::of(a_lo);
            if !p.matches(a_hi) || !p.matches(b_lo) || !p.matches(b_hi) {
                return Err(WalkError::FieldContract(
                    "rho and sigma extents must all share one parity".into(),
                ));
            }
        }
        let na = ((a_hi - a_lo) / step + 1) as usize;
        let nb = ((b_hi - b_lo) / step + 1) as usize;
        Ok(AmplitudeField {
            coords,
            boundary: Boundary::default(),
            a_lo,
            b_lo,
            step,
            na,
            nb,
            data: vec![CoinVector::ZERO; na * nb],
        })
    }

    /// Build a field from explicit site amplitudes; extents fit the sites.
    pub fn from_amplitudes(
        coords: Coords,
        sites: &[((i64, i64), CoinVector)],
    ) -> Result<Self, WalkError> {
        if sites.is_empty() {
            return Err(WalkError::FieldContract(
                "cannot build a field from zero sites".into(),
            ));
        }
        let a_lo = sites.iter().map(|((a, _), _)| *a).min().unwrap();
        let a_hi = sites.iter().map(|((a, _), _)| *a).max().unwrap();
        let b_lo = sites.iter().map(|((_, b), _)| *b).min().unwrap();
        let b_hi = sites.iter().map(|((_, b), _)| *b).max().unwrap();
        if coords == Coords::RhoSigma {
            let p = Parity::of(a_lo);
            for ((a, b), _) in sites {
                if !p.matches(*a) || !p.matches(*b) {
                    return Err(WalkError::FieldContract(format!(
                        "site ({a}, {b}) breaks the {p:?} sublattice"
                    )));
                }
            }
        }
        let mut field = AmplitudeField::new_zero(coords, a_lo..=a_hi, b_lo..=b_hi)?;
        for ((a, b), cv) in sites {
            if !cv.is_finite() {
                return Err(WalkError::FieldContract(format!(
                    "non-finite amplitude at ({a}, {b})"
                )));
            }
            let idx = field
                .index(*a, *b)
                .expect("extents were fitted to the sites");
            field.data[idx] = field.data[idx].add(cv);
        }
        Ok(field)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn coords(&self) -> Coords {
        self.coords
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Lattice spacing along both axes (1 or 2).
    pub fn spacing(&self) -> i64 {
        self.step
    }

    pub fn a_range(&self) -> RangeInclusive<i64> {
        self.a_lo..=self.a_lo + self.step * (self.na as i64 - 1)
    }

    pub fn b_range(&self) -> RangeInclusive<i64> {
        self.b_lo..=self.b_lo + self.step * (self.nb as i64 - 1)
    }

    /// Stored parity of a `RhoSigma` field.
    pub fn parity(&self) -> Option<Parity> {
        match self.coords {
            Coords::X1X2 => None,
            Coords::RhoSigma => Some(Parity::of(self.a_lo)),
        }
    }

    pub(crate) fn dims(&self) -> (usize, usize) {
        (self.na, self.nb)
    }

    pub(crate) fn index(&self, a: i64, b: i64) -> Option<usize> {
        let da = a - self.a_lo;
        let db = b - self.b_lo;
        if da < 0 || db < 0 || da % self.step != 0 || db % self.step != 0 {
            return None;
        }
        let ia = (da / self.step) as usize;
        let ib = (db / self.step) as usize;
        if ia >= self.na || ib >= self.nb {
            return None;
        }
        Some(ia * self.nb + ib)
    }

    /// Amplitude at `(a, b)`; exactly zero outside the stored extents or off
    /// the stored sublattice.
    pub fn get(&self, a: i64, b: i64) -> CoinVector {
        match self.index(a, b) {
            Some(i) => self.data[i],
            None => CoinVector::ZERO,
        }
    }

    pub(crate) fn data(&self) -> &[CoinVector] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [CoinVector] {
        &mut self.data
    }

    /// Iterate all stored sites in row-major order as `(a, b, amplitude)`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, &CoinVector)> + '_ {
        self.data.iter().enumerate().map(move |(i, cv)| {
            let ia = (i / self.nb) as i64;
            let ib = (i % self.nb) as i64;
            (self.a_lo + self.step * ia, self.b_lo + self.step * ib, cv)
        })
    }

    /// Total probability, summed in fixed order with compensation.
    pub fn norm_sqr(&self) -> f64 {
        let mut acc = KahanSum::new();
        for cv in &self.data {
            acc.add(cv.norm_sqr());
        }
        acc.value()
    }

    pub fn normalized(&self) -> Result<Self, WalkError> {
        let n2 = self.norm_sqr();
        if n2 <= 0.0 || !n2.is_finite() {
            return Err(WalkError::FieldContract(
                "cannot normalize a zero or non-finite field".into(),
            ));
        }
        let s = 1.0 / n2.sqrt();
        let mut out = self.clone();
        for cv in &mut out.data {
            *cv = cv.scale(s);
        }
        Ok(out)
    }

    /// Bounding box of the nonzero amplitudes, or `None` for a zero field.
    pub fn support_bounds(&self) -> Option<(i64, i64, i64, i64)> {
        let mut bounds: Option<(i64, i64, i64, i64)> = None;
        for (a, b, cv) in self.iter() {
            if cv.is_zero() {
                continue;
            }
            bounds = Some(match bounds {
                None => (a, a, b, b),
                Some((alo, ahi, blo, bhi)) => (alo.min(a), ahi.max(a), blo.min(b), bhi.max(b)),
            });
        }
        bounds
    }

    /// Any nonzero amplitude on the outermost stored layer?
    pub fn edge_occupied(&self) -> bool {
        for ia in 0..self.na {
            for ib in 0..self.nb {
                if ia == 0 || ia + 1 == self.na || ib == 0 || ib + 1 == self.nb {
                    if !self.data[ia * self.nb + ib].is_zero() {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// The same field on a box grown by `pad_a`/`pad_b` sites per side.
    pub fn padded(&self, pad_a: usize, pad_b: usize) -> Self {
        let mut out = AmplitudeField {
            coords: self.coords,
            boundary: self.boundary,
            a_lo: self.a_lo - self.step * pad_a as i64,
            b_lo: self.b_lo - self.step * pad_b as i64,
            step: self.step,
            na: self.na + 2 * pad_a,
            nb: self.nb + 2 * pad_b,
            data: Vec::new(),
        };
        out.data = vec![CoinVector::ZERO; out.na * out.nb];
        for ia in 0..self.na {
            let src = ia * self.nb;
            let dst = (ia + pad_a) * out.nb + pad_b;
            out.data[dst..dst + self.nb].copy_from_slice(&self.data[src..src + self.nb]);
        }
        out
    }

    /// The particle-exchanged field `x1 <-> x2`.
    ///
    /// On the `(rho, sigma)` plane this sends `rho -> -rho` and reorders the
    /// coin as `(r, d, u, l) -> (r, u, d, l)`; on the `(x1, x2)` plane it
    /// transposes the two axes with the same coin reordering. An involution
    /// that preserves the norm exactly.
    pub fn exchange(&self) -> Self {
        let mut out = self.clone();
        match self.coords {
            Coords::RhoSigma => {
                let a_hi = self.a_lo + self.step * (self.na as i64 - 1);
                out.a_lo = -a_hi;
                for ia in 0..self.na {
                    let src = (self.na - 1 - ia) * self.nb;
                    for ib in 0..self.nb {
                        out.data[ia * self.nb + ib] = self.data[src + ib].swap_du();
                    }
                }
            }
            Coords::X1X2 => {
                out.a_lo = self.b_lo;
                out.b_lo = self.a_lo;
                out.na = self.nb;
                out.nb = self.na;
                for ia in 0..out.na {
                    for ib in 0..out.nb {
                        out.data[ia * out.nb + ib] = self.data[ib * self.nb + ia].swap_du();
                    }
                }
            }
        }
        out
    }

    /// Re-express an `(x1, x2)` field in `(rho, sigma)` coordinates.
    ///
    /// Requires every nonzero amplitude to live on one parity of
    /// `x1 + x2` (a field built from a parity-pure initial state stays pure).
    pub fn to_rho_sigma(&self) -> Result<Self, WalkError> {
        match self.coords {
            Coords::RhoSigma => Ok(self.clone()),
            Coords::X1X2 => {
                let mut sites = Vec::new();
                let mut parity: Option<Parity> = None;
                for (x1, x2, cv) in self.iter() {
                    if cv.is_zero() {
                        continue;
                    }
                    let p = Parity::of(x1 + x2);
                    match parity {
                        None => parity = Some(p),
                        Some(q) if q != p => {
                            return Err(WalkError::FieldContract(
                                "field occupies both parities of x1 + x2; \
                                 it has no single-sublattice (rho, sigma) form"
                                    .into(),
                            ))
                        }
                        _ => {}
                    }
                    sites.push(((x1 - x2, x1 + x2), *cv));
                }
                if sites.is_empty() {
                    return Err(WalkError::FieldContract(
                        "cannot infer the parity sublattice of a zero field".into(),
                    ));
                }
                Ok(AmplitudeField::from_amplitudes(Coords::RhoSigma, &sites)?
                    .with_boundary(self.boundary))
            }
        }
    }

    /// Re-express a `(rho, sigma)` field on the `(x1, x2)` plane.
    pub fn to_x1x2(&self) -> Result<Self, WalkError> {
        match self.coords {
            Coords::X1X2 => Ok(self.clone()),
            Coords::RhoSigma => {
                let mut sites = Vec::new();
                for (rho, sigma, cv) in self.iter() {
                    if cv.is_zero() {
                        continue;
                    }
                    sites.push((((sigma + rho) / 2, (sigma - rho) / 2), *cv));
                }
                if sites.is_empty() {
                    return Err(WalkError::FieldContract(
                        "cannot convert a zero field".into(),
                    ));
                }
                Ok(AmplitudeField::from_amplitudes(Coords::X1X2, &sites)?
                    .with_boundary(self.boundary))
            }
        }
    }

    /// Largest absolute difference of amplitudes over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for (a, b, cv) in self.iter() {
            let d = cv.sub(&other.get(a, b));
            for c in d.as_array() {
                m = m.max(c.norm());
            }
        }
        for (a, b, cv) in other.iter() {
            let d = cv.sub(&self.get(a, b));
            for c in d.as_array() {
                m = m.max(c.norm());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_rhosigma_field(rng: &mut impl Rng, parity: i64) -> AmplitudeField {
        let mut sites = Vec::new();
        for _ in 0..12 {
            let rho = 2 * rng.gen_range(-5i64..5) + parity;
            let sigma = 2 * rng.gen_range(-5i64..5) + parity;
            let cv = CoinVector::from_array(std::array::from_fn(|_| {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }));
            sites.push(((rho, sigma), cv));
        }
        AmplitudeField::from_amplitudes(Coords::RhoSigma, &sites).unwrap()
    }

    #[test]
    fn exchange_moves_single_r_amplitude() {
        let f = AmplitudeField::from_amplitudes(
            Coords::RhoSigma,
            &[
                ((3, 1), CoinVector::from_re(1.0, 0.0, 0.0, 0.0)),
                ((-5, 1), CoinVector::ZERO), // widen extents so -3 exists
            ],
        )
        .unwrap();
        let e = f.exchange();
        assert_eq!(e.get(-3, 1), CoinVector::from_re(1.0, 0.0, 0.0, 0.0));
        assert!(e.get(3, 1).is_zero());
    }

    #[test]
    fn exchange_swaps_d_into_u() {
        let f = AmplitudeField::from_amplitudes(
            Coords::RhoSigma,
            &[((1, 3), CoinVector::from_re(0.0, 1.0, 0.0, 0.0))],
        )
        .unwrap();
        let e = f.exchange();
        assert_eq!(e.get(-1, 3), CoinVector::from_re(0.0, 0.0, 1.0, 0.0));
    }

    #[test]
    fn exchange_is_involutive_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for parity in [0i64, 1] {
            for _ in 0..20 {
                let f = random_rhosigma_field(&mut rng, parity);
                let e = f.exchange();
                // same multiset of amplitudes; only the summation order differs
                let scale = f.norm_sqr();
                assert!((e.norm_sqr() - scale).abs() < 1e-15 * (1.0 + scale));
                assert!(e.exchange().max_abs_diff(&f) == 0.0);
            }
        }
    }

    #[test]
    fn exchange_fixed_point_is_symmetric_field() {
        // r-amplitudes mirrored around rho = 0 with d/u partners swapped
        let f = AmplitudeField::from_amplitudes(
            Coords::RhoSigma,
            &[
                ((2, 0), CoinVector::from_re(0.3, 0.7, 0.2, 0.1)),
                ((-2, 0), CoinVector::from_re(0.3, 0.2, 0.7, 0.1)),
                ((0, 0), CoinVector::from_re(0.5, 0.4, 0.4, 0.9)),
            ],
        )
        .unwrap();
        assert!(f.exchange().max_abs_diff(&f) == 0.0);
    }

    #[test]
    fn exchange_in_x1x2_transposes_axes() {
        let f = AmplitudeField::from_amplitudes(
            Coords::X1X2,
            &[((2, 5), CoinVector::from_re(0.0, 1.0, 0.0, 0.0))],
        )
        .unwrap();
        let e = f.exchange();
        assert_eq!(e.coords(), Coords::X1X2);
        assert_eq!(e.get(5, 2), CoinVector::from_re(0.0, 0.0, 1.0, 0.0));
    }

    #[test]
    fn exchange_commutes_with_sitewise_coin() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = random_rhosigma_field(&mut rng, 1);
        let coin_everywhere = |g: &AmplitudeField| {
            let mut out = g.clone();
            for cv in out.data_mut() {
                *cv = crate::coin_apply(cv);
            }
            out
        };
        let a = coin_everywhere(&f.exchange());
        let b = coin_everywhere(&f).exchange();
        assert!(a.max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn coordinate_round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_rhosigma_field(&mut rng, 1);
        let g = f.to_x1x2().unwrap();
        let back = g.to_rho_sigma().unwrap();
        assert!(back.max_abs_diff(&f) == 0.0);
        assert!((g.norm_sqr() - f.norm_sqr()).abs() < 1e-15);
    }

    #[test]
    fn mixed_parity_field_rejects_rho_sigma_form() {
        let f = AmplitudeField::from_amplitudes(
            Coords::X1X2,
            &[
                ((0, 0), CoinVector::from_re(1.0, 0.0, 0.0, 0.0)),
                ((0, 1), CoinVector::from_re(1.0, 0.0, 0.0, 0.0)),
            ],
        )
        .unwrap();
        assert!(matches!(
            f.to_rho_sigma(),
            Err(WalkError::FieldContract(_))
        ));
    }

    #[test]
    fn off_sublattice_reads_are_exact_zero() {
        let f = AmplitudeField::from_amplitudes(
            Coords::RhoSigma,
            &[((1, 1), CoinVector::from_re(1.0, 0.0, 0.0, 0.0))],
        )
        .unwrap();
        assert!(f.get(2, 1).is_zero());
        assert!(f.get(1, 0).is_zero());
        assert!(f.get(100, 100).is_zero());
    }

    #[test]
    fn padding_preserves_amplitudes_and_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let f = random_rhosigma_field(&mut rng, 0);
        let p = f.padded(3, 5);
        assert_eq!(p.norm_sqr(), f.norm_sqr());
        assert!(p.max_abs_diff(&f) == 0.0);
        assert_eq!(p.a_range().start(), &(f.a_range().start() - 6));
    }
}
