//! Independent brute-force references used by tests.
//!
//! Nothing here shares code with the production paths it checks: the
//! one-step operator is assembled literally as the product
//! `interaction x displacement x coin` of three explicit matrices on a
//! small periodic torus, and eigenphases are recovered from the Hermitian
//! pair `C = (M + M^H)/2`, `S = (M - M^H)/(2i)` with a from-scratch
//! Householder + implicit-QL Hermitian eigensolver. Intentionally naive;
//! kept at desk scale by a hard basis-size cap.

use std::ops::RangeInclusive;

use crate::error::WalkError;
use crate::params::WalkParams;
use crate::spectral::BlochOperator;
use crate::{wrap_phase, C64};

/// Basis-size cap for the dense torus operator.
pub const DENSE_BASIS_CAP: usize = 10_000;

/// Minimal dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self.data[i * n + l];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[l * n + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n);
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// `max |(A^H A - I)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p.data[i * n + j] - C64::new(expect, 0.0)).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Dense basis layout on the torus: `((i1 * w2) + i2) * 4 + coin`.
#[derive(Debug, Clone, Copy)]
pub struct TorusBasis {
    pub x1_lo: i64,
    pub x2_lo: i64,
    pub w1: usize,
    pub w2: usize,
}

impl TorusBasis {
    pub fn new(
        x1_range: RangeInclusive<i64>,
        x2_range: RangeInclusive<i64>,
    ) -> Result<Self, WalkError> {
        let w1 = (x1_range.end() - x1_range.start() + 1) as usize;
        let w2 = (x2_range.end() - x2_range.start() + 1) as usize;
        let size = 4 * w1 * w2;
        if size > DENSE_BASIS_CAP {
            return Err(WalkError::OracleTooLarge {
                size,
                cap: DENSE_BASIS_CAP,
            });
        }
        Ok(TorusBasis {
            x1_lo: *x1_range.start(),
            x2_lo: *x2_range.start(),
            w1,
            w2,
        })
    }

    pub fn size(&self) -> usize {
        4 * self.w1 * self.w2
    }

    pub fn index(&self, x1: i64, x2: i64, coin: usize) -> usize {
        let i1 = (x1 - self.x1_lo).rem_euclid(self.w1 as i64) as usize;
        let i2 = (x2 - self.x2_lo).rem_euclid(self.w2 as i64) as usize;
        (i1 * self.w2 + i2) * 4 + coin
    }

    pub fn site(&self, idx: usize) -> (i64, i64, usize) {
        let coin = idx % 4;
        let cell = idx / 4;
        let i1 = cell / self.w2;
        let i2 = cell % self.w2;
        (self.x1_lo + i1 as i64, self.x2_lo + i2 as i64, coin)
    }
}

/// Block-diagonal pair coin `H (x) identity-on-position`.
pub fn coin_matrix(basis: &TorusBasis) -> CMatrix {
    let h = [
        [0.5, 0.5, 0.5, 0.5],
        [0.5, -0.5, 0.5, -0.5],
        [0.5, 0.5, -0.5, -0.5],
        [0.5, -0.5, -0.5, 0.5],
    ];
    let mut m = CMatrix::zeros(basis.size());
    for cell in 0..basis.w1 * basis.w2 {
        for a in 0..4 {
            for b in 0..4 {
                m.set(cell * 4 + a, cell * 4 + b, C64::new(h[a][b], 0.0));
            }
        }
    }
    m
}

/// Coin-conditioned displacement on the torus: `r: (+1,+1)`, `d: (+1,-1)`,
/// `u: (-1,+1)`, `l: (-1,-1)`.
pub fn displacement_matrix(basis: &TorusBasis) -> CMatrix {
    const SHIFTS: [(i64, i64); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];
    let mut m = CMatrix::zeros(basis.size());
    for idx in 0..basis.size() {
        let (x1, x2, coin) = basis.site(idx);
        let (s1, s2) = SHIFTS[coin];
        m.set(basis.index(x1 + s1, x2 + s2, coin), idx, C64::new(1.0, 0.0));
    }
    m
}

/// Diagonal inverse-distance phase `exp(i phi / |x1 - x2|)` (`phi0` at
/// coincidence), evaluated on the stored coordinates.
pub fn interaction_matrix(basis: &TorusBasis, params: &WalkParams) -> CMatrix {
    let mut m = CMatrix::zeros(basis.size());
    for idx in 0..basis.size() {
        let (x1, x2, _) = basis.site(idx);
        let rho = x1 - x2;
        let theta = if rho == 0 {
            params.phi0
        } else {
            params.phi / rho.unsigned_abs() as f64
        };
        m.set(idx, idx, C64::from_polar(1.0, theta));
    }
    m
}

/// The literal one-step operator `interaction * displacement * coin` on a
/// periodic box. Explicitly unitary.
pub fn dense_step_matrix(
    x1_range: RangeInclusive<i64>,
    x2_range: RangeInclusive<i64>,
    params: &WalkParams,
) -> Result<(TorusBasis, CMatrix), WalkError> {
    let basis = TorusBasis::new(x1_range, x2_range)?;
    let u = interaction_matrix(&basis, params)
        .mul(&displacement_matrix(&basis))
        .mul(&coin_matrix(&basis));
    Ok((basis, u))
}

/// Eigendecomposition of a Hermitian matrix by Householder tridiagonalization
/// followed by implicit-shift QL. Returns eigenvalues ascending and the
/// matching orthonormal eigenvectors as columns.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix), WalkError> {
    let n = a.n();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0)));
    }
    let mut w = a.clone();
    let mut q = CMatrix::identity(n);

    // Householder reduction to Hermitian tridiagonal form.
    let mut v = vec![C64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let mut xnorm2 = 0.0;
        for i in k + 1..n {
            xnorm2 += w.get(i, k).norm_sqr();
        }
        if xnorm2 <= f64::MIN_POSITIVE {
            continue;
        }
        let alpha = w.get(k + 1, k);
        let anorm = xnorm2.sqrt();
        let phase = if alpha.norm() > 0.0 {
            alpha / alpha.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let beta = -phase * anorm;
        for i in k + 1..n {
            v[i] = w.get(i, k);
        }
        v[k + 1] -= beta;
        let vnorm2: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        if vnorm2 <= f64::MIN_POSITIVE {
            continue;
        }
        let tau = 2.0 / vnorm2;

        // W <- P W, rows k+1..n
        for j in 0..n {
            let mut c = C64::new(0.0, 0.0);
            for i in k + 1..n {
                c += v[i].conj() * w.get(i, j);
            }
            c = c.scale(tau);
            for i in k + 1..n {
                let val = w.get(i, j) - v[i] * c;
                w.set(i, j, val);
            }
        }
        // W <- W P, columns k+1..n
        for i in 0..n {
            let mut r = C64::new(0.0, 0.0);
            for j in k + 1..n {
                r += w.get(i, j) * v[j];
            }
            r = r.scale(tau);
            for j in k + 1..n {
                let val = w.get(i, j) - r * v[j].conj();
                w.set(i, j, val);
            }
        }
        // Q <- Q P
        for i in 0..n {
            let mut r = C64::new(0.0, 0.0);
            for j in k + 1..n {
                r += q.get(i, j) * v[j];
            }
            r = r.scale(tau);
            for j in k + 1..n {
                let val = q.get(i, j) - r * v[j].conj();
                q.set(i, j, val);
            }
        }
    }

    // Extract the tridiagonal and rotate the subdiagonal real.
    let mut d: Vec<f64> = (0..n).map(|i| w.get(i, i).re).collect();
    let mut e = vec![0.0f64; n]; // e[i] couples i and i+1
    let mut p = C64::new(1.0, 0.0);
    for i in 1..n {
        let sub = w.get(i, i - 1);
        let m = sub.norm();
        let ph = if m > 0.0 { sub / m } else { C64::new(1.0, 0.0) };
        p *= ph;
        e[i - 1] = m;
        for r in 0..n {
            let val = q.get(r, i) * p;
            q.set(r, i, val);
        }
    }

    // Implicit-shift QL on (d, e) with eigenvector accumulation.
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(WalkError::Eigensolver(format!(
                    "QL failed to converge at row {l} of {n}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let sign_r = if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p_shift = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p_shift;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p_shift;
                r = (d[i] - g) * s + 2.0 * c * b;
                p_shift = s * r;
                d[i + 1] = g + p_shift;
                g = c * r - b;
                for row in 0..n {
                    f = q.get(row, i + 1).re;
                    let fi = q.get(row, i + 1).im;
                    let qi = q.get(row, i);
                    q.set(
                        row,
                        i + 1,
                        C64::new(s * qi.re + c * f, s * qi.im + c * fi),
                    );
                    q.set(
                        row,
                        i,
                        C64::new(c * qi.re - s * f, c * qi.im - s * fi),
                    );
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p_shift;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // Sort ascending, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vecs = CMatrix::zeros(n);
    for (jnew, &jold) in order.iter().enumerate() {
        for i in 0..n {
            vecs.set(i, jnew, q.get(i, jold));
        }
    }
    Ok((vals, vecs))
}

/// Eigenphases of a unitary Bloch operator recovered through the commuting
/// Hermitian pair `C = (M + M^H)/2` (eigenvalues `cos omega`) and
/// `S = (M - M^H)/(2i)` (eigenvalues `sin omega`), independently of the
/// dense general eigensolver. Sorted ascending in `[-pi, pi)`.
pub fn eigenphase_crosscheck(op: &BlochOperator) -> Result<Vec<f64>, WalkError> {
    let n = op.dim();
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, op.matrix()[(i, j)]);
        }
    }
    let mh = m.adjoint();
    let mut cmat = CMatrix::zeros(n);
    let mut smat = CMatrix::zeros(n);
    let half = C64::new(0.5, 0.0);
    let halfi = C64::new(0.0, -0.5); // 1/(2i)
    for i in 0..n {
        for j in 0..n {
            cmat.set(i, j, (m.get(i, j) + mh.get(i, j)) * half);
            smat.set(i, j, (m.get(i, j) - mh.get(i, j)) * halfi);
        }
    }

    let (cos_vals, q) = hermitian_eigen(&cmat)?;

    let mut phases = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && cos_vals[end] - cos_vals[end - 1] < 1e-8 {
            end += 1;
        }
        let mwidth = end - start;
        if mwidth == 1 {
            // <q|S|q> is the sine of this state's phase
            let col: Vec<C64> = (0..n).map(|i| q.get(i, start)).collect();
            let sv = smat.matvec(&col);
            let sin_val: C64 = col.iter().zip(&sv).map(|(a, b)| a.conj() * b).sum();
            phases.push(wrap_phase(sin_val.re.atan2(cos_vals[start])));
        } else {
            // project S onto the cos-degenerate block and split it there
            let cols: Vec<Vec<C64>> = (start..end)
                .map(|j| (0..n).map(|i| q.get(i, j)).collect())
                .collect();
            let images: Vec<Vec<C64>> = cols.iter().map(|c| smat.matvec(c)).collect();
            let mut block = CMatrix::zeros(mwidth);
            for a in 0..mwidth {
                for b in 0..mwidth {
                    let val: C64 = cols[a]
                        .iter()
                        .zip(&images[b])
                        .map(|(x, y)| x.conj() * y)
                        .sum();
                    block.set(a, b, val);
                }
            }
            let (sin_vals, _) = hermitian_eigen(&block)?;
            let cos_mean = cos_vals[start..end].iter().sum::<f64>() / mwidth as f64;
            for sv in sin_vals {
                phases.push(wrap_phase(sv.atan2(cos_mean)));
            }
        }
        start = end;
    }

    phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(phases)
}

/// Worst-case circular distance between two sorted eigenphase multisets,
/// minimized over small cyclic misalignments at the `-pi/pi` seam.
pub fn phase_multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    if n == 0 {
        return 0.0;
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let circ = |x: f64, y: f64| {
        let d = (x - y).abs() % two_pi;
        d.min(two_pi - d)
    };
    let mut best = f64::INFINITY;
    for shift in -2i64..=2 {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let j = (i as i64 + shift).rem_euclid(n as i64) as usize;
            worst = worst.max(circ(a[i], b[j]));
        }
        best = best.min(worst);
    }
    best
}

/// Single-walker Hadamard walk on the line: coin `(1/sqrt2)[[1,1],[1,-1]]`
/// on `(up, down)`, then `up` moves `+1` and `down` moves `-1`. Used to
/// check the zero-coupling factorization of the pair walk.
#[derive(Debug, Clone)]
pub struct Walk1D {
    lo: i64,
    amps: Vec<[C64; 2]>,
}

impl Walk1D {
    pub fn from_amplitudes(sites: &[(i64, [C64; 2])]) -> Self {
        let lo = sites.iter().map(|(x, _)| *x).min().unwrap();
        let hi = sites.iter().map(|(x, _)| *x).max().unwrap();
        let mut amps = vec![[C64::new(0.0, 0.0); 2]; (hi - lo + 1) as usize];
        for (x, a) in sites {
            let i = (x - lo) as usize;
            amps[i][0] += a[0];
            amps[i][1] += a[1];
        }
        Walk1D { lo, amps }
    }

    pub fn normalized(&self) -> Self {
        let n: f64 = self
            .amps
            .iter()
            .map(|a| a[0].norm_sqr() + a[1].norm_sqr())
            .sum::<f64>()
            .sqrt();
        let s = 1.0 / n;
        Walk1D {
            lo: self.lo,
            amps: self
                .amps
                .iter()
                .map(|a| [a[0].scale(s), a[1].scale(s)])
                .collect(),
        }
    }

    pub fn amplitude(&self, x: i64) -> [C64; 2] {
        let i = x - self.lo;
        if i < 0 || i as usize >= self.amps.len() {
            [C64::new(0.0, 0.0); 2]
        } else {
            self.amps[i as usize]
        }
    }

    pub fn step(&self) -> Self {
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let lo = self.lo - 1;
        let hi = self.lo + self.amps.len() as i64;
        let amps = (lo..=hi)
            .map(|x| {
                let [u_m, d_m] = self.amplitude(x - 1);
                let [u_p, d_p] = self.amplitude(x + 1);
                [
                    (u_m + d_m).scale(inv_sqrt2),
                    (u_p - d_p).scale(inv_sqrt2),
                ]
            })
            .collect();
        Walk1D { lo, amps }
    }

    pub fn run(&self, steps: usize) -> Self {
        let mut w = self.clone();
        for _ in 0..steps {
            w = w.step();
        }
        w
    }

    pub fn probabilities(&self) -> Vec<(i64, f64)> {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| (self.lo + i as i64, a[0].norm_sqr() + a[1].norm_sqr()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Parity;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMatrix {
        let mut a = CMatrix::zeros(n);
        for i in 0..n {
            a.set(i, i, C64::new(rng.gen_range(-2.0..2.0), 0.0));
            for j in 0..i {
                let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                a.set(i, j, z);
                a.set(j, i, z.conj());
            }
        }
        a
    }

    #[test]
    fn dense_operator_is_unitary() {
        let params = WalkParams::new(1.0, 0.7, Parity::Even, 11).unwrap();
        let (_, u) = dense_step_matrix(-5..=5, -5..=5, &params).unwrap();
        assert!(u.unitarity_defect() < 1e-12);
    }

    #[test]
    fn free_walk_operator_is_displacement_times_coin() {
        let params = WalkParams::new(0.0, 0.0, Parity::Even, 3).unwrap();
        let (basis, u) = dense_step_matrix(-1..=1, -1..=1, &params).unwrap();
        let dh = displacement_matrix(&basis).mul(&coin_matrix(&basis));
        assert!(u.max_abs_diff(&dh) < 1e-15);
    }

    #[test]
    fn displacement_alone_moves_point_state_by_two_in_two_steps() {
        let basis = TorusBasis::new(-4..=4, -4..=4).unwrap();
        let d = displacement_matrix(&basis);
        let mut v = vec![C64::new(0.0, 0.0); basis.size()];
        v[basis.index(0, 0, 1)] = C64::new(1.0, 0.0); // coin d: (+1, -1)
        let v2 = d.matvec(&d.matvec(&v));
        for (idx, amp) in v2.iter().enumerate() {
            if amp.norm() > 0.0 {
                let (x1, x2, coin) = basis.site(idx);
                assert_eq!((x1, x2, coin), (2, -2, 1));
                assert!((amp.norm() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn basis_cap_is_enforced() {
        assert!(matches!(
            TorusBasis::new(0..=99, 0..=99),
            Err(WalkError::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn hermitian_eigen_on_diagonal_matrix() {
        let mut a = CMatrix::zeros(4);
        for (i, v) in [3.0, -1.0, 2.0, 0.5].iter().enumerate() {
            a.set(i, i, C64::new(*v, 0.0));
        }
        let (vals, vecs) = hermitian_eigen(&a).unwrap();
        let expect = [-1.0, 0.5, 2.0, 3.0];
        for (v, e) in vals.iter().zip(expect) {
            assert!((v - e).abs() < 1e-14);
        }
        assert!(vecs.unitarity_defect() < 1e-13);
    }

    #[test]
    fn hermitian_eigen_two_by_two_known() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2
        let mut a = CMatrix::zeros(2);
        a.set(0, 0, C64::new(1.0, 0.0));
        a.set(0, 1, C64::new(0.0, 1.0));
        a.set(1, 0, C64::new(0.0, -1.0));
        a.set(1, 1, C64::new(1.0, 0.0));
        let (vals, _) = hermitian_eigen(&a).unwrap();
        assert!((vals[0] - 0.0).abs() < 1e-14);
        assert!((vals[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_eigen_random_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for n in [1usize, 2, 3, 8, 24] {
            let a = random_hermitian(&mut rng, n);
            let (vals, vecs) = hermitian_eigen(&a).unwrap();
            assert!(vecs.unitarity_defect() < 1e-11, "n = {n}");
            for j in 0..n {
                let col: Vec<C64> = (0..n).map(|i| vecs.get(i, j)).collect();
                let av = a.matvec(&col);
                let res: f64 = av
                    .iter()
                    .zip(&col)
                    .map(|(x, v)| (x - v.scale(vals[j])).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(res < 1e-11, "n = {n}, j = {j}, residual {res}");
            }
            for w in vals.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn crosscheck_single_site_hand_values() {
        // even sector, one site, k = 0, phi0 = 0: the operator is the bare
        // pair coin, whose eigenvalues are +-1 twice each
        let params = WalkParams::new(0.0, 0.0, Parity::Even, 1).unwrap();
        let op = crate::spectral::build_bloch(0.0, &params).unwrap();
        let phases = eigenphase_crosscheck(&op).unwrap();
        let pi = std::f64::consts::PI;
        let expect = [-pi, -pi, 0.0, 0.0];
        for (p, e) in phases.iter().zip(expect) {
            assert!((p - e).abs() < 1e-12, "{phases:?}");
        }
    }

    #[test]
    fn crosscheck_matches_primary_solver_on_small_rings() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..6 {
            let parity = if rng.gen_bool(0.5) {
                Parity::Even
            } else {
                Parity::Odd
            };
            let n = rng.gen_range(3usize..10);
            let params = WalkParams::new(
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                parity,
                n,
            )
            .unwrap();
            let k = rng.gen_range(-1.5..1.5);
            let op = crate::spectral::build_bloch(k, &params).unwrap();
            let primary = crate::spectral::eigenphases(&op).unwrap();
            let check = eigenphase_crosscheck(&op).unwrap();
            let dist = phase_multiset_distance(&primary, &check);
            assert!(dist < 1e-8, "distance {dist} for {params:?} k={k}");
        }
    }

    #[test]
    fn walk1d_point_state_spreads_symmetrically_at_first_step() {
        let w = Walk1D::from_amplitudes(&[(
            0,
            [C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0), C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2)],
        )]);
        let w1 = w.step();
        let probs: Vec<(i64, f64)> = w1.probabilities().into_iter().filter(|(_, p)| *p > 0.0).collect();
        assert_eq!(probs.len(), 2);
        assert!((probs[0].1 - 0.5).abs() < 1e-15);
        assert!((probs[1].1 - 0.5).abs() < 1e-15);
        // norm conserved over many steps
        let w50 = w.run(50);
        let total: f64 = w50.probabilities().iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
