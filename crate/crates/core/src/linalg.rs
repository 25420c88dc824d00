//! Dense complex matrices and the one nontrivial kernel: the smallest
//! singular value (equivalently the resolvent norm `‖M⁻¹‖ = 1/σ_min`).
//!
//! Full SVD is used up to [`SVD_SIDE_LIMIT`]; above that only `σ_min` is
//! needed and an LU-based power iteration on `(MᴴM)⁻¹` is cheaper.

use crate::{Error, Result};
use faer::prelude::*;
use faer::Mat;
use num_complex::Complex64;

pub const SVD_SIDE_LIMIT: usize = 2000;
/// `σ_min` below this reports an infinite resolvent norm.
pub const SIGMA_UNDERFLOW: f64 = 1e-300;
/// Sentinel value standing in for `+∞` (thresholds compare, never subtract).
pub const RESOLVENT_INF: f64 = 1e300;

const POWER_TOL: f64 = 1e-8;
const POWER_CAP: usize = 500;

/// Square dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    side: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(side: usize) -> ComplexMatrix {
        ComplexMatrix { side, data: vec![Complex64::ZERO; side * side] }
    }

    pub fn identity(side: usize) -> ComplexMatrix {
        let mut m = Self::zeros(side);
        for i in 0..side {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_rows(side: usize, data: Vec<Complex64>) -> ComplexMatrix {
        assert_eq!(data.len(), side * side);
        ComplexMatrix { side, data }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `I - self`
    pub fn id_minus(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.side);
        for i in 0..self.side {
            for j in 0..self.side {
                let d = if i == j { Complex64::ONE } else { Complex64::ZERO };
                out[(i, j)] = d - self[(i, j)];
            }
        }
        out
    }

    pub fn to_faer(&self) -> Mat<c64> {
        Mat::from_fn(self.side, self.side, |i, j| {
            let z = self[(i, j)];
            c64::new(z.re, z.im)
        })
    }

    /// Operator 2-norm (largest singular value).
    pub fn op_norm(&self) -> f64 {
        if self.side == 0 {
            return 0.0;
        }
        let m = self.to_faer();
        if self.side <= SVD_SIDE_LIMIT {
            m.svd().map(|svd| svd.S()[0].re).unwrap_or(f64::NAN)
        } else {
            // power iteration on MᴴM
            let n = self.side;
            let mut v = Mat::<c64>::from_fn(n, 1, |i, _| c64::new(1.0 + (i % 7) as f64, 0.3 * (i % 3) as f64));
            let mut prev = 0.0f64;
            for _ in 0..POWER_CAP {
                let w = &m * &v;
                let mut w = m.adjoint() * w;
                let norm = w.norm_l2();
                if norm == 0.0 {
                    return 0.0;
                }
                rescale(&mut w, 1.0 / norm);
                v = w;
                let est = norm.sqrt();
                if (est - prev).abs() <= POWER_TOL * est {
                    return est;
                }
                prev = est;
            }
            prev
        }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.side + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.side + j]
    }
}

/// Smallest singular value. Full SVD for moderate sizes; LU plus power
/// iteration on the inverse Gram operator beyond [`SVD_SIDE_LIMIT`].
pub fn min_singular_value(m: &ComplexMatrix) -> Result<f64> {
    if m.side == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite("min_singular_value input"));
    }
    let fm = m.to_faer();
    if m.side <= SVD_SIDE_LIMIT {
        let svd = fm
            .svd()
            .map_err(|_| Error::NonFinite("SVD failed to converge"))?;
        Ok(svd.S()[m.side - 1].re)
    } else {
        Ok(sigma_min_via_lu(&fm))
    }
}

pub(crate) fn rescale(m: &mut Mat<c64>, f: f64) {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            m[(i, j)] *= f;
        }
    }
}

fn sigma_min_via_lu(m: &Mat<c64>) -> f64 {
    let n = m.nrows();
    let lu = m.partial_piv_lu();
    // power iteration on (MᴴM)⁻¹ = M⁻¹ M⁻ᴴ
    let mut v = Mat::<c64>::from_fn(n, 1, |i, _| {
        c64::new(1.0 + ((i * 31 + 7) % 13) as f64 / 13.0, ((i * 17 + 3) % 11) as f64 / 11.0)
    });
    let nv = v.norm_l2();
    rescale(&mut v, 1.0 / nv);
    let mut lam = 0.0f64;
    for _ in 0..POWER_CAP {
        let u = lu.solve_adjoint(&v);
        let mut w = lu.solve(&u);
        let norm = w.norm_l2();
        if !norm.is_finite() || norm > 1e280 {
            return 0.0;
        }
        if norm == 0.0 {
            return f64::INFINITY;
        }
        rescale(&mut w, 1.0 / norm);
        v = w;
        let est = norm;
        if (est - lam).abs() <= POWER_TOL * est {
            lam = est;
            break;
        }
        lam = est;
    }
    1.0 / lam.sqrt()
}

/// `‖(I-K)⁻¹‖` from the dense entries of `K`; `σ_min` underflow is reported
/// as the finite sentinel [`RESOLVENT_INF`].
pub fn resolvent_norm_from_entries(k_entries: &ComplexMatrix) -> Result<f64> {
    let m = k_entries.id_minus();
    let sigma = min_singular_value(&m)?;
    if sigma < SIGMA_UNDERFLOW {
        Ok(RESOLVENT_INF)
    } else {
        Ok(1.0 / sigma)
    }
}

/// Linear solve `M x = b` (partial-pivot LU), returning the residual norm
/// alongside the solution.
pub fn solve_with_residual(
    m: &ComplexMatrix,
    b: &[Complex64],
) -> Result<(Vec<Complex64>, f64)> {
    if b.len() != m.side {
        return Err(Error::InvalidParameter("rhs length mismatch".into()));
    }
    let fm = m.to_faer();
    let rhs = Mat::<c64>::from_fn(m.side, 1, |i, _| c64::new(b[i].re, b[i].im));
    let lu = fm.partial_piv_lu();
    let x = lu.solve(&rhs);
    let resid = &fm * &x - &rhs;
    let x_vec = (0..m.side).map(|i| Complex64::new(x[(i, 0)].re, x[(i, 0)].im)).collect();
    Ok((x_vec, resid.norm_l2()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn pseudo_matrix(n: usize, seed0: u64) -> ComplexMatrix {
        let mut seed = seed0;
        let mut rnd = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = c64(rnd(), rnd());
            }
        }
        m
    }

    #[test]
    fn identity_and_diagonal() {
        assert!((min_singular_value(&ComplexMatrix::identity(2)).unwrap() - 1.0).abs() < 1e-14);
        let mut d = ComplexMatrix::zeros(2);
        d[(0, 0)] = c64(3.0, 0.0);
        d[(1, 1)] = c64(0.5, 0.0);
        assert!((min_singular_value(&d).unwrap() - 0.5).abs() < 1e-14);
    }

    /// Independent oracle: power iteration on (MᴴM)⁻¹ with a hand-rolled
    /// Gaussian solve, no shared code with the implementation path.
    fn sigma_min_oracle(m: &ComplexMatrix) -> f64 {
        let n = m.side();
        // gram = MᴴM
        let mut gram = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::ZERO;
                for k in 0..n {
                    acc += m[(k, i)].conj() * m[(k, j)];
                }
                gram[i * n + j] = acc;
            }
        }
        let solve = |rhs: &[Complex64]| -> Vec<Complex64> {
            let mut a = gram.clone();
            let mut b = rhs.to_vec();
            for col in 0..n {
                let piv = (col..n)
                    .max_by(|&p, &q| a[p * n + col].norm().total_cmp(&a[q * n + col].norm()))
                    .unwrap();
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                b.swap(col, piv);
                let d = a[col * n + col];
                for row in (col + 1)..n {
                    let f = a[row * n + col] / d;
                    for j in col..n {
                        let v = a[col * n + j];
                        a[row * n + j] -= f * v;
                    }
                    let bc = b[col];
                    b[row] -= f * bc;
                }
            }
            for row in (0..n).rev() {
                let mut acc = b[row];
                for j in (row + 1)..n {
                    acc -= a[row * n + j] * b[j];
                }
                b[row] = acc / a[row * n + row];
            }
            b
        };
        let mut v: Vec<Complex64> = (0..n).map(|i| c64(1.0 + i as f64, 0.5 - i as f64 / 7.0)).collect();
        let mut lam = 0.0;
        for _ in 0..2000 {
            let w = solve(&v);
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v = w.iter().map(|z| z / norm).collect();
            if (norm - lam).abs() < 1e-12 * norm {
                lam = norm;
                break;
            }
            lam = norm;
        }
        (1.0 / lam).sqrt()
    }

    #[test]
    fn random_6x6_matches_gram_oracle() {
        let m = pseudo_matrix(6, 0xDEADBEEF12345678);
        let got = min_singular_value(&m).unwrap();
        let want = sigma_min_oracle(&m);
        assert!((got - want).abs() < 1e-10 * want.max(1e-6), "{got} vs {want}");
    }

    #[test]
    fn rotation_product_has_unit_sigma() {
        // product of random Givens rotations stays unitary
        let n = 8;
        let mut m = ComplexMatrix::identity(n);
        let mut seed = 42u64;
        let mut rnd = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..40 {
            let i = (rnd() * n as f64) as usize % n;
            let mut j = (rnd() * n as f64) as usize % n;
            if i == j {
                j = (j + 1) % n;
            }
            let th = rnd() * std::f64::consts::TAU;
            let ph = rnd() * std::f64::consts::TAU;
            let (c, s) = (th.cos(), th.sin());
            let e = c64(ph.cos(), ph.sin());
            let mut next = m.clone();
            for col in 0..n {
                let a = m[(i, col)];
                let b = m[(j, col)];
                next[(i, col)] = a * c + b * s * e;
                next[(j, col)] = -a * s * e.conj() + b * c;
            }
            m = next;
        }
        let sigma = min_singular_value(&m).unwrap();
        assert!((sigma - 1.0).abs() < 1e-10, "sigma = {sigma}");
    }

    #[test]
    fn solve_cross_check() {
        let m = pseudo_matrix(12, 0xABCDEF987);
        let b: Vec<Complex64> = (0..12).map(|i| c64(i as f64, 1.0)).collect();
        let sigma = min_singular_value(&m).unwrap();
        assert!(sigma > 0.0);
        let (x, resid) = solve_with_residual(&m, &b).unwrap();
        let bnorm = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(resid <= 1e-8 * bnorm, "residual {resid}");
        assert_eq!(x.len(), 12);
    }

    #[test]
    fn resolvent_norm_examples() {
        let k = ComplexMatrix::zeros(4);
        assert!((resolvent_norm_from_entries(&k).unwrap() - 1.0).abs() < 1e-12);

        let mut k = ComplexMatrix::zeros(3);
        for i in 0..3 {
            k[(i, i)] = c64(0.5, 0.0);
        }
        assert!((resolvent_norm_from_entries(&k).unwrap() - 2.0).abs() < 1e-12);

        // singular I-K
        let k = ComplexMatrix::identity(3);
        assert_eq!(resolvent_norm_from_entries(&k).unwrap(), RESOLVENT_INF);
    }

    #[test]
    fn large_path_diagonal() {
        let n = SVD_SIDE_LIMIT + 50;
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = c64(0.3 + 4.7 * (i as f64 / n as f64), 0.1);
        }
        let want = m[(0, 0)].norm();
        let got = min_singular_value(&m).unwrap();
        assert!((got - want).abs() < 1e-6 * want, "{got} vs {want}");
    }

    #[test]
    fn nonfinite_rejected() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c64(f64::NAN, 0.0);
        assert!(min_singular_value(&m).is_err());
    }
}
