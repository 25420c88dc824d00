//! Fourier cell lattice, basis bookkeeping, parameter schedules, and the
//! closed-form cell transforms used in matrix elements.
//!
//! The basis is `e_k = n^{1/2} (χ_{Q_k})ˇ` for cells `Q_k = i_k + [0, 1/n)`
//! with origins `i_k ∈ (1/n)ℤ ∩ [-r, r]`, so `l_n = 2nr+1` in one dimension.
//! All x-space evaluations reduce to the two segment integrals
//! `J0(x,h) = ∫_0^h e^{iux} du` and `J1(x,h) = ∫_0^h u e^{iux} du`, which are
//! evaluated by the closed form away from `x = 0` and by a short series in
//! the cancellation-prone region.

use crate::symbols::{a_lambda, grad_a_lambda, SymbolContext};
use crate::{Error, Result};
use num_complex::Complex64;

pub const TAU: f64 = std::f64::consts::TAU;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Profile {
    /// Schedules with certified convergence constants.
    Rigorous,
    /// `r = √n/2`, `s = n`, `R` = decay radius, `N = 1`.
    Practical,
}

#[derive(Clone, Debug)]
pub struct Discretization {
    pub n: u32,
    /// Integer `n·r`; the lattice half-extent is `r = nr/n`.
    pub nr: u64,
    pub l_n: usize,
    /// Spatial truncation radius (integer-valued).
    pub big_r: f64,
    /// Quadrature fineness: points per unit length.
    pub s: u64,
    /// Sub-cell refinement of the symbol approximation.
    pub n_sub: u32,
    /// Taylor order of the symbol on each sub-segment (0 or 1).
    pub order: u8,
    pub profile: Profile,
}

impl Discretization {
    /// Parameter schedule for lattice fineness `n`.
    ///
    /// Rigorous profile: `r = √n`, `R = n²`, `s = n²`, `N = 1` when the
    /// potential is flagged `L¹`-integrable (rate `n^{-1/2}`); otherwise the
    /// general schedule `r = n`, `N = l_n`, `R = l_n n`, `s = l_n r R^{1-1/p}`
    /// (rate `n^{-1}`).
    pub fn schedule(
        n: u32,
        profile: Profile,
        p: f64,
        decay_radius: f64,
        l1_improved: bool,
    ) -> Result<Discretization> {
        if n == 0 {
            return Err(Error::InvalidParameter("lattice fineness n must be >= 1".into()));
        }
        let nf = n as f64;
        match profile {
            Profile::Practical => {
                let nr = (nf * nf.sqrt() / 2.0 - 1e-9).ceil().max(1.0) as u64;
                let big_r = decay_radius.max(1.0).ceil();
                Ok(Discretization {
                    n,
                    nr,
                    l_n: 2 * nr as usize + 1,
                    big_r,
                    s: n as u64,
                    n_sub: 1,
                    order: 1,
                    profile,
                })
            }
            Profile::Rigorous => {
                if l1_improved {
                    let nr = (nf * nf.sqrt() - 1e-9).ceil().max(1.0) as u64;
                    Ok(Discretization {
                        n,
                        nr,
                        l_n: 2 * nr as usize + 1,
                        big_r: nf * nf,
                        s: (n as u64) * (n as u64),
                        n_sub: 1,
                        order: 0,
                        profile,
                    })
                } else {
                    let nr = (n as u64) * (n as u64);
                    let l_n = 2 * nr as usize + 1;
                    let r = nf;
                    let big_r = (l_n as f64) * nf;
                    let s = ((l_n as f64) * r * big_r.powf(1.0 - 1.0 / p)).ceil() as u64;
                    Ok(Discretization {
                        n,
                        nr,
                        l_n,
                        big_r,
                        s,
                        n_sub: l_n as u32,
                        order: 0,
                        profile,
                    })
                }
            }
        }
    }

    /// Fully explicit parameters (test harnesses and reference assemblies).
    pub fn custom(n: u32, r: f64, big_r: f64, s: u64, n_sub: u32, order: u8) -> Result<Discretization> {
        if n == 0 || !(r > 0.0) || !(big_r > 0.0) || s == 0 || n_sub == 0 || order > 1 {
            return Err(Error::InvalidParameter("invalid custom discretization".into()));
        }
        let nr = (n as f64 * r - 1e-9).ceil().max(1.0) as u64;
        Ok(Discretization {
            n,
            nr,
            l_n: 2 * nr as usize + 1,
            big_r: big_r.ceil(),
            s,
            n_sub,
            order,
            profile: Profile::Practical,
        })
    }

    pub fn r(&self) -> f64 {
        self.nr as f64 / self.n as f64
    }

    /// Cell width `1/n`.
    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Origin `i_k` of cell `k` (ascending enumeration, `k = 0..l_n`).
    pub fn cell_origin(&self, k: usize) -> f64 {
        (k as i64 - self.nr as i64) as f64 / self.n as f64
    }

    pub fn cell_origins(&self) -> Vec<f64> {
        (0..self.l_n).map(|k| self.cell_origin(k)).collect()
    }

    /// `e_k(x)`; the closed form of the inverse transform of the cell
    /// indicator.
    pub fn basis_value(&self, k: usize, x: f64) -> Complex64 {
        let scale = (self.n as f64 / TAU).sqrt();
        let i_k = self.cell_origin(k);
        scale * rot(i_k * x) * j0(x, self.h())
    }
}

/// `√((nπ)^{-2} a² + r^{-2} b²)` with `a = ‖xf‖`, `b = ‖∇f‖`: the projection
/// error bound `‖(I-P)f‖ ≤ √((nπ)^{-2}‖xf‖² + r^{-2}‖∇f‖²)`.
pub fn projection_error_bound(f_x_norm: f64, f_grad_norm: f64, n: u32, r: f64) -> f64 {
    let a = f_x_norm / (n as f64 * std::f64::consts::PI);
    let b = f_grad_norm / r;
    (a * a + b * b).sqrt()
}

/// `e^{ix}` with both components from one `sin_cos`.
#[inline]
pub fn rot(x: f64) -> Complex64 {
    let (s, c) = x.sin_cos();
    Complex64::new(c, s)
}

// below this |hx| the closed forms lose too many digits to cancellation
const SERIES_CUT: f64 = 0.1;

/// `(J0, J1)(x,h) = (∫_0^h e^{iux} du, ∫_0^h u e^{iux} du)`
#[inline]
pub fn j0j1(x: f64, h: f64) -> (Complex64, Complex64) {
    let z = h * x;
    if z.abs() < SERIES_CUT {
        // J0 = h Σ (iz)^m/(m+1)!,  J1 = h² Σ (iz)^m/(m!(m+2))
        let iz = Complex64::new(0.0, z);
        let mut term = Complex64::ONE; // (iz)^m / m!
        let mut acc0 = Complex64::ZERO;
        let mut acc1 = Complex64::ZERO;
        for m in 0..12u32 {
            acc0 += term / (m + 1) as f64;
            acc1 += term / (m + 2) as f64;
            term *= iz / (m + 1) as f64;
        }
        (h * acc0, h * h * acc1)
    } else {
        let e = rot(z);
        let ix = Complex64::new(0.0, x);
        let j0v = (e - 1.0) / ix;
        ((e - 1.0) / ix, (h * e - j0v) / ix)
    }
}

/// `J0(x,h) = ∫_0^h e^{iux} du`
#[inline]
pub fn j0(x: f64, h: f64) -> Complex64 {
    j0j1(x, h).0
}

/// `J1(x,h) = ∫_0^h u e^{iux} du`
#[inline]
pub fn j1(x: f64, h: f64) -> Complex64 {
    j0j1(x, h).1
}

/// Computable approximation of
/// `E_k^λ(x) = (2π)^{-1/2} n^{1/2} ∫_{Q_k} a_λ(ξ) e^{iξx} dξ`:
/// the symbol is replaced by its Taylor polynomial (order 0 or 1) on each of
/// `N` sub-segments of the cell, leaving polynomial-times-exponential
/// integrals in closed form.
#[derive(Clone, Debug)]
pub struct EFunction {
    pub scale: f64,
    /// Sub-segment width.
    pub h: f64,
    pub segments: Vec<Segment>,
}

#[derive(Clone, Copy, Debug)]
pub struct Segment {
    pub origin: f64,
    pub a: Complex64,
    /// Symbol slope on the segment (zero for order 0).
    pub g: Complex64,
}

impl EFunction {
    pub fn eval(&self, x: f64) -> Complex64 {
        let j0x = j0(x, self.h);
        let j1x = j1(x, self.h);
        let mut acc = Complex64::ZERO;
        for seg in &self.segments {
            acc += rot(seg.origin * x) * (seg.a * j0x + seg.g * j1x);
        }
        self.scale * acc
    }
}

/// Build `E_{k,N}^λ` for cell `k` with the discretization's sub-cell count.
pub fn e_function(
    k: usize,
    ctx: &SymbolContext,
    disc: &Discretization,
    order: u8,
) -> Result<EFunction> {
    if ctx.dist() <= 0.0 {
        return Err(Error::EssentialSpectrum { lambda: ctx.lambda });
    }
    let n_sub = disc.n_sub as usize;
    let h = disc.h() / n_sub as f64;
    let i_k = disc.cell_origin(k);
    let mut segments = Vec::with_capacity(n_sub);
    for j in 0..n_sub {
        let origin = i_k + j as f64 * h;
        let a = a_lambda(origin, ctx)?;
        let g = if order >= 1 {
            grad_a_lambda(origin, ctx)?
        } else {
            Complex64::ZERO
        };
        segments.push(Segment { origin, a, g });
    }
    Ok(EFunction {
        scale: (disc.n as f64 / TAU).sqrt(),
        h,
        segments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::quad::{integrate, integrate_complex};

    #[test]
    fn practical_schedule_examples() {
        let d = Discretization::schedule(100, Profile::Practical, 4.0 / 3.0, 10.0, true).unwrap();
        assert_eq!(d.r(), 5.0);
        assert_eq!(d.l_n, 1001);
        assert_eq!(d.s, 100);
        assert_eq!(d.big_r, 10.0);
        assert_eq!(d.n_sub, 1);

        let d = Discretization::schedule(1, Profile::Practical, 4.0 / 3.0, 4.0, true).unwrap();
        assert_eq!(d.l_n, 3);
        assert_eq!(d.r(), 1.0);
    }

    #[test]
    fn rigorous_schedule_examples() {
        let d = Discretization::schedule(100, Profile::Rigorous, 4.0 / 3.0, 10.0, true).unwrap();
        assert_eq!(d.r(), 10.0);
        assert_eq!(d.big_r, 1e4);
        assert_eq!(d.s, 10_000);

        // general (non-L¹) path: r = n, N = l_n
        let d = Discretization::schedule(2, Profile::Rigorous, 4.0 / 3.0, 10.0, false).unwrap();
        assert_eq!(d.r(), 2.0);
        assert_eq!(d.l_n, 9);
        assert_eq!(d.n_sub, 9);
        assert_eq!(d.big_r, 18.0);
        assert_eq!(d.s, (9.0f64 * 2.0 * 18.0f64.powf(0.25)).ceil() as u64);
    }

    #[test]
    fn practical_cell_count_growth() {
        for n in [50u32, 100, 200, 400] {
            let d = Discretization::schedule(n, Profile::Practical, 4.0 / 3.0, 4.0, true).unwrap();
            let expect = (n as f64).powf(1.5);
            assert!(
                (d.l_n as f64 - expect).abs() <= 3.0,
                "n={n}: l_n={} vs n^(3/2)={expect}",
                d.l_n
            );
        }
    }

    #[test]
    fn cells_tile_the_lattice() {
        let d = Discretization::schedule(4, Profile::Practical, 4.0 / 3.0, 2.0, true).unwrap();
        let cells = d.cell_origins();
        assert_eq!(cells.len(), d.l_n);
        assert_eq!(cells[0], -d.r());
        assert_eq!(*cells.last().unwrap(), d.r());
        for w in cells.windows(2) {
            assert!((w[1] - w[0] - d.h()).abs() < 1e-15);
        }
    }

    #[test]
    fn basis_value_at_zero_and_sup() {
        let d = Discretization::schedule(1, Profile::Practical, 4.0 / 3.0, 1.0, true).unwrap();
        let k0 = d.nr as usize; // cell with origin 0
        assert_eq!(d.cell_origin(k0), 0.0);
        let v = d.basis_value(k0, 0.0);
        assert!((v.re - 1.0 / TAU.sqrt()).abs() < 1e-15 && v.im == 0.0);

        // ‖e_k‖_∞ = (2π)^{-1/2} n^{-1/2}
        for n in [1u32, 3] {
            let d = Discretization::schedule(n, Profile::Practical, 4.0 / 3.0, 1.0, true).unwrap();
            let bound = 1.0 / (TAU * n as f64).sqrt();
            let mut sup: f64 = 0.0;
            for i in 0..40_000 {
                let x = -200.0 + 400.0 * i as f64 / 39_999.0;
                sup = sup.max(d.basis_value(1, x).norm());
            }
            assert!(sup <= bound * (1.0 + 1e-12));
            assert!(sup >= 0.99 * bound);
        }
    }

    #[test]
    fn basis_is_normalized() {
        // ∫ |e_k|² over [-1e4, 1e4] = 1 ± 1e-4 (n = 1, origin 0)
        let d = Discretization::schedule(1, Profile::Practical, 4.0 / 3.0, 1.0, true).unwrap();
        let k0 = d.nr as usize;
        let r = integrate(|x| d.basis_value(k0, x).norm_sqr(), -1e4, 1e4, 5e-6);
        assert!((r.value - 1.0).abs() < 1e-4, "norm² = {}", r.value);
    }

    #[test]
    fn j_functions_match_series_and_closed_form() {
        // continuity across the series cut at |hx| = 0.1
        for h in [1.0, 0.25, 1e-3] {
            for x in [1e-4 / h, 0.09 / h, 0.11 / h, 2.0, 150.0] {
                let j0a = j0(x, h);
                let j0b = integrate_complex(|u| rot(u * x), 0.0, h, 1e-14).value;
                assert!((j0a - j0b).norm() < 1e-13 * h.max(1.0), "j0 x={x} h={h}");
                let j1a = j1(x, h);
                let j1b = integrate_complex(|u| u * rot(u * x), 0.0, h, 1e-14).value;
                assert!((j1a - j1b).norm() < 1e-13 * h.max(1.0), "j1 x={x} h={h}");
            }
        }
    }

    #[test]
    fn e_function_order0_at_origin() {
        let d = Discretization::schedule(3, Profile::Practical, 4.0 / 3.0, 2.0, true).unwrap();
        let ctx = SymbolContext::new(1.0, c64(0.3, 0.2)).unwrap();
        let k = 2;
        let e = e_function(k, &ctx, &d, 0).unwrap();
        let expect = a_lambda(d.cell_origin(k), &ctx).unwrap() / (TAU * d.n as f64).sqrt();
        assert!((e.eval(0.0) - expect).norm() < 1e-14);
    }

    #[test]
    fn e_function_error_and_stability_bounds() {
        // windowed L² checks of ‖E_k - E_{k,N}‖ ≤ √2/(nN) ‖∇a_λ‖ and
        // ‖E_{k,N}‖ ≤ ‖a_λ‖ (window only undercounts the left sides)
        let d = Discretization::custom(2, 1.0, 4.0, 8, 3, 0).unwrap();
        let ctx = SymbolContext::new(1.0, c64(-0.4, 0.3)).unwrap();
        let bounds = crate::symbols::symbol_bounds(&ctx).unwrap();
        for k in [0usize, 2, 4] {
            let approx = e_function(k, &ctx, &d, 0).unwrap();
            let i_k = d.cell_origin(k);
            let exact = |x: f64| {
                (d.n as f64 / TAU).sqrt()
                    * integrate_complex(|xi| a_lambda(xi, &ctx).unwrap() * rot(xi * x), i_k, i_k + d.h(), 1e-12)
                        .value
            };
            let diff_sq =
                integrate(|x| (exact(x) - approx.eval(x)).norm_sqr(), -60.0, 60.0, 1e-10).value;
            let bound = 2f64.sqrt() / (d.n as f64 * d.n_sub as f64) * bounds.grad_a_inf;
            assert!(diff_sq.sqrt() <= bound, "cell {k}: {} vs {bound}", diff_sq.sqrt());

            let norm_sq = integrate(|x| approx.eval(x).norm_sqr(), -60.0, 60.0, 1e-10).value;
            assert!(norm_sq.sqrt() <= bounds.a_inf);
        }
    }

    #[test]
    fn order1_no_worse_than_order0() {
        let d = Discretization::schedule(2, Profile::Practical, 4.0 / 3.0, 2.0, true).unwrap();
        let mut seed = 0x2545F4914F6CDD1Du64;
        let mut rnd = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let k = (rnd() * d.l_n as f64) as usize % d.l_n;
            let lambda = c64(1.6 * rnd() - 0.8, 0.1 + 0.5 * rnd());
            let ctx = SymbolContext::new(1.0, lambda).unwrap();
            let i_k = d.cell_origin(k);
            let exact = |x: f64| {
                (d.n as f64 / TAU).sqrt()
                    * integrate_complex(|xi| a_lambda(xi, &ctx).unwrap() * rot(xi * x), i_k, i_k + d.h(), 1e-12)
                        .value
            };
            let e0 = e_function(k, &ctx, &d, 0).unwrap();
            let e1 = e_function(k, &ctx, &d, 1).unwrap();
            let err = |ef: &EFunction| {
                integrate(|x| (exact(x) - ef.eval(x)).norm_sqr(), -3.0, 3.0, 1e-12).value
            };
            let (err0, err1) = (err(&e0), err(&e1));
            assert!(
                err1 <= err0 * (1.0 + 1e-9) + 1e-18,
                "k={k}, λ={lambda}: order1 {err1} vs order0 {err0}"
            );
        }
    }

    #[test]
    fn projection_bound_examples() {
        assert_eq!(projection_error_bound(0.0, 0.0, 7, 3.0), 0.0);
        assert!((projection_error_bound(std::f64::consts::PI, 0.0, 1, 2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn projection_bound_sound_for_gaussian() {
        // f = e^{-x²/2}: ‖xf‖² = ‖f'‖² = √π/2, ‖f‖² = √π. Coefficients are
        // computed in Fourier space where f is self-dual.
        let d = Discretization::schedule(2, Profile::Practical, 4.0 / 3.0, 2.0, true).unwrap();
        let f_hat = |xi: f64| (-0.5 * xi * xi).exp();
        let norm_sq = std::f64::consts::PI.sqrt();
        let mut proj_sq = 0.0;
        for k in 0..d.l_n {
            let i_k = d.cell_origin(k);
            let coeff = (d.n as f64).sqrt() * integrate(f_hat, i_k, i_k + d.h(), 1e-13).value;
            proj_sq += coeff * coeff;
        }
        let measured = (norm_sq - proj_sq).max(0.0).sqrt();
        let bound = projection_error_bound(
            (norm_sq / 2.0).sqrt(),
            (norm_sq / 2.0).sqrt(),
            d.n,
            d.r(),
        );
        assert!(measured <= bound, "measured {measured} vs bound {bound}");
    }

    #[test]
    fn zero_fineness_rejected() {
        assert!(Discretization::schedule(0, Profile::Practical, 4.0 / 3.0, 1.0, true).is_err());
    }
}
