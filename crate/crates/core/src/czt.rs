//! Chirp (Bluestein) evaluation of lattice exponential sums.
//!
//! Assembly and resolvent evaluation repeatedly need sums of the form
//! `out[u] = Σ_v x[v] e^{i (k0+v)(j0+u)/den}` where both index lattices are
//! uniform with a common exact rational phase step `1/den`. Bluestein's
//! identity `ab = (a² + b² - (a-b)²)/2` turns the sum into one linear
//! convolution, evaluated by FFT in `O((P+Q) log(P+Q))`.
//!
//! Phase arguments grow like `(k0+P+j0+Q)²/den`, far beyond where naive f64
//! products keep absolute accuracy, so all chirp phases are computed in
//! double-double arithmetic and reduced mod 2π before `sin_cos`.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

#[derive(Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

const TWO_PI: Dd = Dd {
    hi: 6.283185307179586,
    lo: 2.4492935982947064e-16,
};

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    let e = a.mul_add(b, -p);
    Dd { hi: p, lo: e }
}

/// Double-double reciprocal of a positive integer-valued f64.
fn dd_recip(x: f64) -> Dd {
    let q1 = 1.0 / x;
    let r = (-q1).mul_add(x, 1.0);
    let q2 = r / x;
    Dd { hi: q1, lo: q2 }
}

/// `(t * inv) mod 2π` where `t` is an exactly representable integer value.
fn phase_mod_2pi(t: f64, inv: Dd) -> f64 {
    let p = two_prod(t, inv.hi);
    let lo = t.mul_add(inv.lo, p.lo);
    // reduce hi+lo mod 2π
    let k = (p.hi / TWO_PI.hi).round();
    let s = two_prod(k, TWO_PI.hi);
    let d = two_sum(p.hi, -s.hi);
    let rem = d.lo + lo - s.lo - k * TWO_PI.lo;
    d.hi + rem
}

#[inline]
fn cis(theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}

/// Precomputed plan for `out[u] = Σ_v x[v] e^{i (k0+v)(j0+u)/den}`,
/// `v = 0..p_in`, `u = 0..q_out`.
pub struct LatticeSum {
    p_in: usize,
    q_out: usize,
    len: usize,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    /// `e^{i a_v²/(2 den)}` for `a_v = k0+v`
    chirp_in: Vec<Complex64>,
    /// `e^{i b_u²/(2 den)}` for `b_u = j0+u`
    chirp_out: Vec<Complex64>,
    /// FFT of the reversed kernel `e^{-i (a-b)²/(2 den)}`
    kernel_fft: Vec<Complex64>,
}

impl LatticeSum {
    pub fn new(k0: i64, p_in: usize, j0: i64, q_out: usize, den: u64) -> LatticeSum {
        assert!(p_in > 0 && q_out > 0 && den > 0);
        let inv2 = dd_recip(2.0 * den as f64);
        let conv_len = p_in + q_out - 1;
        let len = conv_len.next_power_of_two();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(len);
        let ifft = planner.plan_fft_inverse(len);

        let chirp_in: Vec<Complex64> = (0..p_in)
            .map(|v| {
                let a = (k0 + v as i64) as f64;
                cis(phase_mod_2pi(a * a, inv2))
            })
            .collect();
        let chirp_out: Vec<Complex64> = (0..q_out)
            .map(|u| {
                let b = (j0 + u as i64) as f64;
                cis(phase_mod_2pi(b * b, inv2))
            })
            .collect();

        // kernel over differences d = a_v - b_u = (k0 - j0) + (v - u),
        // v - u ∈ [-(q_out-1), p_in-1], stored reversed for convolution
        let mut kernel = vec![Complex64::ZERO; len];
        for idx in 0..conv_len {
            // reversed index: kernel value at w = v-u = p_in-1-idx
            let w = p_in as i64 - 1 - idx as i64;
            let d = (k0 - j0 + w) as f64;
            kernel[idx] = cis(-phase_mod_2pi(d * d, inv2));
        }
        fft.process(&mut kernel);

        LatticeSum {
            p_in,
            q_out,
            len,
            fft,
            ifft,
            chirp_in,
            chirp_out,
            kernel_fft: kernel,
        }
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.p_in);
        let mut buf = vec![Complex64::ZERO; self.len];
        for v in 0..self.p_in {
            buf[v] = x[v] * self.chirp_in[v];
        }
        self.fft.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel_fft) {
            *b *= k;
        }
        self.ifft.process(&mut buf);
        let scale = 1.0 / self.len as f64;
        (0..self.q_out)
            .map(|u| buf[u + self.p_in - 1] * self.chirp_out[u] * scale)
            .collect()
    }

    /// Reference evaluation; used to validate the FFT path.
    pub fn apply_direct(k0: i64, j0: i64, den: u64, x: &[Complex64], q_out: usize) -> Vec<Complex64> {
        let inv = dd_recip(den as f64);
        (0..q_out)
            .map(|u| {
                let b = (j0 + u as i64) as f64;
                let mut acc = Complex64::ZERO;
                for (v, &xv) in x.iter().enumerate() {
                    let a = (k0 + v as i64) as f64;
                    acc += xv * cis(phase_mod_2pi(a * b, inv));
                }
                acc
            })
            .collect()
    }
}
