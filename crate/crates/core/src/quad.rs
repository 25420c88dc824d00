//! Adaptive Gauss-Kronrod quadrature used for potential norms, enclosure
//! integrals and reference assemblies.

use num_complex::Complex64;

// 15-point Kronrod abscissae on [-1, 1] (positive half) with the embedded
// 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome<T> {
    pub value: T,
    /// Estimated absolute error.
    pub error: f64,
    pub converged: bool,
}

fn gk15_real<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let fsum = f(c - x) + f(c + x);
        kron += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    (kron * h, (kron - gauss).abs() * h.abs())
}

fn gk15_complex<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let fsum = f(c - x) + f(c + x);
        kron += fsum * WGK[j];
        if j % 2 == 1 {
            gauss += fsum * WG[j / 2];
        }
    }
    (kron * h, (kron - gauss).norm() * h.abs())
}

/// Adaptive bisection to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> QuadOutcome<f64> {
    // (a, b, value, err) intervals still above their error share
    let mut stack = vec![(a, b)];
    let mut value = 0.0;
    let mut error = 0.0;
    let mut converged = true;
    let max_intervals = 100_000;
    let mut done = 0usize;
    while let Some((lo, hi)) = stack.pop() {
        let (v, e) = gk15_real(&f, lo, hi);
        let local_tol = tol * (hi - lo).abs() / (b - a).abs();
        if e <= local_tol.max(1e-300) || (hi - lo).abs() < 1e-14 * (b - a).abs() || done > max_intervals {
            value += v;
            error += e;
            if e > local_tol.max(1e-300) {
                converged = false;
            }
            done += 1;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid));
            stack.push((mid, hi));
        }
    }
    QuadOutcome { value, error, converged }
}

pub fn integrate_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> QuadOutcome<Complex64> {
    let mut stack = vec![(a, b)];
    let mut value = Complex64::ZERO;
    let mut error = 0.0;
    let mut converged = true;
    let max_intervals = 100_000;
    let mut done = 0usize;
    while let Some((lo, hi)) = stack.pop() {
        let (v, e) = gk15_complex(&f, lo, hi);
        let local_tol = tol * (hi - lo).abs() / (b - a).abs();
        if e <= local_tol.max(1e-300) || (hi - lo).abs() < 1e-14 * (b - a).abs() || done > max_intervals {
            value += v;
            error += e;
            if e > local_tol.max(1e-300) {
                converged = false;
            }
            done += 1;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid));
            stack.push((mid, hi));
        }
    }
    QuadOutcome { value, error, converged }
}

/// Maximum of `f` over `[a, b]`: dense scan plus golden-section refinement
/// around the best sample. Returns `(argmax, max)`.
pub fn scan_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, samples: usize) -> (f64, f64) {
    let n = samples.max(3);
    let mut best_x = a;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=n {
        let x = a + (b - a) * i as f64 / n as f64;
        let v = f(x);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    // golden-section around the winning sample
    let h = (b - a) / n as f64;
    let (mut lo, mut hi) = ((best_x - h).max(a), (best_x + h).min(b));
    let phi = 0.5 * (3.0 - 5.0f64.sqrt());
    for _ in 0..80 {
        let x1 = lo + phi * (hi - lo);
        let x2 = hi - phi * (hi - lo);
        if f(x1) > f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let x = 0.5 * (lo + hi);
    let v = f(x);
    if v > best {
        (x, v)
    } else {
        (best_x, best)
    }
}
