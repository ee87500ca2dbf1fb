//! Adaptive Simpson quadrature for real and complex integrands.
//!
//! This is deliberately plain machinery: the oracles that rely on it
//! (Laplace-transform kernel check, cell-integral cross checks, the
//! convolution-decay integral) all integrate smooth functions on
//! explicit panels, so classic recursive Simpson with the Richardson
//! error estimate is enough.

use num_complex::Complex64;

const MAX_DEPTH: u32 = 40;

fn simpson_c(a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64) -> Complex64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adapt_c(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_c(a, m, fa, flm, fm);
    let right = simpson_c(m, b, fm, frm, fb);
    let err = left + right - whole;
    if depth >= MAX_DEPTH || err.norm() <= 15.0 * tol {
        return left + right + err / 15.0;
    }
    adapt_c(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
        + adapt_c(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
}

/// Integrate a complex-valued function over [a, b] to absolute tolerance `tol`.
pub fn adaptive_simpson_complex<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Complex64 {
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson_c(a, b, fa, fm, fb);
    adapt_c(&f, a, b, fa, fm, fb, whole, tol, 0)
}

/// Integrate a real-valued function over [a, b] to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    adaptive_simpson_complex(|t| Complex64::new(f(t), 0.0), a, b, tol).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive_simpson(|t| t * t * t - 2.0 * t, 0.0, 2.0, 1e-12);
        assert!((v - 0.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn oscillatory_complex() {
        // int_0^{2pi} e^{i t} dt = 0
        let v = adaptive_simpson_complex(
            |t| Complex64::new(0.0, t).exp(),
            0.0,
            2.0 * std::f64::consts::PI,
            1e-12,
        );
        assert!(v.norm() < 1e-10, "got {v}");
    }

    #[test]
    fn gaussian_tail() {
        let v = adaptive_simpson(|t| (-t * t).exp(), 0.0, 10.0, 1e-12);
        let exact = 0.5 * std::f64::consts::PI.sqrt();
        assert!((v - exact).abs() < 1e-11, "got {v}");
    }
}
