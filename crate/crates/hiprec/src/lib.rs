//! Brute-force extended-precision power series for J0, N0 and Struve H0.
//!
//! This crate is a test oracle: it evaluates the defining series in MPFR
//! floats with enough guard digits to absorb the e^rho growth of the
//! alternating terms, and stays deliberately independent of the production
//! evaluation paths (no asymptotic expansions, no regime switching).

use rug::float::Constant;
use rug::Float;

/// Working precision in bits.  360 decimal digits comfortably covers the
/// ~44 digits of cancellation at rho = 100 plus a 50-digit target.
pub const PREC: u32 = 1200;

fn f(x: f64) -> Float {
    Float::with_val(PREC, x)
}

/// J0(rho) = sum_n (-1)^n (rho/2)^{2n} / (n!)^2.
pub fn j0(rho: f64) -> Float {
    let q2 = f(rho / 2.0).square();
    let mut term = f(1.0);
    let mut sum = f(1.0);
    for n in 1..100_000u64 {
        term = term * &q2 / (n * n);
        term = -term;
        sum += &term;
        if term.clone().abs() < Float::with_val(PREC, Float::u_exp(1, -(PREC as i32) - 60)) {
            break;
        }
    }
    sum
}

/// N0(rho) = (2/pi) J0(rho)(gamma + log(rho/2)) - (2/pi) sum_k (-1)^k (rho/2)^{2k} H_k/(k!)^2.
pub fn n0(rho: f64) -> Float {
    assert!(rho > 0.0, "N0 oracle needs rho > 0");
    let gamma = Float::with_val(PREC, Constant::Euler);
    let pi = Float::with_val(PREC, Constant::Pi);
    let log_half = f(rho / 2.0).ln();
    let q2 = f(rho / 2.0).square();

    let mut t = f(1.0);
    let mut h = f(0.0);
    let mut s = f(0.0);
    for k in 1..100_000u64 {
        t = t * &q2 / (k * k);
        t = -t;
        h += Float::with_val(PREC, 1.0) / k;
        let term = t.clone() * &h;
        s += &term;
        if term.abs() < Float::with_val(PREC, Float::u_exp(1, -(PREC as i32) - 60)) {
            break;
        }
    }
    let two_over_pi = Float::with_val(PREC, 2.0) / pi;
    two_over_pi * (j0(rho) * (gamma + log_half) - s)
}

/// H0(rho) = (2/pi) sum_k (-1)^k rho^{2k+1} / {(2k+1)!!}^2, using
/// Gamma(k+3/2) = sqrt(pi)(2k+1)!!/2^{k+1}.
pub fn h0(rho: f64) -> Float {
    let pi = Float::with_val(PREC, Constant::Pi);
    let rho2 = f(rho).square();
    let mut t = f(rho);
    let mut sum = t.clone();
    for k in 1..100_000u64 {
        let odd = (2 * k + 1) * (2 * k + 1);
        t = t * &rho2 / odd;
        t = -t;
        sum += &t;
        if t.clone().abs() < Float::with_val(PREC, Float::u_exp(1, -(PREC as i32) - 60)) {
            break;
        }
    }
    sum * 2 / pi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        // cross-checked against published tables
        assert!((j0(1.0).to_f64() - 0.7651976865579666).abs() < 1e-15);
        assert!((n0(1.0).to_f64() - 0.08825696421567696).abs() < 1e-15);
        assert!((h0(1.0).to_f64() - 0.5686566270482880).abs() < 1e-15);
    }

    #[test]
    fn large_argument_still_converges() {
        let v = j0(100.0).to_f64();
        assert!(v.abs() < 0.1, "J0(100) = {v}");
    }
}
