//! Integral kernels of the free resolvent of sqrt(-Laplacian) in 2D.
//!
//! Off the positive real axis the kernel is
//!
//!   g_z(x) = 1/(pi |x|) + z M_z(x),   M_z(x) = (1/2) { H0(-|x| z) - N0(-|x| z) },
//!
//! with H0 the Struve function and N0 the Neumann function on the principal
//! log branch.  On the positive axis the two boundary values are
//!
//!   g^+-_lambda(x) = 1/(pi |x|) + lambda m^+-_lambda(x),
//!   m^+-_lambda(x) = -(1/2) { H0(rho) + N0(rho) +- 2i J0(rho) },  rho = lambda |x|.
//!
//! Taking z = lambda + i mu down to the axis lands on the Minus boundary
//! kernel (the outgoing one): the argument -|x| z approaches the negative
//! real axis from below, where the principal log contributes -i pi, so
//! N0(-|x|(lambda + i mu)) -> N0(rho) - 2i J0(rho).  The mu-limit tests in
//! this module pin that pairing down; everything downstream (solver branch
//! pairing, far-field phases) is derived from it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::adaptive_simpson_complex;
use crate::specfun::{self, Regime};

/// Which boundary value of the resolvent kernel, g^+ or g^-.
///
/// Plus selects m^+ (the +2iJ0 combination).  In the Lippmann-Schwinger
/// equation the eigenfunction branch phi^+- pairs with the *opposite*
/// kernel sign; use [`kernel_sign_for_branch`] rather than negating by hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignChoice {
    Plus,
    Minus,
}

impl SignChoice {
    /// +1.0 for Plus, -1.0 for Minus.
    pub fn signum(self) -> f64 {
        match self {
            SignChoice::Plus => 1.0,
            SignChoice::Minus => -1.0,
        }
    }

    pub fn flip(self) -> SignChoice {
        match self {
            SignChoice::Plus => SignChoice::Minus,
            SignChoice::Minus => SignChoice::Plus,
        }
    }
}

/// The single place where the phi^+- <-> g^-+ convention lives.
pub fn kernel_sign_for_branch(branch: SignChoice) -> SignChoice {
    branch.flip()
}

/// A kernel value split into its singular and smooth contributions.
#[derive(Debug, Clone, Copy)]
pub struct KernelEvaluation {
    /// Full kernel value, singular_part + smooth_part.
    pub value: Complex64,
    /// The 1/(pi |x|) term.
    pub singular_part: f64,
    /// lambda * m^+-(x) or z * M_z(x).
    pub smooth_part: Complex64,
    /// Which evaluation regime the special functions used.
    pub regime: Regime,
}

/// m^+-_lambda at radius r: -(1/2){ H0(rho) + N0(rho) +- 2i J0(rho) }.
pub fn m_boundary(lambda: f64, r: f64, sign: SignChoice) -> Result<Complex64> {
    Ok(m_boundary_with_regime(lambda, r, sign)?.0)
}

fn m_boundary_with_regime(lambda: f64, r: f64, sign: SignChoice) -> Result<(Complex64, Regime)> {
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::DomainError(format!("m_boundary needs lambda > 0, got {lambda}")));
    }
    if r <= 0.0 || !r.is_finite() {
        return Err(Error::DomainError(format!("m_boundary needs r > 0, got {r}")));
    }
    let rho = lambda * r;
    let (h0, regime) = specfun::h0_real(rho)?;
    let (n0, _) = specfun::n0_real(rho)?;
    let (j0, _) = specfun::j0_real(rho)?;
    let m = Complex64::new(-0.5 * (h0 + n0), -sign.signum() * j0);
    Ok((m, regime))
}

/// Boundary kernel g^+-_lambda at a displacement x - y.
pub fn g_boundary(lambda: f64, displacement: [f64; 2], sign: SignChoice) -> Result<KernelEvaluation> {
    let r = (displacement[0] * displacement[0] + displacement[1] * displacement[1]).sqrt();
    g_radial(lambda, r, sign)
}

/// Radial form of [`g_boundary`]; the kernel depends on the displacement
/// only through its norm, and the solver's displacement table exploits that.
pub fn g_radial(lambda: f64, r: f64, sign: SignChoice) -> Result<KernelEvaluation> {
    if r == 0.0 {
        return Err(Error::SingularPoint("g evaluated at zero displacement".into()));
    }
    let (m, regime) = m_boundary_with_regime(lambda, r, sign)?;
    let singular = 1.0 / (std::f64::consts::PI * r);
    let smooth = lambda * m;
    Ok(KernelEvaluation {
        value: singular + smooth,
        singular_part: singular,
        smooth_part: smooth,
        regime,
    })
}

/// Resolvent kernel g_z at a displacement, for z off [0, infinity).
pub fn g_resolvent(z: Complex64, displacement: [f64; 2]) -> Result<KernelEvaluation> {
    if z.im == 0.0 && z.re >= 0.0 {
        return Err(Error::BranchCut(format!("g_resolvent needs z off [0, inf), got {z}")));
    }
    let r = (displacement[0] * displacement[0] + displacement[1] * displacement[1]).sqrt();
    if r == 0.0 {
        return Err(Error::SingularPoint("g_resolvent at zero displacement".into()));
    }
    let w = -r * z;
    let h0 = specfun::struve_h0(w)?;
    let n0 = specfun::neumann_n0(w)?;
    let m = 0.5 * (h0 - n0);
    let singular = 1.0 / (std::f64::consts::PI * r);
    let smooth = z * m;
    Ok(KernelEvaluation {
        value: singular + smooth,
        singular_part: singular,
        smooth_part: smooth,
        regime: Regime::Series,
    })
}

/// Independent check of g_z via the Poisson-kernel Laplace transform:
///
///   g_z(r) = int_0^inf e^{t z} t / (pi (t^2 + r^2)^{3/2}) dt,   Re z < 0.
///
/// Truncated where the exponential envelope drops below 1e-12 of the
/// prefactor scale; panels are capped at half an oscillation period when
/// Im z != 0 so the adaptive rule sees resolved integrands.
pub fn poisson_laplace_oracle(z: Complex64, r: f64) -> Result<Complex64> {
    if z.re >= 0.0 {
        return Err(Error::DomainError(format!("Laplace oracle needs Re z < 0, got {z}")));
    }
    if r <= 0.0 {
        return Err(Error::DomainError(format!("Laplace oracle needs r > 0, got {r}")));
    }
    let t_max = (1e-12 * std::f64::consts::PI * r).ln() / z.re;
    let panel = if z.im != 0.0 {
        (std::f64::consts::PI / z.im.abs()).min(t_max / 8.0)
    } else {
        t_max / 8.0
    };
    let n_panels = (t_max / panel).ceil() as usize;
    let width = t_max / n_panels as f64;
    let integrand = |t: f64| {
        (t * z).exp() * t / (std::f64::consts::PI * (t * t + r * r).powf(1.5))
    };
    let tol = 1e-11 / n_panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..n_panels {
        let a = p as f64 * width;
        total += adaptive_simpson_complex(integrand, a, a + width, tol);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn near(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    proptest! {
        // the two limiting kernels differ only in the sign of the iJ0 term,
        // so they must be complex conjugates at every real argument
        #[test]
        fn boundary_kernels_are_conjugate(lambda in 0.1f64..5.0, r in 0.05f64..50.0) {
            let gp = g_radial(lambda, r, SignChoice::Plus).unwrap().value;
            let gm = g_radial(lambda, r, SignChoice::Minus).unwrap().value;
            prop_assert!((gp - gm.conj()).norm() <= 1e-12 * gp.norm().max(1.0));
        }

        // the free resolvent kernel is real for z on the negative real axis
        #[test]
        fn resolvent_real_on_negative_axis(zr in -5.0f64..-0.1, r in 0.05f64..20.0) {
            let g = g_resolvent(Complex64::new(zr, 0.0), [r, 0.0]).unwrap().value;
            prop_assert!(g.im.abs() <= 1e-12 * g.re.abs().max(1.0));
        }
    }

    #[test]
    fn m_matches_specfun_composition() {
        // -(1/2)(H0(1) + N0(1)) - i J0(1), from the frozen oracle values
        let m = m_boundary(1.0, 1.0, SignChoice::Plus).unwrap();
        assert!(near(m, Complex64::new(-0.3284567956319825, -0.7651976865579666), 1e-12), "{m}");
    }

    #[test]
    fn m_conjugate_symmetry() {
        for &(lambda, r) in &[(0.5, 0.3), (1.0, 1.0), (2.0, 7.5), (1.3, 40.0)] {
            let p = m_boundary(lambda, r, SignChoice::Plus).unwrap();
            let m = m_boundary(lambda, r, SignChoice::Minus).unwrap();
            assert!(near(p, m.conj(), 1e-14), "lambda={lambda} r={r}");
        }
    }

    #[test]
    fn m_envelope_inverse_sqrt() {
        // |m| * sqrt(rho) stays bounded on [1, 1e4] and peaks at the small end
        let mut sup: f64 = 0.0;
        let mut argmax = 0.0;
        for i in 0..400 {
            let r = 1.0 * (1e4f64 / 1.0).powf(i as f64 / 399.0);
            let v = m_boundary(1.0, r, SignChoice::Plus).unwrap().norm() * r.sqrt();
            if v > sup {
                sup = v;
                argmax = r;
            }
        }
        assert!(sup.is_finite() && sup < 10.0, "sup = {sup}");
        assert!(argmax < 5.0, "envelope peak at r = {argmax}");
    }

    #[test]
    fn g_is_radial() {
        let a = g_boundary(1.7, [3.0, 4.0], SignChoice::Minus).unwrap().value;
        let b = g_boundary(1.7, [5.0, 0.0], SignChoice::Minus).unwrap().value;
        let c = g_boundary(1.7, [-4.0, 3.0], SignChoice::Minus).unwrap().value;
        assert!(near(a, b, 1e-15) && near(a, c, 1e-15));
    }

    #[test]
    fn g_split_is_consistent() {
        let ev = g_boundary(1.0, [1.0, 0.0], SignChoice::Plus).unwrap();
        assert!(near(ev.value, Complex64::new(ev.singular_part, 0.0) + ev.smooth_part, 1e-15));
        let m = m_boundary(1.0, 1.0, SignChoice::Plus).unwrap();
        assert!(near(ev.value, Complex64::new(1.0 / std::f64::consts::PI, 0.0) + m, 1e-14));
    }

    #[test]
    fn singular_part_dominates_near_zero() {
        // pi r g - 1 should reduce to the integrable log term of lambda m
        let r = 1e-6;
        let ev = g_boundary(1.0, [r, 0.0], SignChoice::Plus).unwrap();
        let scaled = std::f64::consts::PI * r * ev.value;
        assert!((scaled - Complex64::new(1.0, 0.0)).norm() < 1e-4, "{scaled}");
    }

    #[test]
    fn zero_displacement_rejected() {
        assert!(matches!(
            g_boundary(1.0, [0.0, 0.0], SignChoice::Plus),
            Err(Error::SingularPoint(_))
        ));
    }

    #[test]
    fn conjugate_symmetry_of_g() {
        let p = g_boundary(0.8, [2.0, -1.0], SignChoice::Plus).unwrap().value;
        let m = g_boundary(0.8, [2.0, -1.0], SignChoice::Minus).unwrap().value;
        assert!(near(p, m.conj(), 1e-15));
    }

    #[test]
    fn outgoing_leading_term_decay() {
        // |g^- - (lambda/pi)^{1/2}(1+i) e^{i lambda r}/sqrt(r)| decays at
        // least like 1/r on [10, 500] (it is in fact r^{-3/2})
        let lambda = 1.0;
        let mut pts = Vec::new();
        for i in 0..24 {
            let r = 10.0 * (500.0f64 / 10.0).powf(i as f64 / 23.0);
            let g = g_radial(lambda, r, SignChoice::Minus).unwrap().value;
            let lead = (lambda / std::f64::consts::PI).sqrt() * Complex64::new(1.0, 1.0)
                * Complex64::new(0.0, lambda * r).exp()
                / r.sqrt();
            pts.push((r.ln(), (g - lead).norm().ln()));
        }
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!(slope <= -0.85, "slope = {slope}");
    }

    #[test]
    fn resolvent_on_negative_axis_is_positive() {
        let g = g_resolvent(Complex64::new(-1.0, 0.0), [1.0, 0.0]).unwrap().value;
        assert!(g.im.abs() < 1e-14 && g.re > 0.0, "{g}");
        // frozen Laplace-transform value
        assert!((g.re - 0.07811005476748518).abs() < 1e-10, "{g}");
    }

    #[test]
    fn resolvent_branch_cut_rejected() {
        assert!(matches!(
            g_resolvent(Complex64::new(1.0, 0.0), [1.0, 0.0]),
            Err(Error::BranchCut(_))
        ));
    }

    #[test]
    fn laplace_oracle_small_z_limit() {
        // -> 1/(pi r) as z -> 0- by dominated convergence
        let v = poisson_laplace_oracle(Complex64::new(-1e-6, 0.0), 1.0).unwrap();
        assert!((v.re - 1.0 / std::f64::consts::PI).abs() < 1e-4, "{v}");
    }

    #[test]
    fn laplace_oracle_agrees_with_resolvent() {
        for &z in &[
            Complex64::new(-0.5, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(-2.0, 1.0),
            Complex64::new(-2.0, -1.0),
        ] {
            for &r in &[0.5, 1.0, 2.0] {
                let a = g_resolvent(z, [r, 0.0]).unwrap().value;
                let b = poisson_laplace_oracle(z, r).unwrap();
                assert!(near(a, b, 1e-8), "z={z} r={r}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn boundary_value_limit_pairing() {
        // g_{lambda + i mu} -> g^-_lambda and g_{lambda - i mu} -> g^+_lambda,
        // monotonically in mu
        let x = [1.0, 0.0];
        let gm = g_boundary(1.0, x, SignChoice::Minus).unwrap().value;
        let gp = g_boundary(1.0, x, SignChoice::Plus).unwrap().value;
        let mut prev_up = f64::INFINITY;
        let mut prev_dn = f64::INFINITY;
        for &mu in &[1e-2, 1e-3, 1e-4] {
            let up = (g_resolvent(Complex64::new(1.0, mu), x).unwrap().value - gm).norm();
            let dn = (g_resolvent(Complex64::new(1.0, -mu), x).unwrap().value - gp).norm();
            assert!(up < prev_up && dn < prev_dn, "mu={mu}: {up} {dn}");
            prev_up = up;
            prev_dn = dn;
        }
        assert!(prev_up <= 1e-3 && prev_dn <= 1e-3, "{prev_up} {prev_dn}");
    }
}
