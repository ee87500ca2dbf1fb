//! Riesz-potential operators, the convolution-decay integral, the pointwise
//! resolvent domination check, and the power-law fitting machinery shared by
//! the acceptance tests.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrate::adaptive_simpson;
use crate::quadrature::{inv_sqrt_cell_integral, QuadratureGrid};
use crate::solver::{apply_kernel_to_psi, ScatteringField};

/// Least-squares fit of log(value) against log(r).
#[derive(Debug, Clone, Copy)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    /// Set when the data spans less than a decade or fits poorly
    /// (r^2 < 0.5); the fit is still reported.
    pub degenerate: bool,
}

pub fn fit_power_law(points: &[(f64, f64)], window: (f64, f64)) -> Result<PowerLawFit> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(r, _)| *r >= window.0 && *r <= window.1)
        .map(|&(r, v)| {
            if v <= 0.0 {
                Err(Error::DegenerateFit(format!("nonpositive value {v} at r = {r}")))
            } else {
                Ok((r.ln(), v.ln()))
            }
        })
        .collect::<Result<_>>()?;
    if logs.len() < 6 {
        return Err(Error::DegenerateFit(format!(
            "need at least 6 points in the window, got {}",
            logs.len()
        )));
    }
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let mx = sx / n;
    let my = sy / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    let vmin = points.iter().filter(|(r, _)| *r >= window.0 && *r <= window.1).map(|p| p.1).fold(f64::INFINITY, f64::min);
    let vmax = points.iter().filter(|(r, _)| *r >= window.0 && *r <= window.1).map(|p| p.1).fold(0.0f64, f64::max);
    let degenerate = vmax / vmin < 10.0 || r_squared < 0.5;
    Ok(PowerLawFit {
        exponent,
        intercept,
        r_squared,
        window,
        degenerate,
    })
}

fn singular_cell_factor(j: f64, h: f64) -> f64 {
    // exact cell integral of |y|^{-j} over the self cell
    if j == 1.0 {
        4.0 * h * crate::quadrature::LN_1P_SQRT2
    } else if j == 0.5 {
        inv_sqrt_cell_integral(h)
    } else {
        panic!("riesz order must be 1 or 1/2, got {j}")
    }
}

/// T_j u(x) = sum_i |x - x_i|^{-j} u(x_i) w_i with the corrected self cell.
pub fn riesz_apply(j: f64, grid: &QuadratureGrid, u: &[f64], x: [f64; 2]) -> f64 {
    let h = grid.h();
    let h2 = h * h;
    let near = 0.1 * h;
    let diag = singular_cell_factor(j, h);
    let mut acc = 0.0;
    for (node, &ui) in grid.nodes.iter().zip(u) {
        let dx = x[0] - node[0];
        let dy = x[1] - node[1];
        let r = (dx * dx + dy * dy).sqrt();
        if r < near {
            acc += diag * ui;
        } else {
            acc += r.powf(-j) * ui * h2;
        }
    }
    acc
}

/// Complex-density version used by the resolvent domination check.
pub fn riesz_apply_complex(j: f64, grid: &QuadratureGrid, u: &[Complex64], x: [f64; 2]) -> Complex64 {
    let h = grid.h();
    let h2 = h * h;
    let near = 0.1 * h;
    let diag = singular_cell_factor(j, h);
    let mut acc = Complex64::new(0.0, 0.0);
    for (node, &ui) in grid.nodes.iter().zip(u) {
        let dx = x[0] - node[0];
        let dy = x[1] - node[1];
        let r = (dx * dx + dy * dy).sqrt();
        if r < near {
            acc += diag * ui;
        } else {
            acc += r.powf(-j) * ui * h2;
        }
    }
    acc
}

/// Split T_1 u(x) into the parts with |x - x_i| <= 1 and |x - x_i| > 1.
pub fn riesz_split(grid: &QuadratureGrid, u: &[f64], x: [f64; 2]) -> (f64, f64) {
    let h = grid.h();
    let h2 = h * h;
    let near_cell = 0.1 * h;
    let diag = singular_cell_factor(1.0, h);
    let mut near = 0.0;
    let mut far = 0.0;
    for (node, &ui) in grid.nodes.iter().zip(u) {
        let dx = x[0] - node[0];
        let dy = x[1] - node[1];
        let r = (dx * dx + dy * dy).sqrt();
        let term = if r < near_cell { diag * ui } else { ui * h2 / r };
        if r <= 1.0 {
            near += term;
        } else {
            far += term;
        }
    }
    (near, far)
}

/// Phi(x) = int |x - y|^{-beta} <y>^{-gamma} dy over the plane,
/// for 0 < beta < 2 (here beta in {1, 1/2}) and beta + gamma > 2.
///
/// Strategy: in polar coordinates around the origin the isotropic part
/// 2 pi int rho^{1-beta} <rho>^{-gamma} d rho is computed once to high
/// accuracy with an analytic two-term tail; the anisotropy
/// rho^{1-beta} [ avg_theta <x + rho omega>^{-gamma} - 2 pi <rho>^{-gamma} ]
/// decays two powers faster, so its radial truncation at 20 |x| sits well
/// below 1e-4 of the running value.
pub fn lemma_a1_phi(beta: f64, gamma: f64, x: [f64; 2]) -> Result<f64> {
    if !(beta > 0.0 && beta < 2.0) {
        return Err(Error::DomainError(format!("need 0 < beta < 2, got {beta}")));
    }
    if !(beta + gamma > 2.0) {
        return Err(Error::DomainError(format!(
            "need beta + gamma > 2 for convergence, got {} ",
            beta + gamma
        )));
    }
    let xn = (x[0] * x[0] + x[1] * x[1]).sqrt();

    // isotropic radial integral with analytic tail
    let iso_radial = |rho: f64| rho.powf(1.0 - beta) * (1.0 + rho * rho).powf(-0.5 * gamma);
    let r_iso = 1e4f64;
    let mut iso = 0.0;
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while lo < r_iso {
        iso += adaptive_simpson(iso_radial, lo, hi.min(r_iso), 1e-11);
        lo = hi;
        hi *= 4.0;
    }
    let p = beta + gamma - 2.0;
    iso += r_iso.powf(-p) / p - 0.5 * gamma * r_iso.powf(-p - 2.0) / (p + 2.0);
    let iso_total = 2.0 * std::f64::consts::PI * iso;

    // anisotropic correction
    let weight = |y2: f64| (1.0 + y2).powf(-0.5 * gamma);
    let aniso_integrand = |rho: f64| {
        if rho == 0.0 {
            return 0.0;
        }
        let n_theta = ((16.0 * rho.min(xn)) as usize).max(128);
        let dtheta = 2.0 * std::f64::consts::PI / n_theta as f64;
        let mut avg = 0.0;
        for j in 0..n_theta {
            let t = (j as f64 + 0.5) * dtheta;
            let yx = x[0] + rho * t.cos();
            let yy = x[1] + rho * t.sin();
            avg += weight(yx * yx + yy * yy);
        }
        avg *= dtheta;
        rho.powf(1.0 - beta) * (avg - 2.0 * std::f64::consts::PI * weight(rho * rho))
    };
    let r_aniso = (20.0 * xn).max(100.0);
    let tol = 1e-6 * iso_total.max(1e-6);
    let mut aniso = 0.0;
    let mut lo = 0.0;
    let mut hi = r_aniso.min(1.0);
    loop {
        aniso += adaptive_simpson(aniso_integrand, lo, hi, tol);
        if hi >= r_aniso {
            break;
        }
        lo = hi;
        hi = (hi * 2.0).min(r_aniso);
    }

    Ok(iso_total + aniso)
}

/// Pointwise domination of the resolvent by Riesz potentials:
/// |G psi(x)| <= (1/pi) |T_1 psi(x)| + C T_{1/2} |psi|(x) for some C.
///
/// Returns the violation measure at the top of the trial sweep C in [0, 100]
/// (the measure is nonincreasing in C, so this is its minimum) together with
/// the smallest C in the sweep that already drives it to zero, if any.
pub fn resolvent_bound_check(field: &ScatteringField) -> Result<(f64, Option<f64>)> {
    let grid = &field.grid;
    let gpsi = apply_kernel_to_psi(grid, field.k.lambda, field.kernel_sign(), &field.psi)?;
    let abs_psi: Vec<f64> = field.psi.iter().map(|z| z.norm()).collect();
    // excess_i = |G psi|_i - (1/pi) |T_1 psi|_i, to be covered by C T_{1/2}|psi|_i
    let mut needed_c: f64 = 0.0;
    let mut worst_excess: f64 = 0.0;
    let mut excesses = Vec::with_capacity(grid.nodes.len());
    for (idx, &x) in grid.nodes.iter().enumerate() {
        let t1 = riesz_apply_complex(1.0, grid, &field.psi, x).norm();
        let t12 = riesz_apply(0.5, grid, &abs_psi, x);
        let excess = gpsi[idx].norm() - t1 / std::f64::consts::PI;
        excesses.push((excess, t12));
        if excess > 0.0 {
            worst_excess = worst_excess.max(excess);
            if t12 > 0.0 {
                needed_c = needed_c.max(excess / t12);
            } else if excess > 1e-14 {
                needed_c = f64::INFINITY;
            }
        }
    }
    let violation_at = |c: f64| -> f64 {
        excesses
            .iter()
            .map(|&(e, t)| (e - c * t).max(0.0))
            .fold(0.0f64, f64::max)
    };
    let min_violation = violation_at(100.0);
    let passing_c = if needed_c <= 100.0 { Some(needed_c) } else { None };
    Ok((min_violation, passing_c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::build_grid;

    #[test]
    fn fit_recovers_exact_power() {
        let pts: Vec<(f64, f64)> = (0..12)
            .map(|i| {
                let r = 10.0 * (200.0f64 / 10.0).powf(i as f64 / 11.0);
                (r, r.powf(-0.75))
            })
            .collect();
        let f = fit_power_law(&pts, (10.0, 200.0)).unwrap();
        assert!((f.exponent + 0.75).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        // r^{-0.75} over a 20x window spans just under one decade of values,
        // so the span rule flags it even though the fit is exact
        assert!(f.degenerate);

        let pts: Vec<(f64, f64)> = (0..12)
            .map(|i| {
                let r = 10.0 * (200.0f64 / 10.0).powf(i as f64 / 11.0);
                (r, r.powf(-1.5))
            })
            .collect();
        let f = fit_power_law(&pts, (10.0, 200.0)).unwrap();
        assert!((f.exponent + 1.5).abs() < 1e-12);
        assert!(!f.degenerate);
    }

    #[test]
    fn fit_recovers_intercept() {
        let pts: Vec<(f64, f64)> = (0..10)
            .map(|i| {
                let r = 5.0 + 20.0 * i as f64;
                (r, 3.0 / r)
            })
            .collect();
        let f = fit_power_law(&pts, (1.0, 1e3)).unwrap();
        assert!((f.exponent + 1.0).abs() < 1e-12);
        assert!((f.intercept - 3.0f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn log_factor_biases_the_slope_upward() {
        // r^{-1} log(1+r) decays more slowly than r^{-1}; the fitted slope
        // documents the smear the log-case tolerances account for
        let pts: Vec<(f64, f64)> = (0..16)
            .map(|i| {
                let r = 10.0 * (200.0f64 / 10.0).powf(i as f64 / 15.0);
                (r, r.powf(-1.0) * (1.0 + r).ln())
            })
            .collect();
        let f = fit_power_law(&pts, (10.0, 200.0)).unwrap();
        assert!(f.exponent > -0.85 && f.exponent < -0.6, "slope {}", f.exponent);
    }

    #[test]
    fn short_data_is_rejected_and_flat_data_flagged() {
        let short = vec![(1.0, 1.0); 4];
        assert!(matches!(fit_power_law(&short, (0.5, 2.0)), Err(Error::DegenerateFit(_))));
        let flat: Vec<(f64, f64)> = (0..8).map(|i| (10.0 + i as f64, 2.0)).collect();
        let f = fit_power_law(&flat, (5.0, 50.0)).unwrap();
        assert!(f.degenerate);
    }

    #[test]
    fn riesz_disk_closed_forms() {
        // indicator of the unit disk: T_1 at 0 is 2 pi, T_{1/2} is 4 pi / 3
        let grid = build_grid(2.0, 128).unwrap();
        let u: Vec<f64> = grid
            .nodes
            .iter()
            .map(|&x| if x[0] * x[0] + x[1] * x[1] <= 1.0 { 1.0 } else { 0.0 })
            .collect();
        let t1 = riesz_apply(1.0, &grid, &u, [0.0, 0.0]);
        let t12 = riesz_apply(0.5, &grid, &u, [0.0, 0.0]);
        let pi = std::f64::consts::PI;
        assert!((t1 - 2.0 * pi).abs() / (2.0 * pi) < 0.01, "{t1}");
        assert!((t12 - 4.0 * pi / 3.0).abs() / (4.0 * pi / 3.0) < 0.01, "{t12}");
    }

    #[test]
    fn riesz_positivity_and_monotonicity() {
        let grid = build_grid(2.0, 16).unwrap();
        let u: Vec<f64> = grid.nodes.iter().map(|&x| (x[0] + 3.0).abs()).collect();
        let v: Vec<f64> = u.iter().map(|&x| x + 0.5).collect();
        for &x in &[[0.0, 0.0], [1.3, -0.4], [5.0, 5.0]] {
            let tu = riesz_apply(1.0, &grid, &u, x);
            let tv = riesz_apply(1.0, &grid, &v, x);
            assert!(tu >= 0.0 && tv >= tu);
        }
    }

    #[test]
    fn split_identity_and_support() {
        let grid = build_grid(2.0, 16).unwrap();
        // supported in |y| <= 0.5: far part from x = 0 vanishes
        let u: Vec<f64> = grid
            .nodes
            .iter()
            .map(|&x| if x[0] * x[0] + x[1] * x[1] <= 0.25 { 1.0 } else { 0.0 })
            .collect();
        let (_, far) = riesz_split(&grid, &u, [0.0, 0.0]);
        assert_eq!(far, 0.0);
        // near + far = T_1 exactly for generic data
        let w: Vec<f64> = grid.nodes.iter().map(|&x| (x[0] * 1.3).sin() + 2.0).collect();
        for &x in &[[0.3, 0.3], [-1.0, 1.5]] {
            let (n, f) = riesz_split(&grid, &w, x);
            let t = riesz_apply(1.0, &grid, &w, x);
            assert!((n + f - t).abs() < 1e-12 * t.abs());
        }
    }

    #[test]
    fn far_part_is_uniformly_bounded_for_integrable_tails() {
        // u = <y>^{-3} has integrable far field; far(x) stays bounded
        let grid = build_grid(12.0, 48).unwrap();
        let u: Vec<f64> = grid
            .nodes
            .iter()
            .map(|&x| (1.0 + x[0] * x[0] + x[1] * x[1]).powf(-1.5))
            .collect();
        let mut sup: f64 = 0.0;
        for i in 0..11 {
            let x = [10.0 * i as f64, 0.0];
            let (_, far) = riesz_split(&grid, &u, x);
            sup = sup.max(far.abs());
        }
        assert!(sup.is_finite() && sup < 10.0, "{sup}");
    }

    #[test]
    fn phi_preconditions() {
        assert!(lemma_a1_phi(2.5, 3.0, [1.0, 0.0]).is_err());
        assert!(lemma_a1_phi(1.0, 0.5, [1.0, 0.0]).is_err());
    }

    #[test]
    fn phi_is_radially_symmetric() {
        let a = lemma_a1_phi(1.0, 3.0, [5.0, 0.0]).unwrap();
        let b = lemma_a1_phi(1.0, 3.0, [3.0, 4.0]).unwrap();
        let c = lemma_a1_phi(1.0, 3.0, [0.0, -5.0]).unwrap();
        assert!((a - b).abs() < 1e-6 * a && (a - c).abs() < 1e-6 * a, "{a} {b} {c}");
    }

    #[test]
    fn phi_decay_cases() {
        // gamma > 2: slope -beta; gamma < 2: slope -(beta + gamma - 2)
        let xs: Vec<f64> = (0..10).map(|i| 10.0 * 20.0f64.powf(i as f64 / 9.0)).collect();
        let slope_for = |beta: f64, gamma: f64| -> f64 {
            let pts: Vec<(f64, f64)> = xs
                .iter()
                .map(|&r| (r, lemma_a1_phi(beta, gamma, [r, 0.0]).unwrap()))
                .collect();
            fit_power_law(&pts, (5.0, 250.0)).unwrap().exponent
        };
        let s = slope_for(1.0, 3.0);
        assert!((s + 1.0).abs() <= 0.1, "gamma > 2 slope {s}");
        let s = slope_for(1.0, 1.75);
        assert!((s + 0.75).abs() <= 0.1, "gamma < 2 slope {s}");
    }

    #[test]
    fn phi_log_case_ratio_bounded() {
        let mut ratios = Vec::new();
        for i in 0..8 {
            let r = 10.0 * 20.0f64.powf(i as f64 / 7.0);
            let phi = lemma_a1_phi(1.0, 2.0, [r, 0.0]).unwrap();
            let xw = (1.0 + r * r).sqrt();
            ratios.push(phi * xw / (1.0 + xw).ln());
        }
        let max = ratios.iter().fold(0.0f64, |a, &b| a.max(b));
        let min = ratios.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        assert!(max / min <= 3.0, "ratio {}", max / min);
    }

    #[test]
    fn resolvent_domination_trivial_and_generic() {
        use crate::kernel::SignChoice;
        use crate::potential::PotentialModel;
        use crate::solver::{solve_ls, WaveVector};
        let grid = build_grid(6.0, 12).unwrap();
        let k = WaveVector::new([1.0, 0.0]).unwrap();
        let free = solve_ls(&grid, &PotentialModel::zero(), &k, SignChoice::Plus).unwrap();
        let (v, c) = resolvent_bound_check(&free).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(c, Some(0.0));

        let model = PotentialModel::power(2.5, 0.3).unwrap();
        let f = solve_ls(&grid, &model, &k, SignChoice::Plus).unwrap();
        let (v, c) = resolvent_bound_check(&f).unwrap();
        assert_eq!(v, 0.0, "violation {v}");
        let c = c.unwrap();
        assert!(c <= 10.0, "needed C = {c}");
    }
}
