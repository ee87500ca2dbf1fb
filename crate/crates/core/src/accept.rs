//! Acceptance suite: one runner per criterion, shared by the `verify-all`
//! subcommand and the integration test.
//!
//! Every runner is self-contained and reports a single pass/fail with the
//! measured quantities in its detail string.  The reference configuration is
//! the PowerDecay sigma = 2.5, coupling 0.3 potential on L = 12, N = 96 at
//! k = (1, 0), solved on both branches.  Expensive sub-studies (k-annulus
//! sweep, rate scans, projector banks) use smaller grids chosen so the whole
//! suite fits the runtime envelope; the envelope itself is checked by the
//! last criterion with the stated 8-core budget scaled to the cores present.

use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{FitWindowConfig, GridConfig, RunConfig};
use crate::error::Result;
use crate::farfield::{
    build_field_bank, far_field_samples, log_spaced_radii, planewave_diff_scan, projector_check,
    remainder_scan,
};
use crate::kernel::{g_boundary, g_radial, g_resolvent, poisson_laplace_oracle, SignChoice};
use crate::potential::{eval_potential, PotentialModel};
use crate::quadrature::build_grid;
use crate::solver::{
    apply_kernel_to_psi, evaluate_offgrid, plane_wave, solve_ls, ScatteringField, TailParams,
    WaveVector,
};
use crate::specfun::{h0_real, j0_real, n0_real};
use crate::verify::{fit_power_law, lemma_a1_phi, resolvent_bound_check};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    /// Soft criteria are reported but do not gate the suite.
    pub soft: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AcceptanceReport {
    pub provenance: crate::config::Provenance,
    pub criteria: Vec<CriterionReport>,
}

impl AcceptanceReport {
    /// All hard criteria passed.
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed || c.soft)
    }
}

pub fn reference_config() -> RunConfig {
    RunConfig {
        grid: GridConfig { l: 12.0, n: 96 },
        potential: PotentialModel::power(2.5, 0.3).expect("reference potential is valid"),
        k: [1.0, 0.0],
        branch: SignChoice::Plus,
        fit_window: FitWindowConfig::default(),
        born_tail: false,
    }
}

struct Context {
    config: RunConfig,
    ref_plus: ScatteringField,
    ref_minus: ScatteringField,
    /// Wall seconds of the single reference (branch Plus) solve.
    ref_solve_secs: f64,
}

fn simple_slope(points: &[(f64, f64)], window: (f64, f64)) -> Result<f64> {
    Ok(fit_power_law(points, window)?.exponent)
}

/// Log-log least-squares slope for studies with fewer samples than the
/// fitter's minimum (phase-extremum sampling, coupling sweeps).
fn lsq_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(r, v) in points {
        let (x, y) = (r.ln(), v.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn golden_directions(n: usize) -> Vec<[f64; 2]> {
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * ((i as f64 * golden) % 1.0);
            [t.cos(), t.sin()]
        })
        .collect()
}

fn run_criterion(
    id: u32,
    name: &str,
    soft: bool,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> CriterionReport {
    let (passed, detail) = match body() {
        Ok(pair) => pair,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionReport {
        id,
        name: name.to_string(),
        passed,
        soft,
        detail,
    }
}

/// Run the full suite, invoking `progress` after each criterion.
pub fn run_all(config: &RunConfig, mut progress: impl FnMut(&CriterionReport)) -> Result<AcceptanceReport> {
    let started = Instant::now();
    config.validate()?;

    let grid = config.build_grid()?;
    let k = config.wave_vector()?;
    let t0 = Instant::now();
    let ref_plus = solve_ls(&grid, &config.potential, &k, SignChoice::Plus)?;
    let ref_solve_secs = t0.elapsed().as_secs_f64();
    let ref_minus = solve_ls(&grid, &config.potential, &k, SignChoice::Minus)?;
    let ctx = Context {
        config: config.clone(),
        ref_plus,
        ref_minus,
        ref_solve_secs,
    };

    let mut criteria = Vec::new();
    let mut push = |r: CriterionReport, criteria: &mut Vec<CriterionReport>| {
        progress(&r);
        criteria.push(r);
    };

    push(run_criterion(1, "special-function oracle accuracy", false, c1_specfun_oracle), &mut criteria);
    push(run_criterion(2, "leading-term asymptotic rates", false, c2_asymptotic_rates), &mut criteria);
    push(run_criterion(3, "kernel boundary-value limit", false, c3_boundary_limit), &mut criteria);
    push(run_criterion(4, "Laplace-transform kernel oracle", false, c4_laplace_oracle), &mut criteria);
    push(run_criterion(5, "kernel spherical-term decay", false, c5_kernel_decay), &mut criteria);
    push(run_criterion(6, "free-field exactness", false, || c6_free_field(&ctx)), &mut criteria);
    push(run_criterion(7, "Born coupling scaling", false, c7_born_scaling), &mut criteria);
    push(run_criterion(8, "discrete residual and grid convergence", false, || c8_residual_convergence(&ctx)), &mut criteria);
    push(run_criterion(9, "rotational symmetry", false, c9_rotation), &mut criteria);
    push(run_criterion(10, "boundedness over the k-annulus", false, c10_boundedness), &mut criteria);
    push(run_criterion(11, "plane-wave difference rates", false, c11_diff_rates), &mut criteria);
    push(run_criterion(12, "far-field remainder rates", false, || c12_remainder_rates(&ctx)), &mut criteria);
    push(run_criterion(13, "convolution-decay integral cases", false, c13_convolution_decay), &mut criteria);
    push(run_criterion(14, "Riesz domination of the resolvent", false, || c14_riesz_domination(&ctx)), &mut criteria);
    push(run_criterion(15, "projector idempotence (soft)", true, c15_projector), &mut criteria);
    let elapsed = started.elapsed().as_secs_f64();
    push(
        run_criterion(16, "runtime envelope", false, || c16_runtime(&ctx, elapsed)),
        &mut criteria,
    );

    Ok(AcceptanceReport {
        provenance: config.provenance(),
        criteria,
    })
}

fn c1_specfun_oracle() -> Result<(bool, String)> {
    let n_pts = 1000;
    let rhos: Vec<f64> = (0..n_pts)
        .map(|i| 1e-6 * (100.0f64 / 1e-6).powf(i as f64 / (n_pts - 1) as f64))
        .collect();

    // production timing, separate from the oracle
    let t0 = Instant::now();
    let mut produced = Vec::with_capacity(n_pts);
    for &rho in &rhos {
        produced.push((j0_real(rho)?.0, n0_real(rho)?.0, h0_real(rho)?.0));
    }
    let prod_secs = t0.elapsed().as_secs_f64();

    let mut worst_rel: f64 = 0.0;
    let mut failures = 0usize;
    for (&rho, &(j, n, h)) in rhos.iter().zip(&produced) {
        for (got, exact) in [
            (j, hiprec::j0(rho).to_f64()),
            (n, hiprec::n0(rho).to_f64()),
            (h, hiprec::h0(rho).to_f64()),
        ] {
            let abs = (got - exact).abs();
            let rel = abs / exact.abs().max(f64::MIN_POSITIVE);
            if rel > 1e-10 && abs > 1e-12 {
                failures += 1;
            }
            if abs > 1e-12 {
                worst_rel = worst_rel.max(rel);
            }
        }
    }
    let passed = failures == 0 && prod_secs <= 1.0;
    Ok((
        passed,
        format!("{failures} point failures of 3000, worst relative error {worst_rel:.2e}, production time {prod_secs:.3} s"),
    ))
}

fn c2_asymptotic_rates() -> Result<(bool, String)> {
    // sample at phase extrema of the oscillatory residual so the fit sees
    // the envelope rather than the sin/cos factor
    let pi = std::f64::consts::PI;
    let snap = |target: f64, offset: f64| -> f64 {
        let m = ((target - pi / 4.0) / pi - offset).round();
        pi / 4.0 + (m + offset) * pi
    };
    let targets = [20.0, 40.0, 80.0, 160.0, 320.0];
    let mut jpts = Vec::new();
    let mut npts = Vec::new();
    for &t in &targets {
        let rj = snap(t, 0.5);
        let rn = snap(t, 0.0);
        let amp = |r: f64| (2.0 / (pi * r)).sqrt();
        jpts.push((rj, (j0_real(rj)?.0 - amp(rj) * (rj - pi / 4.0).cos()).abs()));
        npts.push((rn, (n0_real(rn)?.0 - amp(rn) * (rn - pi / 4.0).sin()).abs()));
    }
    let js = lsq_slope(&jpts);
    let ns = lsq_slope(&npts);
    let band = -1.65..=-1.35;
    let struve_ratio = (h0_real(320.0)?.0 - n0_real(320.0)?.0) * 320.0 / (2.0 / pi);
    let struve_ok = (struve_ratio - 1.0).abs() <= 0.02;
    let passed = band.contains(&js) && band.contains(&ns) && struve_ok;
    Ok((
        passed,
        format!("J0 slope {js:.3}, N0 slope {ns:.3} (band [-1.65, -1.35]); (H0-N0)*rho / (2/pi) = {struve_ratio:.4} at rho = 320"),
    ))
}

fn c3_boundary_limit() -> Result<(bool, String)> {
    // the upper half plane limits onto the Minus kernel (outgoing) and the
    // lower half plane onto Plus; see the kernel module notes
    let x = [1.0, 0.0];
    let gm = g_boundary(1.0, x, SignChoice::Minus)?.value;
    let gp = g_boundary(1.0, x, SignChoice::Plus)?.value;
    let mut up_errors = Vec::new();
    let mut dn_errors = Vec::new();
    for &mu in &[1e-2, 1e-3, 1e-4] {
        up_errors.push((g_resolvent(Complex64::new(1.0, mu), x)?.value - gm).norm());
        dn_errors.push((g_resolvent(Complex64::new(1.0, -mu), x)?.value - gp).norm());
    }
    let monotone = up_errors.windows(2).all(|w| w[1] < w[0])
        && dn_errors.windows(2).all(|w| w[1] < w[0]);
    let last_ok = up_errors[2] <= 1e-3 && dn_errors[2] <= 1e-3;
    Ok((
        monotone && last_ok,
        format!(
            "upper-half errors {:?}, lower-half errors {:?}",
            up_errors.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>(),
            dn_errors.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>()
        ),
    ))
}

fn c4_laplace_oracle() -> Result<(bool, String)> {
    let zs = [
        Complex64::new(-0.5, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(-2.0, 1.0),
    ];
    let rs = [0.5, 1.0, 2.0];
    let mut worst: f64 = 0.0;
    for &z in &zs {
        for &r in &rs {
            let a = g_resolvent(z, [r, 0.0])?.value;
            let b = poisson_laplace_oracle(z, r)?;
            worst = worst.max((a - b).norm());
        }
    }
    Ok((worst <= 1e-8, format!("worst |g_z - oracle| = {worst:.2e} over the 9-point grid")))
}

fn c5_kernel_decay() -> Result<(bool, String)> {
    let lambda = 1.0;
    let mut pts = Vec::new();
    for i in 0..24 {
        let r = 10.0 * (500.0f64 / 10.0).powf(i as f64 / 23.0);
        let g = g_radial(lambda, r, SignChoice::Minus)?.value;
        let lead = (lambda / std::f64::consts::PI).sqrt()
            * Complex64::new(1.0, 1.0)
            * Complex64::new(0.0, lambda * r).exp()
            / r.sqrt();
        pts.push((r, (g - lead).norm()));
    }
    let slope = simple_slope(&pts, (5.0, 600.0))?;
    Ok((slope <= -0.85, format!("fitted decay slope {slope:.3} (need <= -0.85)")))
}

fn c6_free_field(ctx: &Context) -> Result<(bool, String)> {
    let grid = ctx.config.build_grid()?;
    let k = ctx.config.wave_vector()?;
    let mut worst_sup: f64 = 0.0;
    let mut worst_far: f64 = 0.0;
    for branch in [SignChoice::Plus, SignChoice::Minus] {
        let field = solve_ls(&grid, &PotentialModel::zero(), &k, branch)?;
        let sup = field
            .values
            .iter()
            .zip(&grid.nodes)
            .map(|(&v, &x)| (v - plane_wave(x, &k)).norm())
            .fold(0.0f64, f64::max);
        worst_sup = worst_sup.max(sup).max(field.residual_norm);
        for s in far_field_samples(&field, 64).samples {
            worst_far = worst_far.max(s.1.norm());
        }
    }
    Ok((
        worst_sup <= 1e-13 && worst_far == 0.0,
        format!("sup |phi - phi0| = {worst_sup:.2e}, max |f| = {worst_far:.2e}"),
    ))
}

fn c7_born_scaling() -> Result<(bool, String)> {
    let grid = build_grid(12.0, 48)?;
    let k = WaveVector::new([1.0, 0.0])?;
    let phi0: Vec<Complex64> = grid.nodes.iter().map(|&x| plane_wave(x, &k)).collect();
    let mut pts = Vec::new();
    for &eps in &[1e-3, 3e-3, 1e-2] {
        let model = PotentialModel::power(2.5, eps)?;
        let field = solve_ls(&grid, &model, &k, SignChoice::Plus)?;
        let vphi0: Vec<Complex64> = grid
            .nodes
            .iter()
            .zip(&phi0)
            .map(|(&x, &p)| eval_potential(&model, x) * p)
            .collect();
        let gv = apply_kernel_to_psi(&grid, k.lambda, field.kernel_sign(), &vphi0)?;
        let dev = field
            .values
            .iter()
            .zip(&phi0)
            .zip(&gv)
            .map(|((&v, &p), &g)| (v - p + g).norm())
            .fold(0.0f64, f64::max);
        pts.push((eps, dev));
    }
    let slope = lsq_slope(&pts);
    Ok(((slope - 2.0).abs() <= 0.2, format!("Born deviation slope {slope:.3} (need 2 +- 0.2)")))
}

fn c8_residual_convergence(ctx: &Context) -> Result<(bool, String)> {
    let res = ctx.ref_plus.residual_norm.max(ctx.ref_minus.residual_norm);
    let residual_ok = res <= 1e-10;

    // doubling study N = 24 -> 48 -> 96 at fixed L, compared off-grid at
    // fixed probes in the interior
    let k = ctx.config.wave_vector()?;
    let l = ctx.config.grid.l;
    let coarse = solve_ls(&build_grid(l, 24)?, &ctx.config.potential, &k, SignChoice::Plus)?;
    let medium = solve_ls(&build_grid(l, 48)?, &ctx.config.potential, &k, SignChoice::Plus)?;
    let probes: Vec<[f64; 2]> = golden_directions(40)
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let r = 6.0 * (i as f64 + 0.5) / 40.0;
            [r * d[0], r * d[1]]
        })
        .collect();
    let sup_diff = |a: &ScatteringField, b: &ScatteringField| -> f64 {
        probes
            .iter()
            .map(|&x| (evaluate_offgrid(a, x) - evaluate_offgrid(b, x)).norm())
            .fold(0.0f64, f64::max)
    };
    let d1 = sup_diff(&coarse, &medium);
    let d2 = sup_diff(&medium, &ctx.ref_plus);
    let ratio = d1 / d2;
    Ok((
        residual_ok && ratio >= 1.8,
        format!("max residual {res:.2e}; doubling contraction {d1:.2e} -> {d2:.2e}, ratio {ratio:.2} (need >= 1.8)"),
    ))
}

fn c9_rotation() -> Result<(bool, String)> {
    let grid = build_grid(8.0, 16)?;
    let n = grid.cells_per_side;
    let model = PotentialModel::power(2.5, 0.3)?;
    let fx = solve_ls(&grid, &model, &WaveVector::new([1.0, 0.0])?, SignChoice::Plus)?;
    let fy = solve_ls(&grid, &model, &WaveVector::new([0.0, 1.0])?, SignChoice::Plus)?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((fx.values[i * n + j] - fy.values[(n - 1 - j) * n + i]).norm());
        }
    }
    Ok((worst <= 1e-8, format!("90-degree rotation mismatch {worst:.2e} (need <= 1e-8)")))
}

fn c10_boundedness() -> Result<(bool, String)> {
    let model = PotentialModel::power(2.5, 0.3)?;
    let (a, b) = (0.5, 2.0);
    let (n_mod, n_ang) = (8, 16); // 128 k-points
    // probe set shared between the two domain sizes, |x| <= 50 * 12
    let probes: Vec<[f64; 2]> = golden_directions(64)
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let r = 1.0 * (600.0f64).powf(i as f64 / 63.0);
            [r * d[0], r * d[1]]
        })
        .collect();
    let sweep_sup = |l: f64, n: usize| -> Result<f64> {
        let grid = build_grid(l, n)?;
        let mut sup: f64 = 0.0;
        for im in 0..n_mod {
            let lambda = a + (im as f64 + 0.5) * (b - a) / n_mod as f64;
            for ia in 0..n_ang {
                let theta = (ia as f64 + 0.5) * 2.0 * std::f64::consts::PI / n_ang as f64;
                let k = WaveVector::new([lambda * theta.cos(), lambda * theta.sin()])?;
                let field = solve_ls(&grid, &model, &k, SignChoice::Plus)?;
                for &x in &probes {
                    sup = sup.max(evaluate_offgrid(&field, x).norm());
                }
            }
        }
        Ok(sup)
    };
    let sup_l = sweep_sup(12.0, 32)?;
    let sup_15l = sweep_sup(18.0, 48)?;
    let change = (sup_l - sup_15l).abs() / sup_l;
    Ok((
        sup_l.is_finite() && sup_15l.is_finite() && change < 0.05,
        format!("sup |phi| = {sup_l:.4} (L = 12) vs {sup_15l:.4} (L = 18), change {:.2}%", 100.0 * change),
    ))
}

fn scan_field(sigma: f64, tail_r_max: f64) -> Result<ScatteringField> {
    let grid = build_grid(12.0, 64)?;
    let model = PotentialModel::power(sigma, 0.3)?;
    let k = WaveVector::new([1.0, 0.0])?;
    Ok(solve_ls(&grid, &model, &k, SignChoice::Plus)?
        .with_born_tail(TailParams { r_max: tail_r_max, ..TailParams::default() }))
}

fn c11_diff_rates() -> Result<(bool, String)> {
    let omega = [1.0, 0.0]; // forward direction dominates for slow decay
    let radii = log_spaced_radii(20.0, 200.0, 24);
    let window = (15.0, 250.0);

    let s175 = simple_slope(&planewave_diff_scan(&scan_field(1.75, 600.0)?, omega, &radii), window)?;
    let s3 = simple_slope(&planewave_diff_scan(&scan_field(3.0, 300.0)?, omega, &radii), window)?;
    // log case sigma = 2: ratio-bounded against r^{-1/2} log(1 + r)
    let scan2 = planewave_diff_scan(&scan_field(2.0, 600.0)?, omega, &radii);
    let ratios: Vec<f64> = scan2
        .iter()
        .map(|&(r, v)| v * r.sqrt() / (1.0 + r).ln())
        .collect();
    let rmax = ratios.iter().fold(0.0f64, |a, &b| a.max(b));
    let rmin = ratios.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let log_ratio = rmax / rmin;

    let ok175 = (s175 + 0.25).abs() <= 0.15;
    let ok3 = (s3 + 0.5).abs() <= 0.15;
    let ok2 = log_ratio <= 3.0;
    Ok((
        ok175 && ok3 && ok2,
        format!(
            "sigma 1.75 slope {s175:.3} (-0.25 +- 0.15), sigma 3 slope {s3:.3} (-0.5 +- 0.15), sigma 2 log-ratio {log_ratio:.2} (<= 3)"
        ),
    ))
}

fn c12_remainder_rates(ctx: &Context) -> Result<(bool, String)> {
    let omega = [1.0, 0.0];
    let radii = log_spaced_radii(20.0, 200.0, 24);
    let window = (15.0, 250.0);

    let sigma = ctx.config.potential.sigma;
    let expected = if (2.0..3.0).contains(&sigma) {
        -(sigma - 1.0) / 2.0
    } else {
        -1.0
    };
    let tailed = ctx.ref_plus.clone().with_born_tail(TailParams::default());
    let s_ref = simple_slope(&remainder_scan(&tailed, omega, &radii), window)?;
    let s35 = simple_slope(&remainder_scan(&scan_field(3.5, 300.0)?, omega, &radii), window)?;
    let ok_ref = (s_ref - expected).abs() <= 0.2;
    let ok35 = (s35 + 1.0).abs() <= 0.2;
    Ok((
        ok_ref && ok35,
        format!(
            "sigma {sigma} remainder slope {s_ref:.3} ({expected} +- 0.2), sigma 3.5 slope {s35:.3} (-1.0 +- 0.2)"
        ),
    ))
}

fn c13_convolution_decay() -> Result<(bool, String)> {
    let xs: Vec<f64> = (0..10).map(|i| 10.0 * 20.0f64.powf(i as f64 / 9.0)).collect();
    let window = (8.0, 250.0);
    let mut details = Vec::new();
    let mut all_ok = true;

    for &beta in &[1.0, 0.5] {
        // gamma < 2: slope -(beta + gamma - 2)
        let gamma = 1.75;
        let pts: Vec<(f64, f64)> = xs
            .iter()
            .map(|&r| Ok((r, lemma_a1_phi(beta, gamma, [r, 0.0])?)))
            .collect::<Result<_>>()?;
        let s = simple_slope(&pts, window)?;
        let expect = -(beta + gamma - 2.0);
        let ok = (s - expect).abs() <= 0.1;
        all_ok &= ok;
        details.push(format!("beta {beta} gamma {gamma}: {s:.3} ({expect:.2} +- 0.1)"));

        // gamma > 2: slope -beta
        let gamma = 3.0;
        let pts: Vec<(f64, f64)> = xs
            .iter()
            .map(|&r| Ok((r, lemma_a1_phi(beta, gamma, [r, 0.0])?)))
            .collect::<Result<_>>()?;
        let s = simple_slope(&pts, window)?;
        let ok = (s + beta).abs() <= 0.1;
        all_ok &= ok;
        details.push(format!("beta {beta} gamma 3: {s:.3} ({:.2} +- 0.1)", -beta));

        // gamma = 2: log case, ratio-bounded
        let mut ratios = Vec::new();
        for &r in &xs {
            let phi = lemma_a1_phi(beta, 2.0, [r, 0.0])?;
            let xw = (1.0 + r * r).sqrt();
            ratios.push(phi * xw.powf(beta) / (1.0 + xw).ln());
        }
        let rmax = ratios.iter().fold(0.0f64, |a, &b| a.max(b));
        let rmin = ratios.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let ok = rmax / rmin <= 3.0;
        all_ok &= ok;
        details.push(format!("beta {beta} gamma 2 log-ratio: {:.2} (<= 3)", rmax / rmin));
    }
    Ok((all_ok, details.join("; ")))
}

fn c14_riesz_domination(ctx: &Context) -> Result<(bool, String)> {
    let (violation, passing_c) = resolvent_bound_check(&ctx.ref_plus)?;
    match passing_c {
        Some(c) => Ok((violation == 0.0, format!("violation {violation:.2e}, smallest passing C = {c:.3}"))),
        None => Ok((false, format!("no C <= 100 removes the violation ({violation:.2e} at C = 100)"))),
    }
}

fn c15_projector() -> Result<(bool, String)> {
    let gaussian = |grid: &crate::quadrature::QuadratureGrid| -> Vec<Complex64> {
        grid.nodes
            .iter()
            .map(|&x| Complex64::new((-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp(), 0.0))
            .collect()
    };
    let (a, b) = (0.5, 2.0);

    // the converged defect is set by the finite-domain leakage layer (width
    // ~ pi/L in k), so the free bank gets a large domain; its fields are
    // plane waves and cost nothing to solve
    let free_grid = build_grid(20.0, 80)?;
    let u = gaussian(&free_grid);
    let free = build_field_bank(&free_grid, &PotentialModel::zero(), a, b, 16, 64, SignChoice::Plus)?;
    let defect_free = projector_check(&free, &u)?;
    drop(free);
    let refined = build_field_bank(&free_grid, &PotentialModel::zero(), a, b, 32, 64, SignChoice::Plus)?;
    let defect_refined = projector_check(&refined, &u)?;
    drop(refined);

    let coupled_grid = build_grid(8.0, 32)?;
    let u = gaussian(&coupled_grid);
    let coupled =
        build_field_bank(&coupled_grid, &PotentialModel::power(2.5, 0.1)?, a, b, 16, 32, SignChoice::Plus)?;
    let defect_coupled = projector_check(&coupled, &u)?;

    let ratio = defect_refined / defect_free;
    let passed = defect_free <= 0.05 && ratio <= 0.7 && defect_coupled <= 0.1;
    Ok((
        passed,
        format!(
            "free defect {defect_free:.4} (<= 0.05), refinement ratio {ratio:.2} (<= 0.7), coupled defect {defect_coupled:.4} (<= 0.1)"
        ),
    ))
}

fn c16_runtime(ctx: &Context, elapsed_secs: f64) -> Result<(bool, String)> {
    // stated budgets assume 8 cores; scale to this machine
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let scale = 8.0 / cores as f64;
    let solve_budget = 120.0 * scale;
    let suite_budget = 1800.0 * scale;
    let passed = ctx.ref_solve_secs <= solve_budget && elapsed_secs <= suite_budget;
    Ok((
        passed,
        format!(
            "reference solve {:.1} s (budget {:.0} s), suite {:.1} s (budget {:.0} s) on {cores} core(s)",
            ctx.ref_solve_secs, solve_budget, elapsed_secs, suite_budget
        ),
    ))
}
