//! Nystrom solver for the Lippmann-Schwinger equation
//!
//!   phi^+- = phi0 - G^-+ ( V phi^+- ),
//!
//! discretized by collocation at the cell centers of a QuadratureGrid with
//! the singularity-corrected diagonal.  The dense system (I + A) phi = phi0
//! is solved by LU with a condition estimate; a failing estimate is
//! reported as NearSingular because it usually means |k| sits at a discrete
//! resonance of the truncated system rather than a genuine breakdown.

use std::sync::Arc;

use ndarray::{Array1, Array2};
use ndarray_linalg::{FactorizeInto, ReciprocalConditionNum, Solve};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{g_radial, kernel_sign_for_branch, SignChoice};
use crate::potential::{eval_potential, PotentialModel};
use crate::quadrature::{log_cell_integral, QuadratureGrid};
use crate::specfun::EULER_GAMMA;

#[derive(Debug, Clone, Copy)]
pub struct WaveVector {
    pub k: [f64; 2],
    pub lambda: f64,
    pub omega_k: [f64; 2],
}

impl WaveVector {
    pub fn new(k: [f64; 2]) -> Result<Self> {
        let lambda = (k[0] * k[0] + k[1] * k[1]).sqrt();
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Config(format!("wave vector must have |k| > 0, got ({}, {})", k[0], k[1])));
        }
        Ok(WaveVector {
            k,
            lambda,
            omega_k: [k[0] / lambda, k[1] / lambda],
        })
    }
}

/// phi0(x, k) = e^{i x . k}
pub fn plane_wave(x: [f64; 2], k: &WaveVector) -> Complex64 {
    Complex64::new(0.0, x[0] * k.k[0] + x[1] * k.k[1]).exp()
}

/// Exact integral of the kernel g^sign over one grid cell centered at the
/// singularity.  The 1/(pi |y|) part integrates to 4 h ln(1+sqrt2)/pi; the
/// lambda m part contributes its small-rho form
///   -(lambda/pi)(gamma + ln(lambda |y| / 2)) - sign * i * lambda
/// integrated analytically (the log term) with the smooth remainder taken
/// at its rho -> 0 limit.
pub fn diagonal_kernel_weight(lambda: f64, h: f64, kernel_sign: SignChoice) -> Complex64 {
    let h2 = h * h;
    let singular = 4.0 * h * crate::quadrature::LN_1P_SQRT2 / std::f64::consts::PI;
    let log_part = -(lambda / std::f64::consts::PI)
        * ((EULER_GAMMA + (lambda / 2.0).ln()) * h2 - log_cell_integral(h));
    let imag_part = -kernel_sign.signum() * lambda * h2;
    Complex64::new(singular + log_part, imag_part)
}

/// Kernel values tabulated over lattice displacements.  Entry (a, b) holds
/// g^sign(lambda, h sqrt(a^2 + b^2)); entry (0, 0) holds the exact cell
/// integral (the diagonal replacement) divided by h^2 so every entry can be
/// used with the plain h^2 weight.
pub struct DisplacementTable {
    n: usize,
    values: Vec<Complex64>,
}

impl DisplacementTable {
    pub fn build(grid: &QuadratureGrid, lambda: f64, kernel_sign: SignChoice) -> Result<Self> {
        let n = grid.cells_per_side;
        let h = grid.h();
        let mut values = vec![Complex64::new(0.0, 0.0); n * n];
        for a in 0..n {
            for b in 0..=a {
                let v = if a == 0 && b == 0 {
                    diagonal_kernel_weight(lambda, h, kernel_sign) / (h * h)
                } else {
                    let r = h * ((a * a + b * b) as f64).sqrt();
                    g_radial(lambda, r, kernel_sign)?.value
                };
                values[a * n + b] = v;
                values[b * n + a] = v;
            }
        }
        Ok(DisplacementTable { n, values })
    }

    #[inline]
    pub fn get(&self, di: isize, dj: isize) -> Complex64 {
        self.values[di.unsigned_abs() * self.n + dj.unsigned_abs()]
    }
}

/// A[i][j] = g^-branch(lambda, x_i - x_j) V(x_j) w_j, with the corrected diagonal.
pub fn assemble_ls_matrix(
    grid: &QuadratureGrid,
    model: &PotentialModel,
    k: &WaveVector,
    branch: SignChoice,
) -> Result<Array2<Complex64>> {
    let table = DisplacementTable::build(grid, k.lambda, kernel_sign_for_branch(branch))?;
    let n = grid.cells_per_side;
    let dim = n * n;
    let h2 = grid.h() * grid.h();
    let v: Vec<f64> = grid.nodes.iter().map(|&x| eval_potential(model, x)).collect();
    let mut a = Array2::zeros((dim, dim));
    for i in 0..dim {
        let (ix, iy) = ((i / n) as isize, (i % n) as isize);
        let mut row = a.row_mut(i);
        for j in 0..dim {
            let (jx, jy) = ((j / n) as isize, (j % n) as isize);
            row[j] = table.get(ix - jx, iy - jy) * v[j] * h2;
        }
    }
    Ok(a)
}

/// (G psi)(x_i) = sum_j g(x_i - x_j) psi_j w_j using the displacement table.
/// This is the same discrete operator the matrix encodes, recomputed without
/// the matrix so residuals stay cheap after the LU has consumed it.
pub fn apply_kernel_to_psi(
    grid: &QuadratureGrid,
    lambda: f64,
    kernel_sign: SignChoice,
    psi: &[Complex64],
) -> Result<Vec<Complex64>> {
    let table = DisplacementTable::build(grid, lambda, kernel_sign)?;
    let n = grid.cells_per_side;
    let dim = n * n;
    let h2 = grid.h() * grid.h();
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for i in 0..dim {
        let (ix, iy) = ((i / n) as isize, (i % n) as isize);
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..dim {
            let (jx, jy) = ((j / n) as isize, (j % n) as isize);
            acc += table.get(ix - jx, iy - jy) * psi[j];
        }
        out[i] = acc * h2;
    }
    Ok(out)
}

/// Born tail: outside the solved square the density V phi is approximated by
/// V phi0 on a polar node cloud.  Truncating the potential at the grid edge
/// would flatten the far-field decay exponents of slowly decaying models, so
/// the cloud is used consistently in off-grid evaluation and in the far
/// field sum (the midpoint biases then cancel in the remainder).
#[derive(Debug, Clone, Copy)]
pub struct TailParams {
    /// Outer truncation radius of the cloud.
    pub r_max: f64,
    /// Radial ring spacing.
    pub dr: f64,
    /// Target arc length between nodes on a ring.
    pub ds: f64,
}

impl Default for TailParams {
    fn default() -> Self {
        TailParams { r_max: 600.0, dr: 0.5, ds: 1.0 }
    }
}

#[derive(Debug, Clone)]
pub struct TailCloud {
    pub nodes: Vec<[f64; 2]>,
    pub psi: Vec<Complex64>,
    pub weights: Vec<f64>,
}

pub fn build_tail_cloud(
    grid: &QuadratureGrid,
    model: &PotentialModel,
    k: &WaveVector,
    params: TailParams,
) -> TailCloud {
    let l = grid.half_width;
    let mut nodes = Vec::new();
    let mut psi = Vec::new();
    let mut weights = Vec::new();
    let mut r = l + 0.5 * params.dr;
    while r <= params.r_max {
        let n_theta = ((2.0 * std::f64::consts::PI * r / params.ds).ceil() as usize).max(16);
        let dtheta = 2.0 * std::f64::consts::PI / n_theta as f64;
        for j in 0..n_theta {
            let theta = (j as f64 + 0.5) * dtheta;
            let y = [r * theta.cos(), r * theta.sin()];
            if y[0].abs() <= l && y[1].abs() <= l {
                continue; // already covered by the solved grid
            }
            let v = eval_potential(model, y);
            if v == 0.0 {
                continue;
            }
            nodes.push(y);
            psi.push(v * plane_wave(y, k));
            weights.push(r * params.dr * dtheta);
        }
        r += params.dr;
    }
    TailCloud { nodes, psi, weights }
}

#[derive(Clone)]
pub struct ScatteringField {
    pub grid: Arc<QuadratureGrid>,
    pub model: PotentialModel,
    pub k: WaveVector,
    /// Which eigenfunction branch phi^+-; the kernel inside uses the
    /// opposite sign.
    pub branch: SignChoice,
    /// phi at the grid nodes.
    pub values: Vec<Complex64>,
    /// psi = V phi at the grid nodes.
    pub psi: Vec<Complex64>,
    /// Max-norm discrete Lippmann-Schwinger residual at solve time.
    pub residual_norm: f64,
    /// Optional Born tail outside the solved square.
    pub tail: Option<Arc<TailCloud>>,
}

impl ScatteringField {
    pub fn kernel_sign(&self) -> SignChoice {
        kernel_sign_for_branch(self.branch)
    }
}

fn linalg_err(e: ndarray_linalg::error::LinalgError) -> Error {
    Error::Linalg(e.to_string())
}

pub fn solve_ls(
    grid: &QuadratureGrid,
    model: &PotentialModel,
    k: &WaveVector,
    branch: SignChoice,
) -> Result<ScatteringField> {
    model.validate()?;
    let dim = grid.nodes.len();
    let phi0: Vec<Complex64> = grid.nodes.iter().map(|&x| plane_wave(x, k)).collect();
    let v: Vec<f64> = grid.nodes.iter().map(|&x| eval_potential(model, x)).collect();

    if v.iter().all(|&vi| vi == 0.0) {
        // free field: (I + 0) phi = phi0
        return Ok(ScatteringField {
            grid: Arc::new(grid.clone()),
            model: *model,
            k: *k,
            branch,
            values: phi0,
            psi: vec![Complex64::new(0.0, 0.0); dim],
            residual_norm: 0.0,
            tail: None,
        });
    }

    let mut b = assemble_ls_matrix(grid, model, k, branch)?;
    for i in 0..dim {
        b[(i, i)] += Complex64::new(1.0, 0.0);
    }
    let factored = b.factorize_into().map_err(linalg_err)?;
    let rcond = factored.rcond().map_err(linalg_err)?;
    if rcond <= 0.0 || 1.0 / rcond > 1e12 {
        return Err(Error::NearSingular(1.0 / rcond.max(f64::MIN_POSITIVE)));
    }
    let values = factored
        .solve_into(Array1::from(phi0.clone()))
        .map_err(linalg_err)?
        .to_vec();

    let psi: Vec<Complex64> = values.iter().zip(&v).map(|(&p, &vi)| vi * p).collect();
    let applied = apply_kernel_to_psi(grid, k.lambda, kernel_sign_for_branch(branch), &psi)?;
    let residual_norm = values
        .iter()
        .zip(&applied)
        .zip(&phi0)
        .map(|((&val, &g), &p0)| (val + g - p0).norm())
        .fold(0.0f64, f64::max);

    Ok(ScatteringField {
        grid: Arc::new(grid.clone()),
        model: *model,
        k: *k,
        branch,
        values,
        psi,
        residual_norm,
        tail: None,
    })
}

impl ScatteringField {
    /// Attach a Born tail cloud (no-op for potentials that vanish outside
    /// the grid).
    pub fn with_born_tail(mut self, params: TailParams) -> Self {
        let cloud = build_tail_cloud(&self.grid, &self.model, &self.k, params);
        self.tail = if cloud.nodes.is_empty() {
            None
        } else {
            Some(Arc::new(cloud))
        };
        self
    }
}

/// phi(x) = phi0(x) - sum_j g(x - x_j) psi_j w_j (- tail contribution),
/// valid anywhere in the plane.  A target within h/10 of a node uses the
/// diagonal cell correction for that node's term.
pub fn evaluate_offgrid(field: &ScatteringField, x: [f64; 2]) -> Complex64 {
    let grid = &field.grid;
    let lambda = field.k.lambda;
    let sign = field.kernel_sign();
    let h = grid.h();
    let h2 = h * h;
    let near = 0.1 * h;
    let diag = diagonal_kernel_weight(lambda, h, sign);
    let mut acc = Complex64::new(0.0, 0.0);
    for (node, &psi) in grid.nodes.iter().zip(&field.psi) {
        if psi == Complex64::new(0.0, 0.0) {
            continue;
        }
        let dx = x[0] - node[0];
        let dy = x[1] - node[1];
        let r = (dx * dx + dy * dy).sqrt();
        if r < near {
            acc += diag * psi;
        } else {
            acc += g_radial(lambda, r, sign).expect("r > 0").value * psi * h2;
        }
    }
    if let Some(tail) = &field.tail {
        for ((node, &psi), &w) in tail.nodes.iter().zip(&tail.psi).zip(&tail.weights) {
            let dx = x[0] - node[0];
            let dy = x[1] - node[1];
            let r = (dx * dx + dy * dy).sqrt();
            if r < near {
                continue; // evaluation point on a tail node: skip the self cell
            }
            acc += g_radial(lambda, r, sign).expect("r > 0").value * psi * w;
        }
    }
    plane_wave(x, &field.k) - acc
}
