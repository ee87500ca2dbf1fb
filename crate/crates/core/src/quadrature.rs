//! Truncated computational domain and singularity-corrected quadrature.
//!
//! The rule is a midpoint rule on a uniform N x N lattice over [-L, L]^2
//! with diagonal replacement: when an integrand contains |x - y|^{-1},
//! ln(1/|x - y|) or |x - y|^{-1/2}, the self cell uses the exact integral of
//! the singular factor over the square cell instead of the (infinite)
//! midpoint value.  Closed forms over [-a, a]^2:
//!
//!   int |y|^{-1}   dy = 8 a ln(1 + sqrt 2)
//!   int ln|y|      dy = 2 a^2 ( ln 2 + pi/2 - 3 + 2 ln a )
//!   int |y|^{-1/2} dy = K a^{3/2},  K = (16/3) int_0^{pi/4} sec^{3/2}t dt
//!
//! all cross-checked by adaptive quadrature in the tests.

use crate::error::{Error, Result};

/// ln(1 + sqrt 2)
pub const LN_1P_SQRT2: f64 = 0.881_373_587_019_543;
/// K in the |y|^{-1/2} cell integral, frozen from the quadrature oracle.
pub const INV_SQRT_CELL_FACTOR: f64 = 4.999_945_337_316_993;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    InverseDistance,
    LogSingular,
    Smooth,
}

#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub half_width: f64,
    pub cells_per_side: usize,
    /// Cell centers, row-major: node(i, j) = (-L + (i + 1/2) h, -L + (j + 1/2) h).
    pub nodes: Vec<[f64; 2]>,
    /// Cell areas h^2.
    pub weights: Vec<f64>,
    /// Exact self-cell integral of 1/(pi |y|): 4 h ln(1 + sqrt 2) / pi.
    pub self_correction: f64,
}

impl QuadratureGrid {
    pub fn h(&self) -> f64 {
        2.0 * self.half_width / self.cells_per_side as f64
    }

    pub fn node(&self, i: usize, j: usize) -> [f64; 2] {
        self.nodes[i * self.cells_per_side + j]
    }
}

pub fn build_grid(l: f64, n: usize) -> Result<QuadratureGrid> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::Config(format!("grid half-width must be positive, got {l}")));
    }
    if n < 8 {
        return Err(Error::BadResolution(format!("need at least 8 cells per side, got {n}")));
    }
    if n % 2 != 0 {
        return Err(Error::BadResolution(format!("cells per side must be even, got {n}")));
    }
    let h = 2.0 * l / n as f64;
    let mut nodes = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            nodes.push([-l + (i as f64 + 0.5) * h, -l + (j as f64 + 0.5) * h]);
        }
    }
    let weights = vec![h * h; n * n];
    Ok(QuadratureGrid {
        half_width: l,
        cells_per_side: n,
        nodes,
        weights,
        self_correction: 4.0 * h * LN_1P_SQRT2 / std::f64::consts::PI,
    })
}

/// Exact integral of ln(1/|y|) over [-h/2, h/2]^2.
pub fn log_cell_integral(h: f64) -> f64 {
    let a = 0.5 * h;
    -2.0 * a * a * (2.0f64.ln() + std::f64::consts::FRAC_PI_2 - 3.0 + 2.0 * a.ln())
}

/// Exact integral of |y|^{-1/2} over [-h/2, h/2]^2.
pub fn inv_sqrt_cell_integral(h: f64) -> f64 {
    INV_SQRT_CELL_FACTOR * (0.5 * h).powf(1.5)
}

/// Quadrature weight of the singular factor for the (i, j) node pair.
pub fn singular_weight(grid: &QuadratureGrid, i: usize, j: usize, kind: KernelKind) -> f64 {
    let h = grid.h();
    if i != j {
        return h * h;
    }
    match kind {
        KernelKind::InverseDistance => 4.0 * h * LN_1P_SQRT2,
        KernelKind::LogSingular => log_cell_integral(h),
        KernelKind::Smooth => h * h,
    }
}
