//! Run configuration, provenance, and the on-disk field format.
//!
//! Everything a run needs lives in the config file; outputs embed a SHA-256
//! hash of the canonical config serialization plus the crate version so any
//! artifact can be traced back to the exact parameters that produced it.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::kernel::SignChoice;
use crate::potential::PotentialModel;
use crate::quadrature::{build_grid, QuadratureGrid};
use crate::solver::{solve_ls, ScatteringField, TailParams, WaveVector};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridConfig {
    /// Half-width L of the square domain [-L, L]^2.
    pub l: f64,
    /// Cells per side (even, >= 8).
    pub n: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FitWindowConfig {
    pub rmin: f64,
    pub rmax: f64,
    pub n_radii: usize,
}

impl Default for FitWindowConfig {
    fn default() -> Self {
        // below r = 20 preasymptotic terms contaminate slopes, above 200 the
        // remainder approaches truncation noise
        FitWindowConfig { rmin: 20.0, rmax: 200.0, n_radii: 24 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub potential: PotentialModel,
    pub k: [f64; 2],
    pub branch: SignChoice,
    #[serde(default)]
    pub fit_window: FitWindowConfig,
    /// Attach the Born tail cloud outside the solved square.
    #[serde(default)]
    pub born_tail: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.potential.validate()?;
        if !(self.grid.l > 0.0) {
            return Err(Error::Config(format!("grid half-width must be positive, got {}", self.grid.l)));
        }
        if self.grid.n < 8 || self.grid.n % 2 != 0 {
            return Err(Error::Config(format!("grid cells per side must be even and >= 8, got {}", self.grid.n)));
        }
        let lambda = (self.k[0] * self.k[0] + self.k[1] * self.k[1]).sqrt();
        if !(lambda > 0.0) {
            return Err(Error::Config("wave vector must be nonzero".into()));
        }
        if !(self.fit_window.rmin >= 1.0 && self.fit_window.rmax > self.fit_window.rmin) {
            return Err(Error::Config("fit window needs 1 <= rmin < rmax".into()));
        }
        if self.fit_window.n_radii < 6 {
            return Err(Error::Config("fit window needs at least 6 radii".into()));
        }
        Ok(())
    }

    pub fn build_grid(&self) -> Result<QuadratureGrid> {
        build_grid(self.grid.l, self.grid.n)
    }

    pub fn wave_vector(&self) -> Result<WaveVector> {
        WaveVector::new(self.k)
    }

    pub fn solve(&self) -> Result<ScatteringField> {
        let grid = self.build_grid()?;
        let k = self.wave_vector()?;
        let field = solve_ls(&grid, &self.potential, &k, self.branch)?;
        Ok(if self.born_tail {
            field.with_born_tail(TailParams::default())
        } else {
            field
        })
    }

    /// SHA-256 of the canonical JSON serialization.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        format!("{:x}", hasher.finalize())
    }

    pub fn provenance(&self) -> Provenance {
        Provenance {
            config_hash: self.hash(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub version: String,
}

/// FIELD.json: a solved field with enough context to reload it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldDocument {
    pub provenance: Provenance,
    pub config: RunConfig,
    pub nodes: Vec<[f64; 2]>,
    pub values_re: Vec<f64>,
    pub values_im: Vec<f64>,
    pub psi_re: Vec<f64>,
    pub psi_im: Vec<f64>,
    pub residual_norm: f64,
}

impl FieldDocument {
    pub fn from_field(config: &RunConfig, field: &ScatteringField) -> Self {
        FieldDocument {
            provenance: config.provenance(),
            config: config.clone(),
            nodes: field.grid.nodes.clone(),
            values_re: field.values.iter().map(|z| z.re).collect(),
            values_im: field.values.iter().map(|z| z.im).collect(),
            psi_re: field.psi.iter().map(|z| z.re).collect(),
            psi_im: field.psi.iter().map(|z| z.im).collect(),
            residual_norm: field.residual_norm,
        }
    }

    /// Rebuild the in-memory field (grid and tail are reconstructed from the
    /// embedded config; the stored samples are trusted as-is).
    pub fn into_field(self) -> Result<ScatteringField> {
        self.config.validate()?;
        let grid = self.config.build_grid()?;
        if grid.nodes.len() != self.values_re.len() {
            return Err(Error::Config("field document sample count does not match its grid".into()));
        }
        let values = self
            .values_re
            .iter()
            .zip(&self.values_im)
            .map(|(&re, &im)| num_complex::Complex64::new(re, im))
            .collect();
        let psi = self
            .psi_re
            .iter()
            .zip(&self.psi_im)
            .map(|(&re, &im)| num_complex::Complex64::new(re, im))
            .collect();
        let mut field = ScatteringField {
            grid: std::sync::Arc::new(grid),
            model: self.config.potential,
            k: self.config.wave_vector()?,
            branch: self.config.branch,
            values,
            psi,
            residual_norm: self.residual_norm,
            tail: None,
        };
        if self.config.born_tail {
            field = field.with_born_tail(TailParams::default());
        }
        Ok(field)
    }
}
