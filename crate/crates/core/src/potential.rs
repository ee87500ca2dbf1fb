//! Decaying real potential models.
//!
//! Every model satisfies |V(x)| <= |coupling| <x - center>^{-sigma_eff} for
//! some sigma_eff > 3/2, which is the standing assumption behind the whole
//! construction.  PowerDecay realizes each decay class (3/2 < sigma < 2,
//! sigma = 2, 2 < sigma < 3, sigma >= 3) exactly, which is what the
//! rate-fitting tests need; Gaussian and CompactBump decay faster than any
//! polynomial and carry a +infinity sentinel in `sigma`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    #[serde(rename = "power")]
    PowerDecay,
    Gaussian,
    #[serde(rename = "bump")]
    CompactBump,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PotentialModel {
    pub kind: PotentialKind,
    /// Decay exponent; meaningful for PowerDecay, +infinity sentinel otherwise.
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    /// Signed strength multiplier.
    pub coupling: f64,
    #[serde(default)]
    pub center: [f64; 2],
    #[serde(default = "default_width")]
    pub width: f64,
}

fn default_sigma() -> f64 {
    f64::INFINITY
}

fn default_width() -> f64 {
    1.0
}

impl PotentialModel {
    pub fn power(sigma: f64, coupling: f64) -> Result<Self> {
        let model = PotentialModel {
            kind: PotentialKind::PowerDecay,
            sigma,
            coupling,
            center: [0.0, 0.0],
            width: 1.0,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn zero() -> Self {
        PotentialModel {
            kind: PotentialKind::PowerDecay,
            sigma: 2.5,
            coupling: 0.0,
            center: [0.0, 0.0],
            width: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.coupling.is_finite() {
            return Err(Error::Config("potential coupling must be finite".into()));
        }
        if self.width <= 0.0 {
            return Err(Error::Config(format!("potential width must be positive, got {}", self.width)));
        }
        if self.kind == PotentialKind::PowerDecay && !(self.sigma > 1.5) {
            return Err(Error::Config(format!(
                "PowerDecay needs sigma > 3/2 (the decay assumption), got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

/// V(x) for the given model.
pub fn eval_potential(model: &PotentialModel, x: [f64; 2]) -> f64 {
    let dx = x[0] - model.center[0];
    let dy = x[1] - model.center[1];
    let r2 = dx * dx + dy * dy;
    match model.kind {
        PotentialKind::PowerDecay => model.coupling * (1.0 + r2).powf(-0.5 * model.sigma),
        PotentialKind::Gaussian => model.coupling * (-r2 / (2.0 * model.width * model.width)).exp(),
        PotentialKind::CompactBump => {
            let w2 = model.width * model.width;
            if r2 < w2 {
                model.coupling * (-w2 / (w2 - r2)).exp()
            } else {
                0.0
            }
        }
    }
}

/// Check |V(x)| <x>^sigma_claim <= |coupling| on quasi-random points with
/// |x| <= 1e3.  Uses a seed-free golden-angle sequence so repeated runs
/// sample identical points.
pub fn decay_envelope_check(model: &PotentialModel, sigma_claim: f64, samples: usize) -> bool {
    assert!(sigma_claim > 1.5, "claims below the sigma > 3/2 assumption are out of scope");
    let bound = model.coupling.abs() * (1.0 + 1e-12);
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    for i in 0..samples {
        // radius stratified over [0, 1e3], angle from the golden ratio
        let u = (i as f64 + 0.5) / samples as f64;
        let r = 1e3 * u.sqrt();
        let theta = 2.0 * std::f64::consts::PI * ((i as f64 * golden) % 1.0);
        let x = [
            model.center[0] + r * theta.cos(),
            model.center[1] + r * theta.sin(),
        ];
        let dx = x[0] - model.center[0];
        let dy = x[1] - model.center[1];
        let weight = (1.0 + dx * dx + dy * dy).powf(0.5 * sigma_claim);
        if eval_potential(model, x).abs() * weight > bound {
            return false;
        }
    }
    true
}
