//! Random prepared states, quantum noise, and assembled signals.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::linalg::{CVec4, C64};
pub use crate::werner::singlet_amplitudes;

/// How the Werner mixture is realized per draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MixtureKind {
    /// Singlet with probability q, otherwise a uniformly chosen standard basis vector.
    Discrete,
    /// `√q·α_s + √(1-q)·w` with `w` complex Gaussian, covariance `I/4`.
    Gaussian,
}

impl FromStr for MixtureKind {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "discrete" => Ok(MixtureKind::Discrete),
            "gaussian" => Ok(MixtureKind::Gaussian),
            other => Err(ConfigError::invalid(
                "model",
                format!("expected discrete|gaussian, got `{other}`"),
            )),
        }
    }
}

impl fmt::Display for MixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MixtureKind::Discrete => "discrete",
            MixtureKind::Gaussian => "gaussian",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtureModel {
    pub kind: MixtureKind,
    /// Singlet weight in `[0, 1]`.
    pub q: f64,
}

impl MixtureModel {
    pub fn new(kind: MixtureKind, q: f64) -> Result<Self, ConfigError> {
        let model = MixtureModel { kind, q };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.q) {
            return Err(ConfigError::invalid(
                "q",
                format!("must lie in [0, 1], got {}", self.q),
            ));
        }
        Ok(())
    }
}

/// Noise scale `sigma`, signal scale `signal`, and detection threshold `gamma`,
/// all in the same amplitude units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub sigma: f64,
    pub signal: f64,
    pub gamma: f64,
}

impl Default for NoiseParams {
    /// `σ = 1`, `s = (√2 − 1)σ`, `γ = σ`.
    fn default() -> Self {
        NoiseParams {
            sigma: 1.0,
            signal: SQRT_2 - 1.0,
            gamma: 1.0,
        }
    }
}

impl NoiseParams {
    pub fn new(sigma: f64, signal: f64, gamma: f64) -> Result<Self, ConfigError> {
        let p = NoiseParams {
            sigma,
            signal,
            gamma,
        };
        p.validate()?;
        Ok(p)
    }

    /// Default signal scale with threshold `gamma_over_sigma · σ`, σ = 1.
    pub fn with_gamma_ratio(gamma_over_sigma: f64) -> Self {
        NoiseParams {
            gamma: gamma_over_sigma,
            ..Self::default()
        }
    }

    pub fn gamma_over_sigma(&self) -> f64 {
        self.gamma / self.sigma
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(ConfigError::invalid(
                "sigma",
                format!("must be positive, got {}", self.sigma),
            ));
        }
        if !(self.signal >= 0.0 && self.signal.is_finite()) {
            return Err(ConfigError::invalid(
                "signal",
                format!("must be non-negative, got {}", self.signal),
            ));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(ConfigError::invalid(
                "gamma",
                format!("must be positive, got {}", self.gamma),
            ));
        }
        Ok(())
    }
}

#[inline]
fn complex_normal<R: Rng + ?Sized>(rng: &mut R, std_dev: f64) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * std_dev, im * std_dev)
}

/// Draws one prepared state `α̃` for the given mixture.
pub fn sample_prepared_state<R: Rng + ?Sized>(model: &MixtureModel, rng: &mut R) -> CVec4 {
    match model.kind {
        MixtureKind::Discrete => {
            // [0, q) → singlet, then four slots of width (1 - q)/4.
            let u: f64 = rng.random();
            if u < model.q {
                singlet_amplitudes()
            } else {
                let slot = ((u - model.q) / ((1.0 - model.q) / 4.0)) as usize;
                CVec4::basis(slot.min(3))
            }
        }
        MixtureKind::Gaussian => {
            // Re/Im variance 1/8 each gives E[w w†] = I/4.
            let std_dev = 0.5 * FRAC_1_SQRT_2;
            let w = CVec4(std::array::from_fn(|_| complex_normal(rng, std_dev)));
            singlet_amplitudes().scale(model.q.sqrt()) + w.scale((1.0 - model.q).sqrt())
        }
    }
}

/// Draws `σ·z/‖z‖` with `z` a standard complex Gaussian 4-vector.
pub fn sample_noise<R: Rng + ?Sized>(params: &NoiseParams, rng: &mut R) -> CVec4 {
    loop {
        let z = CVec4(std::array::from_fn(|_| complex_normal(rng, FRAC_1_SQRT_2)));
        let norm = z.norm();
        if norm > 0.0 {
            return z.scale(params.sigma / norm);
        }
    }
}

/// `s·α + v`.
#[inline]
pub fn assemble_signal(alpha: &CVec4, v: &CVec4, params: &NoiseParams) -> CVec4 {
    alpha.scale(params.signal) + *v
}

/// Draws a complete signal realization: prepared state first, then noise.
#[inline]
pub fn sample_signal<R: Rng + ?Sized>(
    model: &MixtureModel,
    params: &NoiseParams,
    rng: &mut R,
) -> CVec4 {
    let alpha = sample_prepared_state(model, rng);
    let v = sample_noise(params, rng);
    assemble_signal(&alpha, &v, params)
}
