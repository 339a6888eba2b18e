//! Error propagation for the witness and singlet-weight estimators, and a
//! replication oracle to check it against.
//!
//! Counts are treated as independent binomial frequencies `p̂ = C/N` with
//! standard deviation `√(p̂(1 − p̂)/N)`; sampled frequencies stand in for the
//! expectations throughout.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, EstimateError};
use crate::protocol::{estimate_q, run_witness_experiment_at, ExperimentConfig, NamedCounts};
use crate::rng::derive_seed;

/// Half-width multiplier for an approximately 95% interval.
pub const CONFIDENCE_MULTIPLIER: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyEstimate {
    pub p_hat: f64,
    pub sigma_hat: f64,
    pub n: u64,
}

impl FrequencyEstimate {
    pub fn from_count(count: u64, n: u64) -> Self {
        if n == 0 {
            return FrequencyEstimate {
                p_hat: 0.0,
                sigma_hat: 0.0,
                n,
            };
        }
        let p_hat = count as f64 / n as f64;
        // max(0) guards against tiny negative rounding when p̂ is 1.
        let var = (p_hat * (1.0 - p_hat) / n as f64).max(0.0);
        FrequencyEstimate {
            p_hat,
            sigma_hat: var.sqrt(),
            n,
        }
    }

    pub fn variance(&self) -> f64 {
        self.sigma_hat * self.sigma_hat
    }

    /// `σ/p`, the relative standard deviation.
    fn relative(&self) -> f64 {
        self.sigma_hat / self.p_hat
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBars {
    pub delta_w: f64,
    pub delta_q: f64,
    pub multiplier: f64,
}

impl ErrorBars {
    pub fn new(delta_w: f64, delta_q: f64) -> Self {
        ErrorBars {
            delta_w,
            delta_q,
            multiplier: CONFIDENCE_MULTIPLIER,
        }
    }

    /// Confidence half-widths `(k·δW, k·δq)`.
    pub fn half_widths(&self) -> (f64, f64) {
        (
            self.multiplier * self.delta_w,
            self.multiplier * self.delta_q,
        )
    }
}

/// `δW = |W|·√((σ_X/μ_X)² + (σ_Y/μ_Y)²)` with `X` the witness numerator over
/// `N` and `Y` the standard-basis total over `N`.
///
/// Returns [`EstimateError::ZeroMean`] carrying the limit `σ_X/(2μ_Y)` when
/// the numerator vanishes.
pub fn propagate_witness_error(counts: &NamedCounts, n: u64) -> Result<f64, EstimateError> {
    if n == 0 || counts.standard_total() == 0 {
        return Err(EstimateError::ZeroDenominator("witness error"));
    }
    let nf = n as f64;
    let freq = |c: u64| FrequencyEstimate::from_count(c, n);
    let [hh, hv, vh, vv, dd, aa, lr, rl] = counts.to_array();
    let var_x: f64 = [hh, vv, dd, aa, lr, rl]
        .into_iter()
        .map(|c| freq(c).variance())
        .sum();
    let var_y: f64 = [hh, hv, vh, vv]
        .into_iter()
        .map(|c| freq(c).variance())
        .sum();
    let mu_x = counts.witness_numerator() as f64 / nf;
    let mu_y = counts.standard_total() as f64 / nf;
    if mu_x == 0.0 {
        return Err(EstimateError::ZeroMean {
            fallback: var_x.sqrt() / (2.0 * mu_y),
        });
    }
    let w = 0.5 * mu_x / mu_y;
    Ok(w.abs() * (var_x / (mu_x * mu_x) + var_y / (mu_y * mu_y)).sqrt())
}

/// Per-ratio errors `δr₁ … δr₄` for `C_HH/C_VH`, `C_VV/C_HV`, `C_HH/C_HV`, `C_VV/C_VH`.
pub fn ratio_errors(counts: &NamedCounts, n: u64) -> Result<[f64; 4], EstimateError> {
    if n == 0 || [counts.hh, counts.hv, counts.vh, counts.vv].contains(&0) {
        return Err(EstimateError::ZeroCount);
    }
    let f = |c: u64| FrequencyEstimate::from_count(c, n);
    let (hh, hv, vh, vv) = (f(counts.hh), f(counts.hv), f(counts.vh), f(counts.vv));
    let ratio = |num: &FrequencyEstimate, den: &FrequencyEstimate| {
        num.p_hat / den.p_hat * num.relative().hypot(den.relative())
    };
    Ok([
        ratio(&hh, &vh),
        ratio(&vv, &hv),
        ratio(&hh, &hv),
        ratio(&vv, &vh),
    ])
}

/// `δq = |q|·√((δR/(1 − R))² + (δR/(1 + R))²)` with `δR = ¼·√Σ δr_k²` and
/// `R` the sampled ratio estimate.
pub fn propagate_q_error(counts: &NamedCounts, n: u64) -> Result<f64, EstimateError> {
    let dr = ratio_errors(counts, n)?;
    let delta_r = 0.25 * dr.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (r, q) = estimate_q(counts).map_err(|_| EstimateError::ZeroCount)?;
    if r == 1.0 {
        // |q|/|1 − R| → 1/(1 + R) as R → 1.
        return Ok(delta_r / (1.0 + r));
    }
    Ok(q.abs() * ((delta_r / (1.0 - r)).powi(2) + (delta_r / (1.0 + r)).powi(2)).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSpread {
    /// Sample standard deviation of `W_est` over replications.
    pub std_w: f64,
    /// Sample standard deviation of `q_est` over replications.
    pub std_q: f64,
    /// Mean propagated `δW` over the same replications.
    pub mean_delta_w: f64,
    pub mean_delta_q: f64,
    /// Replications whose estimates were defined.
    pub used: usize,
}

fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::NAN;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Reruns the experiment once per seed and measures the spread of the estimates.
pub fn bootstrap_spread_with_seeds(
    config: &ExperimentConfig,
    seeds: &[u64],
) -> Result<BootstrapSpread, ConfigError> {
    if seeds.len() < 2 {
        return Err(ConfigError::invalid(
            "replications",
            "need at least two replications",
        ));
    }
    config.validate()?;
    let runs = seeds
        .par_iter()
        .map(|&s| run_witness_experiment_at(&config.with_seed(s), 0))
        .collect::<Result<Vec<_>, _>>()?;
    let defined: Vec<_> = runs
        .iter()
        .filter_map(|r| {
            let e = &r.estimates;
            Some((
                e.w_est?,
                e.q_est?,
                e.delta_w?,
                e.delta_q.unwrap_or(f64::NAN),
            ))
        })
        .collect();
    let col = |k: usize| {
        defined
            .iter()
            .map(|t| [t.0, t.1, t.2, t.3][k])
            .collect::<Vec<_>>()
    };
    Ok(BootstrapSpread {
        std_w: sample_std(&col(0)),
        std_q: sample_std(&col(1)),
        mean_delta_w: mean(&col(2)),
        mean_delta_q: mean(&col(3)),
        used: defined.len(),
    })
}

/// Replication spread with seeds derived from `config.master_seed`.
pub fn bootstrap_spread(
    config: &ExperimentConfig,
    replications: usize,
) -> Result<BootstrapSpread, ConfigError> {
    let seeds: Vec<u64> = (0..replications as u64)
        .map(|r| derive_seed(config.master_seed, r))
        .collect();
    bootstrap_spread_with_seeds(config, &seeds)
}
