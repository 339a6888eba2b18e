//! Experiment orchestration: batches per setting, coincidence counting,
//! witness and singlet-weight estimation, efficiencies, and sweeps.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::{
    classify_local, Detector, JointOutcome, LocalClass, MeasurementSetting, Scheme,
};
use crate::error::{ConfigError, EstimateError};
use crate::linalg::SingleQubitBasis;
use crate::rng::{stable_hash, RngStream};
use crate::sampler::{sample_signal, MixtureKind, MixtureModel, NoiseParams};
use crate::stats::{propagate_q_error, propagate_witness_error};

/// Realizations per independently seeded work chunk.
pub const CHUNK_SIZE: u64 = 1 << 14;

/// Default batch size, `2^20`.
pub const DEFAULT_N: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BatchPolicy {
    /// One batch per basis pair; all named counts of that pair share it.
    PerBasis,
    /// One batch per named count.
    PerCount,
}

impl FromStr for BatchPolicy {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "per-basis" => Ok(BatchPolicy::PerBasis),
            "per-count" => Ok(BatchPolicy::PerCount),
            other => Err(ConfigError::invalid(
                "batch_policy",
                format!("expected per-basis|per-count, got `{other}`"),
            )),
        }
    }
}

impl fmt::Display for BatchPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BatchPolicy::PerBasis => "per-basis",
            BatchPolicy::PerCount => "per-count",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: MixtureModel,
    pub noise: NoiseParams,
    /// Realizations per batch.
    pub n: u64,
    pub scheme: Scheme,
    pub batch_policy: BatchPolicy,
    pub master_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            model: MixtureModel {
                kind: MixtureKind::Discrete,
                q: 1.0,
            },
            noise: NoiseParams::default(),
            n: DEFAULT_N,
            scheme: Scheme::Local,
            batch_policy: BatchPolicy::PerBasis,
            master_seed: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.model.validate()?;
        self.noise.validate()?;
        if self.n == 0 {
            return Err(ConfigError::invalid("n", "batch size must be at least 1"));
        }
        Ok(())
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.model.q = q;
        self
    }

    pub fn with_gamma_ratio(mut self, gamma_over_sigma: f64) -> Self {
        self.noise.gamma = gamma_over_sigma * self.noise.sigma;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }
}

/// Raw channel-fire tallies, kept so efficiencies can also be computed
/// without the exclusive classification.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelTallies {
    /// A channel `i` and B channel `j` both fired, other channels unconstrained.
    pub pair_fires: [[u64; 2]; 2],
    /// A channel `i` fired and no B channel fired.
    pub lone_a: [u64; 2],
    /// B channel `j` fired and no A channel fired.
    pub lone_b: [u64; 2],
}

/// Per-setting tallies. For joint settings `coincidences[i][j]` holds
/// `Detected(2i + j)` and `doubles` holds multiple detections.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub setting: MeasurementSetting,
    pub n: u64,
    pub coincidences: [[u64; 2]; 2],
    pub singles_a: [u64; 2],
    pub singles_b: [u64; 2],
    pub no_detections: u64,
    pub doubles: u64,
    pub channels: ChannelTallies,
}

impl CountRecord {
    pub fn empty(setting: MeasurementSetting) -> Self {
        CountRecord {
            setting,
            n: 0,
            coincidences: [[0; 2]; 2],
            singles_a: [0; 2],
            singles_b: [0; 2],
            no_detections: 0,
            doubles: 0,
            channels: ChannelTallies::default(),
        }
    }

    pub fn merge(mut self, other: &CountRecord) -> Self {
        debug_assert_eq!(self.setting, other.setting);
        self.n += other.n;
        for i in 0..2 {
            self.singles_a[i] += other.singles_a[i];
            self.singles_b[i] += other.singles_b[i];
            self.channels.lone_a[i] += other.channels.lone_a[i];
            self.channels.lone_b[i] += other.channels.lone_b[i];
            for j in 0..2 {
                self.coincidences[i][j] += other.coincidences[i][j];
                self.channels.pair_fires[i][j] += other.channels.pair_fires[i][j];
            }
        }
        self.no_detections += other.no_detections;
        self.doubles += other.doubles;
        self
    }

    pub fn coincidence_total(&self) -> u64 {
        self.coincidences.iter().flatten().sum()
    }

    /// Sum of every exclusive class; equals `n` by construction.
    pub fn classified_total(&self) -> u64 {
        self.coincidence_total()
            + self.singles_a.iter().sum::<u64>()
            + self.singles_b.iter().sum::<u64>()
            + self.no_detections
            + self.doubles
    }
}

fn tally_chunk(
    model: &MixtureModel,
    noise: &NoiseParams,
    detector: &Detector,
    stream: RngStream,
    len: u64,
) -> CountRecord {
    let mut rng = stream.rng();
    let mut rec = CountRecord::empty(detector.setting());
    rec.n = len;
    match detector.setting().scheme {
        Scheme::Joint => {
            for _ in 0..len {
                let a = sample_signal(model, noise, &mut rng);
                match detector.measure_joint(&a) {
                    JointOutcome::Detected(k) => rec.coincidences[k >> 1][k & 1] += 1,
                    JointOutcome::NoDetection => rec.no_detections += 1,
                    JointOutcome::MultipleDetection => rec.doubles += 1,
                }
            }
        }
        Scheme::Local => {
            for _ in 0..len {
                let a = sample_signal(model, noise, &mut rng);
                let e = detector.measure_local(&a);
                let any_a = e.fire_a[0] || e.fire_a[1];
                let any_b = e.fire_b[0] || e.fire_b[1];
                for i in 0..2 {
                    if e.fire_a[i] && !any_b {
                        rec.channels.lone_a[i] += 1;
                    }
                    if e.fire_b[i] && !any_a {
                        rec.channels.lone_b[i] += 1;
                    }
                    for j in 0..2 {
                        if e.fire_a[i] && e.fire_b[j] {
                            rec.channels.pair_fires[i][j] += 1;
                        }
                    }
                }
                match classify_local(e) {
                    LocalClass::Coincidence(i, j) => rec.coincidences[i][j] += 1,
                    LocalClass::SingleA(i) => rec.singles_a[i] += 1,
                    LocalClass::SingleB(j) => rec.singles_b[j] += 1,
                    LocalClass::NoDetection => rec.no_detections += 1,
                    LocalClass::DoubleInvolved(_) => rec.doubles += 1,
                }
            }
        }
    }
    rec
}

/// Draws `config.n` realizations on `stream` and tallies them under `setting`.
///
/// The batch is split into chunks of [`CHUNK_SIZE`], each with its own
/// substream, so the result does not depend on the rayon thread count.
pub fn run_setting(
    config: &ExperimentConfig,
    setting: MeasurementSetting,
    stream: RngStream,
) -> CountRecord {
    let detector = Detector::new(setting, config.noise.gamma);
    let n = config.n;
    (0..n.div_ceil(CHUNK_SIZE))
        .into_par_iter()
        .map(|chunk| {
            let len = CHUNK_SIZE.min(n - chunk * CHUNK_SIZE);
            tally_chunk(
                &config.model,
                &config.noise,
                &detector,
                stream.substream(chunk),
                len,
            )
        })
        .reduce(|| CountRecord::empty(setting), |acc, r| acc.merge(&r))
}

/// The eight counts entering the witness and singlet-weight estimators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedCount {
    HH,
    HV,
    VH,
    VV,
    DD,
    AA,
    LR,
    RL,
}

impl NamedCount {
    pub const ALL: [NamedCount; 8] = [
        NamedCount::HH,
        NamedCount::HV,
        NamedCount::VH,
        NamedCount::VV,
        NamedCount::DD,
        NamedCount::AA,
        NamedCount::LR,
        NamedCount::RL,
    ];

    pub fn basis(self) -> SingleQubitBasis {
        match self {
            NamedCount::HH | NamedCount::HV | NamedCount::VH | NamedCount::VV => {
                SingleQubitBasis::HV
            }
            NamedCount::DD | NamedCount::AA => SingleQubitBasis::DA,
            NamedCount::LR | NamedCount::RL => SingleQubitBasis::LR,
        }
    }

    /// Coincidence outcome `(A, B)` within the basis pair.
    pub fn outcome(self) -> (usize, usize) {
        match self {
            NamedCount::HH | NamedCount::DD => (0, 0),
            NamedCount::HV | NamedCount::LR => (0, 1),
            NamedCount::VH | NamedCount::RL => (1, 0),
            NamedCount::VV | NamedCount::AA => (1, 1),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            NamedCount::HH => "C_HH",
            NamedCount::HV => "C_HV",
            NamedCount::VH => "C_VH",
            NamedCount::VV => "C_VV",
            NamedCount::DD => "C_DD",
            NamedCount::AA => "C_AA",
            NamedCount::LR => "C_LR",
            NamedCount::RL => "C_RL",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCounts {
    #[serde(rename = "C_HH")]
    pub hh: u64,
    #[serde(rename = "C_HV")]
    pub hv: u64,
    #[serde(rename = "C_VH")]
    pub vh: u64,
    #[serde(rename = "C_VV")]
    pub vv: u64,
    #[serde(rename = "C_DD")]
    pub dd: u64,
    #[serde(rename = "C_AA")]
    pub aa: u64,
    #[serde(rename = "C_LR")]
    pub lr: u64,
    #[serde(rename = "C_RL")]
    pub rl: u64,
}

impl NamedCounts {
    /// Counts in `NamedCount::ALL` order.
    pub fn from_array(c: [u64; 8]) -> Self {
        NamedCounts {
            hh: c[0],
            hv: c[1],
            vh: c[2],
            vv: c[3],
            dd: c[4],
            aa: c[5],
            lr: c[6],
            rl: c[7],
        }
    }

    pub fn to_array(&self) -> [u64; 8] {
        [
            self.hh, self.hv, self.vh, self.vv, self.dd, self.aa, self.lr, self.rl,
        ]
    }

    pub fn get(&self, which: NamedCount) -> u64 {
        self.to_array()[which as usize]
    }

    pub fn set(&mut self, which: NamedCount, value: u64) {
        let mut arr = self.to_array();
        arr[which as usize] = value;
        *self = Self::from_array(arr);
    }

    /// `C_HH + C_HV + C_VH + C_VV`.
    pub fn standard_total(&self) -> u64 {
        self.hh + self.hv + self.vh + self.vv
    }

    /// `C_HH + C_VV + C_DD + C_AA − C_LR − C_RL`.
    pub fn witness_numerator(&self) -> i64 {
        (self.hh + self.vv + self.dd + self.aa) as i64 - (self.lr + self.rl) as i64
    }
}

/// `W_est = ½ · numerator / (C_HH + C_HV + C_VH + C_VV)`.
pub fn estimate_witness(counts: &NamedCounts) -> Result<f64, EstimateError> {
    let denom = counts.standard_total();
    if denom == 0 {
        return Err(EstimateError::ZeroDenominator("witness estimate"));
    }
    Ok(0.5 * counts.witness_numerator() as f64 / denom as f64)
}

/// Returns `(R_est, q_est)`.
pub fn estimate_q(counts: &NamedCounts) -> Result<(f64, f64), EstimateError> {
    if counts.hv == 0 || counts.vh == 0 {
        return Err(EstimateError::ZeroDenominator("singlet-weight estimate"));
    }
    let (hh, hv, vh, vv) = (
        counts.hh as f64,
        counts.hv as f64,
        counts.vh as f64,
        counts.vv as f64,
    );
    let r = 0.25 * (hh / vh + vv / hv + hh / hv + vv / vh);
    Ok((r, (1.0 - r) / (1.0 + r)))
}

/// Witness numerator normalized by `2N` instead of the standard-basis total.
pub fn witness_normalized_by_n(counts: &NamedCounts, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    0.5 * counts.witness_numerator() as f64 / n as f64
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrueEfficiencies {
    pub eps_ab: f64,
    pub eps_a: f64,
    pub eps_b: f64,
    pub eps: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasuredEfficiencies {
    pub eta_a: f64,
    pub eta_b: f64,
    pub eta: f64,
}

fn efficiencies_from(coincident: u64, lone_a: u64, lone_b: u64, n: u64) -> TrueEfficiencies {
    if n == 0 {
        return TrueEfficiencies::default();
    }
    let n = n as f64;
    let eps_ab = coincident as f64 / n;
    let eps_a = eps_ab + lone_a as f64 / n;
    let eps_b = eps_ab + lone_b as f64 / n;
    TrueEfficiencies {
        eps_ab,
        eps_a,
        eps_b,
        eps: 0.5 * (eps_a + eps_b),
    }
}

/// True efficiencies from a local HV/HV record, using the exclusive classes.
pub fn true_efficiencies(record: &CountRecord) -> TrueEfficiencies {
    efficiencies_from(
        record.coincidence_total(),
        record.singles_a.iter().sum(),
        record.singles_b.iter().sum(),
        record.n,
    )
}

/// True efficiencies counting every channel fire, so double detections can
/// push them above one.
pub fn channel_efficiencies(record: &CountRecord) -> TrueEfficiencies {
    let ch = &record.channels;
    efficiencies_from(
        ch.pair_fires.iter().flatten().sum(),
        ch.lone_a.iter().sum(),
        ch.lone_b.iter().sum(),
        record.n,
    )
}

/// `η_A = ε_AB/ε_B`, `η_B = ε_AB/ε_A`, `η = (η_A + η_B)/2`.
pub fn measured_efficiencies(
    eps_ab: f64,
    eps_a: f64,
    eps_b: f64,
) -> Result<MeasuredEfficiencies, EstimateError> {
    if eps_a <= 0.0 || eps_b <= 0.0 {
        return Err(EstimateError::ZeroSingleEfficiency);
    }
    let eta_a = eps_ab / eps_b;
    let eta_b = eps_ab / eps_a;
    Ok(MeasuredEfficiencies {
        eta_a,
        eta_b,
        eta: 0.5 * (eta_a + eta_b),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Efficiencies {
    #[serde(flatten)]
    pub true_eff: TrueEfficiencies,
    /// `None` when a single-detector efficiency is zero.
    pub measured: Option<MeasuredEfficiencies>,
    /// Same quantities counting raw channel fires.
    pub channel: TrueEfficiencies,
    /// Some efficiency exceeds one.
    pub ill_defined: bool,
}

impl Efficiencies {
    pub fn from_record(record: &CountRecord) -> Self {
        let true_eff = true_efficiencies(record);
        let channel = channel_efficiencies(record);
        let measured = measured_efficiencies(true_eff.eps_ab, true_eff.eps_a, true_eff.eps_b).ok();
        let over =
            |t: &TrueEfficiencies| [t.eps_ab, t.eps_a, t.eps_b, t.eps].iter().any(|&x| x > 1.0);
        let ill_defined = over(&true_eff) || over(&channel);
        Efficiencies {
            true_eff,
            measured,
            channel,
            ill_defined,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResultFlag {
    /// A denominator of the witness or singlet-weight estimator is zero.
    DegenerateCounts,
    /// Witness numerator is zero; `delta_w` holds the limiting fallback.
    WitnessErrorFallback,
    /// `delta_q` could not be computed (a standard count is zero).
    QErrorUndefined,
    /// Measured efficiencies undefined (no single-detector events).
    EtaUndefined,
    /// Some efficiency exceeds one.
    EfficiencyIllDefined,
}

impl ResultFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            ResultFlag::DegenerateCounts => "degenerate_counts",
            ResultFlag::WitnessErrorFallback => "witness_error_fallback",
            ResultFlag::QErrorUndefined => "q_error_undefined",
            ResultFlag::EtaUndefined => "eta_undefined",
            ResultFlag::EfficiencyIllDefined => "efficiency_ill_defined",
        }
    }
}

/// Estimates derived from the eight named counts of one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessEstimates {
    pub w_est: Option<f64>,
    pub r_est: Option<f64>,
    pub q_est: Option<f64>,
    pub delta_w: Option<f64>,
    pub delta_q: Option<f64>,
    pub w_normalized_by_n: f64,
    /// Standard-basis coincidence fraction, `ε_AB`.
    pub coincidence_yield: f64,
    pub flags: Vec<ResultFlag>,
}

impl WitnessEstimates {
    /// `n` is the batch size each count was drawn from.
    pub fn from_counts(counts: &NamedCounts, n: u64) -> Self {
        let mut flags = Vec::new();
        let w_est = estimate_witness(counts).ok();
        let rq = estimate_q(counts).ok();
        if w_est.is_none() || rq.is_none() {
            flags.push(ResultFlag::DegenerateCounts);
        }
        let delta_w = match (w_est, propagate_witness_error(counts, n)) {
            (None, _) => None,
            (Some(_), Ok(d)) => Some(d),
            (Some(_), Err(EstimateError::ZeroMean { fallback })) => {
                flags.push(ResultFlag::WitnessErrorFallback);
                Some(fallback)
            }
            (Some(_), Err(_)) => None,
        };
        let delta_q = match (rq, propagate_q_error(counts, n)) {
            (Some(_), Ok(d)) => Some(d),
            (Some(_), Err(_)) => {
                flags.push(ResultFlag::QErrorUndefined);
                None
            }
            (None, _) => None,
        };
        let coincidence_yield = if n == 0 {
            0.0
        } else {
            counts.standard_total() as f64 / n as f64
        };
        WitnessEstimates {
            w_est,
            r_est: rq.map(|(r, _)| r),
            q_est: rq.map(|(_, q)| q),
            delta_w,
            delta_q,
            w_normalized_by_n: witness_normalized_by_n(counts, n),
            coincidence_yield,
            flags,
        }
    }
}

/// One batch of realizations with the stream it was drawn from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Batch {
    pub label: String,
    pub stream: RngStream,
    pub record: CountRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessResult {
    pub config: ExperimentConfig,
    pub sweep_index: u64,
    pub counts: NamedCounts,
    #[serde(flatten)]
    pub estimates: WitnessEstimates,
    /// Local scheme only.
    pub efficiencies: Option<Efficiencies>,
    pub batches: Vec<Batch>,
}

impl WitnessResult {
    pub fn flags(&self) -> Vec<ResultFlag> {
        let mut flags = self.estimates.flags.clone();
        if let Some(eff) = &self.efficiencies {
            if eff.measured.is_none() {
                flags.push(ResultFlag::EtaUndefined);
            }
            if eff.ill_defined {
                flags.push(ResultFlag::EfficiencyIllDefined);
            }
        }
        flags
    }

    pub fn is_degenerate(&self) -> bool {
        self.estimates.flags.contains(&ResultFlag::DegenerateCounts)
    }
}

fn batch_plan(config: &ExperimentConfig) -> Vec<(String, MeasurementSetting)> {
    let setting = |b| MeasurementSetting::new(config.scheme, b, b);
    match config.batch_policy {
        BatchPolicy::PerBasis => SingleQubitBasis::ALL
            .iter()
            .map(|&b| (setting(b).label(), setting(b)))
            .collect(),
        BatchPolicy::PerCount => NamedCount::ALL
            .iter()
            .map(|c| {
                let s = setting(c.basis());
                (format!("{}#{}", s.label(), c.label()), s)
            })
            .collect(),
    }
}

fn extract_counts(policy: BatchPolicy, batches: &[Batch]) -> NamedCounts {
    let mut counts = NamedCounts::default();
    for (k, which) in NamedCount::ALL.into_iter().enumerate() {
        let (i, j) = which.outcome();
        let record = match policy {
            BatchPolicy::PerBasis => {
                let basis_index = SingleQubitBasis::ALL
                    .iter()
                    .position(|&b| b == which.basis())
                    .unwrap();
                &batches[basis_index].record
            }
            BatchPolicy::PerCount => &batches[k].record,
        };
        counts.set(which, record.coincidences[i][j]);
    }
    counts
}

/// Runs the full witness experiment for sweep position `sweep_index`.
pub fn run_witness_experiment_at(
    config: &ExperimentConfig,
    sweep_index: u64,
) -> Result<WitnessResult, ConfigError> {
    config.validate()?;
    let batches: Vec<Batch> = batch_plan(config)
        .into_iter()
        .map(|(label, setting)| {
            let stream = RngStream::new(config.master_seed, stable_hash(&label, sweep_index));
            let record = run_setting(config, setting, stream);
            Batch {
                label,
                stream,
                record,
            }
        })
        .collect();
    let counts = extract_counts(config.batch_policy, &batches);
    let estimates = WitnessEstimates::from_counts(&counts, config.n);
    // Under either policy the first batch is a HV/HV batch.
    let efficiencies = match config.scheme {
        Scheme::Local => Some(Efficiencies::from_record(&batches[0].record)),
        Scheme::Joint => None,
    };
    Ok(WitnessResult {
        config: *config,
        sweep_index,
        counts,
        estimates,
        efficiencies,
        batches,
    })
}

pub fn run_witness_experiment(config: &ExperimentConfig) -> Result<WitnessResult, ConfigError> {
    run_witness_experiment_at(config, 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweptParameter {
    Q,
    GammaOverSigma,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    pub result: WitnessResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub parameter: SweptParameter,
    pub rows: Vec<SweepRow>,
}

fn sweep(
    config: &ExperimentConfig,
    values: &[f64],
    parameter: SweptParameter,
    apply: impl Fn(ExperimentConfig, f64) -> ExperimentConfig,
) -> Result<SweepResult, ConfigError> {
    if values.is_empty() {
        return Err(ConfigError::invalid("grid", "parameter grid is empty"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let configs: Vec<ExperimentConfig> = sorted.iter().map(|&v| apply(*config, v)).collect();
    for c in &configs {
        c.validate()?;
    }
    let rows = sorted
        .iter()
        .zip(&configs)
        .enumerate()
        .map(|(i, (&param, c))| {
            Ok(SweepRow {
                param,
                result: run_witness_experiment_at(c, i as u64)?,
            })
        })
        .collect::<Result<Vec<_>, ConfigError>>()?;
    Ok(SweepResult { parameter, rows })
}

/// One experiment per singlet weight; rows sorted by `q`.
pub fn sweep_q(config: &ExperimentConfig, q_values: &[f64]) -> Result<SweepResult, ConfigError> {
    sweep(config, q_values, SweptParameter::Q, |c, q| c.with_q(q))
}

/// One experiment per threshold, given as `γ/σ`; rows sorted by threshold.
pub fn sweep_gamma(
    config: &ExperimentConfig,
    gamma_ratios: &[f64],
) -> Result<SweepResult, ConfigError> {
    sweep(
        config,
        gamma_ratios,
        SweptParameter::GammaOverSigma,
        |c, g| c.with_gamma_ratio(g),
    )
}

/// Default singlet weights for q sweeps.
pub fn default_q_grid() -> Vec<f64> {
    vec![0.0, 0.2, 1.0 / 3.0, 0.4, 0.6, 0.8, 1.0]
}
