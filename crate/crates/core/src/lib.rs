//! Monte Carlo simulation of a classical, threshold-detection model of an
//! entanglement-witness experiment on Werner states.
//!
//! A realization is a complex 4-vector `a = s·α̃ + v`: a randomly prepared
//! state `α̃` plus fixed-norm noise `v`. Measurements rotate `a` into a
//! polarization basis and register detector fires where amplitudes exceed a
//! threshold `γ`. Coincident detections are postselected and fed into the
//! witness and singlet-weight estimators.

pub mod cli_io;
pub mod detection;
pub mod error;
pub mod linalg;
pub mod protocol;
pub mod rng;
pub mod sampler;
pub mod stats;
pub mod werner;

pub use detection::{MeasurementSetting, Scheme};
pub use error::{ConfigError, EstimateError};
pub use protocol::{
    run_witness_experiment, sweep_gamma, sweep_q, BatchPolicy, ExperimentConfig, NamedCounts,
    SweepResult, WitnessResult,
};
pub use sampler::{MixtureKind, MixtureModel, NoiseParams};
