//! Threshold-crossing measurements.
//!
//! A joint measurement rotates the whole two-qubit vector into the product
//! basis and accepts only a single component above threshold. A local
//! measurement hands the same realization to two devices; each rotates its
//! own qubit and compares the norm of each per-outcome projection against the
//! threshold, with one detector per outcome channel.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::linalg::{
    qubit_a_weight, qubit_b_weight, tensor, CMat2, CMat4, CVec4, SingleQubitBasis,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Joint,
    Local,
}

impl FromStr for Scheme {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "joint" => Ok(Scheme::Joint),
            "local" => Ok(Scheme::Local),
            other => Err(ConfigError::invalid(
                "scheme",
                format!("expected local|joint, got `{other}`"),
            )),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Joint => "joint",
            Scheme::Local => "local",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasurementSetting {
    pub scheme: Scheme,
    pub basis_a: SingleQubitBasis,
    pub basis_b: SingleQubitBasis,
}

impl MeasurementSetting {
    pub fn new(scheme: Scheme, basis_a: SingleQubitBasis, basis_b: SingleQubitBasis) -> Self {
        MeasurementSetting {
            scheme,
            basis_a,
            basis_b,
        }
    }

    pub fn joint(basis_a: SingleQubitBasis, basis_b: SingleQubitBasis) -> Self {
        Self::new(Scheme::Joint, basis_a, basis_b)
    }

    pub fn local(basis_a: SingleQubitBasis, basis_b: SingleQubitBasis) -> Self {
        Self::new(Scheme::Local, basis_a, basis_b)
    }

    /// Human-readable label, e.g. `local:HV/HV`. Also used to derive RNG streams.
    pub fn label(&self) -> String {
        format!("{}:{}/{}", self.scheme, self.basis_a, self.basis_b)
    }

    /// Outcome label for a coincidence `(i, j)`, e.g. `LR`.
    pub fn outcome_label(&self, i: usize, j: usize) -> String {
        format!(
            "{}{}",
            self.basis_a.outcome_labels()[i],
            self.basis_b.outcome_labels()[j]
        )
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JointOutcome {
    /// Exactly one rotated component crossed; index `2i + j`.
    Detected(usize),
    NoDetection,
    MultipleDetection,
}

/// Channel detector flags for one local realization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalEvent {
    pub fire_a: [bool; 2],
    pub fire_b: [bool; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocalClass {
    Coincidence(usize, usize),
    SingleA(usize),
    SingleB(usize),
    NoDetection,
    /// Some side fired both channels.
    DoubleInvolved(LocalEvent),
}

/// Measurement setting with its rotations precomputed for a fixed threshold.
#[derive(Clone, Copy, Debug)]
pub struct Detector {
    setting: MeasurementSetting,
    gamma_sq: f64,
    // Stored already adjointed, so each rotation is a plain matrix-vector product.
    joint_rotation: CMat4,
    rotation_a: CMat4,
    rotation_b: CMat4,
}

impl Detector {
    pub fn new(setting: MeasurementSetting, gamma: f64) -> Self {
        let ua = setting.basis_a.unitary();
        let ub = setting.basis_b.unitary();
        let id = CMat2::identity();
        Detector {
            setting,
            gamma_sq: gamma * gamma,
            joint_rotation: tensor(&ua, &ub).adjoint(),
            rotation_a: tensor(&ua, &id).adjoint(),
            rotation_b: tensor(&id, &ub).adjoint(),
        }
    }

    pub fn setting(&self) -> MeasurementSetting {
        self.setting
    }

    #[inline]
    pub fn measure_joint(&self, a: &CVec4) -> JointOutcome {
        let rotated = self.joint_rotation.apply(a);
        let mut hit = None;
        for i in 0..4 {
            if rotated[i].norm_sqr() > self.gamma_sq {
                if hit.is_some() {
                    return JointOutcome::MultipleDetection;
                }
                hit = Some(i);
            }
        }
        hit.map_or(JointOutcome::NoDetection, JointOutcome::Detected)
    }

    #[inline]
    pub fn measure_local(&self, a: &CVec4) -> LocalEvent {
        let side_a = self.rotation_a.apply(a);
        let side_b = self.rotation_b.apply(a);
        LocalEvent {
            fire_a: [0, 1].map(|k| qubit_a_weight(&side_a, k) > self.gamma_sq),
            fire_b: [0, 1].map(|k| qubit_b_weight(&side_b, k) > self.gamma_sq),
        }
    }
}

/// Joint measurement of `a` in the setting's product basis at threshold `gamma`.
pub fn measure_joint(a: &CVec4, setting: &MeasurementSetting, gamma: f64) -> JointOutcome {
    debug_assert_eq!(setting.scheme, Scheme::Joint);
    Detector::new(*setting, gamma).measure_joint(a)
}

/// Local measurement of `a`: both sides see the same realization.
pub fn measure_local(a: &CVec4, setting: &MeasurementSetting, gamma: f64) -> LocalEvent {
    debug_assert_eq!(setting.scheme, Scheme::Local);
    Detector::new(*setting, gamma).measure_local(a)
}

fn single_channel(flags: [bool; 2]) -> Option<usize> {
    match flags {
        [true, false] => Some(0),
        [false, true] => Some(1),
        _ => None,
    }
}

pub fn classify_local(e: LocalEvent) -> LocalClass {
    if e.fire_a == [true, true] || e.fire_b == [true, true] {
        return LocalClass::DoubleInvolved(e);
    }
    match (single_channel(e.fire_a), single_channel(e.fire_b)) {
        (Some(i), Some(j)) => LocalClass::Coincidence(i, j),
        (Some(i), None) => LocalClass::SingleA(i),
        (None, Some(j)) => LocalClass::SingleB(j),
        (None, None) => LocalClass::NoDetection,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{adjoint_apply, C64};
    use crate::rng::RngStream;
    use crate::sampler::{sample_signal, MixtureKind, MixtureModel, NoiseParams};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;
    use SingleQubitBasis::*;

    const GAMMA: f64 = 1.0;

    fn arb_vec4() -> impl Strategy<Value = CVec4> {
        proptest::array::uniform4((-1.5f64..1.5, -1.5f64..1.5).prop_map(|(r, i)| C64::new(r, i)))
            .prop_map(CVec4)
    }

    fn arb_basis() -> impl Strategy<Value = SingleQubitBasis> {
        prop_oneof![Just(HV), Just(DA), Just(LR)]
    }

    #[test]
    fn joint_single_crossing() {
        let a = CVec4::from_real([1.5 * GAMMA, 0.0, 0.0, 0.0]);
        assert_eq!(
            measure_joint(&a, &MeasurementSetting::joint(HV, HV), GAMMA),
            JointOutcome::Detected(0)
        );
    }

    #[test]
    fn joint_multiple_crossing() {
        let a = CVec4::from_real([1.1 * GAMMA, 1.1 * GAMMA, 0.0, 0.0]);
        assert_eq!(
            measure_joint(&a, &MeasurementSetting::joint(HV, HV), GAMMA),
            JointOutcome::MultipleDetection
        );
    }

    #[test]
    fn joint_no_crossing() {
        let h = FRAC_1_SQRT_2 * GAMMA;
        let a = CVec4::from_real([0.0, h, -h, 0.0]);
        assert_eq!(
            measure_joint(&a, &MeasurementSetting::joint(HV, HV), GAMMA),
            JointOutcome::NoDetection
        );
    }

    #[test]
    fn joint_boundary_is_not_a_crossing() {
        let a = CVec4::from_real([GAMMA, 0.0, 0.0, 0.0]);
        assert_eq!(
            measure_joint(&a, &MeasurementSetting::joint(HV, HV), GAMMA),
            JointOutcome::NoDetection
        );
    }

    #[test]
    fn local_constructed_coincidence() {
        let a = CVec4::from_real([0.0, 1.2 * GAMMA, 0.2 * GAMMA, 0.0]);
        let e = measure_local(&a, &MeasurementSetting::local(HV, HV), GAMMA);
        assert_eq!(
            e,
            LocalEvent {
                fire_a: [true, false],
                fire_b: [false, true]
            }
        );
        assert_eq!(classify_local(e), LocalClass::Coincidence(0, 1));
    }

    #[test]
    fn local_zero_signal_fires_nothing() {
        let e = measure_local(&CVec4::zero(), &MeasurementSetting::local(LR, DA), GAMMA);
        assert_eq!(e, LocalEvent::default());
        assert_eq!(classify_local(e), LocalClass::NoDetection);
    }

    #[test]
    fn classification_table() {
        let ev = |a0, a1, b0, b1| LocalEvent {
            fire_a: [a0, a1],
            fire_b: [b0, b1],
        };
        assert_eq!(
            classify_local(ev(true, false, false, true)),
            LocalClass::Coincidence(0, 1)
        );
        assert_eq!(
            classify_local(ev(true, false, false, false)),
            LocalClass::SingleA(0)
        );
        assert_eq!(
            classify_local(ev(false, false, true, false)),
            LocalClass::SingleB(0)
        );
        let double = ev(true, true, true, false);
        assert_eq!(classify_local(double), LocalClass::DoubleInvolved(double));
        let double_b = ev(false, false, true, true);
        assert_eq!(
            classify_local(double_b),
            LocalClass::DoubleInvolved(double_b)
        );
    }

    fn discrete_signals(q: f64, seed: u64) -> impl Iterator<Item = CVec4> {
        let model = MixtureModel::new(MixtureKind::Discrete, q).unwrap();
        let params = NoiseParams::default();
        let mut rng = RngStream::new(seed, 0).rng();
        std::iter::repeat_with(move || sample_signal(&model, &params, &mut rng))
    }

    #[test]
    fn joint_exclusivity_at_default_threshold() {
        let detectors: Vec<_> = SingleQubitBasis::ALL
            .iter()
            .map(|&b| Detector::new(MeasurementSetting::joint(b, b), GAMMA))
            .collect();
        for (k, q) in [0.0, 0.5, 1.0].into_iter().enumerate() {
            let violations = discrete_signals(q, 20 + k as u64)
                .take(1_000_000 / 3)
                .flat_map(|a| detectors.iter().map(move |d| d.measure_joint(&a)))
                .filter(|o| *o == JointOutcome::MultipleDetection)
                .count();
            assert_eq!(violations, 0, "q={q}");
        }
    }

    #[test]
    fn local_same_side_double_impossible_at_default_threshold() {
        let detectors: Vec<_> = SingleQubitBasis::ALL
            .iter()
            .map(|&b| Detector::new(MeasurementSetting::local(b, b), GAMMA))
            .collect();
        let violations = discrete_signals(0.5, 30)
            .take(1_000_000 / 3)
            .flat_map(|a| detectors.iter().map(move |d| d.measure_local(&a)))
            .filter(|e| e.fire_a == [true, true] || e.fire_b == [true, true])
            .count();
        assert_eq!(violations, 0);
    }

    #[test]
    fn local_and_joint_postselected_frequencies_agree_at_q0() {
        // Raw yields differ by scheme; the postselected outcome distribution must not.
        let local = Detector::new(MeasurementSetting::local(HV, HV), GAMMA);
        let joint = Detector::new(MeasurementSetting::joint(HV, HV), GAMMA);
        let mut lc = [0f64; 4];
        let mut jc = [0f64; 4];
        for a in discrete_signals(0.0, 40).take(500_000) {
            if let LocalClass::Coincidence(i, j) = classify_local(local.measure_local(&a)) {
                lc[2 * i + j] += 1.0;
            }
            if let JointOutcome::Detected(k) = joint.measure_joint(&a) {
                jc[k] += 1.0;
            }
        }
        let (ln, jn): (f64, f64) = (lc.iter().sum(), jc.iter().sum());
        for k in 0..4 {
            let (pl, pj) = (lc[k] / ln, jc[k] / jn);
            let se = (pl * (1.0 - pl) / ln + pj * (1.0 - pj) / jn).sqrt();
            assert!((pl - pj).abs() <= 3.0 * se, "outcome {k}: {pl} vs {pj}");
        }
    }

    proptest! {
        #[test]
        fn joint_basis_consistency(a in arb_vec4(), gamma in 0.2f64..1.5) {
            let rotated = adjoint_apply(&tensor(&CMat2::hadamard(), &CMat2::hadamard()), &a);
            prop_assert_eq!(
                measure_joint(&a, &MeasurementSetting::joint(DA, DA), gamma),
                measure_joint(&rotated, &MeasurementSetting::joint(HV, HV), gamma)
            );
        }

        #[test]
        fn raising_threshold_only_turns_flags_off(
            a in arb_vec4(), ba in arb_basis(), bb in arb_basis(), lo in 0.1f64..1.5, bump in 0.0f64..0.5
        ) {
            let low = measure_local(&a, &MeasurementSetting::local(ba, bb), lo);
            let high = measure_local(&a, &MeasurementSetting::local(ba, bb), lo + bump);
            for k in 0..2 {
                prop_assert!(!high.fire_a[k] || low.fire_a[k]);
                prop_assert!(!high.fire_b[k] || low.fire_b[k]);
            }
            let jl = Detector::new(MeasurementSetting::joint(ba, bb), lo).joint_rotation.apply(&a);
            let crossings = |g: f64| (0..4).filter(|&i| jl[i].norm() > g).count();
            prop_assert!(crossings(lo + bump) <= crossings(lo));
        }
    }
}
