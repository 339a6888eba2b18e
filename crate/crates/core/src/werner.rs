//! Closed-form quantum predictions for Werner states.
//!
//! These are used as oracles for the sampler and for comparing estimated
//! witness values against theory.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::linalg::{tensor, CMat4, CVec4, SingleQubitBasis};

/// Singlet amplitudes `[0, 1, -1, 0]/√2` in the standard basis.
pub fn singlet_amplitudes() -> CVec4 {
    CVec4::from_real([0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0])
}

/// `ρ_q = q·|ψ_s⟩⟨ψ_s| + (1-q)·I/4`.
pub fn density_matrix(q: f64) -> CMat4 {
    singlet_amplitudes().outer().scale(q) + CMat4::identity().scale((1.0 - q) / 4.0)
}

/// Expected witness value `Tr[W ρ_q] = (1 - 3q)/4`.
pub fn witness_expectation(q: f64) -> f64 {
    (1.0 - 3.0 * q) / 4.0
}

/// Diagonal of `ρ_q` in the standard basis: `(HH, HV, VH, VV)`.
pub fn standard_diagonal(q: f64) -> [f64; 4] {
    let same = (1.0 - q) / 4.0;
    let opposite = (1.0 + q) / 4.0;
    [same, opposite, opposite, same]
}

/// Product-basis ket `|basis_a[i]⟩ ⊗ |basis_b[j]⟩`.
pub fn product_ket(
    basis_a: SingleQubitBasis,
    i: usize,
    basis_b: SingleQubitBasis,
    j: usize,
) -> CVec4 {
    tensor(&basis_a.unitary(), &basis_b.unitary()).apply(&CVec4::basis(2 * i + j))
}

/// The six-projector witness operator
/// `½[HH + VV + DD + AA − LR − RL]` as a 4×4 matrix.
pub fn witness_operator() -> CMat4 {
    use SingleQubitBasis::*;
    let p = |b: SingleQubitBasis, i: usize, j: usize| product_ket(b, i, b, j).outer();
    let positive = p(HV, 0, 0) + p(HV, 1, 1) + p(DA, 0, 0) + p(DA, 1, 1);
    let negative = p(LR, 0, 1) + p(LR, 1, 0);
    (positive - negative).scale(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singlet_is_normalized_with_unit_trace() {
        let s = singlet_amplitudes();
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!((s.outer().trace().re - 1.0).abs() < 1e-15);
        assert_eq!(s[0].re, 0.0);
        assert_eq!(s[3].re, 0.0);
        assert!((s[1].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((s[2].re + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
    }

    #[test]
    fn witness_trace_matches_closed_form() {
        let w = witness_operator();
        for q in [0.0, 0.2, 1.0 / 3.0, 0.4, 0.6, 0.8, 1.0] {
            let tr = (w * density_matrix(q)).trace();
            assert!((tr.re - witness_expectation(q)).abs() < 1e-12, "q={q}");
            assert!(tr.im.abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_matches_density_matrix() {
        for q in [0.0, 0.25, 1.0] {
            let rho = density_matrix(q);
            let d = standard_diagonal(q);
            for (i, expected) in d.iter().enumerate() {
                assert!((rho.0[i][i].re - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn witness_range_endpoints() {
        assert_eq!(witness_expectation(0.0), 0.25);
        assert_eq!(witness_expectation(1.0), -0.5);
        assert!(witness_expectation(1.0 / 3.0).abs() < 1e-15);
    }
}
