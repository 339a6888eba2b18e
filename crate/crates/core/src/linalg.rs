//! Fixed-size complex arithmetic for one- and two-qubit objects.
//!
//! Two-qubit vectors use the index order `(00, 01, 10, 11)`, i.e.
//! `(HH, HV, VH, VV)`: the high bit is qubit A, the low bit is qubit B.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Default tolerance for unitarity and projector checks.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Single-qubit amplitude vector.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CVec2(pub [C64; 2]);

/// Two-qubit amplitude vector in the standard basis.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct CVec4(pub [C64; 4]);

impl CVec2 {
    pub fn new(c0: C64, c1: C64) -> Self {
        CVec2([c0, c1])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }
}

impl CVec4 {
    pub const fn zero() -> Self {
        CVec4([ZERO; 4])
    }

    /// Standard basis vector `e_index`.
    pub fn basis(index: usize) -> Self {
        let mut v = Self::zero();
        v.0[index] = ONE;
        v
    }

    pub fn from_real(re: [f64; 4]) -> Self {
        CVec4(re.map(|x| C64::new(x, 0.0)))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: f64) -> Self {
        CVec4(self.0.map(|c| c * k))
    }

    /// Outer product `self · self†`.
    pub fn outer(&self) -> CMat4 {
        let mut m = CMat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[i] * self.0[j].conj();
            }
        }
        m
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for CVec4 {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for CVec4 {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.0[i]
    }
}

impl Add for CVec4 {
    type Output = CVec4;
    fn add(self, rhs: CVec4) -> CVec4 {
        CVec4([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
            self.0[3] + rhs.0[3],
        ])
    }
}

impl Sub for CVec4 {
    type Output = CVec4;
    fn sub(self, rhs: CVec4) -> CVec4 {
        CVec4([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
            self.0[3] - rhs.0[3],
        ])
    }
}

/// Row-major 2×2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat2(pub [[C64; 2]; 2]);

impl CMat2 {
    pub fn identity() -> Self {
        CMat2([[ONE, ZERO], [ZERO, ONE]])
    }

    /// Hadamard matrix; columns are |D⟩ and |A⟩.
    pub fn hadamard() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        CMat2([[h, h], [h, -h]])
    }

    /// Circular-polarization matrix `[[1, 1], [i, -i]]/√2`; columns are |L⟩ and |R⟩.
    pub fn circular() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let ih = C64::new(0.0, FRAC_1_SQRT_2);
        CMat2([[h, h], [ih, -ih]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        CMat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn apply(&self, v: &CVec2) -> CVec2 {
        let m = &self.0;
        CVec2([
            m[0][0] * v.0[0] + m[0][1] * v.0[1],
            m[1][0] * v.0[0] + m[1][1] * v.0[1],
        ])
    }

    pub fn column(&self, j: usize) -> CVec2 {
        CVec2([self.0[0][j], self.0[1][j]])
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.adjoint() * *self).max_abs_diff(&Self::identity()) <= tol
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }
}

impl Mul for CMat2 {
    type Output = CMat2;
    fn mul(self, rhs: CMat2) -> CMat2 {
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        CMat2(out)
    }
}

/// Row-major 4×4 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat4(pub [[C64; 4]; 4]);

impl CMat4 {
    pub const fn zero() -> Self {
        CMat4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        let mut m = Self::zero();
        for (i, &x) in d.iter().enumerate() {
            m.0[i][i] = C64::new(x, 0.0);
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn apply(&self, a: &CVec4) -> CVec4 {
        let mut out = CVec4::zero();
        for (i, row) in self.0.iter().enumerate() {
            out.0[i] = row[0] * a.0[0] + row[1] * a.0[1] + row[2] * a.0[2] + row[3] * a.0[3];
        }
        out
    }

    pub fn scale(&self, k: f64) -> Self {
        CMat4(self.0.map(|row| row.map(|c| c * k)))
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    pub fn frobenius_diff(&self, other: &Self) -> f64 {
        let mut acc = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                acc += (self.0[i][j] - other.0[i][j]).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.adjoint() * *self).max_abs_diff(&Self::identity()) <= tol
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        (*self * *self).max_abs_diff(self) <= tol && self.adjoint().max_abs_diff(self) <= tol
    }
}

impl Mul for CMat4 {
    type Output = CMat4;
    fn mul(self, rhs: CMat4) -> CMat4 {
        let mut out = CMat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        out
    }
}

impl Add for CMat4 {
    type Output = CMat4;
    fn add(self, rhs: CMat4) -> CMat4 {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for CMat4 {
    type Output = CMat4;
    fn sub(self, rhs: CMat4) -> CMat4 {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }
}

/// Kronecker product: `(u⊗v)[2i+k][2j+l] = u[i][j]·v[k][l]`.
pub fn tensor(u: &CMat2, v: &CMat2) -> CMat4 {
    let mut out = CMat4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + k][2 * j + l] = u.0[i][j] * v.0[k][l];
                }
            }
        }
    }
    out
}

/// Computes `m†·a` without materializing the adjoint.
pub fn adjoint_apply(m: &CMat4, a: &CVec4) -> CVec4 {
    let mut out = CVec4::zero();
    for (i, slot) in out.0.iter_mut().enumerate() {
        *slot = (0..4).map(|k| m.0[k][i].conj() * a.0[k]).sum();
    }
    out
}

/// Projector onto outcome `outcome` of qubit A (the high index bit).
///
/// Panics if `outcome > 1`.
pub fn projector_qubit_a(outcome: usize) -> CMat4 {
    assert!(outcome < 2, "qubit outcome must be 0 or 1, got {outcome}");
    let mut d = [0.0; 4];
    d[2 * outcome] = 1.0;
    d[2 * outcome + 1] = 1.0;
    CMat4::diagonal(d)
}

/// Projector onto outcome `outcome` of qubit B (the low index bit).
///
/// Panics if `outcome > 1`.
pub fn projector_qubit_b(outcome: usize) -> CMat4 {
    assert!(outcome < 2, "qubit outcome must be 0 or 1, got {outcome}");
    let mut d = [0.0; 4];
    d[outcome] = 1.0;
    d[2 + outcome] = 1.0;
    CMat4::diagonal(d)
}

/// Squared norm of `P_A(outcome)·a`, i.e. `|a_{o0}|² + |a_{o1}|²`.
#[inline]
pub fn qubit_a_weight(a: &CVec4, outcome: usize) -> f64 {
    a.0[2 * outcome].norm_sqr() + a.0[2 * outcome + 1].norm_sqr()
}

/// Squared norm of `P_B(outcome)·a`, i.e. `|a_{0o}|² + |a_{1o}|²`.
#[inline]
pub fn qubit_b_weight(a: &CVec4, outcome: usize) -> f64 {
    a.0[outcome].norm_sqr() + a.0[2 + outcome].norm_sqr()
}

/// One of the three polarization bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SingleQubitBasis {
    /// Horizontal / vertical (identity).
    HV,
    /// Diagonal / antidiagonal (Hadamard).
    DA,
    /// Left / right circular.
    LR,
}

impl SingleQubitBasis {
    pub const ALL: [SingleQubitBasis; 3] = [
        SingleQubitBasis::HV,
        SingleQubitBasis::DA,
        SingleQubitBasis::LR,
    ];

    /// Unitary whose columns are the outcome-0 and outcome-1 kets.
    pub fn unitary(self) -> CMat2 {
        match self {
            SingleQubitBasis::HV => CMat2::identity(),
            SingleQubitBasis::DA => CMat2::hadamard(),
            SingleQubitBasis::LR => CMat2::circular(),
        }
    }

    /// Polarization letters for outcomes 0 and 1.
    pub fn outcome_labels(self) -> [&'static str; 2] {
        match self {
            SingleQubitBasis::HV => ["H", "V"],
            SingleQubitBasis::DA => ["D", "A"],
            SingleQubitBasis::LR => ["L", "R"],
        }
    }
}

impl fmt::Display for SingleQubitBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SingleQubitBasis::HV => "HV",
            SingleQubitBasis::DA => "DA",
            SingleQubitBasis::LR => "LR",
        };
        f.write_str(s)
    }
}
