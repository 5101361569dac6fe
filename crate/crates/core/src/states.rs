//! Two-qubit X states and the local projective-measurement channel.
//!
//! Basis ordering is `|q_A q_B⟩ ↦ 2 q_A + q_B`, so qubit A is the first
//! tensor factor.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator};
use crate::xxz::Correlators;

pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// Density matrix of the form
///
/// ```text
/// | a  0  0  w |
/// | 0  b  z  0 |
/// | 0  z* c  0 |
/// | w* 0  0  d |
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XState {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub z: Complex64,
    pub w: Complex64,
}

impl XState {
    pub fn new(a: f64, b: f64, c: f64, d: f64, z: Complex64, w: Complex64) -> Result<Self> {
        let values = [a, b, c, d, z.re, z.im, w.re, w.im];
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: k, col: k });
        }
        let trace = a + b + c + d;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
        }
        if let Some(p) = [a, b, c, d].iter().find(|p| **p < -PSD_TOL) {
            return Err(Error::InvalidState(format!("negative population {p:.3e}")));
        }
        let [a, b, c, d] = [a, b, c, d].map(|p| p.max(0.0));
        if z.norm() > (b * c).sqrt() + PSD_TOL {
            return Err(Error::InvalidState(format!(
                "inner coherence |z| = {} exceeds sqrt(bc) = {}",
                z.norm(),
                (b * c).sqrt()
            )));
        }
        if w.norm() > (a * d).sqrt() + PSD_TOL {
            return Err(Error::InvalidState(format!(
                "outer coherence |w| = {} exceeds sqrt(ad) = {}",
                w.norm(),
                (a * d).sqrt()
            )));
        }
        Ok(Self { a, b, c, d, z, w })
    }

    pub fn diagonal(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let zero = Complex64::new(0.0, 0.0);
        Self::new(a, b, c, d, zero, zero)
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::from_real_diagonal(&[self.a, self.b, self.c, self.d]);
        m[(1, 2)] = self.z;
        m[(2, 1)] = self.z.conj();
        m[(0, 3)] = self.w;
        m[(3, 0)] = self.w.conj();
        m
    }

    pub fn to_operator(&self) -> HermitianOperator {
        HermitianOperator::new(self.matrix()).expect("X state is Hermitian by construction")
    }

    /// Eigenvalues of the two 2x2 blocks: `{b, c}` block then `{a, d}` block.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let block = |p: f64, q: f64, off: Complex64| {
            let mean = 0.5 * (p + q);
            let rad = (0.25 * (p - q) * (p - q) + off.norm_sqr()).sqrt();
            [mean - rad, mean + rad]
        };
        let [l0, l1] = block(self.b, self.c, self.z);
        let [l2, l3] = block(self.a, self.d, self.w);
        [l0, l1, l2, l3]
    }
}

/// Local measurement basis on qubit A:
/// `|Ω₀⟩ = cos θ |0⟩ + e^{iφ} sin θ |1⟩`, `|Ω₁⟩ = -e^{-iφ} sin θ |0⟩ + cos θ |1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub const COMPUTATIONAL: Self = Self { theta: 0.0, phi: 0.0 };

    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        use std::f64::consts::PI;
        if !(0.0..=PI).contains(&theta) || !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::Domain(format!(
                "basis angles out of range: theta = {theta}, phi = {phi}"
            )));
        }
        Ok(Self { theta, phi })
    }

    pub fn vectors(&self) -> [[Complex64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        let e = Complex64::from_polar(1.0, self.phi);
        [
            [Complex64::new(c, 0.0), e * s],
            [-e.conj() * s, Complex64::new(c, 0.0)],
        ]
    }

    /// Rank-one projectors on qubit A.
    pub fn projectors(&self) -> [ComplexMatrix; 2] {
        self.vectors().map(|v| {
            let mut p = ComplexMatrix::zeros(2);
            for i in 0..2 {
                for j in 0..2 {
                    p[(i, j)] = v[i] * v[j].conj();
                }
            }
            p
        })
    }
}

/// Pair state of the XXZ chain from its two correlators.
pub fn xxz_state(c: &Correlators) -> Result<XState> {
    let outer = 0.25 * (1.0 + c.zz);
    let inner = 0.25 * (1.0 - c.zz);
    let zero = Complex64::new(0.0, 0.0);
    XState::new(outer, inner, inner, outer, Complex64::new(0.5 * c.xx, 0.0), zero).map_err(|e| {
        Error::InvalidCorrelator {
            delta: c.delta,
            r: c.r,
            reason: e.to_string(),
        }
    })
}

/// Variational angle of the Hartree–Fock ground state: `cos 2α = min(λ, 1)`.
pub fn lmg_angle(lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    Ok(0.5 * lambda.min(1.0).acos())
}

/// Two-mode reduced state of the LMG Hartree–Fock ground state.
///
/// `same_mode` pairs the two levels of one mode (pure, entangled);
/// otherwise the modes are distinct and the state is diagonal.
pub fn lmg_pair_state(lambda: f64, same_mode: bool) -> Result<XState> {
    let alpha = lmg_angle(lambda)?;
    let (s, c) = alpha.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let zero = Complex64::new(0.0, 0.0);
    if same_mode {
        XState::new(0.0, c2, s2, 0.0, Complex64::new(s * c, 0.0), zero)
    } else {
        XState::diagonal(s2 * c2, c2 * c2, s2 * s2, s2 * c2)
    }
}

/// `Σ_j (Π_j ⊗ I) ρ (Π_j ⊗ I)`.
pub fn project_measure_a(rho: &HermitianOperator, basis: &MeasurementBasis) -> Result<HermitianOperator> {
    if rho.dim() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            found: rho.dim(),
        });
    }
    let id = ComplexMatrix::identity(2);
    let mut out = ComplexMatrix::zeros(4);
    for p in basis.projectors() {
        let big = p.kron(&id);
        out = &out + &(&(&big * rho.matrix()) * &big);
    }
    HermitianOperator::new(out)
}
