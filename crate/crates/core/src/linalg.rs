//! Dense complex linear algebra for one- and two-qubit operators.
//!
//! Everything here works on square matrices of dimension 2, 3 or 4, so the
//! eigensolver is a cyclic Jacobi iteration with a fixed pivot order: it is
//! unconditionally stable, deterministic, and produces orthonormal
//! eigenvectors to machine precision.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// Tolerance for Hermiticity checks on constructed operators.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Eigenvalues in `[-NEGATIVE_CLAMP, 0)` are treated as round-off and clamped to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-10;
/// Eigenvalues at or below this are skipped in `-λ log λ` (0 log 0 = 0).
pub const ENTROPY_CUTOFF: f64 = 1e-14;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues below this fraction of the largest are round-off for `matrix_sqrt`.
pub const SQRT_RANK_CUTOFF: f64 = 1e-14;

const MAX_SWEEPS: usize = 64;

/// A finite complex scalar, rejecting NaN and infinities.
pub fn scalar(re: f64, im: f64) -> Result<ComplexScalar> {
    if re.is_finite() && im.is_finite() {
        Ok(Complex64::new(re, im))
    } else {
        Err(Error::NonFinite { row: 0, col: 0 })
    }
}

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Largest `|M_ij - conj(M_ji)|`.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Hermitian operator on one or two qubits (dimension 2 or 4).
#[derive(Clone, PartialEq)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    /// Validates dimension, finiteness and Hermiticity, then symmetrizes the
    /// input so that downstream arithmetic sees an exactly Hermitian matrix.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.dim();
        if n != 2 && n != 4 {
            return Err(Error::Dimension {
                expected: 4,
                found: n,
            });
        }
        for i in 0..n {
            for j in 0..n {
                let z = matrix[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        let asym = matrix.max_asymmetry();
        if asym > HERMITICITY_TOL {
            return Err(Error::NonHermitian {
                max_asymmetry: asym,
            });
        }
        Ok(Self(symmetrize(&matrix)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(diag))
    }

    /// Builds a density matrix `|ψ⟩⟨ψ|` from a (not necessarily normalised) vector.
    pub fn projector(psi: &[Complex64]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm2 == 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        let n = psi.len();
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = psi[i] * psi[j].conj() / norm2;
            }
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `U M U†` for a unitary `U` of matching dimension.
    pub fn conjugate_by(&self, unitary: &ComplexMatrix) -> Result<Self> {
        if unitary.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: unitary.dim(),
            });
        }
        let out = &(unitary * &self.0) * &unitary.adjoint();
        Self::new(symmetrize(&out))
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        Self::new(self.0.kron(&other.0))
    }
}

impl fmt::Debug for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian{:?}", self.0)
    }
}

fn symmetrize(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let mut out = m.clone();
    for i in 0..n {
        out[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            out[(i, j)] = avg;
            out[(j, i)] = avg.conj();
        }
    }
    out
}

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors stored as the columns of a unitary matrix.
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        let n = self.eigenvectors.dim();
        (0..n).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvectors.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = self.eigenvectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * self.eigenvectors[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| x)
    }
}

/// Cyclic complex Jacobi on a Hermitian matrix of any small dimension.
///
/// Each pivot `(p, q)` is annihilated by a phase rotation that makes `a_pq`
/// real followed by a real Givens rotation.  Sweeps stop once the
/// off-diagonal Frobenius norm drops below `1e-15` relative to the full norm.
fn jacobi(matrix: &ComplexMatrix) -> SpectralDecomposition {
    let n = matrix.dim();
    let mut a = matrix.clone();
    let mut v = ComplexMatrix::identity(n);
    let total: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / g;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = diag(1, conj(phase)) on (p, q) followed by [[c, s], [-s, c]].
                let j_pp = Complex64::new(c, 0.0);
                let j_pq = Complex64::new(s, 0.0);
                let j_qp = -phase.conj() * s;
                let j_qq = phase.conj() * c;

                // A <- A J (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * j_pp + akq * j_qp;
                    a[(k, q)] = akp * j_pq + akq * j_qq;
                }
                // A <- J^H A (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
                    a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                // V <- V J
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * j_pp + vkq * j_qp;
                    v[(k, q)] = vkp * j_pq + vkq * j_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    SpectralDecomposition {
        eigenvalues,
        eigenvectors: vectors,
    }
}

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
pub fn eigh(m: &HermitianOperator) -> SpectralDecomposition {
    jacobi(m.matrix())
}

/// Eigendecomposition of an arbitrary square matrix after a Hermiticity gate.
///
/// Used for operators outside the one/two-qubit family (e.g. the 3x3
/// correlation matrix of the local quantum uncertainty).
pub fn eigh_checked(m: &ComplexMatrix, tol: f64) -> Result<SpectralDecomposition> {
    let asym = m.max_asymmetry();
    if asym > tol {
        return Err(Error::NonHermitian {
            max_asymmetry: asym,
        });
    }
    Ok(jacobi(&symmetrize(m)))
}

fn clamped_spectrum(m: &HermitianOperator) -> Result<SpectralDecomposition> {
    let mut dec = eigh(m);
    for lambda in dec.eigenvalues.iter_mut() {
        if *lambda < -NEGATIVE_CLAMP {
            return Err(Error::InvalidState(format!(
                "eigenvalue {lambda:.3e} below -{NEGATIVE_CLAMP:e}"
            )));
        }
        if *lambda < 0.0 {
            *lambda = 0.0;
        }
    }
    Ok(dec)
}

/// Principal square root of a positive semidefinite operator.
pub fn matrix_sqrt(m: &HermitianOperator) -> Result<HermitianOperator> {
    let dec = clamped_spectrum(m)?;
    let floor = SQRT_RANK_CUTOFF * dec.eigenvalues.iter().fold(0.0f64, |a, l| a.max(*l));
    HermitianOperator::new(symmetrize(
        &dec.reconstruct_with(|l| if l > floor { l.sqrt() } else { 0.0 }),
    ))
}

/// Schatten one-norm `Σ |λ_i|`.
pub fn trace_norm(m: &HermitianOperator) -> f64 {
    eigh(m).eigenvalues.iter().map(|l| l.abs()).sum()
}

/// Partial transpose on the first qubit of a two-qubit operator:
/// `out[2i+j][2k+l] = in[2k+j][2i+l]`.
pub fn partial_transpose_a(m: &HermitianOperator) -> Result<HermitianOperator> {
    if m.dim() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            found: m.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + j, 2 * k + l)] = m.get(2 * k + j, 2 * i + l);
                }
            }
        }
    }
    HermitianOperator::new(out)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(m: &HermitianOperator) -> Result<f64> {
    let tr = m.trace();
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
    }
    let dec = clamped_spectrum(m)?;
    Ok(shannon_bits(&dec.eigenvalues))
}

/// `-Σ p log2 p` over entries above the 0·log 0 cutoff.
pub fn shannon_bits(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > ENTROPY_CUTOFF)
        .map(|&p| -p * p.log2())
        .sum()
}

/// The Pauli matrices `[σx, σy, σz]`.
pub fn pauli() -> [ComplexMatrix; 3] {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        ComplexMatrix::from_rows(&[vec![o, one], vec![one, o]]).unwrap(),
        ComplexMatrix::from_rows(&[vec![o, -i], vec![i, o]]).unwrap(),
        ComplexMatrix::from_rows(&[vec![one, o], vec![o, -one]]).unwrap(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell_phi_plus() -> HermitianOperator {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        HermitianOperator::projector(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap()
    }

    #[test]
    fn diagonal_spectrum_is_sorted() {
        let m = HermitianOperator::from_real_diagonal(&[3.0, 1.0, 4.0, 2.0]).unwrap();
        assert_eq!(eigh(&m).eigenvalues, vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let m = HermitianOperator::new(pauli()[0].clone()).unwrap();
        let ev = eigh(&m).eigenvalues;
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ferromagnetic_pair_state_spectrum() {
        let m = HermitianOperator::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(eigh(&m).eigenvalues, vec![0.0, 0.0, 0.5, 0.5]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 0.5], &[0.2, 1.0]]).unwrap();
        match HermitianOperator::new(m) {
            Err(Error::NonHermitian { max_asymmetry }) => {
                assert!((max_asymmetry - 0.3).abs() < 1e-15)
            }
            other => panic!("expected NonHermitian, got {other:?}"),
        }
    }

    #[test]
    fn rejects_nan_and_bad_dimension() {
        let m = ComplexMatrix::from_real_rows(&[&[f64::NAN, 0.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(HermitianOperator::new(m), Err(Error::NonFinite { .. })));
        let m3 = ComplexMatrix::identity(3);
        assert!(matches!(HermitianOperator::new(m3), Err(Error::Dimension { .. })));
        assert!(scalar(f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn sqrt_examples() {
        let mixed = HermitianOperator::from_real_diagonal(&[0.25; 4]).unwrap();
        let r = matrix_sqrt(&mixed).unwrap();
        assert!(r.matrix().max_abs_diff(&ComplexMatrix::identity(4).scale(0.5)) < 1e-15);

        let bell = bell_phi_plus();
        let r = matrix_sqrt(&bell).unwrap();
        assert!(r.matrix().max_abs_diff(bell.matrix()) < 1e-12);

        let ferro = HermitianOperator::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        let r = matrix_sqrt(&ferro).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = ComplexMatrix::from_real_diagonal(&[s, 0.0, 0.0, s]);
        assert!(r.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn sqrt_of_pure_state_is_itself() {
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let z = Complex64::new(0.0, 0.0);
        let psi = [z, Complex64::new(c, 0.0), Complex64::new(0.0, s), z];
        let rho = HermitianOperator::projector(&psi).unwrap();
        let r = matrix_sqrt(&rho).unwrap();
        assert!(r.matrix().max_abs_diff(rho.matrix()) < 1e-14);
    }

    #[test]
    fn sqrt_rejects_negative_and_clamps_roundoff() {
        let bad = HermitianOperator::from_real_diagonal(&[1.0, -1e-6]).unwrap();
        assert!(matches!(matrix_sqrt(&bad), Err(Error::InvalidState(_))));
        let ok = HermitianOperator::from_real_diagonal(&[1.0, -5e-11]).unwrap();
        let r = matrix_sqrt(&ok).unwrap();
        assert_eq!(r.get(1, 1).re, 0.0);
    }

    #[test]
    fn trace_norm_examples() {
        let d = HermitianOperator::from_real_diagonal(&[1.0, -1.0]).unwrap();
        assert!((trace_norm(&d) - 2.0).abs() < 1e-15);
        let pt = partial_transpose_a(&bell_phi_plus()).unwrap();
        assert!((trace_norm(&pt) - 2.0).abs() < 1e-12);
        assert!((trace_norm(&bell_phi_plus()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_moves_inner_coherence_to_corners() {
        let z = c(0.1, 0.05);
        let mut m = ComplexMatrix::from_real_diagonal(&[0.2, 0.3, 0.3, 0.2]);
        m[(1, 2)] = z;
        m[(2, 1)] = z.conj();
        let pt = partial_transpose_a(&HermitianOperator::new(m).unwrap()).unwrap();
        assert_eq!(pt.get(0, 3), z.conj());
        assert_eq!(pt.get(3, 0), z);
        assert_eq!(pt.get(1, 2), c(0.0, 0.0));
        assert_eq!(pt.get(2, 1), c(0.0, 0.0));
        for i in 0..4 {
            assert_eq!(pt.get(i, i), m_diag(i));
        }
        fn m_diag(i: usize) -> Complex64 {
            c([0.2, 0.3, 0.3, 0.2][i], 0.0)
        }
    }

    #[test]
    fn partial_transpose_of_bell_state_has_single_negative_half() {
        let ev = eigh(&partial_transpose_a(&bell_phi_plus()).unwrap()).eigenvalues;
        assert!((ev[0] + 0.5).abs() < 1e-12);
        assert!(ev[1..].iter().all(|&l| (l - 0.5).abs() < 1e-12));
    }

    #[test]
    fn partial_transpose_requires_two_qubits() {
        let m = HermitianOperator::from_real_diagonal(&[0.5, 0.5]).unwrap();
        assert!(matches!(
            partial_transpose_a(&m),
            Err(Error::Dimension { expected: 4, found: 2 })
        ));
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&bell_phi_plus()).unwrap().abs() < 1e-12);
        let mixed = HermitianOperator::from_real_diagonal(&[0.25; 4]).unwrap();
        assert!((von_neumann_entropy(&mixed).unwrap() - 2.0).abs() < 1e-14);
        let ferro = HermitianOperator::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((von_neumann_entropy(&ferro).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn entropy_rejects_unnormalised_input() {
        let m = HermitianOperator::from_real_diagonal(&[0.5, 0.6]).unwrap();
        assert!(matches!(von_neumann_entropy(&m), Err(Error::InvalidState(_))));
    }

    #[test]
    fn jacobi_handles_complex_pivots() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, -2.0)], vec![c(0.0, 2.0), c(1.0, 0.0)]])
            .unwrap();
        let dec = eigh(&HermitianOperator::new(m.clone()).unwrap());
        assert!((dec.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((dec.eigenvalues[1] - 3.0).abs() < 1e-14);
        assert!(dec.reconstruct().max_abs_diff(&m) < 1e-14);
    }
}
