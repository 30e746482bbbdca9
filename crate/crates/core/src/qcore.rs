//! Dense complex linear algebra for the 4-qubit register.
//!
//! Everything here works on tiny matrices (2, 4 or 16 rows), so the
//! representation is a plain row-major `Vec<Complex64>`. Hermitian
//! eigendecompositions are delegated to `nalgebra` and then sorted so that
//! eigenvalues come back in ascending order.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type ComplexScalar = Complex64;

/// Number of qubits in the full register `|A1 A2 B1 B2>`.
pub const NUM_QUBITS: usize = 4;
/// Hilbert-space dimension of the full register.
pub const FULL_DIM: usize = 1 << NUM_QUBITS;
/// Hilbert-space dimension of one two-qubit subsystem.
pub const SUB_DIM: usize = 4;

/// Maximum `|h - h^dagger|` entry accepted as Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Eigenvalues below this are raised to it before taking a logarithm.
pub const DEFAULT_LOG_FLOOR: f64 = 1e-14;
/// Eigenvalues in `[-DEFAULT_PSD_TOLERANCE, 0)` are treated as zero under a square root.
pub const DEFAULT_PSD_TOLERANCE: f64 = 1e-10;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Clamp thresholds applied to spectra of (nearly) positive semidefinite
/// matrices before non-analytic matrix functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralClamp {
    pub log_floor: f64,
    pub psd_tolerance: f64,
}

impl Default for SpectralClamp {
    fn default() -> Self {
        Self {
            log_floor: DEFAULT_LOG_FLOOR,
            psd_tolerance: DEFAULT_PSD_TOLERANCE,
        }
    }
}

/// A square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a
    /// perfect square.
    pub fn from_row_major(entries: Vec<Complex64>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != entries.len() {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self { dim: N, entries }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Rank-one projector `|v><w|`.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        assert_eq!(v.len(), w.len(), "outer product of unequal lengths");
        let dim = v.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in v {
            for b in w {
                entries.push(a * b.conj());
            }
        }
        Self { dim, entries }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
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
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_complex(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "comparing matrices of different dimension");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self^dagger`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub(crate) fn ensure_hermitian(&self) -> Result<()> {
        let deviation = self.hermiticity_error();
        if deviation > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length does not match matrix");
        self.entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "multiplying matrices of different dimension");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        out
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }

    fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        let dim = m.nrows();
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out[(i, j)] = m[(i, j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim, "adding matrices of different dimension");
        DenseMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim, "subtracting matrices of different dimension");
        DenseMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix({}x{})", self.dim, self.dim)?;
        for row in self.entries.chunks_exact(self.dim) {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn pauli_x() -> DenseMatrix {
    DenseMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_y() -> DenseMatrix {
    let i = Complex64::i();
    DenseMatrix::from_row_major(vec![ZERO, -i, i, ZERO]).expect("2x2")
}

pub fn pauli_z() -> DenseMatrix {
    DenseMatrix::from_real_rows([[1.0, 0.0], [0.0, -1.0]])
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (n, m) = (a.dim, b.dim);
    let mut out = DenseMatrix::zeros(n * m);
    for i in 0..n {
        for j in 0..n {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..m {
                for l in 0..m {
                    out[(i * m + k, j * m + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Spectral decomposition `h = V diag(eigenvalues) V^dagger` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Real eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, ordered like `eigenvalues`.
    pub eigenvectors: DenseMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(f(lambda)) V^dagger` for a complex-valued spectral function.
    pub fn map_complex<F>(&self, f: F) -> DenseMatrix
    where
        F: Fn(f64) -> Complex64,
    {
        let n = self.dim();
        let v = &self.eigenvectors;
        let weights: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for (k, w) in weights.iter().enumerate() {
                    acc += v[(i, k)] * w * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// `V diag(f(lambda)) V^dagger` for a real spectral function.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        self.map_complex(|l| Complex64::new(f(l), 0.0))
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        self.map(|l| l)
    }

    /// Coordinates `V^dagger v` of a vector in the eigenbasis.
    pub fn to_eigenbasis(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        (0..n)
            .map(|k| (0..n).map(|i| self.eigenvectors[(i, k)].conj() * v[i]).sum())
            .collect()
    }

    /// Inverse of [`Self::to_eigenbasis`].
    pub fn from_eigenbasis(&self, c: &[Complex64]) -> Vec<Complex64> {
        self.eigenvectors.apply(c)
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues.
pub fn hermitian_eig(h: &DenseMatrix) -> Result<EigenDecomposition> {
    h.ensure_hermitian()?;
    let n = h.dim();
    // Exact symmetrisation so the solver sees a Hermitian matrix bit-for-bit.
    let sym = &(h + &h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::try_new(sym.to_nalgebra(), EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or(Error::ConvergenceFailure { dim: n })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let vectors = DenseMatrix::from_nalgebra(&eig.eigenvectors);
    let mut eigenvectors = DenseMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[(row, new_col)] = vectors[(row, old_col)];
        }
    }
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// `f(h)` for Hermitian `h`, with no clamping of the spectrum.
pub fn matrix_function(h: &DenseMatrix, f: impl Fn(f64) -> f64) -> Result<DenseMatrix> {
    Ok(hermitian_eig(h)?.map(f))
}

/// `log(h)` with eigenvalues raised to `clamp.log_floor` first.
pub fn matrix_log(h: &DenseMatrix, clamp: &SpectralClamp) -> Result<DenseMatrix> {
    let floor = clamp.log_floor;
    matrix_function(h, |l| l.max(floor).ln())
}

/// `sqrt(h)` for positive semidefinite `h`.
pub fn matrix_sqrt(h: &DenseMatrix, clamp: &SpectralClamp) -> Result<DenseMatrix> {
    let eig = hermitian_eig(h)?;
    check_psd(&eig.eigenvalues, clamp)?;
    Ok(eig.map(|l| l.max(0.0).sqrt()))
}

pub(crate) fn check_psd(eigenvalues: &[f64], clamp: &SpectralClamp) -> Result<()> {
    match eigenvalues.first() {
        Some(&lowest) if lowest < -clamp.psd_tolerance => {
            Err(Error::NegativeSpectrum { eigenvalue: lowest })
        }
        _ => Ok(()),
    }
}

/// `Tr_B` over the second tensor factor of a `(dim_a * dim_b)`-dimensional operator.
pub fn partial_trace_second(rho: &DenseMatrix, dim_a: usize, dim_b: usize) -> Result<DenseMatrix> {
    if rho.dim() != dim_a * dim_b {
        return Err(Error::DimensionMismatch {
            expected: dim_a * dim_b,
            found: rho.dim(),
        });
    }
    let mut out = DenseMatrix::zeros(dim_a);
    for a in 0..dim_a {
        for a2 in 0..dim_a {
            out[(a, a2)] = (0..dim_b).map(|b| rho[(a * dim_b + b, a2 * dim_b + b)]).sum();
        }
    }
    Ok(out)
}

/// Reduced density matrix of subsystem A (qubits A1, A2) of the full register.
pub fn partial_trace_b(rho_full: &DenseMatrix) -> Result<DenseMatrix> {
    partial_trace_second(rho_full, SUB_DIM, FULL_DIM / SUB_DIM)
}

/// Pure state of the full 4-qubit register. Index `i` holds the amplitude of
/// the ket whose binary digits read `A1 A2 B1 B2`, A1 most significant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    amplitudes: [Complex64; FULL_DIM],
}

impl StateVector {
    pub fn from_amplitudes(amplitudes: [Complex64; FULL_DIM]) -> Self {
        Self { amplitudes }
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        let amplitudes: [Complex64; FULL_DIM] =
            amplitudes.try_into().map_err(|_| Error::DimensionMismatch {
                expected: FULL_DIM,
                found: amplitudes.len(),
            })?;
        Ok(Self { amplitudes })
    }

    /// Computational basis state `|index>`.
    pub fn basis(index: usize) -> Self {
        assert!(index < FULL_DIM, "basis index out of range");
        let mut amplitudes = [ZERO; FULL_DIM];
        amplitudes[index] = ONE;
        Self { amplitudes }
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64; FULL_DIM] {
        &self.amplitudes
    }

    #[inline]
    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        let mut amplitudes = self.amplitudes;
        for z in &mut amplitudes {
            *z /= n;
        }
        Self { amplitudes }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `op |self>` for a 16x16 operator.
    pub fn evolved_by(&self, op: &DenseMatrix) -> Self {
        Self::from_slice(&op.apply(&self.amplitudes)).expect("operator acts on the full register")
    }
}

/// `<state|op|state>` for a Hermitian operator on the full register.
pub fn expectation(state: &StateVector, op: &DenseMatrix) -> Result<f64> {
    if op.dim() != FULL_DIM {
        return Err(Error::DimensionMismatch {
            expected: FULL_DIM,
            found: op.dim(),
        });
    }
    op.ensure_hermitian()?;
    let value = expectation_unchecked(state, op);
    debug_assert!(value.im.abs() < 1e-10, "imaginary expectation {}", value.im);
    Ok(value.re)
}

#[inline]
pub(crate) fn expectation_unchecked(state: &StateVector, op: &DenseMatrix) -> Complex64 {
    let psi = state.amplitudes();
    let mut acc = ZERO;
    for (i, row) in op.entries().chunks_exact(FULL_DIM).enumerate() {
        let row_dot: Complex64 = row.iter().zip(psi).map(|(a, b)| a * b).sum();
        acc += psi[i].conj() * row_dot;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = DenseMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), DenseMatrix::identity(4));
    }

    #[test]
    fn kron_x_z_entries() {
        let m = kron(&pauli_x(), &pauli_z());
        let mut expected = DenseMatrix::zeros(4);
        expected[(0, 2)] = c(1.0);
        expected[(1, 3)] = c(-1.0);
        expected[(2, 0)] = c(1.0);
        expected[(3, 1)] = c(-1.0);
        assert_eq!(m, expected);
    }

    #[test]
    fn kron_z_z_is_diagonal() {
        assert_eq!(
            kron(&pauli_z(), &pauli_z()),
            DenseMatrix::diagonal(&[1.0, -1.0, -1.0, 1.0])
        );
    }

    #[test]
    fn pauli_x_spectrum() {
        let eig = hermitian_eig(&pauli_x()).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn identity_spectrum() {
        let eig = hermitian_eig(&DenseMatrix::identity(4)).unwrap();
        for l in eig.eigenvalues {
            assert!((l - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = DenseMatrix::from_real_rows([[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            matrix_function(&m, f64::exp),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn exp_of_identity() {
        let m = matrix_function(&DenseMatrix::identity(4), f64::exp).unwrap();
        assert!(m.max_abs_diff(&DenseMatrix::identity(4).scale(std::f64::consts::E)) < 1e-14);
    }

    #[test]
    fn exp_of_scaled_z() {
        let t = 0.7;
        let m = matrix_function(&pauli_z(), |l| (t * l).exp()).unwrap();
        let expected = DenseMatrix::diagonal(&[t.exp(), (-t).exp()]);
        assert!(m.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn maximally_mixed_entropy_term() {
        let mixed = DenseMatrix::identity(4).scale(0.25);
        let floor = DEFAULT_LOG_FLOOR;
        let m = matrix_function(&mixed, |x| x * x.max(floor).ln()).unwrap();
        assert!((m.trace().re + 4.0_f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn log_clamps_zero_eigenvalues() {
        let proj = DenseMatrix::diagonal(&[1.0, 0.0]);
        let log = matrix_log(&proj, &SpectralClamp::default()).unwrap();
        assert!(log[(0, 0)].norm() < 1e-14);
        assert!((log[(1, 1)].re - DEFAULT_LOG_FLOOR.ln()).abs() < 1e-10);
    }

    #[test]
    fn sqrt_clamps_small_negatives_and_rejects_large_ones() {
        let clamp = SpectralClamp::default();
        let slightly = DenseMatrix::diagonal(&[1.0, -1e-12]);
        let root = matrix_sqrt(&slightly, &clamp).unwrap();
        assert!(root[(1, 1)].norm() == 0.0);
        let negative = DenseMatrix::diagonal(&[1.0, -1e-6]);
        assert!(matches!(
            matrix_sqrt(&negative, &clamp),
            Err(Error::NegativeSpectrum { .. })
        ));
    }

    #[test]
    fn partial_trace_of_product_state() {
        let rho = DenseMatrix::outer(StateVector::basis(0).amplitudes(), StateVector::basis(0).amplitudes());
        let reduced = partial_trace_b(&rho).unwrap();
        assert_eq!(reduced, DenseMatrix::diagonal(&[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn partial_trace_rejects_wrong_dimension() {
        assert!(matches!(
            partial_trace_b(&DenseMatrix::identity(4)),
            Err(Error::DimensionMismatch { expected: 16, found: 4 })
        ));
    }

    #[test]
    fn computational_basis_expectation() {
        let zz = kron(&kron(&pauli_z(), &pauli_z()), &DenseMatrix::identity(4));
        let v = expectation(&StateVector::basis(0), &zz).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn expectation_requires_hermitian_operator() {
        let mut op = DenseMatrix::zeros(16);
        op[(0, 1)] = c(1.0);
        assert!(matches!(
            expectation(&StateVector::basis(0), &op),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn from_row_major_rejects_non_square_length() {
        assert!(DenseMatrix::from_row_major(vec![ZERO; 3]).is_err());
    }
}
