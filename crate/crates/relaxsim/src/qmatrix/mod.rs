//! Dense complex linear algebra for qubit-register operators and states.
//!
//! Everything in this artifact lives on at most 7 qubits (dim ≤ 128), so
//! matrices are stored dense and row-major. Qubit 0 is the top wire of a
//! circuit diagram and the outermost tensor factor; computational basis
//! states are ordered |00…0⟩, |00…1⟩, ….

mod eig;

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

pub use num_complex::Complex64 as C64;

pub(crate) const HERMITIAN_TOL: f64 = 1e-12;
pub(crate) const TRACE_TOL: f64 = 1e-12;
pub(crate) const PSD_TOL: f64 = -1e-10;
pub(crate) const NORM_TOL: f64 = 1e-12;

/// Dense square matrix of complex amplitudes.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Build a matrix entry by entry.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from row-major real entries; imaginary parts are zero.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| {
            assert_eq!(rows[i].len(), dim, "rows must form a square matrix");
            C64::new(rows[i][j], 0.0)
        })
    }

    /// Diagonal matrix from complex entries.
    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conjugate(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)].conj())
    }

    /// Matrix product `self · rhs`.
    pub fn multiply(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.dim,
                got: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        // ikj order keeps the inner loop contiguous in both operands.
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                context: "matrix sum",
                expected: self.dim,
                got: rhs.dim,
            });
        }
        let mut out = self.clone();
        for (d, &b) in out.data.iter_mut().zip(&rhs.data) {
            *d += b;
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                context: "matrix difference",
                expected: self.dim,
                got: rhs.dim,
            });
        }
        let mut out = self.clone();
        for (d, &b) in out.data.iter_mut().zip(&rhs.data) {
            *d -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, c: C64) -> ComplexMatrix {
        let mut out = self.clone();
        for d in &mut out.data {
            *d *= c;
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product with `self` as the outer factor.
    pub fn tensor(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let (da, db) = (self.dim, rhs.dim);
        let mut out = Self::zeros(da * db);
        for i1 in 0..da {
            for j1 in 0..da {
                let a = self[(i1, j1)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for i2 in 0..db {
                    for j2 in 0..db {
                        out[(i1 * db + i2, j1 * db + j2)] = a * rhs[(i2, j2)];
                    }
                }
            }
        }
        out
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, rhs.dim, "max_abs_diff needs equal dimensions");
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// max |A − A†|, zero for an exactly Hermitian matrix.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// (A + A†)/2. The result is Hermitian bit-exactly: the (j,i) entry is
    /// the conjugate of the (i,j) entry by construction.
    pub fn hermitized(&self) -> ComplexMatrix {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in i..self.dim {
                let avg = (self[(i, j)] + self[(j, i)].conj()).scale(0.5);
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        out
    }

    /// max |U†U − I|, zero for an exactly unitary matrix.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self
            .dagger()
            .multiply(self)
            .expect("square matrices are conformable");
        prod.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    /// Eigenvalues of a Hermitian matrix, sorted ascending.
    ///
    /// Uses a cyclic Jacobi scheme; the input must be Hermitian to 1e-8.
    pub fn eigenvalues_hermitian(&self) -> Result<Vec<f64>> {
        let defect = self.hermitian_defect();
        if defect > 1e-8 {
            return Err(Error::NotHermitian { defect });
        }
        Ok(eig::jacobi_hermitian(self).0)
    }

    /// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and
    /// the unitary whose columns are the matching eigenvectors.
    pub fn eigh(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        let defect = self.hermitian_defect();
        if defect > 1e-8 {
            return Err(Error::NotHermitian { defect });
        }
        Ok(eig::jacobi_hermitian(self))
    }

    /// Partial trace over the subsystems NOT listed in `keep`.
    ///
    /// `dims` factorizes the matrix dimension into subsystems, outermost
    /// first; `keep` lists the subsystem indices to retain, in their original
    /// relative order.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
        let product: usize = dims.iter().product();
        if product != self.dim {
            return Err(Error::DimensionMismatch {
                context: "partial trace subsystem dims",
                expected: self.dim,
                got: product,
            });
        }
        if keep.is_empty() {
            return Err(Error::InvalidParameter(
                "partial trace must keep at least one subsystem".into(),
            ));
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
            return Err(Error::InvalidParameter(format!(
                "kept subsystem index {bad} out of range for {} subsystems",
                dims.len()
            )));
        }
        let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();

        // Row-major strides of each subsystem inside the full index.
        let mut strides = vec![1usize; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }

        let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
        let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();

        // Full index of a (kept multi-index, traced multi-index) pair.
        let compose = |kept_idx: usize, traced_idx: usize| -> usize {
            let mut full = 0;
            let mut rem = kept_idx;
            for &k in keep.iter().rev() {
                full += (rem % dims[k]) * strides[k];
                rem /= dims[k];
            }
            let mut rem = traced_idx;
            for &k in traced.iter().rev() {
                full += (rem % dims[k]) * strides[k];
                rem /= dims[k];
            }
            full
        };

        let mut out = ComplexMatrix::zeros(kept_dim);
        for a in 0..kept_dim {
            for b in 0..kept_dim {
                let mut sum = C64::new(0.0, 0.0);
                for e in 0..traced_dim {
                    sum += self[(compose(a, e), compose(b, e))];
                }
                out[(a, b)] = sum;
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
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

/// Normalized state vector on a register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Validates unit norm to 1e-12.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis state |index⟩ on a `dim`-dimensional space.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    /// Single-qubit state √p·|0⟩ + √(1−p)·|1⟩ used to prepare thermal
    /// environment qubits.
    pub fn equilibrium(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability {
                name: "equilibrium population",
                value: p,
            });
        }
        Ok(Self {
            amplitudes: vec![C64::new(p.sqrt(), 0.0), C64::new((1.0 - p).sqrt(), 0.0)],
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// |ψ⟩⟨ψ| as a matrix.
    pub fn outer(&self) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_fn(d, |i, j| self.amplitudes[i] * self.amplitudes[j].conj())
    }

    /// Kronecker product with `self` as the outer factor.
    pub fn tensor(&self, rhs: &PureState) -> PureState {
        let mut amplitudes = Vec::with_capacity(self.dim() * rhs.dim());
        for a in &self.amplitudes {
            for b in &rhs.amplitudes {
                amplitudes.push(a * b);
            }
        }
        PureState { amplitudes }
    }
}

/// Hermitian, unit-trace, positive-semidefinite state of a qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity
    /// (smallest eigenvalue ≥ −1e-10).
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let defect = mat.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
        let trace = mat.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::NotUnitTrace { trace: trace.re });
        }
        let eigs = eig::jacobi_hermitian(&mat).0;
        let min_eigenvalue = eigs.first().copied().unwrap_or(0.0);
        if min_eigenvalue < PSD_TOL {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        Ok(Self { mat })
    }

    /// Wraps a matrix that is a valid state by construction (tensor products
    /// of states, unitary conjugations, …) without re-running the eigenvalue
    /// check.
    pub(crate) fn trusted(mat: ComplexMatrix) -> Self {
        debug_assert!(mat.hermitian_defect() <= 1e-9);
        debug_assert!((mat.trace() - C64::new(1.0, 0.0)).norm() <= 1e-9);
        Self { mat }
    }

    pub fn from_pure(state: &PureState) -> Self {
        Self::trusted(state.outer())
    }

    /// I/dim.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::trusted(ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)))
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn element(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    /// Kronecker product of two states (a product state).
    pub fn tensor(&self, rhs: &DensityMatrix) -> DensityMatrix {
        Self::trusted(self.mat.tensor(&rhs.mat))
    }

    /// Reduced state on the kept subsystems; the output is revalidated.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
        let reduced = self.mat.partial_trace(dims, keep)?;
        DensityMatrix::new(reduced.hermitized())
    }
}
