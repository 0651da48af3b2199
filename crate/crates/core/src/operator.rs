//! Dense complex matrices and pure-state vectors.

use std::ops::Mul;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Rows per parallel GEMM block.
const ROW_BLOCK: usize = 64;
/// Below this order a single GEMM call is faster than splitting.
const PARALLEL_MIN_DIM: usize = 128;

/// What a build operation promises about an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Unitary,
    Hermitian,
    General,
}

/// Square complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<Complex64>,
    kind: OperatorKind,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
            kind: OperatorKind::General,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![ONE; dim], OperatorKind::Unitary)
    }

    pub fn from_diagonal(diag: &[Complex64], kind: OperatorKind) -> Self {
        let dim = diag.len();
        let mut data = vec![ZERO; dim * dim];
        for (k, &d) in diag.iter().enumerate() {
            data[k * dim + k] = d;
        }
        Self { dim, data, kind }
    }

    /// Builds an operator from row-major entries.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>, kind: OperatorKind) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data, kind })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub(crate) fn with_kind(mut self, kind: OperatorKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|k| self.get(k, k)).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self.get(k, k)).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out.kind = self.kind;
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let kind = match self.kind {
            OperatorKind::Unitary if (factor.norm() - 1.0).abs() < 1e-15 => OperatorKind::Unitary,
            OperatorKind::Hermitian if factor.im == 0.0 => OperatorKind::Hermitian,
            _ => OperatorKind::General,
        };
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
            kind,
        }
    }

    /// Multiplies row `k` by `factors[k]`, i.e. `diag(factors) * self`.
    pub fn scale_rows(&self, factors: &[Complex64]) -> Self {
        assert_eq!(factors.len(), self.dim, "row factor count must equal dim");
        let mut out = self.clone();
        for (row, &f) in out.data.chunks_mut(self.dim).zip(factors) {
            row.iter_mut().for_each(|z| *z *= f);
        }
        out.kind = OperatorKind::General;
        out
    }

    /// Multiplies column `k` by `factors[k]`, i.e. `self * diag(factors)`.
    pub fn scale_columns(&self, factors: &[Complex64]) -> Self {
        assert_eq!(
            factors.len(),
            self.dim,
            "column factor count must equal dim"
        );
        let mut out = self.clone();
        for row in out.data.chunks_mut(self.dim) {
            row.iter_mut().zip(factors).for_each(|(z, f)| *z *= f);
        }
        out.kind = OperatorKind::General;
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
            kind: OperatorKind::General,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
            kind: OperatorKind::General,
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |U^dagger U - I|` over entries.
    pub fn unitarity_error(&self) -> f64 {
        let prod = &self.adjoint() * self;
        prod.max_abs_diff(&Self::identity(self.dim))
    }

    /// `max |A - A^dagger|` over entries.
    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Matrix-vector product.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: state.dim(),
            });
        }
        Ok(StateVector {
            amps: self.apply_slice(&state.amps),
        })
    }

    pub(crate) fn apply_slice(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        let n = self.dim;
        let mut out = Self::zeros(n);
        if n == 0 {
            return out;
        }
        if n < PARALLEL_MIN_DIM {
            zgemm_rows(&self.data, &rhs.data, &mut out.data, n);
        } else {
            out.data
                .par_chunks_mut(ROW_BLOCK * n)
                .zip(self.data.par_chunks(ROW_BLOCK * n))
                .for_each(|(c, a)| zgemm_rows(a, &rhs.data, c, n));
        }
        out.kind = match (self.kind, rhs.kind) {
            (OperatorKind::Unitary, OperatorKind::Unitary) => OperatorKind::Unitary,
            _ => OperatorKind::General,
        };
        out
    }
}

/// `c = a * b` where `a` holds `a.len() / n` rows of an n-column matrix.
fn zgemm_rows(a: &[Complex64], b: &[Complex64], c: &mut [Complex64], n: usize) {
    let rows = a.len() / n;
    debug_assert_eq!(c.len(), rows * n);
    debug_assert_eq!(b.len(), n * n);
    let n_i = n as isize;
    // SAFETY: Complex64 is repr(C) with layout [re, im], matching [f64; 2];
    // slice lengths are checked above and the strides describe row-major
    // rows x n, n x n and rows x n matrices.
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            rows,
            n,
            n,
            [1.0, 0.0],
            a.as_ptr() as *const [f64; 2],
            n_i,
            1,
            b.as_ptr() as *const [f64; 2],
            n_i,
            1,
            [0.0, 0.0],
            c.as_mut_ptr() as *mut [f64; 2],
            n_i,
            1,
        );
    }
}

impl Mul<&DenseOperator> for &DenseOperator {
    type Output = DenseOperator;

    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        self.matmul(rhs)
    }
}

/// Pure state of a spin-`j` system in the descending-`m` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes after rescaling them to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm = norm(&amps);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidArgument(
                "state vector must have a finite, nonzero norm".into(),
            ));
        }
        Ok(Self {
            amps: amps.into_iter().map(|z| z / norm).collect(),
        })
    }

    /// The `k`-th basis vector (magnetic number `m = j - k`).
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amps = vec![ZERO; dim];
        amps[k] = ONE;
        Self { amps }
    }

    pub(crate) fn from_raw(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "state dimensions differ");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Rescales in place and returns the factor that was removed.
    pub(crate) fn renormalize(&mut self) -> f64 {
        let n = self.norm();
        self.amps.iter_mut().for_each(|z| *z /= n);
        n
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
