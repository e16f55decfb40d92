//! Validated quantum states and observables over a bipartite split.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::linalg::*;
use crate::error::{Error, Result};

pub const MAX_DIM: usize = 64;
pub const TOL_TRACE: f64 = 1e-10;
pub const TOL_NORM: f64 = 1e-10;

/// Bipartite dimension split `(d_A, d_B)`. Single systems use `d_B = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub a: usize,
    pub b: usize,
}

impl Dims {
    pub const fn new(a: usize, b: usize) -> Self {
        Self { a, b }
    }

    pub const fn single(d: usize) -> Self {
        Self { a: d, b: 1 }
    }

    pub const fn total(&self) -> usize {
        self.a * self.b
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

fn check_dims(dims: Dims) -> Result<()> {
    if dims.a == 0 || dims.b == 0 {
        return Err(Error::DimensionMismatch(format!("dims {dims} must be positive")));
    }
    if dims.total() > MAX_DIM {
        return Err(Error::DimensionTooLarge(dims.total()));
    }
    Ok(())
}

/// A Hermitian, unit-trace, positive semidefinite matrix over `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Dims,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (tolerance 1e-10 each).
    pub fn new(dims: Dims, mat: ComplexMatrix) -> Result<Self> {
        check_dims(dims)?;
        let n = dims.total();
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, dims {dims} need {n}x{n}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let residual = hermitian_residual(&mat);
        if residual > TOL_HERM {
            return Err(Error::NonHermitian { residual });
        }
        let tr = trace(&mat);
        if (tr.re - 1.0).abs() > TOL_TRACE || tr.im.abs() > TOL_TRACE {
            return Err(Error::BadTrace { trace: tr.re });
        }
        let min = eig_hermitian_unchecked(&mat).values.last().copied().unwrap_or(0.0);
        if min < -TOL_PSD {
            return Err(Error::NonPsd { min_eigenvalue: min });
        }
        Ok(Self { dims, mat })
    }

    /// Wraps a matrix produced by a trace-preserving, positivity-preserving
    /// computation. Hermiticity is re-imposed to remove rounding drift.
    pub(crate) fn from_trusted(dims: Dims, mat: ComplexMatrix) -> Self {
        debug_assert_eq!(mat.nrows(), dims.total());
        Self { dims, mat: hermitize(&mat) }
    }

    /// Normalizes a nonzero PSD matrix to unit trace.
    pub fn from_unnormalized(dims: Dims, mat: ComplexMatrix) -> Result<Self> {
        let tr = trace(&mat).re;
        if tr <= 0.0 {
            return Err(Error::BadTrace { trace: tr });
        }
        Self::new(dims, hermitize(&(mat / c(tr, 0.0))))
    }

    pub fn maximally_mixed(dims: Dims) -> Self {
        let n = dims.total();
        Self { dims, mat: identity(n) / c(n as f64, 0.0) }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self { dims: psi.dims, mat: outer(&psi.amps) }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.total()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// Same matrix viewed under a different split of the same total dimension.
    pub fn with_dims(&self, dims: Dims) -> Result<Self> {
        if dims.total() != self.dim() {
            return Err(Error::DimensionMismatch(format!("cannot view {} as {dims}", self.dims)));
        }
        Ok(Self { dims, mat: self.mat.clone() })
    }

    pub fn purity(&self) -> f64 {
        trace(&(&self.mat * &self.mat)).re
    }

    pub fn eigen(&self) -> HermitianEigen {
        eig_hermitian_unchecked(&self.mat)
    }

    /// Number of eigenvalues above `1e-12`.
    pub fn rank(&self) -> usize {
        self.eigen().values.iter().filter(|&&l| l > 1e-12).count().max(1)
    }

    /// `√ρ` with eigenvalues clamped at zero.
    pub fn sqrt(&self) -> ComplexMatrix {
        sqrt_from_eigen(&self.eigen())
    }

    /// `V ρ V†` for a unitary `V` on the full space.
    pub fn conjugate(&self, v: &ComplexMatrix) -> Result<Self> {
        if v.nrows() != self.dim() || v.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "unitary is {}x{}, state dimension {}",
                v.nrows(),
                v.ncols(),
                self.dim()
            )));
        }
        Ok(Self::from_trusted(self.dims, v * &self.mat * v.adjoint()))
    }

    /// `ρ_A ⊗ ρ_B`; the left factor becomes subsystem A.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        let dims = Dims::new(self.dim(), other.dim());
        check_dims(dims)?;
        Ok(Self { dims, mat: kron(&self.mat, &other.mat) })
    }

    pub fn partial_trace(&self, keep: Subsystem) -> Self {
        let Dims { a: da, b: db } = self.dims;
        match keep {
            Subsystem::A => {
                let m = ComplexMatrix::from_fn(da, da, |i, k| {
                    (0..db).map(|j| self.mat[(i * db + j, k * db + j)]).sum()
                });
                Self::from_trusted(Dims::single(da), m)
            }
            Subsystem::B => {
                let m = ComplexMatrix::from_fn(db, db, |j, l| {
                    (0..da).map(|i| self.mat[(i * db + j, i * db + l)]).sum()
                });
                Self::from_trusted(Dims::single(db), m)
            }
        }
    }

    /// Mixture `Σ w_k ρ_k` of states sharing one split.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} states",
                weights.len(),
                states.len()
            )));
        }
        check_distribution(weights)?;
        let dims = states[0].dims;
        let n = dims.total();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (w, s) in weights.iter().zip(states) {
            if s.dims != dims {
                return Err(Error::DimensionMismatch(format!("mixture of {} and {}", dims, s.dims)));
            }
            acc += &s.mat * c(*w, 0.0);
        }
        Ok(Self::from_trusted(dims, acc))
    }
}

/// Checks nonnegativity and unit sum (tolerance 1e-9).
pub fn check_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::BadDistribution("empty".into()));
    }
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::BadDistribution(format!("entry {x} is negative or not finite")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(Error::BadDistribution(format!("sums to {s}")));
    }
    Ok(())
}

/// A Hermitian operator used as a phase generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    mat: ComplexMatrix,
}

impl Observable {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch(format!("observable is {}x{}", mat.nrows(), mat.ncols())));
        }
        let residual = hermitian_residual(&mat);
        if residual > TOL_HERM {
            return Err(Error::NonHermitian { residual });
        }
        Ok(Self { mat })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self { mat: diag_real(values) }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// `H ⊗ I_B`.
    pub fn extend_a(&self, d_b: usize) -> Self {
        Self { mat: kron(&self.mat, &identity(d_b)) }
    }
}

/// Normalized state vector over `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Dims,
    amps: ComplexVector,
}

impl PureState {
    pub fn new(dims: Dims, amps: ComplexVector) -> Result<Self> {
        check_dims(dims)?;
        if amps.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dims {dims}",
                amps.len()
            )));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > TOL_NORM {
            return Err(Error::BadNorm { norm });
        }
        Ok(Self { dims, amps })
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(dims: Dims, amps: ComplexVector) -> Result<Self> {
        let norm = amps.norm();
        if norm == 0.0 {
            return Err(Error::BadNorm { norm });
        }
        Self::new(dims, amps / c(norm, 0.0))
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amps
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    pub fn reduced_a(&self) -> DensityMatrix {
        self.density().partial_trace(Subsystem::A)
    }
}

/// Kronecker product of raw matrices.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    kron(a, b)
}

/// `Σ_i √λ_i |v_i⟩ ⊗ |i⟩` over the support of `ρ`; dims `(dim ρ, rank ρ)`.
pub fn purify(rho: &DensityMatrix) -> PureState {
    let eig = rho.eigen();
    let rank = rho.rank();
    let n = rho.dim();
    let mut amps = ComplexVector::zeros(n * rank);
    for k in 0..rank {
        let w = eig.values[k].max(0.0).sqrt();
        for i in 0..n {
            amps[i * rank + k] = eig.vectors[(i, k)] * w;
        }
    }
    let norm = amps.norm();
    PureState { dims: Dims::new(n, rank), amps: amps / c(norm, 0.0) }
}
