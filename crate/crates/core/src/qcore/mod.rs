//! Dense complex-matrix quantum primitives.

pub mod linalg;
pub mod random;
pub mod state;

pub use linalg::{
    c, eig_hermitian, psd_sqrt, ComplexMatrix, ComplexVector, HermitianEigen, C64,
};
pub use random::{random_pure, random_state, random_unitary, Seed};
pub use state::{purify, tensor, DensityMatrix, Dims, Observable, PureState, Subsystem};

/// Principal square root of a density matrix.
pub fn matrix_sqrt_psd(rho: &DensityMatrix) -> crate::Result<ComplexMatrix> {
    psd_sqrt(rho.matrix())
}

/// Reduced state on the kept subsystem.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> DensityMatrix {
    rho.partial_trace(keep)
}
