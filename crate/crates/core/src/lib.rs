//! Interferometric quantumness toolkit.
//!
//! Classifies bipartite states against the four classical families
//! (incoherent, zero basis-dependent discord, zero discord, separable),
//! evaluates the matching skew-information quantumness measures, and
//! simulates phase-encoding interferometry and basis-rotating adversaries.

pub mod adversary;
pub mod channels;
pub mod classify;
pub mod error;
pub mod fixtures;
pub mod interferometer;
pub mod measures;
pub mod optim;
pub mod qcore;

pub use classify::{BasisSpec, ClassVerdict, Family};
pub use error::{Error, Result};
pub use measures::{Decomposition, GeneratorSpectrum, MeasureValue, MeasureWitness};
pub use optim::Budget;
pub use qcore::{ComplexMatrix, DensityMatrix, Dims, Observable, PureState, Seed, Subsystem, C64};
