//! Local and multi-start optimizers shared by the basis, measurement and
//! decomposition searches.

pub mod multistart;
pub mod nelder_mead;
pub mod stiefel;
pub mod unitary;

pub use multistart::{Budget, RESTART_AGREEMENT};
