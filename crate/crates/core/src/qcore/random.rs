//! Seeded random states and unitaries.
//!
//! Every generator takes an explicit [`Seed`]; child streams come from
//! [`Seed::split`], so independent starts or trials never share state.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::linalg::*;
use super::state::{DensityMatrix, Dims, PureState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Seed {
    /// Deterministic child seed for stream `index`.
    pub fn split(self, index: u64) -> Seed {
        Seed(splitmix64(self.0 ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D))))
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    // fill row-major so the draw order is layout independent
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = gaussian_complex(rng);
        }
    }
    m
}

/// Orthonormalizes the columns in place (modified Gram-Schmidt).
/// Columns are assumed linearly independent.
pub fn orthonormalize_columns(m: &mut ComplexMatrix) {
    for j in 0..m.ncols() {
        for k in 0..j {
            let proj = m.column(k).dotc(&m.column(j));
            let qk = m.column(k).clone_owned();
            m.column_mut(j).axpy(-proj, &qk, ONE);
        }
        let norm = m.column(j).norm();
        m.column_mut(j).scale_mut(1.0 / norm);
    }
}

pub fn random_unitary_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut z = ginibre(rng, dim, dim);
    orthonormalize_columns(&mut z);
    z
}

/// Haar-distributed unitary from the QR of a complex Gaussian matrix.
pub fn random_unitary(dim: usize, seed: Seed) -> ComplexMatrix {
    random_unitary_with(&mut seed.rng(), dim)
}

/// `rows × cols` matrix with orthonormal columns.
pub fn random_isometry_with<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let mut z = ginibre(rng, rows, cols);
    orthonormalize_columns(&mut z);
    z
}

pub fn random_pure_with<R: Rng + ?Sized>(rng: &mut R, dims: Dims) -> PureState {
    let g = ginibre(rng, dims.total(), 1);
    PureState::normalized(dims, g.column(0).clone_owned()).expect("gaussian vector is nonzero")
}

pub fn random_pure(dims: Dims, seed: Seed) -> PureState {
    random_pure_with(&mut seed.rng(), dims)
}

/// Induced-measure random state `GG†/tr(GG†)` with `G` of shape `n × rank`.
pub fn random_state_with<R: Rng + ?Sized>(rng: &mut R, dims: Dims, rank: usize) -> Result<DensityMatrix> {
    let n = dims.total();
    if rank == 0 || rank > n {
        return Err(Error::BadRank { rank, dim: n });
    }
    let g = ginibre(rng, n, rank);
    DensityMatrix::from_unnormalized(dims, &g * g.adjoint())
}

pub fn random_state(dims: Dims, rank: usize, seed: Seed) -> Result<DensityMatrix> {
    random_state_with(&mut seed.rng(), dims, rank)
}

/// Random Hermitian matrix with i.i.d. Gaussian entries (GUE-like).
pub fn random_hermitian_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    hermitize(&ginibre(rng, dim, dim))
}

/// Random point of the probability simplex (flat Dirichlet).
pub fn random_distribution_with<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..len).map(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln()).collect();
    let s: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / s).collect()
}
