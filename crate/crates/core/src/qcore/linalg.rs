//! Dense complex linear algebra on small matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
/// Dense complex matrix carrying every operator in the crate.
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

pub const TOL_HERM: f64 = 1e-10;
pub const TOL_PSD: f64 = 1e-10;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Builds a matrix from row-major real entries.
pub fn from_real_rows(n: usize, m: usize, entries: &[f64]) -> ComplexMatrix {
    assert_eq!(entries.len(), n * m);
    ComplexMatrix::from_fn(n, m, |i, j| c(entries[i * m + j], 0.0))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn trace(m: &ComplexMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Largest entrywise deviation between two matrices of equal shape.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

/// `max |m_ij - conj(m_ji)|`.
pub fn hermitian_residual(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

pub fn unitary_residual(u: &ComplexMatrix) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &identity(n))
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Unitary whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let d = ComplexMatrix::from_fn(n, n, |i, j| if i == j { c(self.values[i], 0.0) } else { ZERO });
        &self.vectors * d * self.vectors.adjoint()
    }

    /// Applies a scalar function to the spectrum: `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let s = f(lam);
            scaled.column_mut(j).scale_mut(s);
        }
        scaled * self.vectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let residual = hermitian_residual(m);
    if residual > TOL_HERM {
        return Err(Error::NonHermitian { residual });
    }
    Ok(eig_hermitian_unchecked(m))
}

pub(crate) fn eig_hermitian_unchecked(m: &ComplexMatrix) -> HermitianEigen {
    let n = m.nrows();
    if n == 0 {
        return HermitianEigen { values: vec![], vectors: ComplexMatrix::zeros(0, 0) };
    }
    if n == 1 {
        return HermitianEigen { values: vec![m[(0, 0)].re], vectors: identity(1) };
    }
    let eig = SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    HermitianEigen { values, vectors }
}

/// Principal square root of a PSD matrix. Eigenvalues in `[-1e-10, 0)` are clamped.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(m)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min < -TOL_PSD {
        return Err(Error::NonPsd { min_eigenvalue: min });
    }
    Ok(sqrt_from_eigen(&eig))
}

/// Square root from a spectral decomposition. Eigenvalues at rounding level
/// relative to the largest are treated as exact zeros, since `√ε` would
/// otherwise inject errors of order 1e-8.
pub(crate) fn sqrt_from_eigen(eig: &HermitianEigen) -> ComplexMatrix {
    let top = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let cutoff = 64.0 * f64::EPSILON * top;
    eig.map(|l| if l <= cutoff { 0.0 } else { l.sqrt() })
}

/// `exp(iG)` for Hermitian `G`.
pub fn expi_hermitian(g: &ComplexMatrix) -> ComplexMatrix {
    let n = g.nrows();
    if n == 2 {
        return expi_hermitian_2x2(g);
    }
    let eig = eig_hermitian_unchecked(g);
    let mut scaled = eig.vectors.clone();
    for (j, &lam) in eig.values.iter().enumerate() {
        let phase = C64::from_polar(1.0, lam);
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    scaled * eig.vectors.adjoint()
}

// exp(i(a0 I + a·σ)) = e^{i a0} (cos|a| I + i sin|a| â·σ)
fn expi_hermitian_2x2(g: &ComplexMatrix) -> ComplexMatrix {
    let a0 = 0.5 * (g[(0, 0)].re + g[(1, 1)].re);
    let az = 0.5 * (g[(0, 0)].re - g[(1, 1)].re);
    let ax = g[(0, 1)].re;
    let ay = -g[(0, 1)].im;
    let norm = (ax * ax + ay * ay + az * az).sqrt();
    let (cs, sn) = (norm.cos(), if norm > 0.0 { norm.sin() / norm } else { 1.0 });
    let glob = C64::from_polar(1.0, a0);
    let i = c(0.0, 1.0);
    let m00 = c(cs, 0.0) + i * sn * az;
    let m11 = c(cs, 0.0) - i * sn * az;
    let m01 = i * sn * c(ax, -ay);
    let m10 = i * sn * c(ax, ay);
    ComplexMatrix::from_row_slice(2, 2, &[m00 * glob, m01 * glob, m10 * glob, m11 * glob])
}

/// Projector `|v⟩⟨v|`.
pub fn outer(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

pub fn diag_real(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { c(values[i], 0.0) } else { ZERO })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> ComplexMatrix {
        from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    #[test]
    fn identity_eigenvalues_are_one() {
        let e = eig_hermitian(&identity(3)).unwrap();
        assert!(e.values.iter().all(|&v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn pauli_x_spectrum_and_vectors() {
        let e = eig_hermitian(&pauli_x()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] + 1.0).abs() < 1e-14);
        // |+⟩ up to phase
        let v = e.vectors.column(0);
        assert!((v[0].norm() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(((v[0].conj() * v[1]).re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mixed_plus_one_matches_quadratic() {
        // ρ = ¾|+⟩⟨+| + ¼|1⟩⟨1| = [[3/8, 3/8],[3/8, 5/8]]
        let m = from_real_rows(2, 2, &[0.375, 0.375, 0.375, 0.625]);
        let (a, b, d) = (0.375f64, 0.375f64, 0.625f64);
        let mean = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        let e = eig_hermitian(&m).unwrap();
        assert!((e.values[0] - (mean + disc)).abs() < 1e-14);
        assert!((e.values[1] - (mean - disc)).abs() < 1e-14);
        assert!(frobenius_dist(&e.reconstruct(), &m) < 1e-9);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(eig_hermitian(&m), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn psd_sqrt_diagonal() {
        let m = diag_real(&[0.75, 0.25]);
        let s = psd_sqrt(&m).unwrap();
        assert!((s[(0, 0)].re - 0.75f64.sqrt()).abs() < 1e-14);
        assert!((s[(1, 1)].re - 0.5).abs() < 1e-14);
        assert!(s[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn psd_sqrt_rejects_negative() {
        let m = diag_real(&[1.1, -0.1]);
        assert!(matches!(psd_sqrt(&m), Err(Error::NonPsd { .. })));
    }

    #[test]
    fn expi_2x2_matches_generic() {
        let g = ComplexMatrix::from_row_slice(2, 2, &[c(0.3, 0.0), c(0.2, -0.7), c(0.2, 0.7), c(-1.1, 0.0)]);
        let fast = expi_hermitian_2x2(&g);
        let eig = eig_hermitian_unchecked(&g);
        let mut scaled = eig.vectors.clone();
        for (j, &lam) in eig.values.iter().enumerate() {
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= C64::from_polar(1.0, lam));
        }
        let slow = scaled * eig.vectors.adjoint();
        assert!(max_abs_diff(&fast, &slow) < 1e-13);
        assert!(unitary_residual(&fast) < 1e-13);
    }
}
