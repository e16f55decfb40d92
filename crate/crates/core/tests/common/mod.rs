//! Reference computations written independently of the library algorithms:
//! direct index sums, textbook closed forms, and nalgebra decompositions.

#![allow(dead_code)]

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use num_complex::Complex64;
use qkit::qcore::random::{random_state, random_unitary};
use qkit::{DensityMatrix, Dims, Seed};

pub type M = DMatrix<Complex64>;

pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn eye(n: usize) -> M {
    M::identity(n, n)
}

pub fn kron(a: &M, b: &M) -> M {
    a.kronecker(b)
}

pub fn pauli(k: usize) -> M {
    let (o, z, i) = (cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 1.0));
    match k {
        0 => M::from_row_slice(2, 2, &[o, z, z, o]),
        1 => M::from_row_slice(2, 2, &[z, o, o, z]),
        2 => M::from_row_slice(2, 2, &[z, -i, i, z]),
        _ => M::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// `Tr_B ρ = Σ_j (I ⊗ ⟨j|) ρ (I ⊗ |j⟩)`.
pub fn trace_out_b(rho: &M, da: usize, db: usize) -> M {
    let mut acc = M::zeros(da, da);
    for j in 0..db {
        let mut ket = M::zeros(db, 1);
        ket[(j, 0)] = cx(1.0, 0.0);
        let v = kron(&eye(da), &ket);
        acc += v.adjoint() * rho * v;
    }
    acc
}

/// `Tr_A ρ = Σ_i (⟨i| ⊗ I) ρ (|i⟩ ⊗ I)`.
pub fn trace_out_a(rho: &M, da: usize, db: usize) -> M {
    let mut acc = M::zeros(db, db);
    for i in 0..da {
        let mut ket = M::zeros(da, 1);
        ket[(i, 0)] = cx(1.0, 0.0);
        let v = kron(&ket, &eye(db));
        acc += v.adjoint() * rho * v;
    }
    acc
}

/// Square root through nalgebra's own Hermitian eigensolver.
pub fn sqrtm(rho: &M) -> M {
    let eig = SymmetricEigen::new(rho.clone());
    let d = M::from_diagonal(&eig.eigenvalues.map(|l| cx(if l > 1e-14 { l.sqrt() } else { 0.0 }, 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// `⟨H²⟩ - ⟨H⟩²` for a state vector.
pub fn variance(psi: &M, h: &M) -> f64 {
    let m1 = (psi.adjoint() * h * psi)[(0, 0)].re;
    let m2 = (psi.adjoint() * h * h * psi)[(0, 0)].re;
    m2 - m1 * m1
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &M) -> f64 {
    let yy = kron(&pauli(2), &pauli(2));
    let tilde = &yy * rho.conjugate() * &yy;
    let s = sqrtm(rho);
    let r = &s * tilde * &s;
    let mut ev: Vec<f64> = SymmetricEigen::new((&r + r.adjoint()) * cx(0.5, 0.0))
        .eigenvalues
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    (ev[0] - ev[1] - ev[2] - ev[3]).max(0.0)
}

/// Convex roof of the projector-generator skew discord on two qubits:
/// `C²/4`, because the pure-state value is the tangle over four.
pub fn roof_oracle(rho: &M) -> f64 {
    concurrence(rho).powi(2) / 4.0
}

/// Projector-generator skew discord of a state with a qubit A:
/// `(1 - λ_max(W))/4` with `W_ij = Tr(√ρ σ_i⊗I √ρ σ_j⊗I)`.
pub fn discord_oracle(rho: &M, db: usize) -> f64 {
    let s = sqrtm(rho);
    let sig: Vec<M> = (1..4).map(|k| kron(&pauli(k), &eye(db))).collect();
    let w = Matrix3::from_fn(|i, j| (&s * &sig[i] * &s * &sig[j]).trace().re);
    let w = (w + w.transpose()) * 0.5;
    let lmax = SymmetricEigen::new(w).eigenvalues.max();
    (1.0 - lmax) / 4.0
}

/// Mutual information from a joint table `p(k, x) = prior_k p(x|k)`.
pub fn mutual_info_oracle(priors: &[f64], cond: &[Vec<f64>]) -> f64 {
    let nx = cond[0].len();
    let px: Vec<f64> = (0..nx).map(|x| priors.iter().zip(cond).map(|(w, r)| w * r[x]).sum()).collect();
    let h = |p: &[f64]| -> f64 { p.iter().filter(|&&v| v > 0.0).map(|v| -v * v.log2()).sum() };
    let h_cond: f64 = priors.iter().zip(cond).map(|(w, r)| w * h(r)).sum();
    h(&px) - h_cond
}

pub fn rand_state(dims: Dims, seed: u64) -> DensityMatrix {
    let total = dims.total();
    let rank = 1 + (seed as usize % total);
    random_state(dims, rank, Seed(seed)).unwrap()
}

pub fn rand_unitary(d: usize, seed: u64) -> M {
    random_unitary(d, Seed(seed))
}
