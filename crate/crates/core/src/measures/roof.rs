//! Convex-roof minimization for the entanglement measure.
//!
//! Every `m`-element pure-state decomposition of `ρ = Σ_i λ_i |v_i⟩⟨v_i|`
//! is `|ψ̃_e⟩ = Σ_i W_ei √λ_i |v_i⟩` for an `m×m` unitary `W`; only the
//! first `rank` columns of `W` matter, so the search runs over `m×rank`
//! isometries. For a pure element the inner basis minimum is closed form:
//! the variance of `H_J ⊗ I` depends only on the diagonal of `ρ_A` in `J`,
//! is concave in that diagonal, and the diagonals form the permutohedron
//! of the spectrum of `ρ_A`. The minimum therefore sits at an eigenbasis of
//! `ρ_A` with the best assignment of generator values to eigenvectors.

use crate::classify::BasisSpec;
use crate::error::{Error, Result};
use crate::optim::multistart::{multistart, StartResult};
use crate::optim::stiefel::{minimize_stiefel, StiefelObjective};
use crate::optim::Budget;
use crate::qcore::linalg::*;
use crate::qcore::random::{random_isometry_with, Seed};
use crate::qcore::state::{DensityMatrix, Dims, PureState};

use super::{Decomposition, GeneratorSpectrum, MeasureValue, MeasureWitness};

pub const MAX_DEFAULT_M: usize = 16;

fn permutations(values: &[f64]) -> Vec<Vec<f64>> {
    if values.len() <= 1 {
        return vec![values.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..values.len() {
        let mut rest = values.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Best assignment of generator values to an (unnormalized) spectrum `mu`:
/// returns `(Σ g²μ - (Σ gμ)²/P, assignment index)`.
fn best_assignment(mu: &[f64], perms: &[Vec<f64>]) -> (f64, usize) {
    let p: f64 = mu.iter().sum();
    if p <= 1e-300 {
        return (0.0, 0);
    }
    let mut best = (f64::INFINITY, 0);
    for (idx, g) in perms.iter().enumerate() {
        let s: f64 = g.iter().zip(mu).map(|(g, m)| g * m).sum();
        let q: f64 = g.iter().zip(mu).map(|(g, m)| g * g * m).sum();
        let v = q - s * s / p;
        if v < best.0 {
            best = (v, idx);
        }
    }
    (best.0.max(0.0), best.1)
}

/// Exact `min_J I(ψ, H_J ⊗ I_B)` for a pure state and the minimizing basis.
pub fn pure_min_bd_discord(psi: &PureState, spectrum: &GeneratorSpectrum) -> Result<(f64, BasisSpec)> {
    let d_a = psi.dims().a;
    spectrum.check(d_a)?;
    let eig = psi.reduced_a().eigen();
    let perms = permutations(spectrum.values());
    let (value, idx) = best_assignment(&eig.values, &perms);
    Ok((value, basis_for_assignment(&eig, &perms[idx], spectrum.values())))
}

// Basis ket j is the eigenvector carrying generator value h_j.
fn basis_for_assignment(eig: &HermitianEigen, assigned: &[f64], spectrum: &[f64]) -> BasisSpec {
    let d = spectrum.len();
    let mut used = vec![false; d];
    let mut cols = Vec::with_capacity(d);
    for &h in spectrum {
        let k = (0..d)
            .find(|&k| !used[k] && assigned[k] == h)
            .expect("assignment is a permutation of the spectrum");
        used[k] = true;
        cols.push(eig.vectors.column(k).clone_owned());
    }
    BasisSpec::from_trusted(ComplexMatrix::from_columns(&cols))
}

/// Average inner minimum over the decomposition induced by an isometry.
pub struct RoofObjective {
    dims: Dims,
    rank: usize,
    m: usize,
    /// `√λ_i v_i`, one flat vector per support eigenvector.
    phis: Vec<Vec<C64>>,
    perms: Vec<Vec<f64>>,
}

impl RoofObjective {
    pub fn new(rho: &DensityMatrix, spectrum: &GeneratorSpectrum, m: usize) -> Result<Self> {
        let dims = rho.dims();
        spectrum.check(dims.a)?;
        let eig = rho.eigen();
        let rank = rho.rank();
        if m < rank {
            return Err(Error::BadM { m, rank });
        }
        let phis = (0..rank)
            .map(|k| {
                let w = eig.values[k].max(0.0).sqrt();
                eig.vectors.column(k).iter().map(|z| z * w).collect()
            })
            .collect();
        Ok(Self { dims, rank, m, phis, perms: permutations(spectrum.values()) })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `[I_rank; 0]`, the zero-padded spectral decomposition.
    pub fn spectral_start(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.m, self.rank, |e, i| if e == i { ONE } else { ZERO })
    }

    fn element(&self, y: &ComplexMatrix, e: usize) -> Vec<C64> {
        let n = self.dims.total();
        let mut psi = vec![ZERO; n];
        for (i, phi) in self.phis.iter().enumerate() {
            let w = y[(e, i)];
            for (p, f) in psi.iter_mut().zip(phi) {
                *p += w * f;
            }
        }
        psi
    }

    fn reduced(&self, psi: &[C64]) -> ComplexMatrix {
        let Dims { a: da, b: db } = self.dims;
        ComplexMatrix::from_fn(da, da, |a, a2| {
            (0..db).map(|b| psi[a * db + b] * psi[a2 * db + b].conj()).sum()
        })
    }

    /// Element value and `Γ = ∂G/∂A` at the reduced matrix `A`.
    fn element_value(&self, a: &ComplexMatrix, want_gamma: bool) -> (f64, Option<ComplexMatrix>) {
        let da = self.dims.a;
        if da == 1 {
            return (0.0, want_gamma.then(|| ComplexMatrix::zeros(1, 1)));
        }
        if da == 2 {
            let (x, z, b) = (a[(0, 0)].re, a[(1, 1)].re, a[(0, 1)]);
            let mean = 0.5 * (x + z);
            let disc = (0.25 * (x - z) * (x - z) + b.norm_sqr()).sqrt();
            let mu = [mean + disc, mean - disc];
            let (value, idx) = best_assignment(&mu, &self.perms);
            if !want_gamma {
                return (value, None);
            }
            let p = x + z;
            if p <= 1e-300 {
                return (value, Some(ComplexMatrix::zeros(2, 2)));
            }
            let g = &self.perms[idx];
            let s = g[0] * mu[0] + g[1] * mu[1];
            let w = [(g[0] - s / p).powi(2), (g[1] - s / p).powi(2)];
            let mut gamma = identity(2) * c(w[1], 0.0);
            if disc > 1e-300 {
                let p1 = (a - identity(2) * c(mu[1], 0.0)) / c(mu[0] - mu[1], 0.0);
                gamma += p1 * c(w[0] - w[1], 0.0);
            }
            return (value, Some(gamma));
        }
        let eig = eig_hermitian_unchecked(a);
        let (value, idx) = best_assignment(&eig.values, &self.perms);
        if !want_gamma {
            return (value, None);
        }
        let p: f64 = eig.values.iter().sum();
        if p <= 1e-300 {
            return (value, Some(ComplexMatrix::zeros(da, da)));
        }
        let g = &self.perms[idx];
        let s: f64 = g.iter().zip(&eig.values).map(|(g, m)| g * m).sum();
        let mut scaled = eig.vectors.clone();
        for (k, gk) in g.iter().enumerate().take(da) {
            scaled.column_mut(k).scale_mut((gk - s / p).powi(2));
        }
        (value, Some(scaled * eig.vectors.adjoint()))
    }

    /// Weights, normalized states and per-element bases for an isometry.
    pub fn decomposition(&self, y: &ComplexMatrix, spectrum: &GeneratorSpectrum) -> (Decomposition, Vec<BasisSpec>) {
        let mut weights = Vec::new();
        let mut states = Vec::new();
        let mut bases = Vec::new();
        for e in 0..self.m {
            let psi = self.element(y, e);
            let p: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            if p <= 1e-15 {
                continue;
            }
            let state = PureState::normalized(self.dims, ComplexVector::from_vec(psi)).expect("nonzero element");
            let eig = state.reduced_a().eigen();
            let (_, idx) = best_assignment(&eig.values, &self.perms);
            bases.push(basis_for_assignment(&eig, &self.perms[idx], spectrum.values()));
            weights.push(p);
            states.push(state);
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        (Decomposition { weights, states }, bases)
    }
}

impl StiefelObjective for RoofObjective {
    fn value(&self, y: &ComplexMatrix) -> f64 {
        (0..self.m)
            .map(|e| {
                let psi = self.element(y, e);
                self.element_value(&self.reduced(&psi), false).0
            })
            .sum()
    }

    fn value_and_gradient(&self, y: &ComplexMatrix) -> (f64, ComplexMatrix) {
        let Dims { a: da, b: db } = self.dims;
        let mut grad = ComplexMatrix::zeros(self.m, self.rank);
        let mut total = 0.0;
        let mut dpsi = vec![ZERO; da * db];
        for e in 0..self.m {
            let psi = self.element(y, e);
            let (v, gamma) = self.element_value(&self.reduced(&psi), true);
            total += v;
            let gamma = gamma.expect("requested");
            // ∂G/∂ψ* = 2 Γ Ψ with Ψ the d_A × d_B reshape of ψ
            for a in 0..da {
                for b in 0..db {
                    let mut acc = ZERO;
                    for a2 in 0..da {
                        acc += gamma[(a, a2)] * psi[a2 * db + b];
                    }
                    dpsi[a * db + b] = acc * 2.0;
                }
            }
            for (i, phi) in self.phis.iter().enumerate() {
                grad[(e, i)] = phi.iter().zip(&dpsi).map(|(f, d)| f.conj() * d).sum();
            }
        }
        (total, grad)
    }
}

/// Default decomposition size `min(rank², 16)`, never below the rank.
pub fn default_m(rank: usize) -> usize {
    (rank * rank).min(MAX_DEFAULT_M).max(rank)
}

/// Convex roof of the basis-minimized BD-discord skew information.
pub fn entanglement_skew(
    rho: &DensityMatrix,
    spectrum: &GeneratorSpectrum,
    m: Option<usize>,
    budget: Budget,
    seed: Seed,
) -> Result<MeasureValue> {
    let dims = rho.dims();
    if dims.a > 4 || dims.b > 4 {
        return Err(Error::UnsupportedDims(dims));
    }
    let rank = rho.rank();
    let m = m.unwrap_or_else(|| default_m(rank));
    let objective = RoofObjective::new(rho, spectrum, m)?;
    let search = multistart(budget.restarts, Some(0.0), |i| {
        let y0 = if i == 0 {
            objective.spectral_start()
        } else {
            random_isometry_with(&mut seed.split(i as u64).rng(), m, rank)
        };
        let r = minimize_stiefel(&objective, y0, budget.max_evals, budget.tol, 1e-14);
        StartResult { point: r.y, value: r.value, evals: r.evals, converged: r.converged }
    });
    let (decomposition, bases) = objective.decomposition(&search.best, spectrum);
    Ok(MeasureValue {
        value: search.value.max(0.0),
        witness: Some(MeasureWitness::Decomposition { decomposition, bases }),
        converged: search.converged || search.value <= 1e-14,
        iterations: search.evaluations,
    })
}
