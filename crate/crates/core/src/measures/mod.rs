//! Skew-information quantumness measures.
//!
//! | quantity     | definition                                                  |
//! |--------------|-------------------------------------------------------------|
//! | coherence    | `I(ρ_A, H)` with `I(ρ, H) = -Tr([√ρ, H]²)/2`                |
//! | BD-discord   | `I(ρ_AB, H_J ⊗ I_B)` for a fixed A-basis `J`               |
//! | discord      | `min_J I(ρ_AB, H_J ⊗ I_B)`                                  |
//! | entanglement | `min_{p_e, ψ_e} Σ_e p_e min_J I(ψ_e, H_J ⊗ I_B)` (convex roof) |
//!
//! `H_J = Σ_j h_j |j⟩⟨j|` with a fixed spectrum `h` (a [`GeneratorSpectrum`]).

mod roof;

pub use roof::{entanglement_skew, pure_min_bd_discord, RoofObjective};

use crate::classify::BasisSpec;
use crate::error::{Error, Result};
use crate::optim::unitary::minimize_over_unitaries;
use crate::optim::Budget;
use crate::qcore::linalg::*;
use crate::qcore::random::Seed;
use crate::qcore::state::{DensityMatrix, Observable, PureState, Subsystem};

/// Eigenvalues `h_j` of the phase generator, listed per basis ket.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpectrum(pub Vec<f64>);

impl GeneratorSpectrum {
    /// `h_j = j`; on two paths this is the projector onto `|1⟩`.
    pub fn ramp(dim: usize) -> Self {
        Self((0..dim).map(|j| j as f64).collect())
    }

    /// Projector onto basis ket `index`.
    pub fn projector(dim: usize, index: usize) -> Self {
        Self((0..dim).map(|j| if j == index { 1.0 } else { 0.0 }).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    fn check(&self, d_a: usize) -> Result<()> {
        if self.0.len() != d_a {
            return Err(Error::DimensionMismatch(format!(
                "generator has {} values, subsystem A has dimension {d_a}",
                self.0.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub weights: Vec<f64>,
    pub states: Vec<PureState>,
}

impl Decomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.states[0].dims().total();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (w, s) in self.weights.iter().zip(&self.states) {
            acc += outer(s.amplitudes()) * c(*w, 0.0);
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureWitness {
    Basis(BasisSpec),
    /// Decomposition with the optimal A-basis of each element.
    Decomposition { decomposition: Decomposition, bases: Vec<BasisSpec> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureValue {
    pub value: f64,
    pub witness: Option<MeasureWitness>,
    pub converged: bool,
    /// Objective evaluations spent (0 for closed-form values).
    pub iterations: usize,
}

impl MeasureValue {
    fn exact(value: f64) -> Self {
        Self { value, witness: None, converged: true, iterations: 0 }
    }

    /// Turns an unconverged search into [`Error::BudgetExhausted`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::BudgetExhausted { best: self.value })
        }
    }
}

fn skew_from_sqrt(sqrt_rho: &ComplexMatrix, h: &ComplexMatrix) -> f64 {
    // [√ρ, H] is anti-Hermitian, so -Tr(C²) = ‖C‖_F²
    let comm = commutator(sqrt_rho, h);
    0.5 * comm.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

/// Wigner-Yanase skew information `-Tr([√ρ, H]²)/2`.
pub fn skew_info(rho: &DensityMatrix, h: &Observable) -> Result<MeasureValue> {
    if h.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "observable of dimension {} for state of dimension {}",
            h.dim(),
            rho.dim()
        )));
    }
    Ok(MeasureValue::exact(skew_from_sqrt(&rho.sqrt(), h.matrix())))
}

/// Skew coherence of the reduced state `ρ_A` with generator `H_J`.
pub fn coherence_skew(rho: &DensityMatrix, basis: &BasisSpec, spectrum: &GeneratorSpectrum) -> Result<MeasureValue> {
    let rho_a = rho.partial_trace(Subsystem::A);
    let h = basis.diagonal_operator(spectrum.values())?;
    let mut v = skew_info(&rho_a, &h)?;
    v.witness = Some(MeasureWitness::Basis(basis.clone()));
    Ok(v)
}

/// `I(ρ_AB, H ⊗ I_B)` where `H` must be diagonal in `basis`.
pub fn bd_discord_skew(rho: &DensityMatrix, basis: &BasisSpec, generator: &Observable) -> Result<MeasureValue> {
    let dims = rho.dims();
    if generator.dim() != dims.a || basis.dim() != dims.a {
        return Err(Error::DimensionMismatch(format!(
            "generator/basis of dimension {}/{} for subsystem A of dims {dims}",
            generator.dim(),
            basis.dim()
        )));
    }
    let residual = (0..dims.a)
        .map(|j| frobenius(&commutator(generator.matrix(), &basis.projector(j))))
        .fold(0.0, f64::max);
    if residual > 1e-10 {
        return Err(Error::GeneratorNotDiagonal { residual });
    }
    let mut v = skew_info(rho, &generator.extend_a(dims.b))?;
    v.witness = Some(MeasureWitness::Basis(basis.clone()));
    Ok(v)
}

/// [`bd_discord_skew`] with `H = Σ_j h_j |j⟩⟨j|` built in `basis`.
pub fn bd_discord_skew_with(rho: &DensityMatrix, basis: &BasisSpec, spectrum: &GeneratorSpectrum) -> Result<MeasureValue> {
    spectrum.check(rho.dims().a)?;
    bd_discord_skew(rho, basis, &basis.diagonal_operator(spectrum.values())?)
}

/// `min_J I(ρ, H_J ⊗ I_B)` by multi-start search over A-bases.
pub fn discord_skew(rho: &DensityMatrix, spectrum: &GeneratorSpectrum, budget: Budget, seed: Seed) -> Result<MeasureValue> {
    let dims = rho.dims();
    if dims.a > 4 {
        return Err(Error::UnsupportedDims(dims));
    }
    spectrum.check(dims.a)?;
    let sqrt_rho = rho.sqrt();
    let h = diag_real(spectrum.values());
    let id_b = identity(dims.b);
    let objective = |u: &ComplexMatrix| {
        let hu = kron(&(u * &h * u.adjoint()), &id_b);
        skew_from_sqrt(&sqrt_rho, &hu)
    };
    let warm = [rho.partial_trace(Subsystem::A).eigen().vectors, identity(dims.a)];
    let search = minimize_over_unitaries(dims.a, objective, &warm, budget, seed, Some(0.0));
    Ok(MeasureValue {
        value: search.value.max(0.0),
        witness: Some(MeasureWitness::Basis(BasisSpec::from_trusted(search.unitary))),
        converged: search.converged,
        iterations: search.evaluations,
    })
}

/// Quantum Fisher information `2 Σ (λ_i-λ_j)²/(λ_i+λ_j) |⟨i|H|j⟩|²`.
pub fn qfi(rho: &DensityMatrix, h: &Observable) -> Result<f64> {
    if h.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "observable of dimension {} for state of dimension {}",
            h.dim(),
            rho.dim()
        )));
    }
    let eig = rho.eigen();
    let hv = eig.vectors.adjoint() * h.matrix() * &eig.vectors;
    let lam = &eig.values;
    let mut acc = 0.0;
    for i in 0..lam.len() {
        for j in 0..lam.len() {
            let s = lam[i] + lam[j];
            if s > 1e-12 {
                acc += (lam[i] - lam[j]).powi(2) / s * hv[(i, j)].norm_sqr();
            }
        }
    }
    Ok(2.0 * acc)
}
