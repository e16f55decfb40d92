//! Three-stage interferometry: preparation, phase encoding on the paths of
//! subsystem A, and measurement. Interferometric capability is the mutual
//! information between the outcome and a finite ensemble of phase vectors.

use std::f64::consts::{PI, TAU};

use rand::Rng;

use crate::classify::BasisSpec;
use crate::error::{Error, Result};
use crate::optim::unitary::minimize_over_unitaries;
use crate::optim::Budget;
use crate::qcore::linalg::*;
use crate::qcore::random::{ginibre, Seed};
use crate::qcore::state::{check_distribution, DensityMatrix, Subsystem};

/// Finite set of phase vectors `φ_A` (one phase per path) with priors.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseEnsemble {
    phases: Vec<Vec<f64>>,
    priors: Vec<f64>,
}

impl PhaseEnsemble {
    /// Phases are reduced into `[0, 2π)`.
    pub fn new(phases: Vec<Vec<f64>>, priors: Vec<f64>) -> Result<Self> {
        if phases.is_empty() || phases.len() != priors.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} phase vectors with {} priors",
                phases.len(),
                priors.len()
            )));
        }
        let d = phases[0].len();
        if d == 0 || phases.iter().any(|p| p.len() != d) {
            return Err(Error::InvalidEnsemble("phase vectors must share a nonzero length".into()));
        }
        if phases.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidEnsemble("phases must be finite".into()));
        }
        check_distribution(&priors).map_err(|e| Error::InvalidEnsemble(e.to_string()))?;
        let phases = phases
            .into_iter()
            .map(|v| v.into_iter().map(|x| x.rem_euclid(TAU)).map(|x| if x >= TAU { 0.0 } else { x }).collect())
            .collect();
        Ok(Self { phases, priors })
    }

    pub fn uniform(phases: Vec<Vec<f64>>) -> Result<Self> {
        let k = phases.len().max(1);
        Self::new(phases, vec![1.0 / k as f64; k])
    }

    /// Uniform grid: path 0 carries phase 0, every other path takes each of
    /// `values` (global phases are unobservable).
    pub fn grid(d_a: usize, values: &[f64]) -> Result<Self> {
        if d_a == 0 || values.is_empty() {
            return Err(Error::InvalidEnsemble("empty grid".into()));
        }
        let mut phases = vec![vec![0.0]];
        for _ in 1..d_a {
            phases = phases
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        Self::uniform(phases)
    }

    /// `{0, π}` on every path relative to path 0.
    pub fn binary(d_a: usize) -> Self {
        Self::grid(d_a, &[0.0, PI]).expect("nonempty grid")
    }

    pub fn phases(&self) -> &[Vec<f64>] {
        &self.phases
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn paths(&self) -> usize {
        self.phases[0].len()
    }
}

/// POVM `{M_j}` with `Σ M_j = I` and `M_j ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    elements: Vec<ComplexMatrix>,
}

impl Measurement {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::InvalidMeasurement("no elements".into()));
        };
        let n = first.nrows();
        let mut sum = ComplexMatrix::zeros(n, n);
        for (j, m) in elements.iter().enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::InvalidMeasurement(format!("element {j} is not {n}x{n}")));
            }
            let herm = hermitian_residual(m);
            if herm > TOL_HERM {
                return Err(Error::InvalidMeasurement(format!("element {j} is not Hermitian ({herm:.3e})")));
            }
            let min = eig_hermitian_unchecked(m).values.last().copied().unwrap_or(0.0);
            if min < -TOL_PSD {
                return Err(Error::InvalidMeasurement(format!("element {j} has eigenvalue {min:.3e}")));
            }
            sum += m;
        }
        let completeness = max_abs_diff(&sum, &identity(n));
        if completeness > 1e-9 {
            return Err(Error::InvalidMeasurement(format!("elements sum to identity only within {completeness:.3e}")));
        }
        Ok(Self { elements })
    }

    /// Rank-1 projective measurement onto the columns of a unitary.
    pub fn projective(u: &ComplexMatrix) -> Self {
        Self { elements: (0..u.ncols()).map(|j| outer(&u.column(j).clone_owned())).collect() }
    }

    /// `{M_j ⊗ I_B}`.
    pub fn local_a(local: &Measurement, d_b: usize) -> Self {
        Self { elements: local.elements.iter().map(|m| kron(m, &identity(d_b))).collect() }
    }

    /// Random POVM `M_k = S^{-1/2} G_k† G_k S^{-1/2}` with Ginibre `G_k` and
    /// `S = Σ_k G_k† G_k`.
    pub fn random_with<R: Rng + ?Sized>(rng: &mut R, dim: usize, outcomes: usize) -> Self {
        let gs: Vec<ComplexMatrix> = (0..outcomes.max(1)).map(|_| ginibre(rng, dim, dim)).collect();
        let mut s = ComplexMatrix::zeros(dim, dim);
        for g in &gs {
            s += g.adjoint() * g;
        }
        let inv_sqrt = eig_hermitian_unchecked(&s).map(|l| 1.0 / l.sqrt());
        Self { elements: gs.iter().map(|g| hermitize(&(&inv_sqrt * g.adjoint() * g * &inv_sqrt))).collect() }
    }

    pub fn trivial(dim: usize) -> Self {
        Self { elements: vec![identity(dim)] }
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }
}

/// `U = Σ_j e^{-iφ_j} |j⟩⟨j| ⊗ I_B`.
pub fn phase_unitary(basis: &BasisSpec, phi: &[f64], d_b: usize) -> Result<ComplexMatrix> {
    if phi.len() != basis.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} phases for {} paths",
            phi.len(),
            basis.dim()
        )));
    }
    let v = basis.unitary();
    let d = ComplexMatrix::from_fn(phi.len(), phi.len(), |i, j| {
        if i == j { C64::from_polar(1.0, -phi[i]) } else { ZERO }
    });
    Ok(kron(&(v * d * v.adjoint()), &identity(d_b)))
}

pub fn encode(rho: &DensityMatrix, basis: &BasisSpec, phi: &[f64]) -> Result<DensityMatrix> {
    if basis.dim() != rho.dims().a {
        return Err(Error::DimensionMismatch(format!(
            "basis of dimension {} for dims {}",
            basis.dim(),
            rho.dims()
        )));
    }
    rho.conjugate(&phase_unitary(basis, phi, rho.dims().b)?)
}

/// Born-rule distribution `p_j = Tr[M_j ρ]`.
pub fn outcome_dist(rho: &DensityMatrix, m: &Measurement) -> Result<Vec<f64>> {
    if m.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "measurement of dimension {} for state of dimension {}",
            m.dim(),
            rho.dim()
        )));
    }
    let mut p: Vec<f64> = m
        .elements
        .iter()
        .map(|e| e.iter().zip(rho.matrix().transpose().iter()).map(|(a, b)| (a * b).re).sum::<f64>())
        .map(|x: f64| x.clamp(0.0, 1.0))
        .collect();
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-12 && total > 0.0 {
        p.iter_mut().for_each(|x| *x /= total);
    }
    Ok(p)
}

/// Encoded state for each ensemble member.
pub fn encoded_states(rho: &DensityMatrix, basis: &BasisSpec, ensemble: &PhaseEnsemble) -> Result<Vec<DensityMatrix>> {
    if ensemble.paths() != rho.dims().a {
        return Err(Error::DimensionMismatch(format!(
            "ensemble has {} paths, subsystem A has dimension {}",
            ensemble.paths(),
            rho.dims().a
        )));
    }
    ensemble.phases().iter().map(|phi| encode(rho, basis, phi)).collect()
}

/// `p(x | φ_k)` as rows indexed by ensemble member.
pub fn conditional_distributions(
    rho: &DensityMatrix,
    basis: &BasisSpec,
    ensemble: &PhaseEnsemble,
    m: &Measurement,
) -> Result<Vec<Vec<f64>>> {
    encoded_states(rho, basis, ensemble)?.iter().map(|s| outcome_dist(s, m)).collect()
}

/// `I(X; Φ)` in bits from conditional outcome distributions.
pub fn mutual_info_from_conditionals(priors: &[f64], conditionals: &[Vec<f64>]) -> f64 {
    let n_out = conditionals.first().map_or(0, Vec::len);
    let mut marginal = vec![0.0; n_out];
    for (w, row) in priors.iter().zip(conditionals) {
        for (m, p) in marginal.iter_mut().zip(row) {
            *m += w * p;
        }
    }
    let mut mi = 0.0;
    for (w, row) in priors.iter().zip(conditionals) {
        for (p, m) in row.iter().zip(&marginal) {
            if *p > 0.0 && *w > 0.0 {
                mi += w * p * (p / m).log2();
            }
        }
    }
    mi.max(0.0)
}

pub fn mutual_info(rho: &DensityMatrix, basis: &BasisSpec, ensemble: &PhaseEnsemble, m: &Measurement) -> Result<f64> {
    let cond = conditional_distributions(rho, basis, ensemble, m)?;
    Ok(mutual_info_from_conditionals(ensemble.priors(), &cond))
}

/// Which measurements the prober may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementScope {
    /// Rank-1 projective measurements on AB.
    Joint,
    /// Rank-1 projective measurements on A, identity on B.
    LocalA,
}

#[derive(Debug, Clone)]
pub struct BestMeasurement {
    pub measurement: Measurement,
    /// Achieved mutual information (bits); a lower bound on the optimum.
    pub value: f64,
    pub converged: bool,
    pub evaluations: usize,
}

fn projective_probs(u: &ComplexMatrix, states: &[ComplexMatrix]) -> Vec<Vec<f64>> {
    let n = u.nrows();
    states
        .iter()
        .map(|s| {
            (0..u.ncols())
                .map(|x| {
                    let mut acc = 0.0;
                    for a in 0..n {
                        let ua = u[(a, x)].conj();
                        let mut inner = ZERO;
                        for b in 0..n {
                            inner += s[(a, b)] * u[(b, x)];
                        }
                        acc += (ua * inner).re;
                    }
                    acc.clamp(0.0, 1.0)
                })
                .collect()
        })
        .collect()
}

/// Maximizes the mutual information over rank-1 projective measurements.
pub fn best_measurement(
    rho: &DensityMatrix,
    basis: &BasisSpec,
    ensemble: &PhaseEnsemble,
    scope: MeasurementScope,
    budget: Budget,
    seed: Seed,
) -> Result<BestMeasurement> {
    let dims = rho.dims();
    if dims.a > 4 || dims.b > 4 {
        return Err(Error::UnsupportedDims(dims));
    }
    let encoded = encoded_states(rho, basis, ensemble)?;
    let states: Vec<ComplexMatrix> = match scope {
        MeasurementScope::Joint => encoded.iter().map(|s| s.matrix().clone()).collect(),
        MeasurementScope::LocalA => encoded.iter().map(|s| s.partial_trace(Subsystem::A).into_matrix()).collect(),
    };
    let dim = states[0].nrows();
    let priors = ensemble.priors().to_vec();
    let objective = |u: &ComplexMatrix| -mutual_info_from_conditionals(&priors, &projective_probs(u, &states));

    let mut warm = Vec::new();
    if states.len() >= 2 {
        // Helstrom-type start: eigenbasis of the difference of the first two states
        warm.push(eig_hermitian_unchecked(&(&states[0] - &states[1])).vectors);
    }
    warm.push(identity(dim));
    let ceiling = (dim.min(ensemble.len()) as f64).log2();
    let search = minimize_over_unitaries(dim, objective, &warm, budget, seed, Some(-ceiling));
    let local = Measurement::projective(&search.unitary);
    let measurement = match scope {
        MeasurementScope::Joint => local,
        MeasurementScope::LocalA => Measurement::local_a(&local, dims.b),
    };
    Ok(BestMeasurement {
        measurement,
        value: (-search.value).max(0.0),
        // reaching log2(min(D, K)) certifies the maximum
        converged: search.converged || -search.value >= ceiling - 1e-12,
        evaluations: search.evaluations,
    })
}
