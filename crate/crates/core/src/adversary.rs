//! Reference-frame-free games. A weak adversary holds classical side
//! information and picks the encoding basis of A (revealed to the prober);
//! a strong adversary purifies the state and steers it into any pure-state
//! decomposition, choosing a basis per outcome.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{
    is_incoherent, is_separable_2x2, is_zero_bd_discord, is_zero_discord, BasisSpec, ClassVerdict, EXACT_THRESHOLD,
    OPTIMIZED_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::interferometer::{best_measurement, mutual_info, Measurement, MeasurementScope, PhaseEnsemble};
use crate::measures::{
    bd_discord_skew_with, coherence_skew, discord_skew, entanglement_skew, Decomposition, GeneratorSpectrum,
    MeasureValue, MeasureWitness,
};
use crate::optim::unitary::minimize_over_unitaries;
use crate::optim::Budget;
use crate::qcore::linalg::*;
use crate::qcore::random::Seed;
use crate::qcore::state::{DensityMatrix, Subsystem};

/// Zero threshold for convex-roof values.
pub const ROOF_THRESHOLD: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdversaryKind {
    Weak,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdversaryModel {
    pub kind: AdversaryKind,
    pub budget: Budget,
    /// Decomposition size for the strong adversary (default `min(rank², 16)`).
    pub m: Option<usize>,
}

impl AdversaryModel {
    pub fn weak() -> Self {
        Self { kind: AdversaryKind::Weak, budget: Budget::BASIS, m: None }
    }

    pub fn strong(m: Option<usize>) -> Self {
        Self { kind: AdversaryKind::Strong, budget: Budget::ROOF, m }
    }
}

/// Limits for the nested weak-adversary mutual-information game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameBudget {
    /// Outer search over encoding bases.
    pub adversary: Budget,
    /// Inner search over projective measurements, per adversary basis.
    pub prober: Budget,
}

impl Default for GameBudget {
    fn default() -> Self {
        Self {
            adversary: Budget { restarts: 4, max_evals: 200, tol: 1e-10 },
            prober: Budget { restarts: 3, max_evals: 400, tol: 1e-10 },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// Encoding basis chosen by the adversary; for the mutual-information
    /// game also the prober's best response.
    Basis { basis: BasisSpec, prober: Option<Measurement> },
    /// Steered ensemble with the basis used on each outcome.
    Decomposition { decomposition: Decomposition, bases: Vec<BasisSpec> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameValue {
    pub value: f64,
    pub strategy: Strategy,
    pub converged: bool,
    pub evaluations: usize,
}

impl GameValue {
    fn from_measure(v: MeasureValue) -> Self {
        let strategy = match v.witness {
            Some(MeasureWitness::Basis(basis)) => Strategy::Basis { basis, prober: None },
            Some(MeasureWitness::Decomposition { decomposition, bases }) => Strategy::Decomposition { decomposition, bases },
            None => unreachable!("optimized measures always carry a witness"),
        };
        Self { value: v.value, strategy, converged: v.converged, evaluations: v.iterations }
    }
}

/// `min_J max_M I(X_M; Φ)` with the basis revealed to the prober.
pub fn weak_game_mi(
    rho: &DensityMatrix,
    ensemble: &PhaseEnsemble,
    spectrum: &GeneratorSpectrum,
    budget: GameBudget,
    seed: Seed,
) -> Result<GameValue> {
    let dims = rho.dims();
    if dims.a > 4 || dims.b > 4 {
        return Err(Error::UnsupportedDims(dims));
    }
    if ensemble.paths() != dims.a {
        return Err(Error::DimensionMismatch(format!(
            "ensemble has {} paths, subsystem A has dimension {}",
            ensemble.paths(),
            dims.a
        )));
    }
    let prober_seed = seed.split(u64::MAX);
    let inner = |basis: &BasisSpec| {
        best_measurement(rho, basis, ensemble, MeasurementScope::Joint, budget.prober, prober_seed)
            .expect("dimensions validated above")
    };
    // the discord witness zeroes the game whenever the state has zero discord
    let skew = discord_skew(rho, spectrum, budget.adversary, seed.split(u64::MAX - 1))?;
    let mut warm = Vec::new();
    if let Some(MeasureWitness::Basis(b)) = &skew.witness {
        warm.push(b.unitary().clone());
    }
    warm.push(rho.partial_trace(Subsystem::A).eigen().vectors);
    warm.push(identity(dims.a));
    // mutual information is nonnegative, so a vanishing warm start is optimal
    for u in &warm {
        let basis = BasisSpec::from_trusted(u.clone());
        let response = inner(&basis);
        if response.value <= 1e-12 {
            return Ok(GameValue {
                value: response.value,
                converged: true,
                evaluations: response.evaluations + skew.iterations,
                strategy: Strategy::Basis { basis, prober: Some(response.measurement) },
            });
        }
    }
    let search = minimize_over_unitaries(
        dims.a,
        |u| inner(&BasisSpec::from_trusted(u.clone())).value,
        &warm,
        budget.adversary,
        seed,
        Some(0.0),
    );
    let basis = BasisSpec::from_trusted(search.unitary);
    let response = inner(&basis);
    Ok(GameValue {
        value: response.value,
        converged: search.converged || response.value <= 1e-12,
        evaluations: search.evaluations + skew.iterations,
        strategy: Strategy::Basis { basis, prober: Some(response.measurement) },
    })
}

/// Weak game scored by skew information: the skew discord.
pub fn weak_game_skew(rho: &DensityMatrix, spectrum: &GeneratorSpectrum, budget: Budget, seed: Seed) -> Result<GameValue> {
    discord_skew(rho, spectrum, budget, seed).map(GameValue::from_measure)
}

/// Strong game scored by skew information: the convex roof.
pub fn strong_game_skew(
    rho: &DensityMatrix,
    model: &AdversaryModel,
    spectrum: &GeneratorSpectrum,
    seed: Seed,
) -> Result<GameValue> {
    entanglement_skew(rho, spectrum, model.m, model.budget, seed).map(GameValue::from_measure)
}

/// Re-scores a strategy: mutual information for a weak strategy with a
/// prober response, skew information otherwise.
pub fn evaluate_strategy(
    rho: &DensityMatrix,
    strategy: &Strategy,
    spectrum: &GeneratorSpectrum,
    ensemble: Option<&PhaseEnsemble>,
) -> Result<f64> {
    match strategy {
        Strategy::Basis { basis, prober: Some(m) } => {
            let ens = ensemble.ok_or_else(|| Error::InvalidEnsemble("mutual-information strategy needs an ensemble".into()))?;
            mutual_info(rho, basis, ens, m)
        }
        Strategy::Basis { basis, prober: None } => Ok(bd_discord_skew_with(rho, basis, spectrum)?.value),
        Strategy::Decomposition { decomposition, bases } => {
            let mut total = 0.0;
            for ((w, psi), basis) in decomposition.weights.iter().zip(&decomposition.states).zip(bases) {
                total += w * bd_discord_skew_with(&psi.density(), basis, spectrum)?.value;
            }
            Ok(total)
        }
    }
}

/// `(U_e ⊗ I) ρ (U_e ⊗ I)†` with `U_e = Σ_j |j⟩⟨j^e|`.
pub fn apply_adversary_rotation(rho: &DensityMatrix, e_basis: &BasisSpec) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if e_basis.dim() != dims.a {
        return Err(Error::DimensionMismatch(format!(
            "basis of dimension {} for dims {dims}",
            e_basis.dim()
        )));
    }
    rho.conjugate(&kron(&e_basis.unitary().adjoint(), &identity(dims.b)))
}

/// One quantumness value with the threshold that separates zero from positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub value: f64,
    pub converged: bool,
    pub threshold: f64,
}

impl Cell {
    fn exact(v: MeasureValue) -> Self {
        Self { value: v.value, converged: true, threshold: EXACT_THRESHOLD }
    }

    fn optimized(v: Result<MeasureValue>, threshold: f64) -> Self {
        match v {
            Ok(v) => Self { value: v.value, converged: v.converged, threshold },
            Err(Error::BudgetExhausted { best }) => Self { value: best, converged: false, threshold },
            Err(_) => Self { value: f64::NAN, converged: false, threshold },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value <= self.threshold
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub label: String,
    /// Skew coherence of `ρ_A` in the computational basis.
    pub coherence: Cell,
    /// BD-discord skew in the computational basis.
    pub bd_discord: Cell,
    pub discord: Cell,
    pub entanglement: Cell,
    pub incoherent: Option<ClassVerdict>,
    pub zero_bd_discord: Option<ClassVerdict>,
    pub zero_discord: Option<ClassVerdict>,
    pub separable: Option<ClassVerdict>,
}

impl TableRow {
    pub fn cells(&self) -> [Cell; 4] {
        [self.coherence, self.bd_discord, self.discord, self.entanglement]
    }

    pub fn converged(&self) -> bool {
        self.cells().iter().all(|c| c.converged)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableConfig {
    pub basis: Budget,
    pub roof: Budget,
    pub seed: Seed,
}

impl Default for TableConfig {
    fn default() -> Self {
        Self { basis: Budget::BASIS, roof: Budget::ROOF, seed: Seed(0) }
    }
}

fn table_row(label: &str, rho: &DensityMatrix, config: &TableConfig) -> Result<TableRow> {
    let dims = rho.dims();
    let comp = BasisSpec::computational(dims.a);
    let spectrum = GeneratorSpectrum::ramp(dims.a);
    let coherence = Cell::exact(coherence_skew(rho, &comp, &spectrum)?);
    let bd_discord = Cell::exact(bd_discord_skew_with(rho, &comp, &spectrum)?);
    let discord = Cell::optimized(discord_skew(rho, &spectrum, config.basis, config.seed), OPTIMIZED_THRESHOLD);
    let entanglement =
        Cell::optimized(entanglement_skew(rho, &spectrum, None, config.roof, config.seed), ROOF_THRESHOLD);
    Ok(TableRow {
        label: label.to_string(),
        coherence,
        bd_discord,
        discord,
        entanglement,
        incoherent: is_incoherent(&rho.partial_trace(Subsystem::A), &comp).ok(),
        zero_bd_discord: is_zero_bd_discord(rho, &comp).ok(),
        zero_discord: is_zero_discord(rho, config.basis, config.seed).ok(),
        separable: is_separable_2x2(rho).ok(),
    })
}

/// Coherence, BD-discord, discord and entanglement for each state, computed
/// concurrently; unconverged searches are flagged per cell.
pub fn scenario_table(states: &[(String, DensityMatrix)], config: &TableConfig) -> Result<Vec<TableRow>> {
    for (label, rho) in states {
        let dims = rho.dims();
        if dims.a > 4 || dims.b > 4 {
            return Err(Error::DimensionMismatch(format!("{label}: dims {dims} exceed (4, 4)")));
        }
    }
    states.par_iter().map(|(label, rho)| table_row(label, rho, config)).collect()
}
