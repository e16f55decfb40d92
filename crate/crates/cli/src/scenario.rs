//! Scenario files: a state reference, an optional channel applied before
//! encoding, the phase ensemble, an optional explicit POVM, the measurement
//! scope, an optional adversary model, budgets and a seed.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use qkit::adversary::{AdversaryKind, AdversaryModel, GameBudget};
use qkit::channels::{apply_channel, KrausChannel};
use qkit::interferometer::{Measurement, MeasurementScope, PhaseEnsemble};
use qkit::measures::GeneratorSpectrum;
use qkit::{fixtures, BasisSpec, Budget, DensityMatrix, Seed};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::io::{key_line, matrix_from_json, read_state, state_from_file, MatrixJson, StateFile, FORMAT_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateRef {
    /// Built-in fixture name.
    Fixture(String),
    /// State file, relative to the scenario file.
    Path(PathBuf),
    Inline(StateFile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisRef {
    Named(String),
    Unitary(MatrixJson),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    /// Explicit phase vectors, one phase per path.
    #[serde(default)]
    pub phases: Option<Vec<Vec<f64>>>,
    /// Priors for `phases` (uniform when omitted).
    #[serde(default)]
    pub priors: Option<Vec<f64>>,
    /// Uniform grid of phases for paths 1.. relative to path 0, in radians
    /// (`[0, π]` when nothing is given).
    #[serde(default)]
    pub grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    #[default]
    Joint,
    LocalA,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    pub restarts: usize,
    pub max_evals: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    1e-10
}

impl BudgetSpec {
    fn to_budget(self, what: &str) -> Result<Budget, CliError> {
        if self.restarts == 0 || self.max_evals == 0 || self.tol.is_nan() || self.tol <= 0.0 {
            return Err(CliError::input(format!("{what}: budgets must be positive")));
        }
        Ok(Budget { restarts: self.restarts, max_evals: self.max_evals, tol: self.tol })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdversarySpec {
    pub kind: AdversaryKind,
    #[serde(default)]
    pub m: Option<usize>,
    /// Adversary search limits.
    #[serde(default)]
    pub budget: Option<BudgetSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub format_version: u32,
    #[serde(default)]
    pub label: Option<String>,
    pub state: StateRef,
    /// Kraus operators applied to the state before encoding.
    #[serde(default)]
    pub channel: Option<Vec<MatrixJson>>,
    #[serde(default)]
    pub basis: Option<BasisRef>,
    #[serde(default)]
    pub generator: Option<Vec<f64>>,
    #[serde(default)]
    pub ensemble: EnsembleSpec,
    /// Explicit POVM; the best projective measurement is searched otherwise.
    #[serde(default)]
    pub measurement: Option<Vec<MatrixJson>>,
    #[serde(default)]
    pub scope: Scope,
    #[serde(default)]
    pub adversary: Option<AdversarySpec>,
    /// Prober measurement-search limits.
    #[serde(default)]
    pub budget: Option<BudgetSpec>,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// A scenario with every reference resolved and validated.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub label: String,
    pub state: DensityMatrix,
    pub basis: BasisSpec,
    pub spectrum: GeneratorSpectrum,
    pub ensemble: PhaseEnsemble,
    pub measurement: Option<Measurement>,
    pub scope: MeasurementScope,
    pub adversary: Option<AdversaryModel>,
    pub prober_budget: Budget,
    pub seed: Option<u64>,
}

impl Scenario {
    pub fn seed(&self, flag: Option<u64>) -> Seed {
        Seed(flag.or(self.seed).unwrap_or(0))
    }

    pub fn game_budget(&self) -> GameBudget {
        let mut g = GameBudget::default();
        if let Some(m) = &self.adversary {
            g.adversary = m.budget;
        }
        g
    }
}

/// Named basis: `computational`, `hadamard` (qubits only) or `eigen`
/// (eigenbasis of `ρ_A`).
pub fn named_basis(name: &str, rho: &DensityMatrix) -> Result<BasisSpec, String> {
    let d = rho.dims().a;
    match name {
        "computational" => Ok(BasisSpec::computational(d)),
        "hadamard" if d == 2 => Ok(BasisSpec::hadamard()),
        "hadamard" => Err(format!("hadamard basis needs d_A = 2, got {d}")),
        "eigen" => Ok(BasisSpec::eigenbasis(rho.partial_trace(qkit::Subsystem::A).matrix())),
        other => Err(format!("unknown basis '{other}' (expected computational, hadamard or eigen)")),
    }
}

/// Generator spectrum from `ramp`, `projector:K` or a comma-separated list.
pub fn parse_generator(spec: &str, d_a: usize) -> Result<GeneratorSpectrum, String> {
    let g = if spec == "ramp" {
        GeneratorSpectrum::ramp(d_a)
    } else if let Some(k) = spec.strip_prefix("projector:") {
        let k: usize = k.parse().map_err(|_| format!("bad projector index '{k}'"))?;
        if k >= d_a {
            return Err(format!("projector index {k} out of range for d_A = {d_a}"));
        }
        GeneratorSpectrum::projector(d_a, k)
    } else {
        let values: Result<Vec<f64>, _> = spec.split(',').map(|v| v.trim().parse::<f64>()).collect();
        GeneratorSpectrum(values.map_err(|_| format!("bad generator '{spec}'"))?)
    };
    if g.dim() != d_a {
        return Err(format!("generator has {} values, subsystem A has dimension {d_a}", g.dim()));
    }
    Ok(g)
}

pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{origin}: cannot read: {e}")))?;
    let file: ScenarioFile = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{origin}:{}:{}: {e}", e.line(), e.column())))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    resolve(&file, &text, &origin, dir)
}

pub fn resolve(file: &ScenarioFile, text: &str, origin: &str, dir: &Path) -> Result<Scenario, CliError> {
    let at = |key: &str, msg: String| {
        CliError::input(match key_line(text, key) {
            Some(l) => format!("{origin}:{l}: {msg}"),
            None => format!("{origin}: {msg}"),
        })
    };
    if file.format_version != FORMAT_VERSION {
        return Err(at("format_version", format!("unsupported format_version {}", file.format_version)));
    }
    let (mut state, state_label) = match &file.state {
        StateRef::Fixture(name) => match fixtures::by_name(name) {
            Some(rho) => (rho, Some(name.clone())),
            None => return Err(at("state", format!("unknown fixture '{name}'"))),
        },
        StateRef::Path(p) => read_state(&dir.join(p))?,
        StateRef::Inline(sf) => state_from_file(sf, text, origin)?,
    };
    if let Some(kraus) = &file.channel {
        let ops = kraus
            .iter()
            .map(|k| matrix_from_json(k).map_err(|(_, m)| at("channel", m)))
            .collect::<Result<Vec<_>, _>>()?;
        let ch = KrausChannel::new(state.dims(), ops).map_err(|e| at("channel", e.to_string()))?;
        state = apply_channel(&ch, &state).map_err(|e| at("channel", e.to_string()))?;
    }
    let dims = state.dims();
    let basis = match &file.basis {
        None => BasisSpec::computational(dims.a),
        Some(BasisRef::Named(n)) => named_basis(n, &state).map_err(|m| at("basis", m))?,
        Some(BasisRef::Unitary(u)) => {
            let u = matrix_from_json(u).map_err(|(_, m)| at("basis", m))?;
            BasisSpec::new(u).map_err(|e| at("basis", e.to_string()))?
        }
    };
    if basis.dim() != dims.a {
        return Err(at("basis", format!("basis of dimension {} for dims {dims}", basis.dim())));
    }
    let spectrum = match &file.generator {
        None => GeneratorSpectrum::ramp(dims.a),
        Some(v) if v.len() == dims.a => GeneratorSpectrum(v.clone()),
        Some(v) => return Err(at("generator", format!("{} values for d_A = {}", v.len(), dims.a))),
    };
    let ens = &file.ensemble;
    let ensemble = match &ens.phases {
        Some(phases) => match &ens.priors {
            Some(p) => PhaseEnsemble::new(phases.clone(), p.clone()),
            None => PhaseEnsemble::uniform(phases.clone()),
        },
        None => PhaseEnsemble::grid(dims.a, ens.grid.as_deref().unwrap_or(&[0.0, PI])),
    }
    .map_err(|e| at("ensemble", e.to_string()))?;
    if ensemble.paths() != dims.a {
        return Err(at("ensemble", format!("{} phases per vector for d_A = {}", ensemble.paths(), dims.a)));
    }
    let measurement = match &file.measurement {
        None => None,
        Some(elements) => {
            let ms = elements
                .iter()
                .map(|k| matrix_from_json(k).map_err(|(_, m)| at("measurement", m)))
                .collect::<Result<Vec<_>, _>>()?;
            let m = Measurement::new(ms).map_err(|e| at("measurement", e.to_string()))?;
            let local = m.dim() == dims.a && dims.b > 1;
            let m = if local { Measurement::local_a(&m, dims.b) } else { m };
            if m.dim() != dims.total() {
                return Err(at("measurement", format!("POVM of dimension {} for dims {dims}", m.dim())));
            }
            Some(m)
        }
    };
    let scope = match file.scope {
        Scope::Joint => MeasurementScope::Joint,
        Scope::LocalA => MeasurementScope::LocalA,
    };
    let prober_budget = match file.budget {
        Some(b) => b.to_budget("budget").map_err(|e| at("budget", e.to_string()))?,
        None => GameBudget::default().prober,
    };
    let adversary = match &file.adversary {
        None => None,
        Some(a) => {
            let mut model = match a.kind {
                AdversaryKind::Weak => AdversaryModel { budget: GameBudget::default().adversary, ..AdversaryModel::weak() },
                AdversaryKind::Strong => AdversaryModel::strong(a.m),
            };
            if let Some(b) = a.budget {
                model.budget = b.to_budget("adversary budget").map_err(|e| at("adversary", e.to_string()))?;
            }
            if let (AdversaryKind::Strong, Some(m)) = (a.kind, a.m) {
                if m < state.rank() {
                    return Err(at("adversary", format!("m = {m} is below the state rank {}", state.rank())));
                }
            }
            Some(model)
        }
    };
    Ok(Scenario {
        label: file.label.clone().or(state_label).unwrap_or_else(|| "scenario".into()),
        state,
        basis,
        spectrum,
        ensemble,
        measurement,
        scope,
        adversary,
        prober_budget,
        seed: file.seed,
    })
}
