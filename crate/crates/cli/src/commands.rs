//! The five report-producing commands plus fixture export.

use std::path::Path;

use qkit::adversary::{
    scenario_table, strong_game_skew, weak_game_mi, weak_game_skew, AdversaryKind, Cell, GameValue, Strategy,
    TableConfig, TableRow,
};
use qkit::classify::{is_incoherent, is_separable_2x2, is_zero_bd_discord, is_zero_discord, ClassVerdict};
use qkit::interferometer::{best_measurement, conditional_distributions, mutual_info, MeasurementScope};
use qkit::measures::{
    bd_discord_skew_with, coherence_skew, discord_skew, entanglement_skew, MeasureValue, MeasureWitness,
};
use qkit::{fixtures, BasisSpec, Budget, DensityMatrix, Error, Seed, Subsystem};
use serde::Serialize;

use crate::error::CliError;
use crate::io::{matrix_to_json, read_state, write_state, MatrixJson, FORMAT_VERSION};
use crate::report::{aligned, csv, fmt_exact, fmt_value, Report};
use crate::scenario::{load_scenario, named_basis, parse_generator};

/// Optimizer limits shared by the commands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budgets {
    pub basis: Budget,
    pub roof: Budget,
}

impl Default for Budgets {
    fn default() -> Self {
        Self { basis: Budget::BASIS, roof: Budget::ROOF }
    }
}

impl Budgets {
    /// Overrides restarts (and optionally evaluations per start) everywhere.
    pub fn with_override(restarts: usize, max_evals: Option<usize>) -> Self {
        let apply = |b: Budget| {
            let b = b.with_restarts(restarts);
            max_evals.map_or(b, |e| b.with_max_evals(e))
        };
        Self { basis: apply(Budget::BASIS), roof: apply(Budget::ROOF) }
    }
}

fn label_of(path: &Path, label: Option<String>) -> String {
    label.unwrap_or_else(|| path.file_stem().map_or("state".into(), |s| s.to_string_lossy().into_owned()))
}

fn dims_json(rho: &DensityMatrix) -> [usize; 2] {
    [rho.dims().a, rho.dims().b]
}

#[derive(Serialize)]
struct VerdictJson {
    family: &'static str,
    member: Option<bool>,
    residual: Option<f64>,
    threshold: Option<f64>,
    converged: bool,
    witness: Option<MatrixJson>,
    note: Option<String>,
}

impl VerdictJson {
    fn from_verdict(v: &ClassVerdict) -> Self {
        Self {
            family: v.family.name(),
            member: Some(v.member),
            residual: Some(v.residual),
            threshold: Some(v.threshold),
            converged: v.converged,
            witness: v.witness.as_ref().map(|b| matrix_to_json(b.unitary())),
            note: None,
        }
    }

    fn unsupported(family: &'static str, e: Error) -> Self {
        Self { family, member: None, residual: None, threshold: None, converged: true, witness: None, note: Some(e.to_string()) }
    }
}

#[derive(Serialize)]
struct ClassifyJson {
    format_version: u32,
    command: &'static str,
    label: String,
    dims: [usize; 2],
    basis: String,
    seed: u64,
    verdicts: Vec<VerdictJson>,
}

/// Four verdicts. `basis` may be `witness`, which checks zero BD-discord in
/// the basis found by the zero-discord search.
pub fn classify(state: &Path, basis: &str, budgets: Budgets, seed: Seed) -> Result<Report, CliError> {
    let (rho, label) = read_state(state)?;
    let label = label_of(state, label);
    let zd = is_zero_discord(&rho, budgets.basis, seed);
    let basis_spec = if basis == "witness" {
        match &zd {
            Ok(v) if v.member => v.witness.clone().expect("members carry a witness"),
            _ => BasisSpec::computational(rho.dims().a),
        }
    } else {
        named_basis(basis, &rho).map_err(CliError::input)?
    };
    let verdicts = vec![
        match is_incoherent(&rho.partial_trace(Subsystem::A), &basis_spec) {
            Ok(v) => VerdictJson::from_verdict(&v),
            Err(e) => VerdictJson::unsupported("Incoherent", e),
        },
        VerdictJson::from_verdict(&is_zero_bd_discord(&rho, &basis_spec)?),
        match zd {
            Ok(v) => VerdictJson::from_verdict(&v),
            Err(e) => VerdictJson::unsupported("ZeroDiscord", e),
        },
        match is_separable_2x2(&rho) {
            Ok(v) => VerdictJson::from_verdict(&v),
            Err(e) => VerdictJson::unsupported("Separable", e),
        },
    ];
    let unconverged = verdicts.iter().any(|v| !v.converged);
    let mut rows = vec![vec!["family".to_string(), "member".into(), "residual".into(), "threshold".into(), "converged".into()]];
    let mut csv_rows = Vec::new();
    for v in &verdicts {
        let member = v.member.map_or("unsupported".to_string(), |m| m.to_string());
        rows.push(vec![
            v.family.to_string(),
            member.clone(),
            v.residual.map_or("-".into(), |r| format!("{r:.3e}")),
            v.threshold.map_or("-".into(), |t| format!("{t:.0e}")),
            v.converged.to_string(),
        ]);
        csv_rows.push(vec![
            v.family.to_string(),
            member,
            v.residual.map_or(String::new(), fmt_exact),
            v.threshold.map_or(String::new(), fmt_exact),
            v.converged.to_string(),
        ]);
    }
    let text = format!("state {label} {}\nbasis {basis}\n\n{}", rho.dims(), aligned(&rows));
    let csv_text = csv(&["family", "member", "residual", "threshold", "converged"], &csv_rows);
    let json = ClassifyJson {
        format_version: FORMAT_VERSION,
        command: "classify",
        label,
        dims: dims_json(&rho),
        basis: basis.to_string(),
        seed: seed.0,
        verdicts,
    };
    Ok(Report::new(&json, text, csv_text, unconverged))
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum WitnessJson {
    Basis { unitary: MatrixJson },
    Decomposition { weights: Vec<f64>, states: Vec<Vec<[f64; 2]>>, bases: Vec<MatrixJson> },
}

impl WitnessJson {
    fn from_measure(w: &MeasureWitness) -> Self {
        match w {
            MeasureWitness::Basis(b) => WitnessJson::Basis { unitary: matrix_to_json(b.unitary()) },
            MeasureWitness::Decomposition { decomposition, bases } => WitnessJson::Decomposition {
                weights: decomposition.weights.clone(),
                states: decomposition
                    .states
                    .iter()
                    .map(|s| s.amplitudes().iter().map(|z| [z.re, z.im]).collect())
                    .collect(),
                bases: bases.iter().map(|b| matrix_to_json(b.unitary())).collect(),
            },
        }
    }

    fn from_strategy(s: &Strategy) -> Self {
        match s {
            Strategy::Basis { basis, .. } => WitnessJson::Basis { unitary: matrix_to_json(basis.unitary()) },
            Strategy::Decomposition { decomposition, bases } => WitnessJson::from_measure(&MeasureWitness::Decomposition {
                decomposition: decomposition.clone(),
                bases: bases.clone(),
            }),
        }
    }
}

#[derive(Serialize)]
struct MeasureJson {
    name: &'static str,
    value: Option<f64>,
    converged: bool,
    evaluations: usize,
    witness: Option<WitnessJson>,
    note: Option<String>,
}

impl MeasureJson {
    fn new(name: &'static str, v: qkit::Result<MeasureValue>) -> Result<Self, CliError> {
        Ok(match v {
            Ok(v) => Self {
                name,
                value: Some(v.value),
                converged: v.converged,
                evaluations: v.iterations,
                witness: v.witness.as_ref().map(WitnessJson::from_measure),
                note: None,
            },
            Err(e @ Error::UnsupportedDims(_)) => {
                Self { name, value: None, converged: true, evaluations: 0, witness: None, note: Some(e.to_string()) }
            }
            Err(e) => return Err(e.into()),
        })
    }
}

#[derive(Serialize)]
struct MeasureReportJson {
    format_version: u32,
    command: &'static str,
    label: String,
    dims: [usize; 2],
    generator: Vec<f64>,
    basis: String,
    m: Option<usize>,
    seed: u64,
    measures: Vec<MeasureJson>,
}

/// Coherence of `ρ_A` (computational basis), BD-discord in `basis`, discord
/// and entanglement.
pub fn measure(
    state: &Path,
    basis: &str,
    generator: &str,
    m: Option<usize>,
    budgets: Budgets,
    seed: Seed,
) -> Result<Report, CliError> {
    let (rho, label) = read_state(state)?;
    let label = label_of(state, label);
    let d_a = rho.dims().a;
    let spectrum = parse_generator(generator, d_a).map_err(CliError::input)?;
    let basis_spec = named_basis(basis, &rho).map_err(CliError::input)?;
    if let Some(m) = m {
        if m < rho.rank() {
            return Err(CliError::input(format!("--m {m} is below the state rank {}", rho.rank())));
        }
    }
    let measures = vec![
        MeasureJson::new("coherence", coherence_skew(&rho, &BasisSpec::computational(d_a), &spectrum))?,
        MeasureJson::new("bd_discord", bd_discord_skew_with(&rho, &basis_spec, &spectrum))?,
        MeasureJson::new("discord", discord_skew(&rho, &spectrum, budgets.basis, seed))?,
        MeasureJson::new("entanglement", entanglement_skew(&rho, &spectrum, m, budgets.roof, seed))?,
    ];
    let unconverged = measures.iter().any(|v| !v.converged);
    let mut rows = vec![vec!["measure".to_string(), "value".into(), "converged".into(), "evaluations".into()]];
    let mut csv_rows = Vec::new();
    for v in &measures {
        rows.push(vec![
            v.name.to_string(),
            v.value.map_or("unsupported".into(), fmt_value),
            v.converged.to_string(),
            v.evaluations.to_string(),
        ]);
        csv_rows.push(vec![
            v.name.to_string(),
            v.value.map_or(String::new(), fmt_exact),
            v.converged.to_string(),
            v.evaluations.to_string(),
        ]);
    }
    let text = format!(
        "state {label} {}\ngenerator {:?}\nbasis {basis}\n\n{}",
        rho.dims(),
        spectrum.values(),
        aligned(&rows)
    );
    let json = MeasureReportJson {
        format_version: FORMAT_VERSION,
        command: "measure",
        label,
        dims: dims_json(&rho),
        generator: spectrum.values().to_vec(),
        basis: basis.to_string(),
        m,
        seed: seed.0,
        measures,
    };
    Ok(Report::new(&json, text, csv(&["measure", "value", "converged", "evaluations"], &csv_rows), unconverged))
}

fn scope_name(s: MeasurementScope) -> &'static str {
    match s {
        MeasurementScope::Joint => "joint",
        MeasurementScope::LocalA => "local_a",
    }
}

#[derive(Serialize)]
struct InterfereJson {
    format_version: u32,
    command: &'static str,
    label: String,
    dims: [usize; 2],
    scope: &'static str,
    seed: u64,
    mutual_information_bits: f64,
    converged: bool,
    evaluations: usize,
    phases: Vec<Vec<f64>>,
    priors: Vec<f64>,
    measurement: Vec<MatrixJson>,
    distributions: Vec<Vec<f64>>,
}

const DIST_HEADER: [&str; 3] = ["phase_index", "outcome_index", "probability"];

/// Mutual information for a scenario, with the optimal (or given)
/// measurement and the outcome distribution for every phase vector.
pub fn interfere(scenario: &Path, seed_flag: Option<u64>) -> Result<Report, CliError> {
    let sc = load_scenario(scenario)?;
    let seed = sc.seed(seed_flag);
    let (measurement, value, converged, evaluations) = match &sc.measurement {
        Some(m) => (m.clone(), mutual_info(&sc.state, &sc.basis, &sc.ensemble, m)?, true, 0),
        None => {
            let r = best_measurement(&sc.state, &sc.basis, &sc.ensemble, sc.scope, sc.prober_budget, seed)?;
            (r.measurement, r.value, r.converged, r.evaluations)
        }
    };
    let dist = conditional_distributions(&sc.state, &sc.basis, &sc.ensemble, &measurement)?;
    let rows: Vec<Vec<String>> = dist
        .iter()
        .enumerate()
        .flat_map(|(k, row)| row.iter().enumerate().map(move |(x, p)| vec![k.to_string(), x.to_string(), fmt_exact(*p)]))
        .collect();
    let mut table = vec![DIST_HEADER.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
    table.extend(
        dist.iter()
            .enumerate()
            .flat_map(|(k, row)| row.iter().enumerate().map(move |(x, p)| vec![k.to_string(), x.to_string(), fmt_value(*p)])),
    );
    let text = format!(
        "scenario {}\nstate {}\nscope {}\nmutual information {} bits (converged: {converged})\n\n{}",
        sc.label,
        sc.state.dims(),
        scope_name(sc.scope),
        fmt_value(value),
        aligned(&table)
    );
    let json = InterfereJson {
        format_version: FORMAT_VERSION,
        command: "interfere",
        label: sc.label.clone(),
        dims: dims_json(&sc.state),
        scope: scope_name(sc.scope),
        seed: seed.0,
        mutual_information_bits: value,
        converged,
        evaluations,
        phases: sc.ensemble.phases().to_vec(),
        priors: sc.ensemble.priors().to_vec(),
        measurement: measurement.elements().iter().map(matrix_to_json).collect(),
        distributions: dist,
    };
    Ok(Report::new(&json, text, csv(&DIST_HEADER, &rows), !converged))
}

#[derive(Serialize)]
struct GameJson {
    game: &'static str,
    value: f64,
    converged: bool,
    evaluations: usize,
    strategy: WitnessJson,
    prober: Option<Vec<MatrixJson>>,
}

impl GameJson {
    fn new(game: &'static str, g: &GameValue) -> Self {
        let prober = match &g.strategy {
            Strategy::Basis { prober: Some(m), .. } => Some(m.elements().iter().map(matrix_to_json).collect()),
            _ => None,
        };
        Self {
            game,
            value: g.value,
            converged: g.converged,
            evaluations: g.evaluations,
            strategy: WitnessJson::from_strategy(&g.strategy),
            prober,
        }
    }
}

#[derive(Serialize)]
struct AdversaryJson {
    format_version: u32,
    command: &'static str,
    label: String,
    dims: [usize; 2],
    adversary: AdversaryKind,
    seed: u64,
    games: Vec<GameJson>,
}

/// Game values for the scenario's adversary. A weak adversary is scored by
/// mutual information and by skew discord; a strong one by the skew roof,
/// reported next to the weak skew value for comparison.
pub fn adversary(scenario: &Path, seed_flag: Option<u64>) -> Result<Report, CliError> {
    let sc = load_scenario(scenario)?;
    let seed = sc.seed(seed_flag);
    let Some(model) = sc.adversary else {
        return Err(CliError::input(format!("{}: scenario has no adversary model", scenario.display())));
    };
    let weak_skew = weak_game_skew(&sc.state, &sc.spectrum, Budget::BASIS, seed)?;
    let games = match model.kind {
        AdversaryKind::Weak => {
            let mi = weak_game_mi(&sc.state, &sc.ensemble, &sc.spectrum, sc.game_budget(), seed)?;
            vec![GameJson::new("weak_mi", &mi), GameJson::new("weak_skew", &weak_skew)]
        }
        AdversaryKind::Strong => {
            let strong = strong_game_skew(&sc.state, &model, &sc.spectrum, seed)?;
            vec![GameJson::new("strong_skew", &strong), GameJson::new("weak_skew", &weak_skew)]
        }
    };
    let unconverged = games.iter().any(|g| !g.converged);
    let mut rows = vec![vec!["game".to_string(), "value".into(), "converged".into(), "evaluations".into()]];
    let mut csv_rows = Vec::new();
    for g in &games {
        rows.push(vec![g.game.into(), fmt_value(g.value), g.converged.to_string(), g.evaluations.to_string()]);
        csv_rows.push(vec![g.game.into(), fmt_exact(g.value), g.converged.to_string(), g.evaluations.to_string()]);
    }
    let kind = match model.kind {
        AdversaryKind::Weak => "weak",
        AdversaryKind::Strong => "strong",
    };
    let text = format!("scenario {}\nstate {}\nadversary {kind}\n\n{}", sc.label, sc.state.dims(), aligned(&rows));
    let json = AdversaryJson {
        format_version: FORMAT_VERSION,
        command: "adversary",
        label: sc.label.clone(),
        dims: dims_json(&sc.state),
        adversary: model.kind,
        seed: seed.0,
        games,
    };
    Ok(Report::new(&json, text, csv(&["game", "value", "converged", "evaluations"], &csv_rows), unconverged))
}

#[derive(Serialize)]
struct TableRowJson {
    state: String,
    coherence: Cell,
    bd_discord: Cell,
    discord: Cell,
    entanglement: Cell,
    incoherent: Option<bool>,
    zero_bd_discord: Option<bool>,
    zero_discord: Option<bool>,
    separable: Option<bool>,
}

#[derive(Serialize)]
struct TableJson {
    format_version: u32,
    command: &'static str,
    seed: u64,
    columns: [&'static str; 4],
    rows: Vec<TableRowJson>,
}

const COLUMNS: [&str; 4] = ["coherence", "bd_discord", "discord", "entanglement"];

fn sign(c: &Cell) -> &'static str {
    if c.is_zero() {
        "0"
    } else {
        "+"
    }
}

fn member(v: &Option<ClassVerdict>) -> Option<bool> {
    v.as_ref().map(|v| v.member)
}

/// Quantumness matrix over the canonical fixture set.
pub fn table1(budgets: Budgets, seed: Seed) -> Result<Report, CliError> {
    let states: Vec<(String, DensityMatrix)> =
        fixtures::table_set().into_iter().map(|(n, r)| (n.to_string(), r)).collect();
    let config = TableConfig { basis: budgets.basis, roof: budgets.roof, seed };
    let rows: Vec<TableRow> = scenario_table(&states, &config)?;
    let unconverged = rows.iter().any(|r| !r.converged());
    let mut text_rows = vec![{
        let mut h = vec!["state".to_string()];
        h.extend(COLUMNS.iter().map(|s| s.to_string()));
        h.push("pattern".into());
        h
    }];
    let mut csv_rows = Vec::new();
    for r in &rows {
        let cells = r.cells();
        let mut t = vec![r.label.clone()];
        t.extend(cells.iter().map(|c| format!("{}{}", fmt_value(c.value), if c.converged { "" } else { "*" })));
        t.push(cells.iter().map(sign).collect::<Vec<_>>().join(" "));
        text_rows.push(t);
        let mut line = vec![r.label.clone()];
        line.extend(cells.iter().map(|c| fmt_exact(c.value)));
        line.extend(cells.iter().map(|c| sign(c).to_string()));
        line.push(r.converged().to_string());
        csv_rows.push(line);
    }
    let mut text = aligned(&text_rows);
    if unconverged {
        text.push_str("\n* search stopped before its restarts agreed; value is an upper bound\n");
    }
    let header = [
        "state",
        "coherence",
        "bd_discord",
        "discord",
        "entanglement",
        "coherence_sign",
        "bd_discord_sign",
        "discord_sign",
        "entanglement_sign",
        "converged",
    ];
    let json = TableJson {
        format_version: FORMAT_VERSION,
        command: "table1",
        seed: seed.0,
        columns: COLUMNS,
        rows: rows
            .iter()
            .map(|r| TableRowJson {
                state: r.label.clone(),
                coherence: r.coherence,
                bd_discord: r.bd_discord,
                discord: r.discord,
                entanglement: r.entanglement,
                incoherent: member(&r.incoherent),
                zero_bd_discord: member(&r.zero_bd_discord),
                zero_discord: member(&r.zero_discord),
                separable: member(&r.separable),
            })
            .collect(),
    };
    Ok(Report::new(&json, text, csv(&header, &csv_rows), unconverged))
}

/// State file for a built-in fixture.
pub fn fixture(name: &str) -> Result<String, CliError> {
    match fixtures::by_name(name) {
        Some(rho) => Ok(write_state(&rho, Some(name))),
        None => Err(CliError::input(format!("unknown fixture '{name}'; available: {}", fixtures::NAMES.join(", ")))),
    }
}
