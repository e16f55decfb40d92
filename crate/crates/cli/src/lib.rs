//! Command-line front end for the `qkit` quantumness toolkit.

pub mod commands;
pub mod error;
pub mod io;
pub mod report;
pub mod scenario;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use qkit::Seed;

pub use commands::Budgets;
pub use error::CliError;
pub use report::{Format, Report};

#[derive(Debug, Parser)]
#[command(name = "qkit", version, about = "Quantumness and interferometric capability of small quantum states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for all randomized searches (scenario files may set their own).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Optimizer budget as RESTARTS or RESTARTS,MAX_EVALS.
    #[arg(long, global = true, value_parser = parse_budget)]
    pub budget: Option<(usize, Option<usize>)>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Membership in the incoherent, zero-BD-discord, zero-discord and separable sets.
    Classify {
        #[arg(long)]
        state: PathBuf,
        /// computational, hadamard, eigen or witness.
        #[arg(long, default_value = "computational")]
        basis: String,
    },
    /// Skew-information coherence, BD-discord, discord and entanglement.
    Measure {
        #[arg(long)]
        state: PathBuf,
        /// Basis for the BD-discord: computational, hadamard or eigen.
        #[arg(long, default_value = "computational")]
        basis: String,
        /// ramp, projector:K or comma-separated eigenvalues.
        #[arg(long, default_value = "ramp")]
        generator: String,
        /// Decomposition size for the entanglement roof.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Mutual information between outcome and phase for a scenario file.
    Interfere {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Adversarial game value for a scenario file.
    Adversary {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Quantumness matrix over the canonical states.
    Table1,
    /// Print a built-in state as a state file.
    Fixture { name: String },
}

fn parse_budget(s: &str) -> Result<(usize, Option<usize>), String> {
    let mut parts = s.split(',');
    let positive = |p: &str| -> Result<usize, String> {
        match p.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(format!("'{p}' is not a positive integer")),
        }
    };
    let restarts = positive(parts.next().unwrap_or(""))?;
    let evals = parts.next().map(positive).transpose()?;
    if parts.next().is_some() {
        return Err("expected RESTARTS or RESTARTS,MAX_EVALS".into());
    }
    Ok((restarts, evals))
}

/// Runs one command. Fixture export yields raw state-file text.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let budgets = cli.budget.map_or_else(Budgets::default, |(r, e)| Budgets::with_override(r, e));
    let seed = Seed(cli.seed.unwrap_or(0));
    match &cli.command {
        Command::Classify { state, basis } => commands::classify(state, basis, budgets, seed),
        Command::Measure { state, basis, generator, m } => commands::measure(state, basis, generator, *m, budgets, seed),
        Command::Interfere { scenario } => commands::interfere(scenario, cli.seed),
        Command::Adversary { scenario } => commands::adversary(scenario, cli.seed),
        Command::Table1 => commands::table1(budgets, seed),
        Command::Fixture { name } => {
            let text = commands::fixture(name)?;
            Ok(Report { json: serde_json::Value::Null, text: text.clone(), csv: text, unconverged: false })
        }
    }
}

/// Output text and exit code for a parsed command line.
pub fn execute(cli: &Cli) -> (String, Result<i32, CliError>) {
    match run(cli) {
        Ok(report) => {
            let text = match (&cli.command, cli.format) {
                (Command::Fixture { .. }, _) => report.text.clone(),
                (_, f) => report.render(f),
            };
            (text, Ok(if report.unconverged { 3 } else { 0 }))
        }
        Err(e) => (String::new(), Err(e)),
    }
}
