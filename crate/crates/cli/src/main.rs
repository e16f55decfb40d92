use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qkit_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("QKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let (text, outcome) = execute(&cli);
    let code = match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qkit: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("qkit: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if code == 3 {
        eprintln!("qkit: some searches stopped before converging; reported values are the best found (upper bounds for minimizations, lower bounds for maximizations)");
    }
    ExitCode::from(code as u8)
}
