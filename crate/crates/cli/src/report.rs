//! Rendering of command reports as aligned text, CSV or JSON.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// A finished command: every rendering plus the convergence status that
/// decides between exit codes 0 and 3.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub csv: String,
    pub unconverged: bool,
}

impl Report {
    pub fn new(json: &impl Serialize, text: String, csv: String, unconverged: bool) -> Self {
        Self { json: serde_json::to_value(json).expect("reports serialize"), text, csv, unconverged }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Csv => self.csv.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("valid json") + "\n",
        }
    }
}

/// Left-aligned columns separated by two spaces.
pub fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s:<w$}", w = if c + 1 == row.len() { 0 } else { widths[c] }))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// CSV with a header row; fields are plain numbers or identifiers.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

/// Human-readable value.
pub fn fmt_value(x: f64) -> String {
    if x.is_nan() {
        "n/a".into()
    } else {
        format!("{x:.9}")
    }
}

/// Shortest round-trip decimal.
pub fn fmt_exact(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:?}")
    }
}
