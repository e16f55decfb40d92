//! Versioned JSON state files: `dims`, a row-major matrix of `[re, im]`
//! pairs and an optional label. Floats are written in shortest round-trip
//! form, so write-then-read reproduces every entry bit for bit.

use std::path::Path;

use qkit::{ComplexMatrix, DensityMatrix, Dims, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub dims: [usize; 2],
    pub matrix: MatrixJson,
}

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

/// Square matrix from JSON rows; ragged or non-square input is rejected with
/// the offending row index.
pub fn matrix_from_json(rows: &MatrixJson) -> Result<ComplexMatrix, (usize, String)> {
    let n = rows.len();
    if n == 0 {
        return Err((0, "matrix is empty".into()));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err((r, format!("row {r} has {} entries, expected {n} (ragged or non-square matrix)", row.len())));
        }
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

/// 1-based line of `"key"` in `text`, if present.
pub fn key_line(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

/// 1-based line on which each row of the `"matrix"` array starts.
fn row_lines(text: &str) -> Vec<usize> {
    let Some(start) = text.find("\"matrix\"") else { return Vec::new() };
    let mut lines = Vec::new();
    let mut line = 1 + text[..start].matches('\n').count();
    let mut depth = 0usize;
    for ch in text[start..].chars() {
        match ch {
            '\n' => line += 1,
            '[' => {
                depth += 1;
                if depth == 2 {
                    lines.push(line);
                }
            }
            ']' => {
                depth = depth.saturating_sub(1);
                if depth == 0 {
                    break;
                }
            }
            _ => {}
        }
    }
    lines
}

/// Parses and validates a state file's text.
pub fn parse_state(text: &str, origin: &str) -> Result<(DensityMatrix, Option<String>), CliError> {
    let file: StateFile = serde_json::from_str(text)
        .map_err(|e| CliError::input(format!("{origin}:{}:{}: {e}", e.line(), e.column())))?;
    state_from_file(&file, text, origin)
}

pub fn state_from_file(file: &StateFile, text: &str, origin: &str) -> Result<(DensityMatrix, Option<String>), CliError> {
    let at = |key: &str| key_line(text, key).map_or(origin.to_string(), |l| format!("{origin}:{l}"));
    if file.format_version != FORMAT_VERSION {
        return Err(CliError::input(format!(
            "{}: unsupported format_version {} (expected {FORMAT_VERSION})",
            at("format_version"),
            file.format_version
        )));
    }
    let mat = matrix_from_json(&file.matrix).map_err(|(row, msg)| {
        let line = row_lines(text).get(row).copied();
        CliError::input(format!("{}: {msg}", line.map_or(at("matrix"), |l| format!("{origin}:{l}"))))
    })?;
    let dims = Dims::new(file.dims[0], file.dims[1]);
    let rho = DensityMatrix::new(dims, mat).map_err(|e| CliError::input(format!("{}: {e}", at("matrix"))))?;
    Ok((rho, file.label.clone()))
}

pub fn read_state(path: &Path) -> Result<(DensityMatrix, Option<String>), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: cannot read: {e}", path.display())))?;
    parse_state(&text, &path.display().to_string())
}

fn number(x: f64) -> String {
    serde_json::to_string(&x).expect("finite float")
}

/// State file text with one matrix row per line.
pub fn write_state(rho: &DensityMatrix, label: Option<&str>) -> String {
    let m = rho.matrix();
    let dims = rho.dims();
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"format_version\": {FORMAT_VERSION},\n"));
    if let Some(label) = label {
        out.push_str(&format!("  \"label\": {},\n", serde_json::to_string(label).expect("string")));
    }
    out.push_str(&format!("  \"dims\": [{}, {}],\n  \"matrix\": [\n", dims.a, dims.b));
    for i in 0..m.nrows() {
        let row: Vec<String> =
            (0..m.ncols()).map(|j| format!("[{}, {}]", number(m[(i, j)].re), number(m[(i, j)].im))).collect();
        let sep = if i + 1 < m.nrows() { "," } else { "" };
        out.push_str(&format!("    [{}]{sep}\n", row.join(", ")));
    }
    out.push_str("  ]\n}\n");
    out
}
