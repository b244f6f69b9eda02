use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Shortest decimal that parses back to `x`, or `digits` significant digits.
pub fn format_number(x: f64, digits: Option<usize>) -> String {
    match digits {
        Some(d) if x != 0.0 && x.is_finite() => {
            let magnitude = x.abs().log10().floor() as i64;
            let decimals = (d as i64 - 1 - magnitude).max(0) as usize;
            format!("{x:.decimals$}")
        }
        _ => format!("{x}"),
    }
}

/// Rows of formatted numbers with a header, as CSV text.
pub fn csv_text(header: &[&str], rows: &[Vec<f64>], digits: Option<usize>) -> CliResult<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    writer.write_record(header).map_err(io)?;
    for row in rows {
        writer
            .write_record(row.iter().map(|&v| format_number(v, digits)))
            .map_err(io)?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

pub fn json_text<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    text
}

/// Writes to `path`, or to standard output when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
