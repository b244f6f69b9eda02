//! Single-column numeric CSV input.
//!
//! One value per line, optional header on the first line, LF or CRLF line
//! endings, blank lines ignored. Values must be finite and nonnegative.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use plapt::Sample;

use crate::error::{CliError, CliResult};

pub fn read_values<R: Read>(mut reader: R) -> CliResult<Vec<f64>> {
    let mut bytes = Vec::new();
    reader
        .read_to_end(&mut bytes)
        .map_err(|e| CliError::Io(e.to_string()))?;
    // The reader's line counter drifts on CRLF input, and a record's offset
    // may sit on the preceding terminator; skip those and count newlines.
    let line_of = |offset: u64| {
        let mut start = offset as usize;
        while start < bytes.len() && matches!(bytes[start], b'\r' | b'\n') {
            start += 1;
        }
        1 + bytes[..start].iter().filter(|&&b| b == b'\n').count()
    };
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(bytes.as_slice());
    let mut values = Vec::new();
    for (index, record) in csv.records().enumerate() {
        let record = record.map_err(|e| CliError::Validation(format!("malformed CSV: {e}")))?;
        let line = record.position().map_or(index + 1, |p| line_of(p.byte()));
        if record.len() != 1 {
            return Err(CliError::Validation(format!(
                "line {line}: expected one column, found {}",
                record.len()
            )));
        }
        let field = record[0].trim();
        let value: f64 = match field.parse() {
            Ok(v) => v,
            Err(_) if index == 0 => continue,
            Err(_) => {
                return Err(CliError::Validation(format!(
                    "line {line}: cannot parse {field:?} as a number"
                )));
            }
        };
        if !value.is_finite() {
            return Err(CliError::Validation(format!(
                "line {line}: value {field} is not finite"
            )));
        }
        if value < 0.0 {
            return Err(CliError::Validation(format!("line {line}: negative value {field}")));
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(CliError::Validation("input contains no data".into()));
    }
    Ok(values)
}

pub fn read_sample(path: &Path) -> CliResult<Sample> {
    let file = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(Sample::new(read_values(file)?)?)
}
