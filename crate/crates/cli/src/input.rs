//! Matrix files: JSON `{"matrix": [[...], ...]}` or plain CSV.

use std::path::Path;

use certeig::error::{Error, Result};
use certeig::matrix::SquareMatrix;
use certeig::numerics::{parse_decimal, Rational};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Json,
    Csv,
}

impl InputFormat {
    /// By extension, falling back to a peek at the first character.
    pub fn detect(path: &Path, text: &str) -> Self {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("json") => InputFormat::Json,
            Some("csv") => InputFormat::Csv,
            _ if text.trim_start().starts_with('{') => InputFormat::Json,
            _ => InputFormat::Csv,
        }
    }
}

pub fn parse_matrix(path: &Path, mode: Mode) -> Result<SquareMatrix<Rational>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix_text(&text, InputFormat::detect(path, &text), mode)
}

/// Parses every entry exactly. Bare JSON numbers are accepted only in float
/// mode; exact input should quote them so nothing passes through a double.
pub fn parse_matrix_text(text: &str, format: InputFormat, mode: Mode) -> Result<SquareMatrix<Rational>> {
    if text.trim().is_empty() {
        return Err(Error::Input("matrix file is empty".into()));
    }
    let rows = match format {
        InputFormat::Json => json_rows(text, mode)?,
        InputFormat::Csv => csv_rows(text)?,
    };
    SquareMatrix::from_rows(rows)
}

fn located(row: usize, col: usize, e: Error) -> Error {
    Error::Input(format!("row {}, column {}: {e}", row + 1, col + 1))
}

fn json_rows(text: &str, mode: Mode) -> Result<Vec<Vec<Rational>>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid JSON: {e}")))?;
    let rows = doc
        .get("matrix")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Input("JSON input needs a \"matrix\" array of rows".into()))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row.as_array().ok_or_else(|| Error::Input(format!("row {} is not an array", i + 1)))?;
            row.iter()
                .enumerate()
                .map(|(j, cell)| match cell {
                    Value::String(s) => parse_decimal(s).map_err(|e| located(i, j, e)),
                    // arbitrary_precision keeps the literal text
                    Value::Number(num) if mode == Mode::Float => {
                        parse_decimal(&num.to_string()).map_err(|e| located(i, j, e))
                    }
                    Value::Number(num) => Err(located(
                        i,
                        j,
                        Error::Input(format!("bare number {num} in exact mode; write it as the string \"{num}\"")),
                    )),
                    other => Err(located(i, j, Error::Input(format!("expected a decimal string, found {other}")))),
                })
                .collect()
        })
        .collect()
}

fn csv_rows(text: &str) -> Result<Vec<Vec<Rational>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Input(format!("row {}: {e}", i + 1)))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(j, cell)| parse_decimal(cell).map_err(|e| located(rows.len(), j, e)))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Input("matrix file has no rows".into()));
    }
    Ok(rows)
}
