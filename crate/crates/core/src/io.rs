//! Text formats for matrices and vectors.
//!
//! CSV: one matrix row per line, comma separated, no header. A vector is a
//! single line, or one value per line.
//!
//! Structured: JSON. A matrix is `{"rows": r, "cols": c, "data": [...]}` with
//! row-major data; a vector is a plain array.
//!
//! Readers detect the format from the first non-blank character. Numbers are
//! written in the shortest representation that parses back to the same `f64`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Structured,
}

#[derive(Serialize, Deserialize)]
struct MatrixRecord {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

fn is_structured(text: &str) -> bool {
    matches!(text.trim_start().chars().next(), Some('{') | Some('['))
}

fn csv_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(n, line)| {
            line.split(',')
                .map(|field| {
                    let field = field.trim();
                    field
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("line {}: bad number {field:?}", n + 1)))
                })
                .collect()
        })
        .collect()
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    if is_structured(text) {
        let rec: MatrixRecord = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        return DenseMatrix::new(rec.rows, rec.cols, rec.data);
    }
    let rows = csv_rows(text)?;
    if rows.is_empty() {
        return Err(Error::Parse("no matrix rows".into()));
    }
    DenseMatrix::from_rows(&rows)
}

pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let values = if is_structured(text) {
        serde_json::from_str::<Vec<f64>>(text).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        let rows = csv_rows(text)?;
        match rows.as_slice() {
            [single] => single.clone(),
            many if many.iter().all(|r| r.len() == 1) => many.iter().map(|r| r[0]).collect(),
            _ => return Err(Error::Parse("vector must be one line or one value per line".into())),
        }
    };
    if values.is_empty() {
        return Err(Error::Parse("empty vector".into()));
    }
    if let Some(index) = values.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(values)
}

/// Shortest round-trip decimal form.
pub fn format_number(x: f64) -> String {
    format!("{x:?}")
}

fn csv_line(values: &[f64]) -> String {
    let mut line = values.iter().map(|&x| format_number(x)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

pub fn format_matrix(m: &DenseMatrix, format: Format) -> String {
    match format {
        Format::Csv => m.row_iter().map(csv_line).collect(),
        Format::Structured => {
            let rec = MatrixRecord { rows: m.rows(), cols: m.cols(), data: m.data().to_vec() };
            let mut s = serde_json::to_string(&rec).expect("finite matrix serializes");
            s.push('\n');
            s
        }
    }
}

pub fn format_vector(v: &[f64], format: Format) -> String {
    match format {
        Format::Csv => csv_line(v),
        Format::Structured => {
            let mut s = serde_json::to_string(v).expect("finite vector serializes");
            s.push('\n');
            s
        }
    }
}
