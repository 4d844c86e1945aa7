//! JSON system files: `{"name": "schur", "rows": [[1, 1, -1]]}`.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::linalg::IntMatrix;
use crate::system::LinearSystem;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed system file: {0}")]
    Malformed(String),
    #[error("rows have different lengths: row 1 has {expected} entries, row {row} has {found}")]
    NonRectangular { row: usize, expected: usize, found: usize },
    #[error("the matrix has no rows or no columns")]
    Empty,
}

impl ParseError {
    /// Process exit status reported by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            ParseError::Io { .. } | ParseError::Malformed(_) => 2,
            ParseError::NonRectangular { .. } => 4,
            ParseError::Empty => 5,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    rows: Vec<Vec<Number>>,
}

pub fn parse_system_str(text: &str) -> Result<LinearSystem, ParseError> {
    let file: SystemFile =
        serde_json::from_str(text).map_err(|e| ParseError::Malformed(e.to_string()))?;
    let cols = file.rows.first().map_or(0, Vec::len);
    if let Some((i, row)) = file.rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(ParseError::NonRectangular { row: i + 1, expected: cols, found: row.len() });
    }
    if cols == 0 {
        return Err(ParseError::Empty);
    }
    let rows = file
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    v.as_str()
                        .parse::<BigInt>()
                        .map_err(|_| ParseError::Malformed(format!("{v} is not an integer")))
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<BigInt>>, _>>()?;
    let matrix = IntMatrix::from_rows(cols, rows).expect("checked rectangular");
    let system = LinearSystem::new(matrix).map_err(|_| ParseError::Empty)?;
    Ok(match file.name {
        Some(name) => system.with_name(name),
        None => system,
    })
}

pub fn parse_system(path: impl AsRef<Path>) -> Result<LinearSystem, ParseError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| ParseError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_system_str(&text)
}

pub fn emit_system(a: &LinearSystem) -> String {
    let file = SystemFile {
        name: a.name().map(str::to_string),
        rows: a
            .matrix()
            .row_vecs()
            .iter()
            .map(|row| row.iter().map(|v| v.to_string().parse().expect("integer literal")).collect())
            .collect(),
    };
    serde_json::to_string(&file).expect("serialisable")
}
