//! The matrix file format.
//!
//! A matrix is stored as JSON: `{ "n": int, "labels": [string]?, "rows":
//! [[rational]] }`, where each rational is either a string like `"2/3"` or a
//! JSON number, converted exactly from its decimal representation. Rows must
//! be stochastic after conversion.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::matrix::RepresentationMatrix;
use crate::rational::{format_rational, parse_rational};
use crate::{Error, Result};

#[derive(Deserialize)]
struct MatrixFile {
    n: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
    rows: Vec<Vec<Value>>,
}

/// Parses the JSON matrix format from a string.
pub fn matrix_from_json_str(text: &str) -> Result<RepresentationMatrix> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| Error::MatrixFile(e.to_string()))?;
    if file.rows.len() != file.n {
        return Err(Error::MatrixFile(format!(
            "declared n = {} but found {} rows",
            file.n,
            file.rows.len()
        )));
    }
    let rows = file
        .rows
        .iter()
        .map(|row| row.iter().map(value_to_rational).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    RepresentationMatrix::new(rows, file.labels)
}

fn value_to_rational(value: &Value) -> Result<num::BigRational> {
    match value {
        Value::String(s) => parse_rational(s),
        // With arbitrary precision enabled the number prints as its original
        // decimal literal, so the conversion is exact.
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::MatrixFile(format!(
            "expected a rational string or number, got {other}"
        ))),
    }
}

/// Serializes a matrix to the JSON matrix format (rationals as `"p/q"`).
pub fn matrix_to_json_string(matrix: &RepresentationMatrix) -> String {
    let rows: Vec<Vec<String>> = (0..matrix.n())
        .map(|i| matrix.row(i).iter().map(format_rational).collect())
        .collect();
    let mut doc = serde_json::Map::new();
    doc.insert("n".into(), Value::from(matrix.n()));
    if let Some(labels) = matrix.labels() {
        doc.insert("labels".into(), Value::from(labels.to_vec()));
    }
    doc.insert(
        "rows".into(),
        Value::from(
            rows.into_iter()
                .map(Value::from)
                .collect::<Vec<Value>>(),
        ),
    );
    serde_json::to_string_pretty(&Value::Object(doc)).expect("string-only tree")
}

/// Reads a matrix file from disk.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<RepresentationMatrix> {
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::MatrixFile(format!("{}: {e}", path.as_ref().display())))?;
    matrix_from_json_str(&text)
}

/// Writes a matrix file to disk.
pub fn save_matrix(path: impl AsRef<Path>, matrix: &RepresentationMatrix) -> Result<()> {
    std::fs::write(&path, matrix_to_json_string(matrix) + "\n")
        .map_err(|e| Error::MatrixFile(format!("{}: {e}", path.as_ref().display())))
}
