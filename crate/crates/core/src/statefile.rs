//! JSON state files.
//!
//! Accepted shapes:
//!
//! ```json
//! { "dim": 2, "matrix": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]] }
//! { "diag": [0.25, 0.75] }
//! { "pure": [[1.0, 0.0], [0.0, 1.0]] }
//! { "bloch": [0.0, 0.0, 1.0] }
//! ```
//!
//! Matrices are row-major lists of `[re, im]` pairs. Pure vectors need not be
//! normalized.

use std::path::Path;

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::matfun::{CMatrix, HermitianMatrix};
use crate::states::{pure_from_vector, DensityMatrix};

/// Row-major complex entries as `[re, im]` pairs.
pub type ComplexRows = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq)]
pub enum StateFile {
    Matrix { dim: usize, matrix: ComplexRows },
    Diag(Vec<f64>),
    Pure(Vec<[f64; 2]>),
    Bloch([f64; 3]),
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::StateFile {
        field: field.into(),
        message: message.into(),
    }
}

fn number(v: &Value, field: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| field_err(field, format!("expected a number, got {v}")))
}

fn array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| field_err(field, "expected an array"))
}

fn pair(v: &Value, field: &str) -> Result<[f64; 2]> {
    let a = array(v, field)?;
    if a.len() != 2 {
        return Err(field_err(field, format!("expected [re, im], got {} entries", a.len())));
    }
    Ok([
        number(&a[0], &format!("{field}[0]"))?,
        number(&a[1], &format!("{field}[1]"))?,
    ])
}

fn numbers(v: &Value, field: &str) -> Result<Vec<f64>> {
    array(v, field)?
        .iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("{field}[{i}]")))
        .collect()
}

pub fn matrix_to_rows(m: &CMatrix) -> ComplexRows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

/// Square matrix from rows; `field` names the source in errors.
pub fn rows_to_matrix(rows: &ComplexRows, field: &str) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(field_err(field, "empty matrix"));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(field_err(
                format!("{field}[{i}]"),
                format!("expected {n} entries, got {}", r.len()),
            ));
        }
    }
    Ok(CMatrix::from_fn(n, n, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

impl StateFile {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| field_err("<document>", e.to_string()))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let obj: &Map<String, Value> = v
            .as_object()
            .ok_or_else(|| field_err("<document>", "expected a JSON object"))?;
        let kinds: Vec<&str> = ["matrix", "diag", "pure", "bloch"]
            .into_iter()
            .filter(|k| obj.contains_key(*k))
            .collect();
        match kinds.as_slice() {
            ["matrix"] => {
                let dim_v = obj.get("dim").ok_or_else(|| field_err("dim", "missing"))?;
                let dim = dim_v
                    .as_u64()
                    .filter(|&d| d >= 1)
                    .ok_or_else(|| field_err("dim", format!("expected a positive integer, got {dim_v}")))?
                    as usize;
                let rows_v = array(&obj["matrix"], "matrix")?;
                if rows_v.len() != dim {
                    return Err(field_err(
                        "matrix",
                        format!("expected {dim} rows, got {}", rows_v.len()),
                    ));
                }
                let mut matrix = Vec::with_capacity(dim);
                for (i, row) in rows_v.iter().enumerate() {
                    let f = format!("matrix[{i}]");
                    let entries = array(row, &f)?;
                    if entries.len() != dim {
                        return Err(field_err(f, format!("expected {dim} entries, got {}", entries.len())));
                    }
                    matrix.push(
                        entries
                            .iter()
                            .enumerate()
                            .map(|(j, e)| pair(e, &format!("matrix[{i}][{j}]")))
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                Ok(StateFile::Matrix { dim, matrix })
            }
            ["diag"] => Ok(StateFile::Diag(numbers(&obj["diag"], "diag")?)),
            ["pure"] => {
                let entries = array(&obj["pure"], "pure")?;
                Ok(StateFile::Pure(
                    entries
                        .iter()
                        .enumerate()
                        .map(|(i, e)| pair(e, &format!("pure[{i}]")))
                        .collect::<Result<Vec<_>>>()?,
                ))
            }
            ["bloch"] => {
                let b = numbers(&obj["bloch"], "bloch")?;
                let arr: [f64; 3] = b
                    .try_into()
                    .map_err(|b: Vec<f64>| field_err("bloch", format!("expected 3 components, got {}", b.len())))?;
                Ok(StateFile::Bloch(arr))
            }
            [] => Err(field_err("<document>", "expected one of matrix, diag, pure, bloch")),
            many => Err(field_err(
                "<document>",
                format!("conflicting keys: {}", many.join(", ")),
            )),
        }
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        StateFile::Matrix {
            dim: rho.dim(),
            matrix: matrix_to_rows(rho.matrix()),
        }
    }

    /// Validated density matrix; validation failures are attributed to the
    /// state's main field.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let (field, res) = match self {
            StateFile::Matrix { matrix, .. } => (
                "matrix",
                rows_to_matrix(matrix, "matrix")
                    .and_then(HermitianMatrix::new)
                    .and_then(DensityMatrix::new),
            ),
            StateFile::Diag(d) => ("diag", DensityMatrix::from_diagonal(d)),
            StateFile::Pure(v) => {
                let v: Vec<Complex64> = v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                if let Some(i) = v.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(field_err(format!("pure[{i}]"), "non-finite entry"));
                }
                ("pure", pure_from_vector(&v))
            }
            StateFile::Bloch([x, y, z]) => ("bloch", DensityMatrix::from_bloch(*x, *y, *z)),
        };
        res.map_err(|e| match e {
            Error::StateFile { .. } => e,
            other => field_err(field, other.to_string()),
        })
    }

    pub fn to_value(&self) -> Value {
        match self {
            StateFile::Matrix { dim, matrix } => serde_json::json!({ "dim": dim, "matrix": matrix }),
            StateFile::Diag(d) => serde_json::json!({ "diag": d }),
            StateFile::Pure(v) => serde_json::json!({ "pure": v }),
            StateFile::Bloch(b) => serde_json::json!({ "bloch": b }),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("finite values serialize")
    }
}

pub fn parse_state(s: &str) -> Result<DensityMatrix> {
    StateFile::from_json_str(s)?.to_density()
}

pub fn read_state_file(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| field_err(path.display().to_string(), e.to_string()))?;
    parse_state(&text)
}

pub fn write_state_file(path: &Path, rho: &DensityMatrix) -> Result<()> {
    std::fs::write(path, StateFile::from_density(rho).to_json_string() + "\n")
        .map_err(|e| field_err(path.display().to_string(), e.to_string()))
}
