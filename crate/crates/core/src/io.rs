//! JSON documents for curvature operators, competitor point data and
//! boundary data.
//!
//! ```json
//! {"basis": "K", "matrix": [[...6 reals...], ...]}
//! {"R_M": {"basis": "SDASD", "matrix": [...]}, "tau": -1.0, "scal_N": 24.0, "l": [[...4 reals...], ...]}
//! {"II": [[...3 reals...], ...], "H_N": 3.0}
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary::{BoundaryData, BoundaryError};
use crate::exterior::CurvatureOperator;
use crate::smallmat::RealMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

impl IoError {
    fn field(field: impl Into<String>, message: impl ToString) -> Self {
        Self::Field { field: field.into(), message: message.to_string() }
    }
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep only the reason.
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        Self::Syntax { line: e.line(), column: e.column(), message }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    K,
    SDASD,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureDoc {
    pub basis: Basis,
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDataDoc {
    #[serde(rename = "R_M")]
    pub r_m: CurvatureDoc,
    pub tau: f64,
    #[serde(rename = "scal_N")]
    pub scal_n: f64,
    pub l: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryDoc {
    #[serde(rename = "II")]
    pub ii: Vec<Vec<f64>>,
    #[serde(rename = "H_N")]
    pub h_n: f64,
}

/// Competitor data at a point: `R_M`, the shift `τ`, `scal_N` and `l`.
#[derive(Clone, Debug)]
pub struct PointData {
    pub r: CurvatureOperator,
    pub tau: f64,
    pub scal_n: f64,
    pub l: RealMatrix,
}

fn square_matrix(field: &str, rows: &[Vec<f64>], n: usize) -> Result<RealMatrix, IoError> {
    if rows.len() != n {
        return Err(IoError::field(field, format!("expected {n} rows, got {}", rows.len())));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(IoError::field(format!("{field}[{i}]"), format!("expected {n} entries, got {}", row.len())));
        }
    }
    Ok(RealMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn finite(field: &str, x: f64) -> Result<f64, IoError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(IoError::field(field, "must be finite"))
    }
}

impl CurvatureDoc {
    pub fn from_operator(r: &CurvatureOperator) -> Self {
        Self { basis: Basis::K, matrix: r.matrix().to_rows() }
    }

    /// Validates shape, symmetry and Bianchi; converts to the `K` basis.
    pub fn to_operator(&self, field: &str) -> Result<CurvatureOperator, IoError> {
        let name = format!("{field}matrix");
        let m = square_matrix(&name, &self.matrix, 6)?;
        let r = match self.basis {
            Basis::K => CurvatureOperator::new(m),
            Basis::SDASD => CurvatureOperator::from_sdasd(&m),
        };
        r.map_err(|e| IoError::field(name, e))
    }
}

pub fn parse_curvature(text: &str) -> Result<CurvatureOperator, IoError> {
    let doc: CurvatureDoc = serde_json::from_str(text)?;
    doc.to_operator("")
}

/// Pretty JSON in the `K` basis.
pub fn curvature_to_json(r: &CurvatureOperator) -> String {
    serde_json::to_string_pretty(&CurvatureDoc::from_operator(r)).expect("finite matrix serializes")
}

pub fn parse_point_data(text: &str) -> Result<PointData, IoError> {
    let doc: PointDataDoc = serde_json::from_str(text)?;
    let r = doc.r_m.to_operator("R_M.")?;
    let tau = finite("tau", doc.tau)?;
    let scal_n = finite("scal_N", doc.scal_n)?;
    let l = square_matrix("l", &doc.l, 4)?;
    Ok(PointData { r, tau, scal_n, l })
}

pub fn point_data_to_json(p: &PointData) -> String {
    let doc = PointDataDoc { r_m: CurvatureDoc::from_operator(&p.r), tau: p.tau, scal_n: p.scal_n, l: p.l.to_rows() };
    serde_json::to_string_pretty(&doc).expect("finite data serializes")
}

pub fn parse_boundary(text: &str) -> Result<BoundaryData, IoError> {
    let doc: BoundaryDoc = serde_json::from_str(text)?;
    let ii = square_matrix("II", &doc.ii, 3)?;
    let h_n = finite("H_N", doc.h_n)?;
    BoundaryData::new(ii, h_n).map_err(|e: BoundaryError| IoError::field("II", e))
}
