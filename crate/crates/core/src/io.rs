//! JSON input documents: `n`, `frames`, `system` and free-form `labels`.
//!
//! Matrices are row-major, either nested (`[[1, 0], [0, 1]]`) or flat
//! (`[1, 0, 0, 1]`).

use serde::{Deserialize, Serialize};

use crate::cyclic::FrameChain;
use crate::discrete::SymplecticSystem;
use crate::error::{Error, Result};
use crate::lagrangian::{LagrangianFrame, SymplecticMatrix};
use crate::linalg::{ensure_finite, Mat, Tolerance};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixInput {
    Nested(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

impl MatrixInput {
    pub fn from_mat(a: &Mat) -> Self {
        MatrixInput::Nested(
            (0..a.nrows())
                .map(|i| a.row(i).iter().copied().collect())
                .collect(),
        )
    }

    pub fn to_mat(&self, rows: usize, cols: usize) -> Result<Mat> {
        let data: Vec<f64> = match self {
            MatrixInput::Flat(v) => v.clone(),
            MatrixInput::Nested(r) => {
                if r.len() != rows || r.iter().any(|row| row.len() != cols) {
                    return Err(Error::Shape(format!(
                        "expected {rows}x{cols} nested rows, got {} rows of lengths {:?}",
                        r.len(),
                        r.iter().map(Vec::len).collect::<Vec<_>>()
                    )));
                }
                r.concat()
            }
        };
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        let a = Mat::from_row_slice(rows, cols, &data);
        ensure_finite(&a)?;
        Ok(a)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InputDocument {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<Vec<MatrixInput>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<Vec<MatrixInput>>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub labels: serde_json::Value,
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InputDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.n == 0 {
            return Err(Error::Shape("n must be positive".into()));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn with_frames(frames: &[LagrangianFrame]) -> Self {
        InputDocument {
            n: frames.first().map_or(0, LagrangianFrame::n),
            frames: Some(
                frames
                    .iter()
                    .map(|y| MatrixInput::from_mat(y.matrix()))
                    .collect(),
            ),
            ..Default::default()
        }
    }

    pub fn with_system(system: &SymplecticSystem) -> Self {
        InputDocument {
            n: system.n(),
            system: Some(
                system
                    .coefficients()
                    .iter()
                    .map(|s| MatrixInput::from_mat(s.matrix()))
                    .collect(),
            ),
            ..Default::default()
        }
    }

    /// Frame matrices checked for shape only.
    pub fn frame_matrices(&self) -> Result<Vec<Mat>> {
        let frames = self
            .frames
            .as_ref()
            .ok_or_else(|| Error::Parse("document has no `frames`".into()))?;
        frames
            .iter()
            .map(|f| f.to_mat(2 * self.n, self.n))
            .collect()
    }

    /// System matrices checked for shape only.
    pub fn system_matrices(&self) -> Result<Vec<Mat>> {
        let system = self
            .system
            .as_ref()
            .ok_or_else(|| Error::Parse("document has no `system`".into()))?;
        system
            .iter()
            .map(|s| s.to_mat(2 * self.n, 2 * self.n))
            .collect()
    }

    pub fn frames(&self, tol: &Tolerance) -> Result<Vec<LagrangianFrame>> {
        self.frame_matrices()?
            .into_iter()
            .map(|y| LagrangianFrame::new(y, tol))
            .collect()
    }

    pub fn chain(&self, tol: &Tolerance) -> Result<FrameChain> {
        FrameChain::new(self.frames(tol)?)
    }

    pub fn system(&self) -> Result<SymplecticSystem> {
        SymplecticSystem::new(
            self.system_matrices()?
                .into_iter()
                .map(SymplecticMatrix::new)
                .collect::<Result<_>>()?,
        )
    }
}
