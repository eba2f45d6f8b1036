//! JSON input files.
//!
//! - state: `{"dims": [2, 2], "matrix": [[[re, im], ...], ...]}`
//! - basis: `{"locals": [matrix, ...]}`, one unitary per subsystem
//! - unitary: `{"matrix": matrix}`
//! - diagonal phases: `[φ0, φ1, ...]` in radians

use std::path::Path;

use anyhow::{Context, Result};
use coherence_core::qcore::CMatrix;
use coherence_core::{ProductBasis, QState};
use serde::de::DeserializeOwned;
use serde::Deserialize;

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {what} file {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid {what} file {}", path.display()))
}

pub fn read_state(path: &Path) -> Result<QState> {
    read_json(path, "state")
}

pub fn read_basis(path: &Path) -> Result<ProductBasis> {
    read_json(path, "basis")
}

#[derive(Deserialize)]
struct UnitaryFile {
    #[serde(with = "coherence_core::serde_matrix::matrix")]
    matrix: CMatrix,
}

pub fn read_unitary(path: &Path) -> Result<CMatrix> {
    Ok(read_json::<UnitaryFile>(path, "unitary")?.matrix)
}

pub fn read_phases(path: &Path) -> Result<Vec<f64>> {
    read_json(path, "phase list")
}
