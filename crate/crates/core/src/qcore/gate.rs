use serde::{Deserialize, Serialize};

use super::layout::{conjugate, Split};
use super::{unitarity_residual, CMatrix, QState, UNITARY_TOL};
use crate::error::{Error, Result};

/// A unitary acting on an ordered list of subsystems. The first target is
/// the slowest-varying index of the unitary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    #[serde(with = "crate::serde_matrix::matrix")]
    unitary: CMatrix,
    targets: Vec<usize>,
}

impl Gate {
    pub fn new(unitary: CMatrix, targets: Vec<usize>) -> Result<Gate> {
        let residual = unitarity_residual(&unitary);
        if residual > UNITARY_TOL {
            return Err(Error::NonUnitary { residual });
        }
        check_distinct(&targets)?;
        Ok(Gate { unitary, targets })
    }

    /// Same unitary on different subsystems.
    pub fn on(mut self, targets: Vec<usize>) -> Result<Gate> {
        check_distinct(&targets)?;
        self.targets = targets;
        Ok(self)
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// Checks targets against `dims` and returns the index split.
    pub(crate) fn split_for(&self, dims: &[usize]) -> Result<Split> {
        if let Some(&bad) = self.targets.iter().find(|&&t| t >= dims.len()) {
            return Err(Error::InvalidSubsystem(format!(
                "gate target {bad} out of range for {} subsystems",
                dims.len()
            )));
        }
        let joint: usize = self.targets.iter().map(|&t| dims[t]).product();
        if joint != self.unitary.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "gate of side {} on targets {:?} with joint dimension {joint}",
                self.unitary.nrows(),
                self.targets
            )));
        }
        Ok(Split::new(dims, &self.targets))
    }

    /// The gate embedded into the full space of `dims`.
    pub fn embed(&self, dims: &[usize]) -> Result<CMatrix> {
        let split = self.split_for(dims)?;
        let n = split.group_dim * split.rest_dim;
        Ok(super::layout::apply_left(
            &CMatrix::identity(n, n),
            &split,
            &self.unitary,
        ))
    }
}

fn check_distinct(targets: &[usize]) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::InvalidSubsystem("gate needs at least one target".into()));
    }
    for (i, t) in targets.iter().enumerate() {
        if targets[..i].contains(t) {
            return Err(Error::InvalidSubsystem(format!("repeated gate target {t}")));
        }
    }
    Ok(())
}

/// `U ρ U†` with `U` embedded on the gate's targets.
pub fn apply_gate(s: &QState, g: &Gate) -> Result<QState> {
    let split = g.split_for(s.dims())?;
    let mat = conjugate(s.matrix(), &split, g.unitary());
    QState::from_positive(s.dims().to_vec(), mat)
}
