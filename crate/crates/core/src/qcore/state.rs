use serde::{Deserialize, Serialize};

use super::layout::total_dim;
use super::{c, hermitian_eigenvalues, hermitian_residual, CMatrix, C64, STATE_TOL};
use crate::error::{Error, Result};

/// A density matrix over an ordered list of subsystem dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::serde_matrix::RawState", into = "crate::serde_matrix::RawState")]
pub struct QState {
    dims: Vec<usize>,
    mat: CMatrix,
}

impl QState {
    /// Builds a state, checking Hermiticity, unit trace and positivity.
    pub fn new(dims: Vec<usize>, mat: CMatrix) -> Result<QState> {
        let state = QState::with_structure(dims, mat)?;
        state.check_structural()?;
        state.check_positive()?;
        Ok(state)
    }

    fn with_structure(dims: Vec<usize>, mat: CMatrix) -> Result<QState> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::DimensionMismatch(format!(
                "subsystem dimensions must be positive, got {dims:?}"
            )));
        }
        let n = total_dim(&dims);
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} need a {n}x{n} matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(QState { dims, mat })
    }

    /// For operations that preserve positivity exactly (unitary conjugation,
    /// partial trace, pinching, tensor products). Only the cheap invariants
    /// are re-checked.
    pub(crate) fn from_positive(dims: Vec<usize>, mat: CMatrix) -> Result<QState> {
        let state = QState::with_structure(dims, mat)?;
        state.check_structural()?;
        Ok(state)
    }

    fn check_structural(&self) -> Result<()> {
        let herm = hermitian_residual(&self.mat);
        if herm > STATE_TOL {
            return Err(Error::InvalidState {
                invariant: "Hermitian",
                residual: herm,
            });
        }
        let tr = (self.mat.trace() - c(1.0, 0.0)).norm();
        if tr > STATE_TOL {
            return Err(Error::InvalidState {
                invariant: "unit trace",
                residual: tr,
            });
        }
        Ok(())
    }

    fn check_positive(&self) -> Result<()> {
        let min = hermitian_eigenvalues(&self.mat)[0];
        if min < -STATE_TOL {
            return Err(Error::InvalidState {
                invariant: "positive semidefinite",
                residual: -min,
            });
        }
        Ok(())
    }

    /// The pure state with the given (not necessarily normalized) amplitudes.
    pub fn pure(dims: Vec<usize>, amplitudes: &[C64]) -> Result<QState> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::OutOfRange {
                name: "amplitude norm",
                value: norm,
            });
        }
        let v = nalgebra::DVector::from_iterator(amplitudes.len(), amplitudes.iter().map(|a| a / norm));
        QState::from_positive(dims, &v * v.adjoint())
    }

    /// The computational basis projector `|index><index|`.
    pub fn basis_state(dims: Vec<usize>, index: usize) -> Result<QState> {
        let n = total_dim(&dims);
        if index >= n {
            return Err(Error::OutOfRange {
                name: "basis index",
                value: index as f64,
            });
        }
        let mut mat = CMatrix::zeros(n, n);
        mat[(index, index)] = c(1.0, 0.0);
        QState::from_positive(dims, mat)
    }

    /// A state diagonal in the computational basis.
    pub fn diagonal(dims: Vec<usize>, probs: &[f64]) -> Result<QState> {
        if probs.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidState {
                invariant: "positive semidefinite",
                residual: -probs.iter().copied().fold(0.0, f64::min),
            });
        }
        let v = nalgebra::DVector::from_iterator(probs.len(), probs.iter().map(|&p| c(p, 0.0)));
        QState::from_positive(dims, CMatrix::from_diagonal(&v))
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> QState {
        let n = total_dim(&dims);
        let mat = CMatrix::identity(n, n) * c(1.0 / n as f64, 0.0);
        QState { dims, mat }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    /// Side of the density matrix.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.mat)
    }

    /// Same matrix, regrouped subsystem dimensions (product must match).
    pub fn regroup(&self, dims: Vec<usize>) -> Result<QState> {
        QState::with_structure(dims, self.mat.clone())
    }

    /// True when every subsystem is a qubit.
    pub fn is_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }
}
