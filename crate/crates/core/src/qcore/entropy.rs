use nalgebra::{DVector, SymmetricEigen};

use super::{CMatrix, QState, EIG_CLIP};
use crate::error::{Error, Result};

/// Eigenvalues (ascending) of the Hermitian part of `m`.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let herm = (m + m.adjoint()) * super::c(0.5, 0.0);
    let mut vals: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Eigenvalues and eigenvectors (as columns) of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let herm = (m + m.adjoint()) * super::c(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    (eig.eigenvalues, eig.eigenvectors)
}

/// Shannon entropy in bits, with probabilities clipped to `[0, 1]` and
/// anything below the clip window contributing nothing.
pub fn shannon_bits<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    probs
        .into_iter()
        .map(|p| {
            let p = p.min(1.0);
            if p <= EIG_CLIP {
                0.0
            } else {
                -p * p.log2()
            }
        })
        .sum()
}

/// Von Neumann entropy in bits.
pub fn vn_entropy(s: &QState) -> f64 {
    shannon_bits(hermitian_eigenvalues(s.matrix()))
}

/// Quantum relative entropy `S(rho || sigma)`, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelEntropy {
    Finite(f64),
    /// The support of `rho` is not contained in the support of `sigma`.
    Infinite,
}

impl RelEntropy {
    pub fn finite(self) -> Option<f64> {
        match self {
            RelEntropy::Finite(v) => Some(v),
            RelEntropy::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, RelEntropy::Infinite)
    }
}

pub fn rel_entropy(rho: &QState, sigma: &QState) -> Result<RelEntropy> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy between dims {:?} and {:?}",
            rho.dims(),
            sigma.dims()
        )));
    }
    let (vals, vecs) = hermitian_eigen(sigma.matrix());
    // Diagonal of rho in the eigenbasis of sigma.
    let rotated = vecs.adjoint() * rho.matrix() * &vecs;
    let mut cross = 0.0;
    for (j, &mu) in vals.iter().enumerate() {
        let weight = rotated[(j, j)].re;
        if mu <= EIG_CLIP {
            if weight > EIG_CLIP {
                return Ok(RelEntropy::Infinite);
            }
            continue;
        }
        cross += weight * mu.min(1.0).log2();
    }
    let value = -vn_entropy(rho) - cross;
    Ok(RelEntropy::Finite(if value < 0.0 && value > -EIG_CLIP {
        0.0
    } else {
        value
    }))
}
