use serde::{Deserialize, Serialize};

use super::{c, unitarity_residual, CMatrix, UNITARY_TOL};
use crate::error::{Error, Result};

/// One unitary per subsystem; the columns of each are that subsystem's
/// basis vectors. The joint basis is their tensor product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBasis", into = "RawBasis")]
pub struct ProductBasis {
    locals: Vec<CMatrix>,
}

#[derive(Serialize, Deserialize)]
struct RawBasis {
    #[serde(with = "crate::serde_matrix::matrix_list")]
    locals: Vec<CMatrix>,
}

impl TryFrom<RawBasis> for ProductBasis {
    type Error = Error;
    fn try_from(raw: RawBasis) -> Result<ProductBasis> {
        ProductBasis::new(raw.locals)
    }
}

impl From<ProductBasis> for RawBasis {
    fn from(b: ProductBasis) -> RawBasis {
        RawBasis { locals: b.locals }
    }
}

impl ProductBasis {
    pub fn new(locals: Vec<CMatrix>) -> Result<ProductBasis> {
        for u in &locals {
            let residual = unitarity_residual(u);
            if residual > UNITARY_TOL {
                return Err(Error::NonUnitary { residual });
            }
        }
        Ok(ProductBasis { locals })
    }

    /// The reference basis `{|i_1 ... i_n>}`.
    pub fn computational(dims: &[usize]) -> ProductBasis {
        ProductBasis {
            locals: dims.iter().map(|&d| CMatrix::identity(d, d)).collect(),
        }
    }

    /// Qubit bases from `(theta, phi)` pairs, one per subsystem.
    pub fn from_angles(angles: &[(f64, f64)]) -> ProductBasis {
        ProductBasis {
            locals: angles.iter().map(|&(t, p)| bloch_basis(t, p)).collect(),
        }
    }

    pub fn locals(&self) -> &[CMatrix] {
        &self.locals
    }

    pub fn local(&self, k: usize) -> &CMatrix {
        &self.locals[k]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.locals.iter().map(|u| u.nrows()).collect()
    }

    pub fn len(&self) -> usize {
        self.locals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locals.is_empty()
    }

    /// Bases of the listed subsystems only, in the order given.
    pub fn restrict(&self, indices: &[usize]) -> ProductBasis {
        ProductBasis {
            locals: indices.iter().map(|&k| self.locals[k].clone()).collect(),
        }
    }

    /// Replaces the basis of subsystem `k`.
    pub fn with_local(mut self, k: usize, u: CMatrix) -> Result<ProductBasis> {
        let residual = unitarity_residual(&u);
        if residual > UNITARY_TOL {
            return Err(Error::NonUnitary { residual });
        }
        self.locals[k] = u;
        Ok(self)
    }

    /// The full basis-change matrix `⊗_k U_k`.
    pub fn matrix(&self) -> CMatrix {
        self.locals
            .iter()
            .fold(CMatrix::identity(1, 1), |acc, u| acc.kronecker(u))
    }

    pub(crate) fn check_dims(&self, dims: &[usize]) -> Result<()> {
        if self.dims() != dims {
            return Err(Error::DimensionMismatch(format!(
                "basis dims {:?} vs state dims {:?}",
                self.dims(),
                dims
            )));
        }
        Ok(())
    }
}

/// Qubit basis with columns `cos θ|0> + e^{iφ} sin θ|1>` and
/// `-e^{-iφ} sin θ|0> + cos θ|1>`.
pub fn bloch_basis(theta: f64, phi: f64) -> CMatrix {
    let (s, co) = theta.sin_cos();
    let (ps, pc) = phi.sin_cos();
    CMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s * pc, s * ps), c(s * pc, s * ps), c(co, 0.0)])
}
