//! Composite-system linear algebra for small density matrices.
//!
//! Subsystems are ordered row-major: the first subsystem is the
//! slowest-varying tensor index. All entropies are in bits.

mod basis;
mod entropy;
mod gate;
pub(crate) mod layout;
pub(crate) mod ops;
pub mod random;
mod state;

pub use basis::{bloch_basis, ProductBasis};
pub use entropy::{hermitian_eigen, hermitian_eigenvalues, rel_entropy, shannon_bits, vn_entropy, RelEntropy};
pub use gate::{apply_gate, Gate};
pub use ops::{dephase, negativity, partial_trace, partial_transpose, tensor};
pub use random::haar_unitary;
pub use state::QState;

use nalgebra::DMatrix;
use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Tolerance for the Hermitian, trace and positivity invariants of a state.
pub const STATE_TOL: f64 = 1e-10;
/// Eigenvalues below this are treated as zero in entropies and support tests.
pub const EIG_CLIP: f64 = 1e-12;
/// Tolerance for unitarity of basis matrices and gates.
pub const UNITARY_TOL: f64 = 1e-10;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entry magnitude of `U†U - I`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let prod = u.adjoint() * u;
    let mut worst = 0.0_f64;
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - c(target, 0.0)).norm());
        }
    }
    worst
}

/// Largest entry magnitude of `M - M†`.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entry magnitude of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
