//! Seeded sampling of unitaries and states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{c, CMatrix, QState, C64};
use crate::error::{Error, Result};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent per-index seed stream (splitmix64 finalizer over seed and index).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-random `d x d` unitary from the QR decomposition of a Ginibre
/// matrix, with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<CMatrix> {
    if d == 0 {
        return Err(Error::OutOfRange {
            name: "dimension",
            value: 0.0,
        });
    }
    let qr = ginibre(d, d, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            c(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

pub fn haar_unitary(d: usize, seed: u64) -> Result<CMatrix> {
    haar_unitary_with(d, &mut rng_from_seed(seed))
}

/// Haar-random pure state vector of length `d`.
pub fn random_pure_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    let g = ginibre(d, 1, rng);
    let norm = g.norm();
    g.iter().map(|z| z / norm).collect()
}

pub fn random_pure<R: Rng + ?Sized>(dims: Vec<usize>, rng: &mut R) -> QState {
    let d = dims.iter().product();
    QState::pure(dims, &random_pure_vector(d, rng)).expect("nonzero Gaussian vector")
}

/// Hilbert-Schmidt random mixed state: `G G† / Tr(G G†)` for Ginibre `G`.
pub fn random_mixed<R: Rng + ?Sized>(dims: Vec<usize>, rng: &mut R) -> QState {
    let d = dims.iter().product();
    let g = ginibre(d, d, rng);
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    QState::new(dims, w * c(1.0 / tr, 0.0)).expect("Wishart matrix is a valid state")
}

/// Random probability vector (flat Dirichlet).
pub fn random_probabilities<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..d)
        .map(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}
