//! Relative entropy of coherence and the dephasing-based discord family.
//!
//! Every basis-dependent quantity uses the pinching identity
//! `S(ρ || Φρ) = S(Φρ) - S(ρ)`, so values are always finite.

pub mod optimize;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::layout::Split;
use crate::qcore::ops::{normalize_subset, to_basis};
use crate::qcore::{hermitian_eigenvalues, partial_trace, shannon_bits, vn_entropy, CMatrix, ProductBasis, QState};

/// Negative values at or above this are roundoff and clamp to zero.
pub const NEGATIVE_FLOOR: f64 = -1e-6;

/// Strategy knobs for the minimizations over product bases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub grid_points_per_angle: usize,
    pub multistarts: usize,
    pub refine_tol: f64,
    pub max_refine_iters: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            grid_points_per_angle: 12,
            multistarts: 16,
            refine_tol: 1e-9,
            max_refine_iters: 500,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        OptimizerConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("grid_points_per_angle", self.grid_points_per_angle),
            ("multistarts", self.multistarts),
            ("max_refine_iters", self.max_refine_iters),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::OutOfRange { name, value: 0.0 });
            }
        }
        if self.refine_tol.is_nan() || self.refine_tol <= 0.0 {
            return Err(Error::OutOfRange {
                name: "refine_tol",
                value: self.refine_tol,
            });
        }
        Ok(())
    }
}

/// Outcome of a minimized measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    /// Bits; never below zero.
    pub value: f64,
    pub argmin_basis: Option<ProductBasis>,
    pub evaluations: usize,
    /// Set when the minimum was taken over caller-supplied candidate bases
    /// rather than the qubit optimizer.
    pub heuristic: bool,
}

pub(crate) fn clamp_measure(value: f64) -> Result<f64> {
    if value < NEGATIVE_FLOOR || value.is_nan() {
        return Err(Error::NegativeMeasure { value });
    }
    Ok(value.max(0.0))
}

fn diag_entropy(m: &CMatrix) -> f64 {
    shannon_bits((0..m.nrows()).map(|i| m[(i, i)].re))
}

fn all_indices(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Checks that `a` is a proper nonempty subset and returns it sorted.
fn proper_subset(a: &[usize], n: usize) -> Result<Vec<usize>> {
    if a.is_empty() {
        return Err(Error::InvalidSubsystem("subset A is empty".into()));
    }
    let a = normalize_subset(a, n)?;
    if a.len() == n {
        return Err(Error::InvalidSubsystem(
            "subset A must leave at least one subsystem".into(),
        ));
    }
    Ok(a)
}

/// Entropy of `ρ` after dephasing the subsystems in `a` (already rotated
/// into the dephasing basis): the blocks `<i|_A ρ |i>_A` are kept whole.
fn block_dephased_entropy(rotated: &CMatrix, dims: &[usize], a: &[usize]) -> f64 {
    let split = Split::new(dims, a);
    let (g, r) = (split.group_dim, split.rest_dim);
    let mut total = 0.0;
    for i in 0..g {
        let block = CMatrix::from_fn(r, r, |x, y| rotated[(split.table[x * g + i], split.table[y * g + i])]);
        total += shannon_bits(hermitian_eigenvalues(&block));
    }
    total
}

/// Relative entropy of coherence `C(ρ) = S(Φρ) - S(ρ)` in basis `b`.
pub fn coherence(s: &QState, b: &ProductBasis) -> Result<f64> {
    b.check_dims(s.dims())?;
    let rotated = to_basis(s.matrix(), s.dims(), b, &all_indices(s.num_subsystems()));
    clamp_measure(diag_entropy(&rotated) - vn_entropy(s))
}

/// `C_{B|A}(ρ) = S(Φ_A ρ) - S(ρ)`: coherence relative to dephasing on `A` only.
pub fn coherence_b_given_a(s: &QState, a_indices: &[usize], b: &ProductBasis) -> Result<f64> {
    let a = proper_subset(a_indices, s.num_subsystems())?;
    b.check_dims(s.dims())?;
    let rotated = to_basis(s.matrix(), s.dims(), b, &a);
    clamp_measure(block_dephased_entropy(&rotated, s.dims(), &a) - vn_entropy(s))
}

/// Global discord in a fixed product basis: joint coherence minus the
/// coherence of every single-subsystem marginal.
pub fn global_discord_at(s: &QState, b: &ProductBasis) -> Result<f64> {
    let n = s.num_subsystems();
    if n < 2 {
        return Err(Error::SingleSubsystem);
    }
    b.check_dims(s.dims())?;
    let joint = coherence(s, b)?;
    let mut marginals = 0.0;
    for k in 0..n {
        marginals += coherence(&partial_trace(s, &[k])?, &b.restrict(&[k]))?;
    }
    clamp_measure(joint - marginals)
}

/// Asymmetric discord in a fixed basis: `C_{B|A}(ρ) - C(ρ_A)`.
pub fn asym_discord_at(s: &QState, a_indices: &[usize], b: &ProductBasis) -> Result<f64> {
    let a = proper_subset(a_indices, s.num_subsystems())?;
    b.check_dims(s.dims())?;
    let cond = coherence_b_given_a(s, &a, b)?;
    let local = coherence(&partial_trace(s, &a)?, &b.restrict(&a))?;
    clamp_measure(cond - local)
}

fn require_qubits(s: &QState, indices: &[usize]) -> Result<()> {
    match indices.iter().map(|&k| s.dims()[k]).find(|&d| d != 2) {
        Some(dim) => Err(Error::UnsupportedDimension { dim }),
        None => Ok(()),
    }
}

/// Rotates a matrix into per-subsystem bases with the index splits computed once.
struct Rotator {
    dims: Vec<usize>,
    splits: Vec<(usize, Split)>,
}

impl Rotator {
    fn new(dims: &[usize], subsystems: &[usize]) -> Self {
        Rotator {
            dims: dims.to_vec(),
            splits: subsystems.iter().map(|&k| (k, Split::new(dims, &[k]))).collect(),
        }
    }

    /// `U† m U` with `U = ⊗ locals[i]` on `subsystems[i]`.
    fn rotate(&self, m: &CMatrix, locals: &[CMatrix]) -> CMatrix {
        let mut out = m.clone();
        for ((_, split), u) in self.splits.iter().zip(locals) {
            out = crate::qcore::layout::conjugate(&out, split, &u.adjoint());
        }
        out
    }

    fn basis(&self, optimized: &[usize], locals: Vec<CMatrix>) -> ProductBasis {
        let mut all: Vec<CMatrix> = self.dims.iter().map(|&d| CMatrix::identity(d, d)).collect();
        for (&k, u) in optimized.iter().zip(locals) {
            all[k] = u;
        }
        ProductBasis::new(all).expect("bloch bases are unitary")
    }
}

fn angles_to_locals(x: &[f64]) -> Vec<CMatrix> {
    x.chunks(2).map(|p| crate::qcore::bloch_basis(p[0], p[1])).collect()
}

/// Minimizes global discord over qubit product bases.
pub fn global_discord(s: &QState, cfg: &OptimizerConfig) -> Result<MeasureResult> {
    cfg.validate()?;
    let n = s.num_subsystems();
    if n < 2 {
        return Err(Error::SingleSubsystem);
    }
    let all = all_indices(n);
    require_qubits(s, &all)?;
    let marginals: Vec<QState> = all.iter().map(|&k| partial_trace(s, &[k])).collect::<Result<_>>()?;
    let offset = -vn_entropy(s) + marginals.iter().map(vn_entropy).sum::<f64>();
    let rotator = Rotator::new(s.dims(), &all);
    let objective = |x: &[f64]| {
        let locals = angles_to_locals(x);
        let joint = diag_entropy(&rotator.rotate(s.matrix(), &locals));
        let local: f64 = marginals
            .iter()
            .zip(&locals)
            .map(|(m, u)| diag_entropy(&(u.adjoint() * m.matrix() * u)))
            .sum();
        joint - local + offset
    };
    let min = optimize::minimize_angles(n, cfg, objective);
    let basis = ProductBasis::from_angles(&min.angles);
    Ok(MeasureResult {
        value: global_discord_at(s, &basis)?,
        argmin_basis: Some(basis),
        evaluations: min.evaluations,
        heuristic: false,
    })
}

/// Minimizes asymmetric discord over qubit bases of the `A` subsystems; the
/// remaining subsystems keep the computational basis.
pub fn asym_discord(s: &QState, a_indices: &[usize], cfg: &OptimizerConfig) -> Result<MeasureResult> {
    cfg.validate()?;
    let a = proper_subset(a_indices, s.num_subsystems())?;
    require_qubits(s, &a)?;
    let rho_a = partial_trace(s, &a)?;
    let offset = -vn_entropy(s) + vn_entropy(&rho_a);
    let rotator = Rotator::new(s.dims(), &a);
    let local_rotator = Rotator::new(rho_a.dims(), &all_indices(a.len()));
    let objective = |x: &[f64]| {
        let locals = angles_to_locals(x);
        let cond = block_dephased_entropy(&rotator.rotate(s.matrix(), &locals), s.dims(), &a);
        let local = diag_entropy(&local_rotator.rotate(rho_a.matrix(), &locals));
        cond - local + offset
    };
    let min = optimize::minimize_angles(a.len(), cfg, objective);
    let basis = rotator.basis(&a, angles_to_locals(&flatten(&min.angles)));
    Ok(MeasureResult {
        value: asym_discord_at(s, &a, &basis)?,
        argmin_basis: Some(basis),
        evaluations: min.evaluations,
        heuristic: false,
    })
}

/// Relative entropy of discord: coherence minimized over qubit product bases.
pub fn rel_entropy_discord(s: &QState, cfg: &OptimizerConfig) -> Result<MeasureResult> {
    cfg.validate()?;
    let all = all_indices(s.num_subsystems());
    require_qubits(s, &all)?;
    let offset = -vn_entropy(s);
    let rotator = Rotator::new(s.dims(), &all);
    let objective = |x: &[f64]| diag_entropy(&rotator.rotate(s.matrix(), &angles_to_locals(x))) + offset;
    let min = optimize::minimize_angles(all.len(), cfg, objective);
    let basis = ProductBasis::from_angles(&min.angles);
    Ok(MeasureResult {
        value: coherence(s, &basis)?,
        argmin_basis: Some(basis),
        evaluations: min.evaluations,
        heuristic: false,
    })
}

fn flatten(angles: &[(f64, f64)]) -> Vec<f64> {
    angles.iter().flat_map(|&(t, p)| [t, p]).collect()
}

/// Best of `candidates` under `eval`; ties keep the earliest candidate.
fn best_candidate<F>(candidates: &[ProductBasis], eval: F) -> Result<MeasureResult>
where
    F: Fn(&ProductBasis) -> Result<f64>,
{
    let mut best: Option<(f64, &ProductBasis)> = None;
    for b in candidates {
        let v = eval(b)?;
        if best.is_none_or(|(bv, _)| v < bv) {
            best = Some((v, b));
        }
    }
    let (value, basis) = best.ok_or(Error::OutOfRange {
        name: "candidate count",
        value: 0.0,
    })?;
    Ok(MeasureResult {
        value,
        argmin_basis: Some(basis.clone()),
        evaluations: candidates.len(),
        heuristic: true,
    })
}

/// Global discord minimized over caller-supplied bases (any dimensions).
pub fn global_discord_over(s: &QState, candidates: &[ProductBasis]) -> Result<MeasureResult> {
    best_candidate(candidates, |b| global_discord_at(s, b))
}

/// Asymmetric discord minimized over caller-supplied bases (any dimensions).
pub fn asym_discord_over(s: &QState, a_indices: &[usize], candidates: &[ProductBasis]) -> Result<MeasureResult> {
    best_candidate(candidates, |b| asym_discord_at(s, a_indices, b))
}

/// Relative entropy of discord minimized over caller-supplied bases.
pub fn rel_entropy_discord_over(s: &QState, candidates: &[ProductBasis]) -> Result<MeasureResult> {
    best_candidate(candidates, |b| coherence(s, b))
}

/// Which basis-dependent functional a [`consumption`] refers to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Measure {
    Coherence,
    CoherenceBGivenA(Vec<usize>),
    GlobalDiscordAt,
    AsymDiscordAt(Vec<usize>),
}

impl Measure {
    pub fn evaluate(&self, s: &QState, b: &ProductBasis) -> Result<f64> {
        match self {
            Measure::Coherence => coherence(s, b),
            Measure::CoherenceBGivenA(a) => coherence_b_given_a(s, a, b),
            Measure::GlobalDiscordAt => global_discord_at(s, b),
            Measure::AsymDiscordAt(a) => asym_discord_at(s, a, b),
        }
    }
}

/// `X(before) - X(after)`; negative values mean production.
pub fn consumption(before: &QState, after: &QState, measure: &Measure, b: &ProductBasis) -> Result<f64> {
    if before.dims() != after.dims() {
        return Err(Error::DimensionMismatch(format!(
            "consumption between dims {:?} and {:?}",
            before.dims(),
            after.dims()
        )));
    }
    Ok(measure.evaluate(before, b)? - measure.evaluate(after, b)?)
}

#[cfg(test)]
mod tests;
