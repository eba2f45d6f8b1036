//! One-clean-qubit trace estimation, simulated in the eigenframe of `u`.
//!
//! The register starts maximally mixed, which is invariant under any change
//! of register basis, so `u = V Λ V†` can be replaced by its eigenvalues:
//! the simulated state is `(I ⊗ V†) ρ̃ (I ⊗ V)` and every quantity reported
//! here refers to that frame. The ancilla marginal is frame independent.

use serde::{Deserialize, Serialize};

use super::BoundReport;
use crate::channels::{make_controlled_u, make_hadamard};
use crate::error::{Error, Result};
use crate::measures::{
    asym_discord, coherence, consumption, global_discord, global_discord_at, Measure, OptimizerConfig,
};
use crate::qcore::{
    apply_gate, c, partial_trace, shannon_bits, tensor, unitarity_residual, CMatrix, ProductBasis, QState, C64,
    UNITARY_TOL,
};

/// Largest total dimension (ancilla plus register) that is simulated.
pub const MAX_TOTAL_DIM: usize = 512;
/// Registers up to this size get a fully optimized global discord.
pub const MAX_GLOBAL_OPTIMIZED: usize = 2;

/// Allowed deviation of the Schur factor of `u` from diagonal.
const SCHUR_OFFDIAG_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dqc1Config {
    pub n: usize,
    #[serde(with = "crate::serde_matrix::matrix")]
    pub u: CMatrix,
    pub seed: u64,
}

impl Dqc1Config {
    pub fn new(n: usize, u: CMatrix, seed: u64) -> Result<Self> {
        let cfg = Dqc1Config { n, u, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n >= usize::BITS as usize - 1 || 2usize << self.n > MAX_TOTAL_DIM {
            return Err(Error::UnsupportedDimension { dim: self.n + 1 });
        }
        let d = 1usize << self.n;
        if self.u.nrows() != d || self.u.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "register of {} qubits needs a {d}x{d} unitary, got {}x{}",
                self.n,
                self.u.nrows(),
                self.u.ncols()
            )));
        }
        let residual = unitarity_residual(&self.u);
        if residual > UNITARY_TOL {
            return Err(Error::NonUnitary { residual });
        }
        Ok(())
    }

    /// `Tr u / 2^n`, computed directly.
    pub fn normalized_trace(&self) -> C64 {
        self.u.trace() / c((1usize << self.n) as f64, 0.0)
    }
}

/// `identity` or `sigmaz` (`Z` on every register qubit).
pub fn named_unitary(name: &str, n: usize) -> Result<CMatrix> {
    if n == 0 || n > 16 {
        return Err(Error::UnsupportedDimension { dim: n });
    }
    let d = 1usize << n;
    match name {
        "identity" => Ok(CMatrix::identity(d, d)),
        "sigmaz" => Ok(CMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |i, _| {
            c(if i.count_ones() % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        }))),
        _ => Err(Error::OutOfRange {
            name: "named unitary",
            value: f64::NAN,
        }),
    }
}

fn eigenphases(u: &CMatrix) -> Result<Vec<C64>> {
    let (_, t) = u.clone().schur().unpack();
    let d = t.nrows();
    let mut off = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                off = off.max(t[(i, j)].norm());
            }
        }
    }
    if off > SCHUR_OFFDIAG_TOL {
        return Err(Error::NonUnitary { residual: off });
    }
    Ok((0..d).map(|i| t[(i, i)]).collect())
}

fn regrouped(s: QState, n: usize) -> Result<QState> {
    s.regroup(vec![2; n + 1])
}

/// `ρ̃_AR` after the Hadamard on the ancilla and the controlled-`u`, in the
/// eigenframe of `u`, with one subsystem per qubit (ancilla first).
pub fn dqc1_final_state(cfg: &Dqc1Config) -> Result<QState> {
    cfg.validate()?;
    let lambda = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(eigenphases(&cfg.u)?));
    let d = 1usize << cfg.n;
    let ancilla = apply_gate(&QState::basis_state(vec![2], 0)?, &make_hadamard())?;
    let start = tensor(&ancilla, &QState::maximally_mixed(vec![d]));
    regrouped(apply_gate(&start, &make_controlled_u(&lambda)?)?, cfg.n)
}

fn ancilla_estimate(rho_a: &QState) -> C64 {
    let m = rho_a.matrix();
    let sx = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    let sy = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
    let ex = (m * sx).trace().re;
    let ey = (m * sy).trace().re;
    c(ex, ey)
}

/// `<σx> + i<σy>` of the ancilla, which equals `Tr u / 2^n`.
pub fn dqc1_trace_estimate(cfg: &Dqc1Config) -> Result<C64> {
    let rho = dqc1_final_state(cfg)?;
    Ok(ancilla_estimate(&partial_trace(&rho, &[0])?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlobalDiscordMode {
    /// Minimized over per-qubit bases.
    Optimized,
    /// Evaluated at the eigenframe product basis only; an upper bound.
    ReferenceUpperBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dqc1Report {
    /// Global discord of `ρ̃_AR` against the ancilla's coherence consumption.
    pub global: BoundReport,
    pub global_mode: GlobalDiscordMode,
    /// Discord of the register given a measured ancilla, against the same
    /// consumption; the register is one block in the eigenframe of `u`.
    pub asymmetric: BoundReport,
    pub delta_c_simulated: f64,
    pub delta_c_closed_form: f64,
    /// `[re, im]` of the ancilla estimate.
    pub trace_estimate: [f64; 2],
    /// `[re, im]` of `Tr u / 2^n` computed directly.
    pub normalized_trace: [f64; 2],
    pub frame: String,
}

/// Both discord bounds for the DQC1 output state.
pub fn dqc1_report(cfg: &Dqc1Config, opt: &OptimizerConfig) -> Result<Dqc1Report> {
    let rho = dqc1_final_state(cfg)?;
    let rho_a = partial_trace(&rho, &[0])?;
    let before = apply_gate(&QState::basis_state(vec![2], 0)?, &make_hadamard())?;
    let comp1 = ProductBasis::computational(&[2]);
    let delta_c = consumption(&before, &rho_a, &Measure::Coherence, &comp1)?;
    let tr = cfg.normalized_trace();
    let x = ((1.0 - tr.norm()) / 2.0).clamp(0.0, 1.0);
    let closed = shannon_bits([x, 1.0 - x]);
    let estimate = ancilla_estimate(&rho_a);

    let seeded = OptimizerConfig {
        seed: cfg.seed,
        ..opt.clone()
    };
    let (global_value, global_basis, global_mode) = if cfg.n <= MAX_GLOBAL_OPTIMIZED {
        let r = global_discord(&rho, &seeded)?;
        (
            r.value,
            r.argmin_basis.expect("optimizer returns a basis"),
            GlobalDiscordMode::Optimized,
        )
    } else {
        let b = ProductBasis::computational(rho.dims());
        (global_discord_at(&rho, &b)?, b, GlobalDiscordMode::ReferenceUpperBound)
    };
    let label = match global_mode {
        GlobalDiscordMode::Optimized => "dqc1 global discord",
        GlobalDiscordMode::ReferenceUpperBound => "dqc1 global discord (reference-basis upper bound)",
    };
    let global = BoundReport::new(label, global_value, delta_c, global_basis, cfg.seed)
        .with("coherence_before", coherence(&before, &comp1)?)
        .with("coherence_after", coherence(&rho_a, &comp1)?);

    let blocks = rho.regroup(vec![2, 1 << cfg.n])?;
    let asym = asym_discord(&blocks, &[0], &seeded)?;
    let asymmetric = BoundReport::new(
        "dqc1 asymmetric discord, ancilla measured",
        asym.value,
        delta_c,
        asym.argmin_basis.expect("optimizer returns a basis"),
        cfg.seed,
    );

    Ok(Dqc1Report {
        global,
        global_mode,
        asymmetric,
        delta_c_simulated: delta_c,
        delta_c_closed_form: closed,
        trace_estimate: [estimate.re, estimate.im],
        normalized_trace: [tr.re, tr.im],
        frame: "register expressed in the eigenbasis of u; ancilla in the computational basis".to_string(),
    })
}
