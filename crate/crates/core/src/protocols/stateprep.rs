//! Star-shaped controlled-Z preparation: qubit 0 controls one CZ onto each
//! of qubits `1..=l`.

use serde::{Deserialize, Serialize};

use super::BoundReport;
use crate::channels::make_cz;
use crate::error::{Error, Result};
use crate::measures::{coherence, global_discord, OptimizerConfig};
use crate::qcore::random::derive_seed;
use crate::qcore::{apply_gate, c, partial_trace, tensor, CMatrix, ProductBasis, QState, C64};

/// Largest register for which the discord series is optimized.
pub const MAX_OPTIMIZED_QUBITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatePrepConfig {
    pub n: usize,
    /// Weight of white noise on the control qubit.
    pub p: f64,
    pub theta: f64,
}

impl StatePrepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::OutOfRange {
                name: "n",
                value: self.n as f64,
            });
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::OutOfRange {
                name: "p",
                value: self.p,
            });
        }
        if !(0.0..=std::f64::consts::PI).contains(&self.theta) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: self.theta,
            });
        }
        Ok(())
    }

    fn check_gate_count(&self, l: usize) -> Result<()> {
        if l + 1 > self.n {
            return Err(Error::OutOfRange {
                name: "l",
                value: l as f64,
            });
        }
        Ok(())
    }
}

fn theta_ket(theta: f64, sign: f64) -> [C64; 2] {
    [c(theta.cos(), 0.0), c(sign * theta.sin(), 0.0)]
}

fn projector(v: [C64; 2]) -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj())
}

fn control_initial(cfg: &StatePrepConfig) -> QState {
    let m = CMatrix::identity(2, 2) * c(cfg.p / 2.0, 0.0) + projector(theta_ket(cfg.theta, 1.0)) * c(1.0 - cfg.p, 0.0);
    QState::new(vec![2], m).expect("convex mixture of states")
}

/// `ρ^l`: the initial product state after `l` controlled-Z gates.
pub fn stateprep_state(cfg: &StatePrepConfig, l: usize) -> Result<QState> {
    cfg.validate()?;
    cfg.check_gate_count(l)?;
    let target = QState::new(vec![2], projector(theta_ket(cfg.theta, 1.0)))?;
    let mut s = control_initial(cfg);
    for _ in 1..cfg.n {
        s = tensor(&s, &target);
    }
    let cz = make_cz();
    for k in 1..=l {
        s = apply_gate(&s, &cz.clone().on(vec![0, k])?)?;
    }
    Ok(s)
}

/// Closed-form reduced state of the control after `l` gates: the
/// off-diagonal picks up a factor `<-θ|θ>^l = cos(2θ)^l`.
pub fn stateprep_marginal_control(cfg: &StatePrepConfig, l: usize) -> Result<QState> {
    cfg.validate()?;
    cfg.check_gate_count(l)?;
    let (s, co) = cfg.theta.sin_cos();
    let overlap = (2.0 * cfg.theta).cos();
    let off = (1.0 - cfg.p) * s * co * overlap.powi(l as i32);
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            c(cfg.p / 2.0 + (1.0 - cfg.p) * co * co, 0.0),
            c(off, 0.0),
            c(off, 0.0),
            c(cfg.p / 2.0 + (1.0 - cfg.p) * s * s, 0.0),
        ],
    );
    QState::new(vec![2], m)
}

/// Closed-form reduced state of a target after its controlled-Z:
/// `w0 |θ><θ| + w1 |-θ><-θ|` with `w0, w1` the control's populations.
pub fn stateprep_marginal_target(cfg: &StatePrepConfig) -> Result<QState> {
    cfg.validate()?;
    let (s, co) = cfg.theta.sin_cos();
    let w0 = cfg.p / 2.0 + (1.0 - cfg.p) * co * co;
    let w1 = cfg.p / 2.0 + (1.0 - cfg.p) * s * s;
    let m = projector(theta_ket(cfg.theta, 1.0)) * c(w0, 0.0) + projector(theta_ket(cfg.theta, -1.0)) * c(w1, 0.0);
    QState::new(vec![2], m)
}

/// For each `l = 1..n-1`: optimized global discord of `ρ^l` against
/// `l ΔC(ρ_{A_k}) + ΔC^l(ρ_{A_1})`.
///
/// Qubits beyond `l + 1` are still in the pure product `|θ>`, which adds
/// nothing to global discord in any product basis, so the minimization runs
/// on the first `l + 1` qubits and the reported basis is padded with the
/// computational basis.
pub fn stateprep_bound_series(cfg: &StatePrepConfig, opt: &OptimizerConfig) -> Result<Vec<BoundReport>> {
    stateprep_bound_series_upto(cfg, cfg.n.saturating_sub(1), opt)
}

/// [`stateprep_bound_series`] truncated to `l <= upto`.
pub fn stateprep_bound_series_upto(
    cfg: &StatePrepConfig,
    upto: usize,
    opt: &OptimizerConfig,
) -> Result<Vec<BoundReport>> {
    cfg.validate()?;
    if upto == 0 {
        return Err(Error::OutOfRange {
            name: "upto",
            value: 0.0,
        });
    }
    cfg.check_gate_count(upto)?;
    if cfg.n > MAX_OPTIMIZED_QUBITS {
        return Err(Error::OutOfRange {
            name: "n",
            value: cfg.n as f64,
        });
    }
    let comp1 = ProductBasis::computational(&[2]);
    let initial = stateprep_state(cfg, 0)?;
    let c_control_0 = coherence(&partial_trace(&initial, &[0])?, &comp1)?;
    let c_target_0 = coherence(&partial_trace(&initial, &[1])?, &comp1)?;

    let mut reports = Vec::with_capacity(upto);
    for l in 1..=upto {
        let state = stateprep_state(cfg, l)?;
        let c_control = coherence(&partial_trace(&state, &[0])?, &comp1)?;
        let delta_control = c_control_0 - c_control;
        let delta_targets: Vec<f64> = (1..=l)
            .map(|k| Ok(c_target_0 - coherence(&partial_trace(&state, &[k])?, &comp1)?))
            .collect::<Result<_>>()?;
        let delta_target = delta_targets[0];
        let rhs = l as f64 * delta_target + delta_control;

        let active: Vec<usize> = (0..=l).collect();
        let block = partial_trace(&state, &active)?;
        let seed = derive_seed(opt.seed, l as u64);
        let found = global_discord(&block, &OptimizerConfig { seed, ..opt.clone() })?;
        let mut locals = found.argmin_basis.expect("optimizer returns a basis").locals().to_vec();
        locals.resize(cfg.n, CMatrix::identity(2, 2));
        let basis = ProductBasis::new(locals)?;

        let spread = delta_targets
            .iter()
            .map(|d| (d - delta_target).abs())
            .fold(0.0, f64::max);
        let mut report = BoundReport::new(format!("stateprep l={l}"), found.value, rhs, basis, seed)
            .with("l", l as f64)
            .with("deltaC_control", delta_control)
            .with("deltaC_target", delta_target)
            .with("deltaC_target_spread", spread)
            .with("evaluations", found.evaluations as f64);
        for (k, d) in delta_targets.iter().enumerate() {
            report = report.with(&format!("deltaC_target_{}", k + 2), *d);
        }
        reports.push(report);
    }
    Ok(reports)
}
