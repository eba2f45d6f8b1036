//! Randomized verifiers for the three conversion bounds. Each trial draws
//! its own generator from `derive_seed(seed, trial)`, so trials run in
//! parallel and the output does not depend on scheduling.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BoundReport, SLACK_FLOOR};
use crate::channels::{
    check_a_incoherent, check_kraus_incoherent, check_mio, depolarize_mix, make_generalized_cnot, partial_dephasing,
    random_incoherent_unitary, KrausChannel,
};
use crate::error::{Error, Result};
use crate::measures::{asym_discord, coherence, global_discord, rel_entropy_discord, OptimizerConfig};
use crate::qcore::random::{
    derive_seed, haar_unitary_with, random_mixed, random_probabilities, random_pure, rng_from_seed, SeededRng,
};
use crate::qcore::{dephase, partial_trace, rel_entropy, tensor, CMatrix, ProductBasis, QState};

/// Which conversion bound a verifier run checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    /// Discord created from an incoherent ancilla is at most `C(ρ_A)`.
    Result1,
    /// Global discord created by an incoherent operation on a product state
    /// is at most the summed local coherence consumption.
    Result2,
    /// Asymmetric discord created by an `A`-incoherent operation is at most
    /// the coherence consumed on `A`.
    Result3,
}

impl TryFrom<u8> for BoundKind {
    type Error = Error;

    fn try_from(which: u8) -> Result<Self> {
        match which {
            1 => Ok(BoundKind::Result1),
            2 => Ok(BoundKind::Result2),
            3 => Ok(BoundKind::Result3),
            _ => Err(Error::OutOfRange {
                name: "result",
                value: which as f64,
            }),
        }
    }
}

fn comp(dims: &[usize]) -> ProductBasis {
    ProductBasis::computational(dims)
}

fn expect_basis(found: crate::measures::MeasureResult) -> (f64, ProductBasis) {
    (found.value, found.argmin_basis.expect("optimizer returns a basis"))
}

/// One instance of the first bound: `ρ_A ⊗ τ_B` through `channel`.
pub fn result1_instance(
    rho_a: &QState,
    tau_b: &QState,
    channel: &KrausChannel,
    opt: &OptimizerConfig,
    seed: u64,
) -> Result<BoundReport> {
    let input = tensor(rho_a, tau_b);
    let certified = check_kraus_incoherent(channel, &comp(input.dims()))?.passed;
    let mio = check_mio(channel, &comp(input.dims()))?.passed;
    let ancilla_coherence = coherence(tau_b, &comp(tau_b.dims()))?;
    let out = channel.apply(&input)?;
    let (lhs, basis) = expect_basis(rel_entropy_discord(&out, opt)?);
    let rhs = coherence(rho_a, &comp(rho_a.dims()))?;
    Ok(BoundReport::new("result 1", lhs, rhs, basis, seed)
        .with("io_certified", certified as u8 as f64)
        .with("mio_certified", mio as u8 as f64)
        .with("ancilla_coherence", ancilla_coherence))
}

/// `|C(ρ) - Σ C(ρ_k) - D̄_Φ(ρ)|` with the discord term taken from its
/// relative-entropy definition.
fn decomposition_residual(s: &QState, b: &ProductBasis) -> Result<f64> {
    let n = s.num_subsystems();
    let relative = |x: &QState, bx: &ProductBasis| -> Result<f64> {
        let dephased = dephase(x, bx, &(0..x.num_subsystems()).collect::<Vec<_>>())?;
        Ok(rel_entropy(x, &dephased)?
            .finite()
            .expect("dephased state has full support"))
    };
    let mut discord = relative(s, b)?;
    let mut local = 0.0;
    for k in 0..n {
        let m = partial_trace(s, &[k])?;
        let bk = b.restrict(&[k]);
        discord -= relative(&m, &bk)?;
        local += coherence(&m, &bk)?;
    }
    Ok((coherence(s, b)? - local - discord).abs())
}

/// One instance of the second bound for a product input.
pub fn result2_instance(
    factors: &[QState],
    channel: &KrausChannel,
    opt: &OptimizerConfig,
    seed: u64,
) -> Result<BoundReport> {
    let (first, rest) = factors.split_first().ok_or(Error::SingleSubsystem)?;
    let input = rest.iter().fold(first.clone(), |acc, f| tensor(&acc, f));
    let dims = input.dims().to_vec();
    let certified = check_kraus_incoherent(channel, &comp(&dims))?.passed;
    let mio = check_mio(channel, &comp(&dims))?.passed;
    let out = channel.apply(&input)?;
    let (lhs, basis) = expect_basis(global_discord(&out, opt)?);
    let mut rhs = 0.0;
    let mut report_terms = Vec::with_capacity(factors.len());
    for (k, f) in factors.iter().enumerate() {
        let bk = comp(f.dims());
        let delta = coherence(f, &bk)? - coherence(&partial_trace(&out, &[k])?, &bk)?;
        rhs += delta;
        report_terms.push(delta);
    }
    let residual = [
        decomposition_residual(&input, &comp(&dims))?,
        decomposition_residual(&out, &comp(&dims))?,
        decomposition_residual(&out, &basis)?,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let mut report = BoundReport::new("result 2", lhs, rhs, basis, seed)
        .with("io_certified", certified as u8 as f64)
        .with("mio_certified", mio as u8 as f64)
        .with("decomposition_residual", residual);
    for (k, d) in report_terms.into_iter().enumerate() {
        report = report.with(&format!("deltaC_{k}"), d);
    }
    Ok(report)
}

/// One instance of the third bound with `A` the first qubit.
pub fn result3_instance(
    rho_a: &QState,
    rho_b: &QState,
    channel: &KrausChannel,
    opt: &OptimizerConfig,
    seed: u64,
) -> Result<BoundReport> {
    let input = tensor(rho_a, rho_b);
    let certified = check_a_incoherent(channel, &[0], &comp(input.dims()))?.passed;
    let out = channel.apply(&input)?;
    let (lhs, basis) = expect_basis(asym_discord(&out, &[0], opt)?);
    let ba = comp(rho_a.dims());
    let rhs = coherence(rho_a, &ba)? - coherence(&partial_trace(&out, &[0])?, &ba)?;
    Ok(BoundReport::new("result 3", lhs, rhs, basis, seed).with("a_incoherent_certified", certified as u8 as f64))
}

fn random_qubit(rng: &mut SeededRng) -> QState {
    if rng.random::<bool>() {
        random_pure(vec![2], rng)
    } else {
        random_mixed(vec![2], rng)
    }
}

fn random_diagonal(d: usize, rng: &mut SeededRng) -> QState {
    QState::diagonal(vec![d], &random_probabilities(d, rng)).expect("probability vector")
}

fn perm_phase_channel(dims: &[usize], rng: &mut SeededRng) -> Result<KrausChannel> {
    let d = dims.iter().product();
    KrausChannel::new(vec![random_incoherent_unitary(d, rng)], dims.to_vec())
}

/// Four families in rotation: the saturating CNOT on a pure input, a
/// permutation-phase unitary, a mixture of two of those followed by partial
/// dephasing, and the Werner channel.
fn result1_trial(trial: u64, seed: u64, opt: &OptimizerConfig) -> Result<BoundReport> {
    let mut rng = rng_from_seed(seed);
    let dims = [2, 2];
    let (rho_a, tau_b, channel, family) = match trial % 4 {
        0 => (
            random_pure(vec![2], &mut rng),
            QState::basis_state(vec![2], 0)?,
            KrausChannel::from_gate(&make_generalized_cnot(2), &dims)?,
            "generalized cnot",
        ),
        1 => (
            random_qubit(&mut rng),
            random_diagonal(2, &mut rng),
            perm_phase_channel(&dims, &mut rng)?,
            "permutation-phase unitary",
        ),
        2 => {
            let w = rng.random::<f64>();
            let q = rng.random::<f64>();
            let subset = [vec![0], vec![1], vec![0, 1]][rng.random_range(0..3)].clone();
            let mix = KrausChannel::mixture(&[
                (w, perm_phase_channel(&dims, &mut rng)?),
                (1.0 - w, perm_phase_channel(&dims, &mut rng)?),
            ])?;
            (
                random_qubit(&mut rng),
                random_diagonal(2, &mut rng),
                mix.then(&partial_dephasing(&dims, &subset, q)?)?,
                "mixed unitaries with dephasing",
            )
        }
        _ => {
            let p = rng.random::<f64>();
            (
                random_qubit(&mut rng),
                random_diagonal(2, &mut rng),
                depolarize_mix(&make_generalized_cnot(2), p)?,
                "werner channel",
            )
        }
    };
    let mut report = result1_instance(&rho_a, &tau_b, &channel, opt, seed)?;
    report.label = format!("result 1, trial {trial}, {family}");
    Ok(report)
}

/// Products of two or three qubits, alternating, through a random
/// permutation-phase unitary.
fn result2_trial(trial: u64, seed: u64, opt: &OptimizerConfig) -> Result<BoundReport> {
    let mut rng = rng_from_seed(seed);
    let n = 2 + (trial % 2) as usize;
    let factors: Vec<QState> = (0..n).map(|_| random_qubit(&mut rng)).collect();
    let channel = perm_phase_channel(&vec![2; n], &mut rng)?;
    let mut report = result2_instance(&factors, &channel, opt, seed)?;
    report.label = format!("result 2, trial {trial}, {n} qubits");
    Ok(report)
}

/// `|0><0| ⊗ v0 + |1><1| ⊗ v1` preceded by a permutation-phase unitary on `A`.
fn controlled_pair(rng: &mut SeededRng) -> Result<CMatrix> {
    let v0 = haar_unitary_with(2, rng)?;
    let v1 = haar_unitary_with(2, rng)?;
    let mut block = CMatrix::zeros(4, 4);
    block.view_mut((0, 0), (2, 2)).copy_from(&v0);
    block.view_mut((2, 2), (2, 2)).copy_from(&v1);
    let pa = random_incoherent_unitary(2, rng).kronecker(&CMatrix::identity(2, 2));
    Ok(block * pa)
}

/// `A`-incoherent families in rotation: a controlled pair, a mixture of two,
/// and a controlled pair followed by partial dephasing of `A` and a unitary
/// on `B`.
fn result3_trial(trial: u64, seed: u64, opt: &OptimizerConfig) -> Result<BoundReport> {
    let mut rng = rng_from_seed(seed);
    let dims = [2, 2];
    let rho_a = random_qubit(&mut rng);
    let rho_b = random_qubit(&mut rng);
    let (channel, family) = match trial % 3 {
        0 => (
            KrausChannel::new(vec![controlled_pair(&mut rng)?], dims.to_vec())?,
            "controlled unitary",
        ),
        1 => {
            let w = rng.random::<f64>();
            let first = KrausChannel::new(vec![controlled_pair(&mut rng)?], dims.to_vec())?;
            let second = KrausChannel::new(vec![controlled_pair(&mut rng)?], dims.to_vec())?;
            (
                KrausChannel::mixture(&[(w, first), (1.0 - w, second)])?,
                "mixed controlled unitaries",
            )
        }
        _ => {
            let q = rng.random::<f64>();
            let local_b = CMatrix::identity(2, 2).kronecker(&haar_unitary_with(2, &mut rng)?);
            let ch = KrausChannel::new(vec![controlled_pair(&mut rng)?], dims.to_vec())?
                .then(&partial_dephasing(&dims, &[0], q)?)?
                .then(&KrausChannel::new(vec![local_b], dims.to_vec())?)?;
            (ch, "controlled unitary, dephased A, rotated B")
        }
    };
    let mut report = result3_instance(&rho_a, &rho_b, &channel, opt, seed)?;
    report.label = format!("result 3, trial {trial}, {family}");
    Ok(report)
}

/// Runs `trials` seeded trials of one bound. Violations are reported in the
/// returned slacks, not raised.
pub fn verify_result(which: BoundKind, trials: usize, seed: u64, opt: &OptimizerConfig) -> Result<Vec<BoundReport>> {
    opt.validate()?;
    if trials == 0 {
        return Err(Error::OutOfRange {
            name: "trials",
            value: 0.0,
        });
    }
    let trial = match which {
        BoundKind::Result1 => result1_trial,
        BoundKind::Result2 => result2_trial,
        BoundKind::Result3 => result3_trial,
    };
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let s = derive_seed(seed, t);
            trial(t, s, &OptimizerConfig { seed: s, ..opt.clone() })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub trials: usize,
    pub violations: usize,
    pub min_slack: f64,
    /// Trials whose operation failed its incoherence certificate.
    pub uncertified: usize,
}

impl VerifySummary {
    pub fn of(reports: &[BoundReport]) -> Self {
        let uncertified = reports
            .iter()
            .filter(|r| r.detail.iter().any(|(k, v)| k.ends_with("certified") && *v != 1.0))
            .count();
        VerifySummary {
            trials: reports.len(),
            violations: reports.iter().filter(|r| r.slack < SLACK_FLOOR).count(),
            min_slack: reports.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min),
            uncertified,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.uncertified == 0
    }
}
