use serde::{Deserialize, Serialize};

use super::BoundReport;
use crate::channels::{check_kraus_incoherent, depolarize_mix, make_cx, make_hadamard};
use crate::error::{Error, Result};
use crate::measures::{coherence, rel_entropy_discord, OptimizerConfig};
use crate::qcore::{apply_gate, negativity, partial_trace, tensor, ProductBasis, QState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WernerReport {
    pub report: BoundReport,
    pub negativity: f64,
    /// Whether the channel passed the Kraus-level incoherence check.
    pub io_certified: bool,
    pub state: QState,
}

/// Sends `|+><+| ⊗ |0><0|` through `p CX(·)CX† + (1 - p) I/4`, producing a
/// Werner state, and compares its discord with the coherence of `|+>`.
pub fn werner_demo(p: f64, opt: &OptimizerConfig) -> Result<WernerReport> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange { name: "p", value: p });
    }
    let zero = QState::basis_state(vec![2], 0)?;
    let plus = apply_gate(&zero, &make_hadamard())?;
    let input = tensor(&plus, &zero);
    let channel = depolarize_mix(&make_cx(), p)?;
    let comp2 = ProductBasis::computational(&[2, 2]);
    let io_certified = check_kraus_incoherent(&channel, &comp2)?.passed;
    let out = channel.apply(&input)?;

    let found = rel_entropy_discord(&out, opt)?;
    let rho_a = partial_trace(&input, &[0])?;
    let rhs = coherence(&rho_a, &ProductBasis::computational(&[2]))?;
    let neg = negativity(&out, 0)?;
    let report = BoundReport::new(
        format!("werner p={p}"),
        found.value,
        rhs,
        found.argmin_basis.expect("optimizer returns a basis"),
        opt.seed,
    )
    .with("p", p)
    .with("negativity", neg)
    .with("evaluations", found.evaluations as f64);
    Ok(WernerReport {
        report,
        negativity: neg,
        io_certified,
        state: out,
    })
}
