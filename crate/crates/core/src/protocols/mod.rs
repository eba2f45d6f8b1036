//! Worked scenarios and randomized verifiers for the coherence-to-discord
//! conversion bounds.

mod dqc1;
mod stateprep;
mod verify;
mod werner;

pub use dqc1::{
    dqc1_final_state, dqc1_report, dqc1_trace_estimate, named_unitary, Dqc1Config, Dqc1Report, GlobalDiscordMode,
};
pub use stateprep::{
    stateprep_bound_series, stateprep_bound_series_upto, stateprep_marginal_control, stateprep_marginal_target,
    stateprep_state, StatePrepConfig, MAX_OPTIMIZED_QUBITS,
};
pub use verify::{result1_instance, result2_instance, result3_instance, verify_result, BoundKind, VerifySummary};
pub use werner::{werner_demo, WernerReport};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::qcore::ProductBasis;

/// Reports with slack below this are violations.
pub const SLACK_FLOOR: f64 = -1e-6;

/// One instantiated inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`
    pub slack: f64,
    /// Basis at which `lhs` was attained.
    pub basis: ProductBasis,
    pub detail: BTreeMap<String, f64>,
    pub seed: u64,
}

impl BoundReport {
    pub fn new(label: impl Into<String>, lhs: f64, rhs: f64, basis: ProductBasis, seed: u64) -> Self {
        BoundReport {
            label: label.into(),
            lhs,
            rhs,
            slack: rhs - lhs,
            basis,
            detail: BTreeMap::new(),
            seed,
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.detail.insert(key.to_string(), value);
        self
    }

    pub fn holds(&self) -> bool {
        self.slack >= SLACK_FLOOR
    }
}
