//! Coherence and discord on small multipartite density matrices.
//!
//! The crate is split into four layers:
//!
//! - [`qcore`]: states, product bases, gates, partial traces, dephasing and
//!   entropies (all in bits).
//! - [`measures`]: relative entropy of coherence, the discord family and
//!   their minimization over local qubit bases.
//! - [`channels`]: gate and Kraus-channel constructors plus checkers for the
//!   various incoherence conditions.
//! - [`protocols`]: the controlled-Z preparation series, the Werner example,
//!   the one-clean-qubit model and randomized verifiers for the
//!   coherence-to-discord conversion bounds.

pub mod channels;
pub mod error;
pub mod measures;
pub mod protocols;
pub mod qcore;
pub mod serde_matrix;

pub use channels::KrausChannel;
pub use error::{Error, Result};
pub use measures::{MeasureResult, OptimizerConfig};
pub use protocols::BoundReport;
pub use qcore::{Gate, ProductBasis, QState};
