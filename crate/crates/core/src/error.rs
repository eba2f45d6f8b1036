use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A density matrix violated one of its invariants.
    #[error("invalid state: {invariant} violated (residual {residual:e})")]
    InvalidState { invariant: &'static str, residual: f64 },
    #[error("matrix is not unitary (residual {residual:e})")]
    NonUnitary { residual: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystem(String),
    #[error("cannot trace out everything")]
    EmptyKeep,
    #[error("operation requires exactly two subsystems, got {0}")]
    NotBipartite(usize),
    #[error("operation requires at least two subsystems")]
    SingleSubsystem,
    #[error("unsupported subsystem dimension {dim} (only qubits are optimized)")]
    UnsupportedDimension { dim: usize },
    #[error("parameter `{name}` out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("measure evaluated to {value:e}, below the roundoff floor")]
    NegativeMeasure { value: f64 },
    #[error("Kraus operators are not complete (residual {residual:e})")]
    IncompleteChannel { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
