//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Graph family parameters that fail validation (zero or oversized exponents).
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),

    /// A simulation would allocate more amplitudes than the configured cap.
    #[error("size cap exceeded: {needed} amplitudes requested, cap is {cap}")]
    SizeCap { needed: usize, cap: usize },

    /// Unitary reconstruction requested for a circuit wider than the cap.
    #[error("circuit has {qubits} qubits, unitary reconstruction capped at {cap}")]
    UnitaryCap { qubits: usize, cap: usize },

    /// Two circuits with different register layouts cannot be combined.
    #[error("register layouts differ")]
    LayoutMismatch,

    #[error("gate references qubit {qubit}, but the layout has {total} qubits")]
    QubitOutOfRange { qubit: usize, total: usize },

    #[error("gate target and controls reuse qubit {0}")]
    OverlappingQubits(usize),

    /// An operation that only accepts lowered circuits was given a composite one.
    #[error("operation requires an elementary-level circuit")]
    CompositeCircuit,

    #[error("insufficient ancilla qubits: need {needed}, have {available}")]
    InsufficientAncilla { needed: usize, available: usize },

    #[error("spec is not compilable: {0}")]
    NotCompilable(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("wrong bit-string width: expected {expected}, got {got}")]
    BitWidth { expected: usize, got: usize },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
