//! A coined discrete-time quantum-walk search laboratory.
//!
//! Three graph families (the n-dimensional hypercube, the complete graph
//! with self loops, and the twisted toroid) support both the search walk
//! U = S·C (a Grover coin with a negated coin on one marked node, followed
//! by a flip-flop shift) and explicit elementary-gate circuits for a full
//! step of that walk, with no black-box oracle.
//!
//! The crate is organized around a redundancy argument: the same walk is
//! realized three ways and the realizations are checked against each other.
//!
//! - [`graphs`]: the families, their index spaces, and the involutive
//!   flip-flop neighbor map.
//! - [`walk`]: a structured simulator over dense (node, subnode) amplitudes.
//! - [`circuit`] / [`format`]: a small circuit IR with polarity-controlled
//!   gates, unitary reconstruction, 2-qubit gate counting, and a text
//!   serialization.
//! - [`compiler`]: per-family step-circuit construction (Grover operator,
//!   increment/decrement ladders, multi-controlled gates with ancilla
//!   chains) and the lowering pass to elementary gates.
//! - [`gatesim`]: a gate-level state-vector simulator for lowered circuits,
//!   plus the embedding between walk states and qubit registers.
//! - [`verify`]: matrix- and trajectory-level equivalence checks between
//!   the compiled circuits and the structured walk.
//! - [`analysis`]: success curves, peak/period detection, steps-to-peak
//!   scaling scans, and gate-count scaling tables.

pub mod analysis;
pub mod circuit;
pub mod compiler;
pub mod error;
pub mod format;
pub mod gatesim;
pub mod graphs;
pub mod verify;
pub mod walk;

pub use error::{Error, Result};
pub use graphs::{FamilySpec, NodeId, SubnodeId};
