//! Feasibility analysis for quantum networks.
//!
//! * [`qstate`]: two-qubit states, Kraus channels, noisy Bell measurement and
//!   entanglement witnesses.
//! * [`repeater`]: closed-form limits for linear repeater chains.
//! * [`netgraph`]: weighted networks, effective-success matrices and
//!   robustness metrics.
//! * [`scenario`]: satellite, free-space and airport yield calculators.
//! * [`buffersim`]: a deterministic simulator of a fidelity-keyed
//!   entanglement buffer.

pub mod buffersim;
pub mod error;
pub mod netgraph;
pub mod qstate;
pub mod repeater;
pub mod scenario;

pub use error::{BufferError, GraphError, QStateError, RepeaterError, ScenarioError};
