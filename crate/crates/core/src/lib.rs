//! Logical-cycle resource estimates for Pauli-based computation on a
//! distributed Q-Fly architecture of qLDPC nodes.
//!
//! Costs are exact convex piecewise-affine functions of `t`, the number of
//! logical cycles per serialized Bell-pair consumption ([`cost::CostExpr`]).
//! Subroutine models compose into QAOA and DQI stage breakdowns, which are
//! compared against an active-volume surface-code baseline and checked by a
//! small pipeline scheduler.

pub mod algorithms;
pub mod baseline;
pub mod cli;
pub mod config;
pub mod cost;
pub mod hardware;
pub mod pipeline;
pub mod report;
pub mod serde_rational;
pub mod subroutines;
pub mod topology;

pub use cost::{CostExpr, Domain, Rational};
