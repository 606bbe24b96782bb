//! Information bottleneck efficiency frontiers for discrete semantic
//! domains.
//!
//! A [`MeaningSpace`] holds one distribution over a feature universe per
//! meaning together with a need distribution. A [`NamingSystem`] is an
//! encoder q(w|m). The [`solver`] traces the frontier of optimal encoders
//! over a β grid, and [`analysis`] scores real naming systems against it.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod info;
pub mod ingest;
pub mod io;
pub mod prob;
pub mod solver;

pub use error::{Error, Result, Violation};
pub use prob::{Distribution, MeaningSpace, NamingSystem, Representations};
pub use solver::{Frontier, FrontierPoint, SolverConfig};

/// Version string recorded in output metadata.
pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
