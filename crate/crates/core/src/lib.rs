//! Cluster algebras with principal coefficients: seeds, presentations and
//! the singularities of their fibers over small prime fields.

pub mod algebra_core;
pub mod classifier;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod presentations;
pub mod seeds;

pub use error::{Error, Result};
