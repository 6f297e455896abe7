//! Prerequisite-tree knowledge-tracing toolkit.
//!
//! * [`trees`]: balanced majority / ALL / ANY concept trees and bottom-up evaluation.
//! * [`circuits`]: Boolean and threshold circuit IR, tree compilers, alternating
//!   read-once formulas and their ternary-majority rewrite.
//! * [`analysis`]: exact joint distribution of (root value, leaf sum) and the
//!   ceilings derived from it.
//! * [`datasets`]: seeded JSONL dataset generation (flat and scaffold encodings).
//! * [`diagnose`]: prediction files and the permutation diagnostic report.
//! * [`verify`]: exhaustive equivalence suites and dataset audits.

pub mod analysis;
pub mod circuits;
pub mod datasets;
pub mod diagnose;
mod error;
pub mod trees;
pub mod verify;

pub use error::{Error, Result};
