//! Exact computation engine for algebras indexed by a locally finite directed
//! poset, and for their graded right modules.
//!
//! All arithmetic is exact — arbitrary-precision rationals or a prime field —
//! and every enumeration happens inside a finite order-convex *window* of the
//! index poset.  Decision procedures return verdicts carrying replayable
//! certificates; questions that a finite window can only sample are reported
//! as `Inconclusive` with evidence, never guessed.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command
//! line live in the companion crate `ialg-cli`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
mod cache;
pub mod checks;
pub mod error;
pub mod field;
pub mod gradedmod;
pub mod linalg;
pub mod outcome;
pub mod poset;
pub mod qgr;

pub use error::{EngineError, Result};

/// Resource ceilings.  Every potentially large enumeration checks one of
/// these and aborts with [`EngineError::LimitExceeded`] instead of thrashing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of elements in a window.
    pub max_window: usize,
    /// Maximum dimension of a single graded component.
    pub max_dim: usize,
    /// Maximum number of composable generator words per component.
    pub max_paths: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_window: 10_000, max_dim: 10_000, max_paths: 1_000_000 }
    }
}
