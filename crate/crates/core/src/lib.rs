//! Backjumping search built on an explicit catch/throw engine.
//!
//! [`engine`] holds the generic machinery: a trail of undoable updates,
//! handler frames that non-local exits unwind to, and suspended watchers
//! that wake when the variables they wait on get bound. [`coloring`] uses
//! it for graph colouring with conflict-directed backjumping and [`sat`]
//! for a CNF solver with two watched literals and clause learning.

pub mod cli;
pub mod cnf;
pub mod coloring;
pub mod engine;
pub mod sat;
pub mod stats;
pub mod trace;

pub use stats::SearchStats;
