//! Kostant chip-firing games on Dynkin diagrams.
//!
//! The crate builds root systems from Dynkin diagrams, plays the classical and
//! modified Kostant games, and cross-checks the game against a brute-force
//! Weyl group engine: reachable configurations against minimal coset
//! representatives, chip totals against coroot heights, move languages against
//! reduced words, type-A plays against standard Young tableaux, and the
//! Mukai-type inequalities for flag varieties.

pub mod automaton;
pub mod error;
pub mod game;
pub mod mukai;
pub mod root_system;
pub mod syt;
pub mod weyl;

pub use error::{Error, Result};
