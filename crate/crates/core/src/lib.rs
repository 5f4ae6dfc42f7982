//! Pattern matching for quantum circuits under pairwise gate commutation.
//!
//! The crate provides the canonical (commutation DAG) form of a circuit, an
//! exact matcher that finds every maximal occurrence of a pattern up to
//! commutations, tunable heuristics, an exhaustive reference matcher, and
//! two optimization passes built on top: identity-template rewriting and
//! longest-subcircuit search on small qubit windows.

pub mod bench;
pub mod brute;
pub mod circuit;
pub mod cli;
pub mod commute;
pub mod dag;
pub mod gate;
pub mod heuristics;
pub mod io;
pub mod matcher;
pub mod optimizer;
pub mod simulator;
pub mod validate;

pub use circuit::Circuit;
pub use commute::{CommutationMode, CommutationOracle};
pub use dag::CanonicalDag;
pub use gate::{Gate, GateKind, Qubit};
pub use matcher::{pattern_match, Match, MatchOptions};
