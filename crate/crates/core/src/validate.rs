//! Independent validity check for matches.

use std::collections::HashSet;

use thiserror::Error;

use crate::circuit::Circuit;
use crate::dag::CanonicalDag;
use crate::matcher::Match;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchViolation {
    #[error("match is empty")]
    Empty,
    #[error("index pair ({0}, {1}) is out of range")]
    OutOfRange(usize, usize),
    #[error("an index is paired twice")]
    NotBijective,
    #[error("qubit map is not injective")]
    MapNotInjective,
    #[error("pattern gate {0} differs from circuit gate {1} under the qubit map")]
    GateMismatch(usize, usize),
    #[error("matched pattern gates are not a connected part")]
    PatternDisconnected,
    #[error("matched circuit gates are not a connected part")]
    CircuitDisconnected,
    #[error("pairs ({0}, {1}) and ({2}, {3}) are ordered differently in pattern and circuit")]
    OrderMismatch(usize, usize, usize, usize),
}

/// Checks gate equality under the map, bijectivity, connectedness on both
/// sides, and that the partial orders of the two canonical forms agree on
/// the matched gates.
pub fn validate_match(
    c: &Circuit,
    gc: &CanonicalDag,
    t: &Circuit,
    gt: &CanonicalDag,
    m: &Match,
) -> Result<(), MatchViolation> {
    if m.pairs.is_empty() {
        return Err(MatchViolation::Empty);
    }
    let images: HashSet<_> = m.qubit_map.values().collect();
    if images.len() != m.qubit_map.len() {
        return Err(MatchViolation::MapNotInjective);
    }
    let mut seen_t = HashSet::new();
    let mut seen_c = HashSet::new();
    for &(a, x) in &m.pairs {
        if a >= t.len() || x >= c.len() {
            return Err(MatchViolation::OutOfRange(a, x));
        }
        if !seen_t.insert(a) || !seen_c.insert(x) {
            return Err(MatchViolation::NotBijective);
        }
        if !t[a].equal_under_map(&c[x], |q| m.qubit_map.get(&q).copied()) {
            return Err(MatchViolation::GateMismatch(a, x));
        }
    }
    let pattern_side: Vec<usize> = m.pairs.iter().map(|p| p.0).collect();
    let circuit_side: Vec<usize> = m.pairs.iter().map(|p| p.1).collect();
    if !gt.is_connected_indices(&pattern_side) {
        return Err(MatchViolation::PatternDisconnected);
    }
    if !gc.is_connected_indices(&circuit_side) {
        return Err(MatchViolation::CircuitDisconnected);
    }
    for &(a, x) in &m.pairs {
        for &(b, y) in &m.pairs {
            if gt.is_successor(a, b) != gc.is_successor(x, y) {
                return Err(MatchViolation::OrderMismatch(a, x, b, y));
            }
        }
    }
    Ok(())
}
