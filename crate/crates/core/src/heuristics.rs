//! Speed/quality trade-offs for the matcher.
//!
//! Two independent knobs:
//!
//! * `F` (qubit exploration): before enumerating qubit assignments for a
//!   start pair `(i, r)`, walk up to `F` gates around `C_r` and require the
//!   assignment to cover the qubits they touch.
//! * `(L, S)` (scenario pruning): the backward phase advances its scenarios
//!   in waves of `L` processed circuit gates; after each wave only the `S`
//!   scenarios with the most matched gates survive.
//!
//! Some texts name the exploration length `L` as well; here `L` always
//! refers to the wave length.

use std::collections::BTreeSet;

use crate::circuit::Circuit;
use crate::dag::CanonicalDag;
use crate::gate::Qubit;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HeuristicConfig {
    /// `F`: number of gates explored around the starting gate.
    pub qubit_exploration: Option<usize>,
    /// `L`: processed gates between two pruning rounds.
    pub backward_depth: Option<usize>,
    /// `S`: scenarios kept per pruning round.
    pub backward_survivors: Option<usize>,
}

impl HeuristicConfig {
    pub fn exact() -> Self {
        HeuristicConfig::default()
    }

    pub fn is_exact(&self) -> bool {
        self.qubit_exploration.is_none() && self.backward_waves().is_none()
    }

    pub(crate) fn backward_waves(&self) -> Option<(usize, usize)> {
        match (self.backward_depth, self.backward_survivors) {
            (Some(l), Some(s)) if l > 0 && s > 0 => Some((l, s)),
            _ => None,
        }
    }
}

/// Circuit qubits that every assignment for the start pair `(i, r)` must
/// use.
///
/// If the pattern has many gates after `T_i` that depend on it, the walk
/// follows the successors of `C_r` in ascending order; otherwise it walks
/// the gates that are not successors of `C_r` in descending order. The walk
/// stops after `f` gates, or at the first gate that would push the set past
/// `n_t` qubits.
pub fn heuristic_qubits(
    c: &Circuit,
    gc: &CanonicalDag,
    gt: &CanonicalDag,
    n_t: usize,
    r: usize,
    i: usize,
    f: usize,
) -> BTreeSet<Qubit> {
    let forward = 2 * gt.successors(i).len() >= gt.len() - i;
    let order: Box<dyn Iterator<Item = usize>> = if forward {
        Box::new(gc.successors(r).iter().copied())
    } else {
        Box::new((0..gc.len()).rev().filter(move |&k| k != r && !gc.is_successor(r, k)))
    };
    let mut qubits: BTreeSet<Qubit> = c[r].qubits().iter().copied().collect();
    for k in order.take(f) {
        let mut grown = qubits.clone();
        grown.extend(c[k].qubits().iter().copied());
        if grown.len() > n_t {
            break;
        }
        qubits = grown;
    }
    qubits
}

/// Keeps the `keep` items with the largest `size`; ties go to the earlier
/// item, so the input must be in creation order.
pub fn prune_scenarios<T>(mut items: Vec<T>, keep: usize, size: impl Fn(&T) -> usize) -> Vec<T> {
    items.sort_by_key(|it| std::cmp::Reverse(size(it)));
    items.truncate(keep);
    items
}
