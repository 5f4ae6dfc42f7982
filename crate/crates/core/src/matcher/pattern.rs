//! Candidate selection when the target is a pattern circuit.

use fixedbitset::FixedBitSet;

use super::engine::Target;
use crate::circuit::Circuit;
use crate::dag::CanonicalDag;
use crate::gate::Qubit;

/// Pattern-side annotations.
#[derive(Clone, Debug)]
pub(crate) struct PatternState {
    pub matched_with: Vec<Option<usize>>,
    pub blocked: FixedBitSet,
}

impl PatternState {
    pub fn matched_set(&self) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.matched_with.len());
        set.extend(self.matched_with.iter().enumerate().filter(|(_, m)| m.is_some()).map(|(k, _)| k));
        set
    }
}

pub(crate) struct PatternTarget<'a> {
    pub circuit: &'a Circuit,
    pub pattern: &'a Circuit,
    pub gt: &'a CanonicalDag,
    /// Dense pattern-label -> circuit-label map.
    pub qubit_map: &'a [Option<Qubit>],
    pub start_pattern: usize,
    /// Circuit gates equal to some pattern gate of the backward range.
    eligible: FixedBitSet,
}

impl<'a> PatternTarget<'a> {
    pub fn new(
        circuit: &'a Circuit,
        pattern: &'a Circuit,
        gt: &'a CanonicalDag,
        qubit_map: &'a [Option<Qubit>],
        start_pattern: usize,
    ) -> Self {
        let mut target = PatternTarget {
            circuit,
            pattern,
            gt,
            qubit_map,
            start_pattern,
            eligible: FixedBitSet::with_capacity(circuit.len()),
        };
        let backward_range: Vec<usize> =
            (start_pattern + 1..pattern.len()).filter(|&l| !gt.is_successor(start_pattern, l)).collect();
        for s in 0..circuit.len() {
            if backward_range.iter().any(|&l| target.equal(l, s)) {
                target.eligible.insert(s);
            }
        }
        target
    }

    pub fn initial_state(&self) -> PatternState {
        PatternState {
            matched_with: vec![None; self.pattern.len()],
            blocked: FixedBitSet::with_capacity(self.pattern.len()),
        }
    }

    /// Pattern gate `j` relabeled through the qubit map equals circuit gate `s`.
    pub fn equal(&self, j: usize, s: usize) -> bool {
        let map = self.qubit_map;
        self.pattern[j].equal_under_map(&self.circuit[s], |q| map.get(q as usize).copied().flatten())
    }
}

/// Direct successors of `v` in the pattern DAG that can extend the match
/// `matched` while keeping it connected.
pub fn find_forward_candidates(gt: &CanonicalDag, v: usize, matched: &FixedBitSet) -> Vec<usize> {
    let mut block = FixedBitSet::with_capacity(gt.len());
    for l in matched.ones().filter(|&l| l != v) {
        for &w in gt.direct_successors(l) {
            if !matched.contains(w) {
                block.union_with(gt.successor_set(w));
            }
        }
    }
    gt.direct_successors(v).iter().copied().filter(|&w| !matched.contains(w) && !block.contains(w)).collect()
}

/// Pattern indices after `i` that are not successors of `i` and are still
/// free in the given annotations.
pub(crate) fn find_backward_candidates(gt: &CanonicalDag, i: usize, st: &PatternState) -> Vec<usize> {
    (i + 1..gt.len())
        .filter(|&l| !gt.is_successor(i, l) && st.matched_with[l].is_none() && !st.blocked.contains(l))
        .collect()
}

impl Target for PatternTarget<'_> {
    type State = PatternState;

    fn forward_pick(&self, st: &PatternState, from: usize, s: usize) -> Option<usize> {
        let matched = st.matched_set();
        find_forward_candidates(self.gt, from, &matched).into_iter().filter(|&j| self.equal(j, s)).min()
    }

    fn mark_matched(&self, st: &mut PatternState, j: usize, s: usize) {
        st.matched_with[j] = Some(s);
    }

    fn begin_backward(&self, st: &mut PatternState) {
        st.blocked.union_with(self.gt.successor_set(self.start_pattern));
    }

    fn backward_options(&self, st: &PatternState, s: usize) -> Vec<usize> {
        let mut kept: Vec<usize> = Vec::new();
        for j in find_backward_candidates(self.gt, self.start_pattern, st) {
            if self.equal(j, s) && kept.iter().all(|&k| !self.gt.commutes_in_circuit(k, j)) {
                kept.push(j);
            }
        }
        kept
    }

    fn block_after(&self, st: &mut PatternState, j: usize) -> Vec<(usize, usize)> {
        let mut newly = FixedBitSet::with_capacity(self.gt.len());
        for &w in self.gt.successors(j) {
            if st.matched_with[w].is_none() {
                newly.insert(w);
                newly.union_with(self.gt.successor_set(w));
            }
        }
        let mut lost = Vec::new();
        for w in newly.ones() {
            st.blocked.insert(w);
            if let Some(s) = st.matched_with[w].take() {
                lost.push((w, s));
            }
        }
        lost
    }

    fn release(&self, st: &mut PatternState, j: usize) {
        st.matched_with[j] = None;
        st.blocked.insert(j);
    }

    fn open_slots(&self, st: &PatternState) -> usize {
        find_backward_candidates(self.gt, self.start_pattern, st).len()
    }

    fn eligible(&self, s: usize) -> bool {
        self.eligible.contains(s)
    }

    fn gates_left(&self, forward_len: usize) -> Option<usize> {
        Some(self.pattern.len() - self.start_pattern - forward_len)
    }
}
