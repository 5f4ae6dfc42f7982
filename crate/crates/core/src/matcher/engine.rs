//! Forward and backward match expansion, independent of what the circuit is
//! being matched against.
//!
//! The same machinery serves pattern matching, where candidates come from the
//! pattern DAG, and peephole search, where any gate inside a qubit window is
//! acceptable.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use crate::dag::CanonicalDag;
use crate::heuristics::prune_scenarios;

/// The thing circuit gates are matched against.
pub(crate) trait Target {
    type State: Clone;

    /// Target index to pair with circuit gate `s`, reached in forward
    /// direction from a circuit gate paired with target index `from`.
    fn forward_pick(&self, st: &Self::State, from: usize, s: usize) -> Option<usize>;

    fn mark_matched(&self, st: &mut Self::State, j: usize, s: usize);

    /// Called once between the forward and backward phases.
    fn begin_backward(&self, st: &mut Self::State);

    /// Inequivalent target indices that circuit gate `s` may be paired with.
    fn backward_options(&self, st: &Self::State, s: usize) -> Vec<usize>;

    /// Target-side consequences of pairing target `j`: returns the
    /// `(target, circuit)` pairs that had to be dropped.
    fn block_after(&self, st: &mut Self::State, j: usize) -> Vec<(usize, usize)>;

    /// Target index `j` lost its partner because the circuit side blocked it.
    fn release(&self, st: &mut Self::State, j: usize);

    /// Upper bound on further backward pairings from target-side state.
    fn open_slots(&self, st: &Self::State) -> usize;

    /// Whether circuit gate `s` could ever be paired in the backward phase.
    fn eligible(&self, s: usize) -> bool;

    /// Backward pairings after which nothing can be added any more.
    fn gates_left(&self, forward_len: usize) -> Option<usize>;
}

/// Per-vertex attributes layered over the circuit DAG.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchAnnotations {
    /// Target index each circuit gate is paired with.
    pub matched_with: Vec<Option<usize>>,
    pub blocked: FixedBitSet,
}

impl MatchAnnotations {
    pub fn new(n: usize) -> Self {
        MatchAnnotations { matched_with: vec![None; n], blocked: FixedBitSet::with_capacity(n) }
    }

    /// `(target, circuit)` pairs sorted by target index.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> =
            self.matched_with.iter().enumerate().filter_map(|(s, j)| j.map(|j| (j, s))).collect();
        out.sort_unstable();
        out
    }

    pub fn matched_count(&self) -> usize {
        self.matched_with.iter().filter(|m| m.is_some()).count()
    }
}

/// Greedy forward expansion from the pair `(i, r)`.
pub(crate) fn run_forward<T: Target>(
    gc: &CanonicalDag,
    target: &T,
    st: &mut T::State,
    r: usize,
    i: usize,
) -> MatchAnnotations {
    let n = gc.len();
    let mut ann = MatchAnnotations::new(n);
    ann.matched_with[r] = Some(i);
    target.mark_matched(st, i, r);

    // Remaining successors to visit for each matched vertex, consumed from
    // the front via a cursor.
    let mut to_visit: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut cursor = vec![0usize; n];
    to_visit[r] = gc.direct_successors(r).to_vec();
    let key =
        |v: usize, to_visit: &[Vec<usize>], cursor: &[usize]| to_visit[v].get(cursor[v]).copied().unwrap_or(usize::MAX);
    let mut queue: BTreeSet<(usize, usize)> = BTreeSet::new();
    queue.insert((key(r, &to_visit, &cursor), r));

    while let Some((_, v0)) = queue.pop_first() {
        let Some(&v) = to_visit[v0].get(cursor[v0]) else { continue };
        cursor[v0] += 1;
        queue.insert((key(v0, &to_visit, &cursor), v0));
        if ann.blocked.contains(v) || ann.matched_with[v].is_some() {
            continue;
        }
        let from = ann.matched_with[v0].expect("queued vertices are matched");
        match target.forward_pick(st, from, v) {
            Some(j) => {
                ann.matched_with[v] = Some(j);
                target.mark_matched(st, j, v);
                to_visit[v] = gc
                    .direct_successors(v)
                    .iter()
                    .copied()
                    .filter(|&w| !ann.blocked.contains(w) && ann.matched_with[w].is_none())
                    .collect();
                queue.insert((key(v, &to_visit, &cursor), v));
            }
            None => {
                ann.blocked.insert(v);
                for &w in gc.successors(v) {
                    debug_assert!(ann.matched_with[w].is_none(), "forward blocking hit a matched vertex");
                    ann.blocked.insert(w);
                }
            }
        }
    }
    ann
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct BackwardConfig {
    /// Drop scenarios that cannot reach the forward match length.
    pub prune_short: bool,
    /// Wave length and survivor count of the scenario-tree heuristic.
    pub waves: Option<(usize, usize)>,
}

#[derive(Clone)]
struct Scenario<S> {
    ann: MatchAnnotations,
    target: S,
    /// Pairs added during the backward phase; they may never be dropped.
    fixed: Vec<(usize, usize)>,
    size: usize,
    counter: usize,
    seq: u64,
}

struct Backward<'a, T: Target> {
    gc: &'a CanonicalDag,
    target: &'a T,
    start: (usize, usize),
    gate_indices: Vec<usize>,
    forward_len: usize,
    /// Size of the longest finished scenario so far.
    best_len: usize,
    gates_left: Option<usize>,
    cfg: BackwardConfig,
    next_seq: u64,
    stack: Vec<Scenario<T::State>>,
    parked: Vec<Scenario<T::State>>,
}

impl<T: Target> Backward<'_, T> {
    fn fixed_ok(&self, sc: &Scenario<T::State>) -> bool {
        let (i, r) = self.start;
        sc.ann.matched_with[r] == Some(i) && sc.fixed.iter().all(|&(j, s)| sc.ann.matched_with[s] == Some(j))
    }

    /// Whether the scenario can still grow to `goal` pairs: the remaining
    /// circuit gates and the open target slots both have to allow it.
    fn can_reach(&self, sc: &Scenario<T::State>, goal: usize) -> bool {
        let Some(needed) = goal.checked_sub(sc.size).filter(|&n| n > 0) else { return true };
        if self.target.open_slots(&sc.target) < needed {
            return false;
        }
        self.gate_indices[sc.counter..]
            .iter()
            .filter(|&&s| !sc.ann.blocked.contains(s) && sc.ann.matched_with[s].is_none() && self.target.eligible(s))
            .nth(needed - 1)
            .is_some()
    }

    /// Advances the counter and files the scenario on the stack, in the
    /// parking area of the wave heuristic, or nowhere if it is hopeless.
    fn push(&mut self, mut sc: Scenario<T::State>) {
        sc.counter += 1;
        if self.cfg.prune_short && !self.can_reach(&sc, self.forward_len.max(self.best_len)) {
            return;
        }
        sc.seq = self.next_seq;
        self.next_seq += 1;
        match self.cfg.waves {
            Some((depth, _)) if sc.counter < self.gate_indices.len() && sc.counter % depth == 0 => self.parked.push(sc),
            _ => self.stack.push(sc),
        }
    }

    fn right_block(&self, sc: &mut Scenario<T::State>, v: usize) {
        sc.ann.blocked.insert(v);
        for &w in self.gc.successors(v) {
            if let Some(j) = sc.ann.matched_with[w].take() {
                self.target.release(&mut sc.target, j);
                sc.size -= 1;
            }
            sc.ann.blocked.insert(w);
        }
    }

    fn left_block(&self, sc: &mut Scenario<T::State>, v: usize) {
        sc.ann.blocked.insert(v);
        for &w in self.gc.predecessors(v) {
            debug_assert!(sc.ann.matched_with[w].is_none(), "left-blocking hit a matched vertex");
            sc.ann.blocked.insert(w);
        }
    }

    /// Pairs circuit gate `s` with target `j`; returns how many earlier
    /// pairs were lost.
    fn apply_match(&self, sc: &mut Scenario<T::State>, j: usize, s: usize) -> usize {
        let lost = self.target.block_after(&mut sc.target, j);
        for &(_, s_lost) in &lost {
            sc.ann.matched_with[s_lost] = None;
            sc.ann.blocked.insert(s_lost);
            sc.size -= 1;
        }
        sc.ann.matched_with[s] = Some(j);
        self.target.mark_matched(&mut sc.target, j, s);
        sc.size += 1;
        sc.fixed.push((j, s));
        lost.len()
    }

    fn step(&mut self, sc: Scenario<T::State>, results: &mut Vec<MatchAnnotations>) {
        if sc.counter == self.gate_indices.len() || self.gates_left == Some(sc.fixed.len()) {
            self.best_len = self.best_len.max(sc.size);
            results.push(sc.ann);
            return;
        }
        let s = self.gate_indices[sc.counter];
        if sc.ann.blocked.contains(s) {
            self.push(sc);
            return;
        }
        let options = self.target.backward_options(&sc.target, s);
        let mut all_destroy = true;
        for &j in &options {
            let mut next = sc.clone();
            if self.apply_match(&mut next, j, s) == 0 {
                all_destroy = false;
            }
            if self.fixed_ok(&next) {
                self.push(next);
            }
        }
        let mut blocked = sc;
        blocked.ann.blocked.insert(s);
        let free = self.gc.predecessors(s).is_empty()
            || self.gc.successors(s).iter().all(|&w| blocked.ann.matched_with[w].is_none());
        if free {
            self.push(blocked);
            return;
        }
        let mut right = blocked.clone();
        self.right_block(&mut right, s);
        if self.fixed_ok(&right) {
            self.push(right);
        }
        if options.is_empty() || all_destroy {
            self.left_block(&mut blocked, s);
            self.push(blocked);
        }
    }

    fn run(mut self, initial: Scenario<T::State>) -> Vec<MatchAnnotations> {
        let mut results = Vec::new();
        self.stack.push(initial);
        loop {
            if let Some(sc) = self.stack.pop() {
                if self.cfg.prune_short && !self.can_reach(&sc, self.best_len) {
                    continue;
                }
                self.step(sc, &mut results);
                continue;
            }
            if self.parked.is_empty() {
                break;
            }
            let keep = self.cfg.waves.map(|(_, s)| s).unwrap_or(usize::MAX);
            let survivors = prune_scenarios(std::mem::take(&mut self.parked), keep, |sc| sc.size);
            // Best survivor on top of the stack.
            self.stack.extend(survivors.into_iter().rev());
        }
        let best = results.iter().map(MatchAnnotations::matched_count).max().unwrap_or(0);
        results.retain(|a| a.matched_count() == best);
        results
    }
}

/// Scenario-tree expansion of a forward match in backward direction.
/// Returns the circuit annotations of every maximal-length outcome.
pub(crate) fn run_backward<T: Target>(
    gc: &CanonicalDag,
    target: &T,
    mut st: T::State,
    forward: MatchAnnotations,
    start: (usize, usize),
    cfg: BackwardConfig,
) -> Vec<MatchAnnotations> {
    let n = gc.len();
    let gate_indices: Vec<usize> =
        (0..n).rev().filter(|&s| !forward.blocked.contains(s) && forward.matched_with[s].is_none()).collect();
    let forward_len = forward.matched_count();
    target.begin_backward(&mut st);
    let engine = Backward {
        gc,
        target,
        start,
        gate_indices,
        forward_len,
        best_len: 0,
        gates_left: target.gates_left(forward_len),
        cfg,
        next_seq: 1,
        stack: Vec::new(),
        parked: Vec::new(),
    };
    let initial = Scenario { ann: forward, target: st, fixed: Vec::new(), size: forward_len, counter: 0, seq: 0 };
    engine.run(initial)
}
