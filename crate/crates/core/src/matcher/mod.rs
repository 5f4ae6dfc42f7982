//! Exact pattern matching under pairwise commutation.
//!
//! For every pattern gate `T_i` and every congruent circuit gate `C_r`, and
//! every injective qubit assignment under which the two are equal, the
//! matcher grows the pair `(i, r)` greedily forward through the successors
//! of `C_r` and then explores all ways of extending the result with circuit
//! gates that are not successors of `C_r`. Attempts are independent and run
//! in parallel; their results are merged in a fixed order.

mod engine;
mod pattern;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::Circuit;
use crate::commute::CommutationOracle;
use crate::dag::CanonicalDag;
use crate::gate::{Gate, Qubit};
use crate::heuristics::{heuristic_qubits, HeuristicConfig};

pub use engine::MatchAnnotations;
pub(crate) use engine::{run_backward, run_forward, BackwardConfig, Target};
pub use pattern::find_forward_candidates;
use pattern::{find_backward_candidates, PatternState, PatternTarget};

/// Pattern qubit label -> circuit qubit label.
pub type QubitMap = BTreeMap<Qubit, Qubit>;

/// A set of `(pattern index, circuit index)` pairs and the qubit assignment
/// under which the paired gates are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    /// Sorted by pattern index.
    pub pairs: Vec<(usize, usize)>,
    /// Full assignment of every pattern qubit used for the attempt.
    pub qubit_map: QubitMap,
    /// The `(pattern, circuit)` pair the match was grown from.
    pub start: (usize, usize),
}

impl Match {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pattern_indices(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    /// Matched circuit indices, ascending.
    pub fn circuit_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.pairs.iter().map(|p| p.1).collect();
        v.sort_unstable();
        v
    }

    /// Serializable form with one-based gate indices.
    pub fn to_record(&self) -> MatchRecord {
        MatchRecord {
            pairs: self.pairs.iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
            qubit_map: self.qubit_map.iter().map(|(p, c)| (p.to_string(), *c)).collect(),
            size: self.len(),
        }
    }
}

/// JSON shape of a match: one-based `[pattern, circuit]` pairs.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MatchRecord {
    pub pairs: Vec<[usize; 2]>,
    pub qubit_map: BTreeMap<String, Qubit>,
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct MatchOptions {
    /// Apply [`filter_maximal`] to the output.
    pub dedup: bool,
    /// Skip backward scenarios that can no longer reach the forward length.
    pub prune_short_scenarios: bool,
    pub heuristics: HeuristicConfig,
    /// Run attempts on the rayon thread pool.
    pub parallel: bool,
    pub oracle: CommutationOracle,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            dedup: true,
            prune_short_scenarios: true,
            heuristics: HeuristicConfig::default(),
            parallel: true,
            oracle: CommutationOracle::default(),
        }
    }
}

impl MatchOptions {
    fn backward_config(&self) -> BackwardConfig {
        BackwardConfig { prune_short: self.prune_short_scenarios, waves: self.heuristics.backward_waves() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchError {
    #[error("pattern uses {pattern} qubits but the circuit only {circuit}")]
    PatternTooWide { pattern: usize, circuit: usize },
    #[error("pattern is empty")]
    EmptyPattern,
}

/// All maximal matches of `t` in `c`.
pub fn pattern_match(c: &Circuit, t: &Circuit, opts: &MatchOptions) -> Result<Vec<Match>, MatchError> {
    let gc = CanonicalDag::build(c, &opts.oracle);
    let gt = CanonicalDag::build(t, &opts.oracle);
    pattern_match_with_dags(c, &gc, t, &gt, opts)
}

/// [`pattern_match`] with precomputed canonical forms.
pub fn pattern_match_with_dags(
    c: &Circuit,
    gc: &CanonicalDag,
    t: &Circuit,
    gt: &CanonicalDag,
    opts: &MatchOptions,
) -> Result<Vec<Match>, MatchError> {
    if t.is_empty() {
        return Err(MatchError::EmptyPattern);
    }
    let (n_t, n_c) = (t.num_qubits(), c.num_qubits());
    if n_t > n_c {
        return Err(MatchError::PatternTooWide { pattern: n_t, circuit: n_c });
    }
    let attempts = enumerate_attempts(c, gc, t, gt, &opts.heuristics);
    let run = |a: &Attempt| run_attempt(c, gc, t, gt, a, opts);
    let per_attempt: Vec<Vec<Match>> =
        if opts.parallel { attempts.par_iter().map(run).collect() } else { attempts.iter().map(run).collect() };
    let mut out: Vec<Match> = per_attempt.into_iter().flatten().collect();
    if opts.dedup {
        out = filter_maximal(out);
    }
    sort_matches(&mut out);
    Ok(out)
}

/// One starting configuration: pattern gate, circuit gate, qubit map.
#[derive(Clone, Debug)]
pub(crate) struct Attempt {
    pub pattern_start: usize,
    pub circuit_start: usize,
    pub qubit_map: QubitMap,
}

fn enumerate_attempts(
    c: &Circuit,
    gc: &CanonicalDag,
    t: &Circuit,
    gt: &CanonicalDag,
    heur: &HeuristicConfig,
) -> Vec<Attempt> {
    let pattern_qubits: Vec<Qubit> = t.qubit_set().into_iter().collect();
    let circuit_qubits: Vec<Qubit> = c.qubit_set().into_iter().collect();
    let mut out = Vec::new();
    for i in 0..t.len() {
        for r in (0..c.len()).filter(|&r| t[i].congruent(&c[r])) {
            // A start gate on every pattern qubit leaves no assignment choice.
            let required = heur
                .qubit_exploration
                .filter(|_| t[i].qubits().len() < pattern_qubits.len())
                .map(|f| heuristic_qubits(c, gc, gt, pattern_qubits.len(), r, i, f))
                .unwrap_or_default();
            for qubit_map in start_assignments(&t[i], &c[r], &pattern_qubits, &circuit_qubits, &required) {
                out.push(Attempt { pattern_start: i, circuit_start: r, qubit_map });
            }
        }
    }
    out
}

/// Injective maps of all pattern qubits into circuit qubits under which
/// `t_gate` equals `c_gate`, whose image contains `required`.
pub fn start_assignments(
    t_gate: &Gate,
    c_gate: &Gate,
    pattern_qubits: &[Qubit],
    circuit_qubits: &[Qubit],
    required: &BTreeSet<Qubit>,
) -> Vec<QubitMap> {
    let mut seeds: Vec<QubitMap> = Vec::new();
    for perm in t_gate.kind().position_symmetries() {
        let seed: QubitMap = t_gate.qubits().iter().zip(perm.iter()).map(|(&p, &k)| (p, c_gate.qubits()[k])).collect();
        if t_gate.equal_under_map(c_gate, |q| seed.get(&q).copied()) && !seeds.contains(&seed) {
            seeds.push(seed);
        }
    }
    let mut out = Vec::new();
    for seed in seeds {
        let free_pattern: Vec<Qubit> = pattern_qubits.iter().copied().filter(|q| !seed.contains_key(q)).collect();
        let used: BTreeSet<Qubit> = seed.values().copied().collect();
        let free_circuit: Vec<Qubit> = circuit_qubits.iter().copied().filter(|q| !used.contains(q)).collect();
        let mut taken = vec![false; free_circuit.len()];
        let mut map = seed.clone();
        extend_assignment(&free_pattern, &free_circuit, &mut taken, &mut map, required, &mut out);
    }
    out
}

fn extend_assignment(
    free_pattern: &[Qubit],
    free_circuit: &[Qubit],
    taken: &mut [bool],
    map: &mut QubitMap,
    required: &BTreeSet<Qubit>,
    out: &mut Vec<QubitMap>,
) {
    let missing = required.iter().filter(|q| !map.values().any(|v| v == *q)).count();
    if missing > free_pattern.len() {
        return;
    }
    let Some((&p, rest)) = free_pattern.split_first() else {
        out.push(map.clone());
        return;
    };
    for k in 0..free_circuit.len() {
        if taken[k] {
            continue;
        }
        taken[k] = true;
        map.insert(p, free_circuit[k]);
        extend_assignment(rest, free_circuit, taken, map, required, out);
        map.remove(&p);
        taken[k] = false;
    }
}

fn dense_map(map: &QubitMap) -> Vec<Option<Qubit>> {
    let bound = map.keys().next_back().map(|&q| q as usize + 1).unwrap_or(0);
    let mut dense = vec![None; bound];
    for (&p, &c) in map {
        dense[p as usize] = Some(c);
    }
    dense
}

fn run_attempt(
    c: &Circuit,
    gc: &CanonicalDag,
    t: &Circuit,
    gt: &CanonicalDag,
    a: &Attempt,
    opts: &MatchOptions,
) -> Vec<Match> {
    let forward = forward_match(c, gc, t, gt, &a.qubit_map, a.circuit_start, a.pattern_start);
    backward_match_with(c, gc, t, gt, &a.qubit_map, a.circuit_start, a.pattern_start, forward, opts.backward_config())
}

/// Result of the forward phase.
#[derive(Clone, Debug)]
pub struct ForwardOutcome {
    /// Circuit-side annotations: paired pattern index and blocked flags.
    pub annotations: MatchAnnotations,
    pattern_state: PatternState,
}

impl ForwardOutcome {
    /// `(pattern, circuit)` pairs, sorted by pattern index.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.annotations.pairs()
    }

    pub fn blocked(&self) -> Vec<usize> {
        self.annotations.blocked.ones().collect()
    }
}

/// Greedy forward phase starting from `T_i = C_r`.
///
/// # Panics
/// If `T_i` does not equal `C_r` under `qubit_map`.
pub fn forward_match(
    c: &Circuit,
    gc: &CanonicalDag,
    t: &Circuit,
    gt: &CanonicalDag,
    qubit_map: &QubitMap,
    r: usize,
    i: usize,
) -> ForwardOutcome {
    let dense = dense_map(qubit_map);
    let target = PatternTarget::new(c, t, gt, &dense, i);
    assert!(target.equal(i, r), "starting gates differ under the qubit map");
    let mut st = target.initial_state();
    let annotations = run_forward(gc, &target, &mut st, r, i);
    ForwardOutcome { annotations, pattern_state: st }
}

/// Backward phase with default options.
#[allow(clippy::too_many_arguments)]
pub fn backward_match(
    c: &Circuit,
    gc: &CanonicalDag,
    t: &Circuit,
    gt: &CanonicalDag,
    qubit_map: &QubitMap,
    r: usize,
    i: usize,
    forward: ForwardOutcome,
) -> Vec<Match> {
    let cfg = MatchOptions::default().backward_config();
    backward_match_with(c, gc, t, gt, qubit_map, r, i, forward, cfg)
}

#[allow(clippy::too_many_arguments)]
fn backward_match_with(
    c: &Circuit,
    gc: &CanonicalDag,
    t: &Circuit,
    gt: &CanonicalDag,
    qubit_map: &QubitMap,
    r: usize,
    i: usize,
    forward: ForwardOutcome,
    cfg: BackwardConfig,
) -> Vec<Match> {
    let dense = dense_map(qubit_map);
    let target = PatternTarget::new(c, t, gt, &dense, i);
    let outcomes = run_backward(gc, &target, forward.pattern_state, forward.annotations, (i, r), cfg);
    let mut seen = HashSet::new();
    outcomes
        .into_iter()
        .map(|ann| ann.pairs())
        .filter(|pairs| seen.insert(pairs.clone()))
        .map(|pairs| Match { pairs, qubit_map: qubit_map.clone(), start: (i, r) })
        .collect()
}

/// Backward candidates for a fresh backward phase from pattern index `i`
/// with the given pattern gates already paired.
pub fn find_backward_candidates_for(gt: &CanonicalDag, i: usize, matched: &[usize]) -> Vec<usize> {
    let mut st =
        PatternState { matched_with: vec![None; gt.len()], blocked: fixedbitset::FixedBitSet::with_capacity(gt.len()) };
    for &j in matched {
        st.matched_with[j] = Some(usize::MAX);
    }
    st.blocked.union_with(gt.successor_set(i));
    find_backward_candidates(gt, i, &st)
}

/// Drops exact duplicates (by pair set) and every match that shares a pair
/// with a strictly longer one. The first occurrence of a duplicate is kept.
pub fn filter_maximal(matches: Vec<Match>) -> Vec<Match> {
    let mut longest: HashMap<(usize, usize), usize> = HashMap::new();
    for m in &matches {
        for p in &m.pairs {
            let e = longest.entry(*p).or_insert(0);
            *e = (*e).max(m.len());
        }
    }
    let mut seen = HashSet::new();
    matches
        .into_iter()
        .filter(|m| m.pairs.iter().all(|p| longest[p] <= m.len()))
        .filter(|m| seen.insert(m.pairs.clone()))
        .collect()
}

/// Size descending, then start pair, then pair list.
pub fn sort_matches(matches: &mut [Match]) {
    matches.sort_by(|a, b| b.len().cmp(&a.len()).then(a.start.cmp(&b.start)).then_with(|| a.pairs.cmp(&b.pairs)));
}
