//! Exhaustive reference matcher.
//!
//! Every connected subset of the pattern is assigned gate by gate to
//! distinct congruent circuit gates. An assignment is kept when the
//! reachability relation among the assigned gates agrees on both sides, the
//! circuit gates form a connected part, and a single injective qubit map
//! makes all assigned pairs equal. Exponential by design; meant for tests
//! and baselines on small instances.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::circuit::Circuit;
use crate::commute::CommutationOracle;
use crate::dag::CanonicalDag;
use crate::gate::Qubit;
use crate::matcher::{sort_matches, Match, QubitMap};

/// Size limits for the exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteCaps {
    pub max_circuit: usize,
    pub max_pattern: usize,
}

impl Default for BruteCaps {
    fn default() -> Self {
        BruteCaps { max_circuit: 12, max_pattern: 6 }
    }
}

/// Largest pattern whose subsets are enumerated.
pub const SUBPATTERN_CAP: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BruteError {
    #[error("pattern has {len} gates, above the cap of {cap}")]
    PatternTooLarge { len: usize, cap: usize },
    #[error("circuit has {len} gates, above the cap of {cap}")]
    CircuitTooLarge { len: usize, cap: usize },
}

/// A connected subset of pattern gates with the canonical form of the
/// induced sub-circuit.
#[derive(Clone, Debug)]
pub struct SubPattern {
    pub indices: Vec<usize>,
    pub dag: CanonicalDag,
}

pub fn enumerate_subpatterns(t: &Circuit, oracle: &CommutationOracle) -> Result<Vec<SubPattern>, BruteError> {
    enumerate_subpatterns_capped(t, oracle, SUBPATTERN_CAP)
}

fn enumerate_subpatterns_capped(
    t: &Circuit,
    oracle: &CommutationOracle,
    cap: usize,
) -> Result<Vec<SubPattern>, BruteError> {
    if t.len() > cap {
        return Err(BruteError::PatternTooLarge { len: t.len(), cap });
    }
    let gt = CanonicalDag::build(t, oracle);
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << t.len()) {
        let indices: Vec<usize> = (0..t.len()).filter(|&k| mask >> k & 1 == 1).collect();
        if gt.is_connected_indices(&indices) {
            let dag = CanonicalDag::build(&t.select(&indices), oracle);
            out.push(SubPattern { indices, dag });
        }
    }
    Ok(out)
}

/// All complete matches of every connected sub-pattern of `t` in `c`,
/// deduplicated by pair set and sorted like the matcher output.
pub fn brute_force_matches(
    c: &Circuit,
    t: &Circuit,
    caps: BruteCaps,
    oracle: &CommutationOracle,
) -> Result<Vec<Match>, BruteError> {
    if c.len() > caps.max_circuit {
        return Err(BruteError::CircuitTooLarge { len: c.len(), cap: caps.max_circuit });
    }
    let subpatterns = enumerate_subpatterns_capped(t, oracle, caps.max_pattern)?;
    let gc = CanonicalDag::build(c, oracle);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for sub in &subpatterns {
        let mut search = Search {
            c,
            gc: &gc,
            t,
            sub,
            assigned: Vec::with_capacity(sub.indices.len()),
            used: vec![false; c.len()],
            forward: BTreeMap::new(),
            backward: BTreeMap::new(),
            found: Vec::new(),
        };
        search.descend();
        for (pairs, qubit_map) in search.found {
            if seen.insert(pairs.clone()) {
                let start = pairs[0];
                out.push(Match { pairs, qubit_map, start });
            }
        }
    }
    sort_matches(&mut out);
    Ok(out)
}

struct Search<'a> {
    c: &'a Circuit,
    gc: &'a CanonicalDag,
    t: &'a Circuit,
    sub: &'a SubPattern,
    /// Circuit gate assigned to each sub-pattern position so far.
    assigned: Vec<usize>,
    used: Vec<bool>,
    forward: BTreeMap<Qubit, Qubit>,
    backward: BTreeMap<Qubit, Qubit>,
    found: Vec<(Pairs, QubitMap)>,
}

type Pairs = Vec<(usize, usize)>;

impl Search<'_> {
    fn descend(&mut self) {
        let k = self.assigned.len();
        if k == self.sub.indices.len() {
            if self.gc.is_connected_indices(&self.assigned) {
                let mut pairs: Vec<(usize, usize)> =
                    self.sub.indices.iter().copied().zip(self.assigned.iter().copied()).collect();
                pairs.sort_unstable();
                self.found.push((pairs, self.forward.clone()));
            }
            return;
        }
        let tg = &self.t[self.sub.indices[k]];
        for x in 0..self.c.len() {
            if self.used[x] || !tg.congruent(&self.c[x]) || !self.order_consistent(k, x) {
                continue;
            }
            for perm in tg.kind().position_symmetries() {
                let Some(added) = self.bind(k, x, perm) else { continue };
                self.used[x] = true;
                self.assigned.push(x);
                self.descend();
                self.assigned.pop();
                self.used[x] = false;
                for p in added {
                    let q = self.forward.remove(&p).expect("bound above");
                    self.backward.remove(&q);
                }
            }
        }
    }

    /// Reachability between the new pair and every earlier pair must agree.
    /// Circuit reachability is looked up by binary search in the sorted
    /// successor lists.
    fn order_consistent(&self, k: usize, x: usize) -> bool {
        self.assigned.iter().enumerate().all(|(kb, &y)| {
            let pattern_before = self.sub.dag.is_successor(kb, k);
            let circuit_before = self.gc.successors(y).binary_search(&x).is_ok();
            let circuit_after = self.gc.successors(x).binary_search(&y).is_ok();
            pattern_before == circuit_before && !circuit_after
        })
    }

    /// Extends the qubit map so that position `p` of the pattern gate goes
    /// to position `perm[p]` of circuit gate `x`. Returns the newly bound
    /// pattern qubits, or `None` on a conflict (nothing is bound then).
    fn bind(&mut self, k: usize, x: usize, perm: &[usize]) -> Option<Vec<Qubit>> {
        let tq = self.t[self.sub.indices[k]].qubits();
        let cq = self.c[x].qubits();
        let mut added = Vec::new();
        for (pos, &p) in tq.iter().enumerate() {
            let q = cq[perm[pos]];
            let ok = match (self.forward.get(&p), self.backward.get(&q)) {
                (Some(&fq), _) => fq == q,
                (None, Some(_)) => false,
                (None, None) => {
                    self.forward.insert(p, q);
                    self.backward.insert(q, p);
                    added.push(p);
                    true
                }
            };
            if !ok {
                for p in added {
                    let q = self.forward.remove(&p).expect("bound above");
                    self.backward.remove(&q);
                }
                return None;
            }
        }
        Some(added)
    }
}
