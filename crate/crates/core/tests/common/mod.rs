//! Shared fixtures and oracles for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use qcmatch::dag::CanonicalDag;
use qcmatch::io::parse_circuit;
use qcmatch::{Circuit, Match};

/// Gate list of the small four-gate example with a Toffoli at the end.
pub const FOUR_GATE: &str = "cx 1 2\ncx 1 3\nz 1\nccx 2 3 1\n";

/// Twelve-gate pattern on qubits 1..5 of the worked example.
pub const WORKED_PATTERN: &str = "\
cx 4 1
x 5
z 1
cx 5 3
cx 1 2
cx 4 5
cx 2 3
x 2
cx 2 1
x 2
cx 2 3
cx 1 4
";

/// Twenty-one-gate circuit on qubits 1..8 of the worked example.
pub const WORKED_CIRCUIT: &str = "\
cx 7 8
cx 8 6
cx 7 8
ccx 7 8 6
cx 7 8
cx 2 5
cx 7 4
cx 4 5
cx 5 6
cx 1 6
z 4
x 5
cx 5 4
cx 4 2
x 5
cx 2 3
cx 4 2
cx 4 6
cx 4 7
x 4
cx 5 6
";

/// Three crossing CNOTs and their reordering.
pub const CROSSING_PATTERN: &str = "cx 1 2\ncx 1 3\ncx 3 1\n";
pub const CROSSING_CIRCUIT: &str = "cx 1 3\ncx 1 2\ncx 3 1\n";

/// Twelve gates on three qubits; gates 6 and 7 leave qubits {2, 3}.
pub const PEEPHOLE_CIRCUIT: &str = "\
x 3
cx 2 3
h 2
cx 2 3
h 2
cx 1 2
cx 1 3
h 3
cx 3 2
h 3
cx 3 2
x 2
";

/// Five-CNOT identity.
pub const FIVE_CNOT: &str = "cx 2 3\ncx 1 2\ncx 2 3\ncx 1 2\ncx 1 3\n";

pub fn circuit(text: &str) -> Circuit {
    parse_circuit(text).expect("fixture parses")
}

/// One-based sorted index list, for comparing against hand-written values.
pub fn one_based(indices: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = indices.into_iter().map(|k| k + 1).collect();
    v.sort_unstable();
    v
}

/// Partition of gate indices into classes of interchangeable gates: equal
/// gates whose order in the circuit does not matter. Two matches that only
/// differ by swapping interchangeable gates describe the same occurrence.
pub fn interchange_classes(c: &Circuit, g: &CanonicalDag) -> Vec<usize> {
    let mut class: Vec<usize> = (0..c.len()).collect();
    for a in 0..c.len() {
        for b in 0..a {
            if c[a] == c[b] && g.commutes_in_circuit(a, b) {
                class[a] = class[b];
                break;
            }
        }
    }
    class
}

/// Class-level signature of a match.
pub fn signature(m: &Match, t_class: &[usize], c_class: &[usize]) -> Vec<(usize, usize)> {
    let mut sig: Vec<(usize, usize)> = m.pairs.iter().map(|&(a, x)| (t_class[a], c_class[x])).collect();
    sig.sort_unstable();
    sig
}

/// Maximal signatures: duplicates merged, and signatures that share a class
/// pair with a strictly longer one removed.
pub fn maximal_signatures(matches: &[Match], t_class: &[usize], c_class: &[usize]) -> BTreeSet<Vec<(usize, usize)>> {
    let sigs: BTreeSet<Vec<(usize, usize)>> = matches.iter().map(|m| signature(m, t_class, c_class)).collect();
    let mut longest: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for s in &sigs {
        for p in s {
            let e = longest.entry(*p).or_default();
            *e = (*e).max(s.len());
        }
    }
    sigs.into_iter().filter(|s| s.iter().all(|p| longest[p] <= s.len())).collect()
}

pub fn pair_sets(matches: &[Match]) -> BTreeSet<Vec<(usize, usize)>> {
    matches.iter().map(|m| m.pairs.clone()).collect()
}

/// Random matching instance of the oracle corpus: a circuit with at most 10
/// gates on 3 to 5 qubits, and a pattern of at most 5 gates. Half of the
/// patterns are independent random circuits, the other half relabeled
/// subsequences of the circuit, so that large matches are common.
pub fn oracle_instance(seed: u64) -> (Circuit, Circuit) {
    use qcmatch::io::{random_circuit_with, seeded_rng};
    use rand::seq::SliceRandom;
    use rand::Rng;

    let mut rng = seeded_rng(seed);
    let n_c = rng.gen_range(3..=5);
    let len_c = rng.gen_range(1..=10);
    let c = random_circuit_with(&mut rng, len_c, n_c).expect("at least 3 qubits");
    let len_t = rng.gen_range(1..=5usize);
    let t = if rng.gen_bool(0.5) {
        let n_t = rng.gen_range(3..=n_c);
        random_circuit_with(&mut rng, len_t, n_t).expect("at least 3 qubits")
    } else {
        let mut idx: Vec<usize> = (0..c.len()).collect();
        idx.shuffle(&mut rng);
        idx.truncate(len_t.min(c.len()));
        idx.sort_unstable();
        let mut perm: Vec<u32> = (0..n_c as u32).collect();
        perm.shuffle(&mut rng);
        c.select(&idx).relabeled(|q| perm[q as usize])
    };
    (c, t)
}

/// Largest match size per attempt `(start pair, full qubit map)` found by
/// the matcher, compared against the best exhaustive match with the same
/// smallest pattern index, start pair and a compatible map. Returns the
/// number of attempts and the disagreeing ones.
pub fn per_attempt_mismatches(
    c: &Circuit,
    t: &Circuit,
    matcher_out: &[Match],
    brute_out: &[Match],
) -> (usize, Vec<String>) {
    type Attempt = ((usize, usize), Vec<(u32, u32)>);
    let mut best: BTreeMap<Attempt, usize> = BTreeMap::new();
    for m in matcher_out {
        let key = (m.start, m.qubit_map.iter().map(|(a, b)| (*a, *b)).collect());
        let e = best.entry(key).or_default();
        *e = (*e).max(m.len());
    }
    let mut bad = Vec::new();
    for (((i, r), map), size) in &best {
        let map: BTreeMap<u32, u32> = map.iter().copied().collect();
        let reference = brute_out
            .iter()
            .filter(|m| m.pairs[0].0 == *i && m.pairs.contains(&(*i, *r)))
            .filter(|m| m.pairs.iter().all(|&(p, x)| t[p].equal_under_map(&c[x], |q| map.get(&q).copied())))
            .map(|m| m.len())
            .max()
            .unwrap_or(0);
        if reference != *size {
            bad.push(format!("start ({i},{r}) map {map:?}: matcher {size}, exhaustive {reference}"));
        }
    }
    (best.len(), bad)
}

/// For every pair `i < j`, whether some ordering reachable by swapping
/// adjacent commuting gates puts gate `j` before gate `i`. Breadth-first
/// search over all reachable orderings; meant for circuits of at most
/// eight gates.
pub fn swap_reachable_inversions(c: &Circuit, oracle: &qcmatch::CommutationOracle) -> Vec<Vec<bool>> {
    use std::collections::{HashSet, VecDeque};
    let n = c.len();
    let mut inverted = vec![vec![false; n]; n];
    let start: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(order) = queue.pop_front() {
        for (pos, &a) in order.iter().enumerate() {
            for &b in &order[pos + 1..] {
                if b < a {
                    inverted[b][a] = true;
                }
            }
        }
        for k in 0..n.saturating_sub(1) {
            if oracle.commutes(&c[order[k]], &c[order[k + 1]]) {
                let mut next = order.clone();
                next.swap(k, k + 1);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    inverted
}
