//! Longest connected runs of gates inside a small qubit window.
//!
//! This is the matcher with the pattern replaced by a predicate: a circuit
//! gate is acceptable exactly when its support lies in the window. Each gate
//! of the window serves as its own target index, so no target-side
//! bookkeeping is needed.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::circuit::Circuit;
use crate::dag::CanonicalDag;
use crate::gate::Qubit;
use crate::matcher::{run_backward, run_forward, BackwardConfig, Target};

/// A connected part of the circuit whose gates act only on `qubits`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subcircuit {
    pub qubits: Vec<Qubit>,
    /// Sorted circuit gate indices.
    pub gates: Vec<usize>,
}

impl Subcircuit {
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

struct Window {
    inside: FixedBitSet,
}

impl Target for Window {
    type State = ();

    fn forward_pick(&self, _: &(), _from: usize, s: usize) -> Option<usize> {
        self.inside.contains(s).then_some(s)
    }

    fn mark_matched(&self, _: &mut (), _j: usize, _s: usize) {}

    fn begin_backward(&self, _: &mut ()) {}

    fn backward_options(&self, _: &(), s: usize) -> Vec<usize> {
        if self.inside.contains(s) {
            vec![s]
        } else {
            Vec::new()
        }
    }

    fn block_after(&self, _: &mut (), _j: usize) -> Vec<(usize, usize)> {
        Vec::new()
    }

    fn release(&self, _: &mut (), _j: usize) {}

    fn open_slots(&self, _: &()) -> usize {
        usize::MAX
    }

    fn eligible(&self, s: usize) -> bool {
        self.inside.contains(s)
    }

    fn gates_left(&self, _forward_len: usize) -> Option<usize> {
        None
    }
}

/// Maximal connected parts on the window `qubits`, largest first.
pub fn find_longest_subcircuits_on(c: &Circuit, gc: &CanonicalDag, qubits: &[Qubit]) -> Vec<Subcircuit> {
    let window: BTreeSet<Qubit> = qubits.iter().copied().collect();
    let mut inside = FixedBitSet::with_capacity(c.len());
    inside.extend((0..c.len()).filter(|&s| c[s].qubits().iter().all(|q| window.contains(q))));
    let target = Window { inside };
    let cfg = BackwardConfig { prune_short: true, waves: None };
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    for r in target.inside.ones() {
        // A start already covered by a larger run still has to be tried: a
        // gate can belong to several maximal runs.
        let forward = run_forward(gc, &target, &mut (), r, r);
        for ann in run_backward(gc, &target, (), forward, (r, r), cfg) {
            found.insert(ann.pairs().into_iter().map(|(_, s)| s).collect());
        }
    }
    let qubits: Vec<Qubit> = window.into_iter().collect();
    let mut maximal: Vec<Subcircuit> = found
        .iter()
        .filter(|g| !found.iter().any(|h| h.len() > g.len() && g.iter().all(|x| h.binary_search(x).is_ok())))
        .map(|g| Subcircuit { qubits: qubits.clone(), gates: g.clone() })
        .collect();
    maximal.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.gates.cmp(&b.gates)));
    maximal
}

/// [`find_longest_subcircuits_on`] for every `width`-subset of the circuit's
/// qubits, all results sorted by size, then window, then gates.
pub fn find_longest_subcircuits(c: &Circuit, gc: &CanonicalDag, width: usize) -> Vec<Subcircuit> {
    let labels: Vec<Qubit> = c.qubit_set().into_iter().collect();
    let width = width.min(labels.len());
    let mut out = Vec::new();
    if width == 0 {
        return out;
    }
    let mut pick: Vec<usize> = (0..width).collect();
    loop {
        let window: Vec<Qubit> = pick.iter().map(|&k| labels[k]).collect();
        out.extend(find_longest_subcircuits_on(c, gc, &window));
        // Next combination in lexicographic order.
        let Some(k) = (0..width).rev().find(|&k| pick[k] < labels.len() - width + k) else { break };
        pick[k] += 1;
        for m in k + 1..width {
            pick[m] = pick[m - 1] + 1;
        }
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.qubits.cmp(&b.qubits)).then_with(|| a.gates.cmp(&b.gates)));
    out
}
