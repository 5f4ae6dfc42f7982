//! Canonical form of a circuit: the commutation DAG.
//!
//! Vertex `k` is gate `k`. An edge `i -> j` (with `i < j`) is added when
//! gate `j` does not commute with gate `i` and `i` is not already an
//! ancestor of some later vertex that `j` was attached to. For `i < j`,
//! `j` is reachable from `i` exactly when the two gates cannot be swapped
//! past each other by pairwise commutations.

use fixedbitset::FixedBitSet;

use crate::circuit::Circuit;
use crate::commute::CommutationOracle;

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalDag {
    direct_succ: Vec<Vec<usize>>,
    direct_pred: Vec<Vec<usize>>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    succ_set: Vec<FixedBitSet>,
    pred_set: Vec<FixedBitSet>,
}

/// Builds the canonical form and its reachability lists.
pub fn create_canonical_form(c: &Circuit, oracle: &CommutationOracle) -> CanonicalDag {
    CanonicalDag::build(c, oracle)
}

impl CanonicalDag {
    pub fn build(c: &Circuit, oracle: &CommutationOracle) -> CanonicalDag {
        let n = c.len();
        let mut direct_pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut direct_succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        // Ancestor sets of the vertices inserted so far. They never change
        // once a vertex is in place because later vertices only add
        // outgoing edges to earlier ones.
        let mut ancestors: Vec<FixedBitSet> = Vec::with_capacity(n);
        for j in 0..n {
            let mut reachable = FixedBitSet::with_capacity(n);
            reachable.insert_range(0..j);
            let mut anc = FixedBitSet::with_capacity(n);
            for i in (0..j).rev() {
                if reachable.contains(i) && !oracle.commutes(&c[i], &c[j]) {
                    direct_pred[j].push(i);
                    direct_succ[i].push(j);
                    reachable.difference_with(&ancestors[i]);
                    anc.union_with(&ancestors[i]);
                    anc.insert(i);
                }
            }
            direct_pred[j].reverse();
            ancestors.push(anc);
        }
        let mut dag = CanonicalDag::from_edges_unchecked(direct_succ, direct_pred);
        dag.initialize_reachability_lists();
        dag
    }

    /// A DAG from an explicit edge list over `n` vertices. Every edge must
    /// point from a smaller to a larger index.
    ///
    /// # Panics
    /// On an out-of-range or backward edge.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> CanonicalDag {
        let mut direct_succ = vec![Vec::new(); n];
        let mut direct_pred = vec![Vec::new(); n];
        for &(a, b) in edges {
            assert!(a < b && b < n, "edge {a} -> {b} is not forward within {n} vertices");
            direct_succ[a].push(b);
            direct_pred[b].push(a);
        }
        for l in direct_succ.iter_mut().chain(direct_pred.iter_mut()) {
            l.sort_unstable();
            l.dedup();
        }
        let mut dag = CanonicalDag::from_edges_unchecked(direct_succ, direct_pred);
        dag.initialize_reachability_lists();
        dag
    }

    fn from_edges_unchecked(direct_succ: Vec<Vec<usize>>, direct_pred: Vec<Vec<usize>>) -> CanonicalDag {
        CanonicalDag {
            direct_succ,
            direct_pred,
            succ: Vec::new(),
            pred: Vec::new(),
            succ_set: Vec::new(),
            pred_set: Vec::new(),
        }
    }

    /// Fills the transitive successor and predecessor lists, walking the
    /// vertices in reverse (resp. forward) label order and merging the
    /// closures of direct neighbours.
    pub fn initialize_reachability_lists(&mut self) {
        let n = self.direct_succ.len();
        let mut succ_set = vec![FixedBitSet::with_capacity(n); n];
        for v in (0..n).rev() {
            let mut set = FixedBitSet::with_capacity(n);
            for &w in &self.direct_succ[v] {
                set.insert(w);
                set.union_with(&succ_set[w]);
            }
            succ_set[v] = set;
        }
        let mut pred_set = vec![FixedBitSet::with_capacity(n); n];
        for v in 0..n {
            let mut set = FixedBitSet::with_capacity(n);
            for &w in &self.direct_pred[v] {
                set.insert(w);
                set.union_with(&pred_set[w]);
            }
            pred_set[v] = set;
        }
        self.succ = succ_set.iter().map(|s| s.ones().collect()).collect();
        self.pred = pred_set.iter().map(|s| s.ones().collect()).collect();
        self.succ_set = succ_set;
        self.pred_set = pred_set;
    }

    pub fn len(&self) -> usize {
        self.direct_succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.direct_succ.is_empty()
    }

    pub fn direct_successors(&self, v: usize) -> &[usize] {
        &self.direct_succ[v]
    }

    pub fn direct_predecessors(&self, v: usize) -> &[usize] {
        &self.direct_pred[v]
    }

    /// All vertices reachable from `v`, ascending.
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    /// All vertices from which `v` is reachable, ascending.
    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn successor_set(&self, v: usize) -> &FixedBitSet {
        &self.succ_set[v]
    }

    pub fn predecessor_set(&self, v: usize) -> &FixedBitSet {
        &self.pred_set[v]
    }

    /// Whether `w` is reachable from `v`.
    pub fn is_successor(&self, v: usize, w: usize) -> bool {
        self.succ_set[v].contains(w)
    }

    /// Whether gates `i` and `j` can be brought past each other by pairwise
    /// commutations within the circuit.
    pub fn commutes_in_circuit(&self, i: usize, j: usize) -> bool {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        a == b || !self.is_successor(a, b)
    }

    /// All edges `(i, j)` sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> =
            self.direct_succ.iter().enumerate().flat_map(|(i, l)| l.iter().map(move |&j| (i, j))).collect();
        out.sort_unstable();
        out
    }

    /// Whether `set` is a connected part: no vertex outside it lies on a path
    /// between two of its members.
    pub fn is_connected(&self, set: &FixedBitSet) -> bool {
        (0..self.len())
            .filter(|&v| !set.contains(v))
            .all(|v| self.pred_set[v].is_disjoint(set) || self.succ_set[v].is_disjoint(set))
    }

    /// Convenience wrapper over [`CanonicalDag::is_connected`].
    pub fn is_connected_indices(&self, indices: &[usize]) -> bool {
        self.is_connected(&self.index_set(indices))
    }

    pub fn index_set(&self, indices: &[usize]) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.len());
        set.extend(indices.iter().copied());
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::Gate;

    fn fig1() -> Circuit {
        Circuit::from_gates(vec![Gate::cx(1, 2), Gate::cx(1, 3), Gate::z(1), Gate::ccx(2, 3, 1)])
    }

    #[test]
    fn edges_of_small_example() {
        let dag = CanonicalDag::build(&fig1(), &CommutationOracle::default());
        assert_eq!(dag.edges(), vec![(0, 3), (1, 3), (2, 3)]);
        assert_eq!(dag.successors(0), &[3]);
        assert_eq!(dag.predecessors(3), &[0, 1, 2]);
        assert!(dag.commutes_in_circuit(0, 2));
        assert!(!dag.commutes_in_circuit(2, 3));
    }

    #[test]
    fn chain_has_no_shortcut_edges() {
        let c = Circuit::from_gates(vec![Gate::x(0), Gate::h(0), Gate::x(0)]);
        let dag = CanonicalDag::build(&c, &CommutationOracle::default());
        assert_eq!(dag.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(dag.successors(0), &[1, 2]);
    }

    #[test]
    fn connectedness() {
        let c = Circuit::from_gates(vec![Gate::x(0), Gate::h(0), Gate::x(0), Gate::x(1)]);
        let dag = CanonicalDag::build(&c, &CommutationOracle::default());
        assert!(dag.is_connected_indices(&[0, 1]));
        assert!(!dag.is_connected_indices(&[0, 2]));
        assert!(dag.is_connected_indices(&[0, 3]));
    }

    #[test]
    fn from_edges_matches_build() {
        let dag = CanonicalDag::from_edges(4, &[(0, 3), (2, 3), (1, 3)]);
        assert_eq!(dag, CanonicalDag::build(&fig1(), &CommutationOracle::default()));
    }
}
