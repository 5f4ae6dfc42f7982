mod common;

use std::collections::BTreeSet;

use common::*;
use qcmatch::io::{random_circuit, random_circuit_with, seeded_rng};
use qcmatch::optimizer::{
    apply_template_substitution, builtin_templates, extract_adjacent, find_longest_subcircuits,
    find_longest_subcircuits_on, template_optimize, template_replacement, CostModel, OptimizeOptions, Template,
};
use qcmatch::simulator::circuits_equivalent;
use qcmatch::{pattern_match, CanonicalDag, Circuit, CommutationOracle, Match, MatchOptions};
use rand::Rng;

const TOL: f64 = 1e-8;

fn dag(c: &Circuit) -> CanonicalDag {
    CanonicalDag::build(c, &CommutationOracle::default())
}

fn equivalent(a: &Circuit, b: &Circuit) -> bool {
    circuits_equivalent(a, b, TOL).unwrap().0
}

fn five_cnot() -> Template {
    Template::new("five-cnot", circuit(FIVE_CNOT)).unwrap()
}

#[test]
fn peephole_window_on_two_and_three() {
    let c = circuit(PEEPHOLE_CIRCUIT);
    let runs = find_longest_subcircuits_on(&c, &dag(&c), &[2, 3]);
    assert_eq!(one_based(runs[0].gates.iter().copied()), [1, 2, 3, 4, 5, 8, 9, 10, 11, 12]);
    assert_eq!(runs[0].qubits, [2, 3]);
}

#[test]
fn peephole_matches_exhaustive_search() {
    let mut rng = seeded_rng(3);
    for _ in 0..40 {
        let len = rng.gen_range(1..=10);
        let c = random_circuit_with(&mut rng, len, 4).unwrap();
        let gc = dag(&c);
        let window = [0, 1, 2];
        let inside: Vec<usize> = (0..c.len()).filter(|&k| c[k].qubits().iter().all(|q| window.contains(q))).collect();
        let mut best = 0;
        for mask in 1u32..(1 << inside.len()) {
            let pick: Vec<usize> = (0..inside.len()).filter(|b| mask >> b & 1 == 1).map(|b| inside[b]).collect();
            if gc.is_connected_indices(&pick) {
                best = best.max(pick.len());
            }
        }
        let runs = find_longest_subcircuits_on(&c, &gc, &window);
        assert_eq!(runs.first().map_or(0, |r| r.len()), best, "{c}");
        for r in &runs {
            assert!(gc.is_connected_indices(&r.gates));
        }
    }
}

#[test]
fn peephole_on_a_cnot_line() {
    // The disjoint `cx 3 4` lets the two `cx 1 2` join; the two `cx 3 4`
    // stay apart because `cx 2 3` targets their control.
    let c = circuit("cx 1 2\ncx 3 4\ncx 1 2\ncx 2 3\ncx 3 4\n");
    let gc = dag(&c);
    let all = find_longest_subcircuits(&c, &gc, 2);
    assert_eq!((all[0].qubits.clone(), all[0].gates.clone()), (vec![1, 2], vec![0, 2]));
    assert!(all[1..].iter().all(|r| r.len() == 1));
    for r in &all {
        for &k in &r.gates {
            assert!(c[k].qubits().iter().all(|q| r.qubits.contains(q)));
        }
    }
}

#[test]
fn five_cnot_rewrites_four_gates_into_one() {
    let c = circuit("cx 2 3\ncx 1 2\ncx 2 3\ncx 1 2\n");
    let t = five_cnot();
    let gt = dag(t.circuit());
    let m = pattern_match(&c, t.circuit(), &MatchOptions::default()).unwrap().remove(0);
    assert_eq!(m.len(), 4);
    let out = apply_template_substitution(&c, &dag(&c), &t, &gt, &m, &CostModel::unit(), false).unwrap().unwrap();
    assert_eq!(out, circuit("cx 1 3"));
    assert!(equivalent(&c, &out));
}

#[test]
fn full_template_occurrence_is_deleted() {
    let c = circuit("h 4\ncx 2 3\ncx 1 2\ncx 2 3\ncx 1 2\ncx 1 3\nh 4\n");
    let (out, report) = template_optimize(&c, &[five_cnot()], &OptimizeOptions::default()).unwrap();
    assert_eq!(out, circuit("h 4\nh 4"));
    assert_eq!(report.gates_after, 2);
    assert!(equivalent(&c, &out));
}

#[test]
fn short_match_is_not_applied() {
    // Two of five gates: the replacement would need three.
    let c = circuit("cx 2 3\ncx 1 2\n");
    let t = five_cnot();
    let gt = dag(t.circuit());
    let gc = dag(&c);
    for m in pattern_match(&c, t.circuit(), &MatchOptions::default()).unwrap() {
        assert!(m.len() * 2 <= t.circuit().len());
        assert_eq!(apply_template_substitution(&c, &gc, &t, &gt, &m, &CostModel::unit(), false).unwrap(), None);
    }
}

#[test]
fn replacement_equals_matched_part_for_every_template_match() {
    // For each sub-match of each shipped template against itself, the
    // replacement gates are equivalent to the matched gates.
    for t in builtin_templates().unwrap() {
        let tc = t.circuit();
        let gt = dag(tc);
        let labels = tc.qubit_set();
        for m in pattern_match(tc, tc, &MatchOptions { dedup: false, ..Default::default() }).unwrap() {
            let replacement = template_replacement(tc, &gt, &m, &labels).unwrap();
            let block = extract_adjacent(&gt, &m.circuit_indices()).unwrap();
            let matched = tc.select(block.block());
            let mut support: BTreeSet<u32> = matched.qubit_set();
            support.extend(replacement.qubit_set());
            let pad = |x: &Circuit| {
                let mut p = x.clone();
                for &q in &support {
                    p.push(qcmatch::Gate::z(q));
                    p.push(qcmatch::Gate::z(q));
                }
                p
            };
            assert!(equivalent(&pad(&matched), &pad(&replacement)), "{} {:?}", t.name(), m.pairs);
        }
    }
}

#[test]
fn dagger_reverse_inverts() {
    let mut rng = seeded_rng(5);
    for _ in 0..20 {
        let mut c = random_circuit_with(&mut rng, 12, 4).unwrap();
        c.push(qcmatch::Gate::u3(rng.gen(), rng.gen(), rng.gen(), 1));
        c = c.concat(&circuit("s 2\nt 0\nh 3"));
        let both = c.concat(&c.dagger_reverse());
        let identity = Circuit::from_gates(
            c.qubit_set().into_iter().flat_map(|q| [qcmatch::Gate::x(q), qcmatch::Gate::x(q)]).collect(),
        );
        assert!(equivalent(&both, &identity));
    }
}

#[test]
fn extraction_of_a_planted_match_is_equivalent() {
    // Plant the four-CNOT half of the five-CNOT identity between random
    // gates and check that moving it together keeps the circuit unitary.
    let mut rng = seeded_rng(9);
    let t = five_cnot();
    let gt = dag(t.circuit());
    for seed in 0..20u64 {
        let noise = random_circuit(10, 5, seed).unwrap();
        let mut gates = noise.into_gates();
        let planted = circuit("cx 2 3\ncx 1 2\ncx 2 3\ncx 1 2\n");
        let mut at = 0;
        for g in planted.gates() {
            at = rng.gen_range(at..=gates.len());
            gates.insert(at, g.clone());
            at += 1;
        }
        let c = Circuit::from_gates(gates);
        let gc = dag(&c);
        let matches: Vec<Match> = pattern_match(&c, t.circuit(), &MatchOptions::default()).unwrap();
        for m in matches.iter().filter(|m| m.len() * 2 > t.circuit().len()) {
            let ex = extract_adjacent(&gc, &m.circuit_indices()).unwrap();
            assert!(equivalent(&c, &ex.apply(&c)));
            if let Some(out) = apply_template_substitution(&c, &gc, &t, &gt, m, &CostModel::unit(), false).unwrap() {
                assert!(out.len() < c.len());
                assert!(equivalent(&c, &out));
            }
        }
    }
}

#[test]
fn optimization_preserves_semantics() {
    let lib = builtin_templates().unwrap();
    let opts = OptimizeOptions {
        engine: qcmatch::optimizer::Engine::Exact(MatchOptions { parallel: false, ..Default::default() }),
        ..Default::default()
    };
    for seed in 0..10 {
        let c = random_circuit(30, 5, seed).unwrap();
        let (out, report) = template_optimize(&c, &lib, &opts).unwrap();
        assert!(report.cost_after <= report.cost_before);
        assert_eq!(report.gates_after, out.len());
        assert!(equivalent(&c, &out), "seed {seed}");
    }
}

#[test]
fn cnot_cost_model_only_counts_cnots() {
    let lib = builtin_templates().unwrap();
    let opts = OptimizeOptions { cost: CostModel::cnot(), ..Default::default() };
    let c = random_circuit(25, 4, 2).unwrap();
    let (out, report) = template_optimize(&c, &lib, &opts).unwrap();
    let cx = |c: &Circuit| c.iter().filter(|g| g.name() == "cx").count() as f64;
    assert_eq!(report.cost_after, cx(&out));
    assert!(report.cost_after <= report.cost_before);
    assert!(equivalent(&c, &out));
}
