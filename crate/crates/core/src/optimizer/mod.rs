//! Optimization passes built on the matcher.
//!
//! [`template_optimize`] rewrites occurrences of identity templates: if a
//! template `T` factors (after commutations) into `D E F` and `E` occurs in
//! the circuit, then `E` equals `D^-1 F^-1` up to reordering, and the
//! cheaper of the two is kept. [`find_longest_subcircuits`] searches for the
//! largest connected groups of gates confined to a few qubits.

mod peephole;
mod template;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::brute::{brute_force_matches, BruteCaps, BruteError};
use crate::circuit::Circuit;
use crate::dag::CanonicalDag;
use crate::gate::Qubit;
use crate::matcher::{pattern_match_with_dags, Match, MatchError, MatchOptions};

pub use peephole::{find_longest_subcircuits, find_longest_subcircuits_on, Subcircuit};
pub use template::{builtin_templates, load_template_dir, CostModel, Template, TemplateError, TEMPLATE_TOLERANCE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("gate set is not a connected part of the circuit")]
    NotConnected,
    #[error("gate index {0} is out of range")]
    OutOfRange(usize),
}

/// A reordering of a circuit into `prefix, block, suffix` that is
/// equivalent to the original under the commutation rules used for the DAG.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extraction {
    /// Original gate indices in their new order.
    pub order: Vec<usize>,
    pub prefix_len: usize,
    pub block_len: usize,
}

impl Extraction {
    pub fn prefix(&self) -> &[usize] {
        &self.order[..self.prefix_len]
    }

    pub fn block(&self) -> &[usize] {
        &self.order[self.prefix_len..self.prefix_len + self.block_len]
    }

    pub fn suffix(&self) -> &[usize] {
        &self.order[self.prefix_len + self.block_len..]
    }

    pub fn apply(&self, c: &Circuit) -> Circuit {
        c.select(&self.order)
    }
}

/// Moves the gates of `selected` next to each other. Unselected gates that
/// must precede some selected gate go to the left, all others to the right;
/// each group keeps its original relative order.
pub fn extract_adjacent(gc: &CanonicalDag, selected: &[usize]) -> Result<Extraction, ExtractError> {
    let n = gc.len();
    if let Some(&bad) = selected.iter().find(|&&s| s >= n) {
        return Err(ExtractError::OutOfRange(bad));
    }
    let block_set = gc.index_set(selected);
    if !gc.is_connected(&block_set) {
        return Err(ExtractError::NotConnected);
    }
    let mut left = FixedBitSet::with_capacity(n);
    for s in block_set.ones() {
        left.union_with(gc.predecessor_set(s));
    }
    left.difference_with(&block_set);
    let prefix: Vec<usize> = left.ones().collect();
    let block: Vec<usize> = block_set.ones().collect();
    let suffix = (0..n).filter(|&k| !left.contains(k) && !block_set.contains(k));
    let (prefix_len, block_len) = (prefix.len(), block.len());
    let order = prefix.into_iter().chain(block).chain(suffix).collect();
    Ok(Extraction { order, prefix_len, block_len })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstitutionError {
    #[error("template side: {0}")]
    Template(ExtractError),
    #[error("circuit side: {0}")]
    Circuit(ExtractError),
}

/// Gates that can stand in for the matched part of `t`: the inverses of the
/// unmatched template gates before it, then of those after it, both in
/// reverse order. Qubits are relabeled into circuit labels; template qubits
/// without an image get circuit labels that the match does not use.
pub fn template_replacement(
    t: &Circuit,
    gt: &CanonicalDag,
    m: &Match,
    circuit_labels: &BTreeSet<Qubit>,
) -> Result<Circuit, ExtractError> {
    let parts = extract_adjacent(gt, &m.pattern_indices())?;
    let before = t.select(parts.prefix()).dagger_reverse();
    let after = t.select(parts.suffix()).dagger_reverse();
    let map = complete_map(&t.qubit_set(), &m.qubit_map, circuit_labels);
    Ok(before.concat(&after).relabeled(|q| map[&q]))
}

/// Extends `partial` to every qubit of `pattern_qubits`, injectively, using
/// unused circuit labels first and fresh labels after them.
fn complete_map(
    pattern_qubits: &BTreeSet<Qubit>,
    partial: &BTreeMap<Qubit, Qubit>,
    circuit_labels: &BTreeSet<Qubit>,
) -> BTreeMap<Qubit, Qubit> {
    let mut map = partial.clone();
    let used: BTreeSet<Qubit> = map.values().copied().collect();
    let bound = circuit_labels.iter().chain(&used).max().map_or(0, |&q| q + 1);
    let mut spare = circuit_labels.iter().copied().chain(bound..).filter(|q| !used.contains(q));
    for &p in pattern_qubits {
        map.entry(p).or_insert_with(|| spare.next().expect("fresh labels are unbounded"));
    }
    map
}

/// Rewrites the occurrence `m` of template `t` in `c`. Returns the new
/// circuit when its cost is strictly lower, or not higher when
/// `allow_neutral` is set; `None` otherwise.
pub fn apply_template_substitution(
    c: &Circuit,
    gc: &CanonicalDag,
    t: &Template,
    gt: &CanonicalDag,
    m: &Match,
    cost: &CostModel,
    allow_neutral: bool,
) -> Result<Option<Circuit>, SubstitutionError> {
    let replacement = template_replacement(t.circuit(), gt, m, &c.qubit_set()).map_err(SubstitutionError::Template)?;
    let parts = extract_adjacent(gc, &m.circuit_indices()).map_err(SubstitutionError::Circuit)?;
    let old = cost.cost(parts.block().iter().map(|&k| &c[k]));
    let new = cost.cost(&replacement);
    let improves = new < old || (allow_neutral && new <= old);
    if !improves {
        return Ok(None);
    }
    let out = c.select(parts.prefix()).concat(&replacement).concat(&c.select(parts.suffix()));
    Ok(Some(out))
}

/// Matching engine used by the optimizer.
#[derive(Clone, Debug)]
pub enum Engine {
    Exact(MatchOptions),
    Brute(BruteCaps),
}

impl Default for Engine {
    fn default() -> Self {
        Engine::Exact(MatchOptions::default())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OptimizeError {
    #[error(transparent)]
    Brute(#[from] BruteError),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
}

#[derive(Clone, Debug)]
pub struct OptimizeOptions {
    pub cost: CostModel,
    /// Upper bound on full passes over the template list.
    pub max_iters: usize,
    /// Accept substitutions that keep the cost unchanged.
    pub allow_neutral: bool,
    pub engine: Engine,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions { cost: CostModel::default(), max_iters: 100, allow_neutral: false, engine: Engine::default() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TemplateStats {
    pub name: String,
    pub matches_found: usize,
    pub applied: usize,
    pub cost_saved: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct OptimizeReport {
    pub gates_before: usize,
    pub gates_after: usize,
    pub cost_before: f64,
    pub cost_after: f64,
    pub iterations: usize,
    pub seconds: f64,
    pub templates: Vec<TemplateStats>,
}

fn find_matches(
    c: &Circuit,
    gc: &CanonicalDag,
    t: &Circuit,
    gt: &CanonicalDag,
    engine: &Engine,
) -> Result<Vec<Match>, OptimizeError> {
    match engine {
        Engine::Exact(opts) => match pattern_match_with_dags(c, gc, t, gt, opts) {
            Ok(ms) => Ok(ms),
            Err(MatchError::PatternTooWide { .. } | MatchError::EmptyPattern) => Ok(Vec::new()),
        },
        Engine::Brute(caps) => {
            if c.is_empty() || t.num_qubits() > c.num_qubits() {
                return Ok(Vec::new());
            }
            let oracle = crate::commute::CommutationOracle::default();
            Ok(crate::matcher::filter_maximal(brute_force_matches(c, t, *caps, &oracle)?))
        }
    }
}

/// Greedy template rewriting until no template improves the circuit or
/// `max_iters` passes over the templates have run.
///
/// Within a pass, each template is applied repeatedly: matches are tried
/// from the largest down, ties broken by the earliest circuit gate, and the
/// first one that lowers the cost is applied before matching again.
pub fn template_optimize(
    c: &Circuit,
    templates: &[Template],
    opts: &OptimizeOptions,
) -> Result<(Circuit, OptimizeReport), OptimizeError> {
    let started = Instant::now();
    let oracle = match &opts.engine {
        Engine::Exact(m) => m.oracle,
        Engine::Brute(_) => Default::default(),
    };
    let template_dags: Vec<CanonicalDag> =
        templates.iter().map(|t| CanonicalDag::build(t.circuit(), &oracle)).collect();
    let mut stats: Vec<TemplateStats> =
        templates.iter().map(|t| TemplateStats { name: t.name().to_string(), ..Default::default() }).collect();
    let mut current = c.clone();
    let mut gc = CanonicalDag::build(&current, &oracle);
    let mut iterations = 0;
    let mut changed = true;
    while changed && iterations < opts.max_iters {
        changed = false;
        iterations += 1;
        for ((t, gt), st) in templates.iter().zip(&template_dags).zip(&mut stats) {
            loop {
                let mut matches = find_matches(&current, &gc, t.circuit(), gt, &opts.engine)?;
                st.matches_found += matches.len();
                matches.sort_by_key(|m| (std::cmp::Reverse(m.len()), m.circuit_indices().into_iter().min()));
                let mut applied = None;
                for m in &matches {
                    if let Some(next) =
                        apply_template_substitution(&current, &gc, t, gt, m, &opts.cost, opts.allow_neutral)?
                    {
                        applied = Some(next);
                        break;
                    }
                }
                let Some(next) = applied else { break };
                st.applied += 1;
                st.cost_saved += opts.cost.cost(&current) - opts.cost.cost(&next);
                current = next;
                gc = CanonicalDag::build(&current, &oracle);
                changed = true;
                if opts.allow_neutral {
                    // Neutral rewrites can cycle; one per template per pass.
                    break;
                }
            }
        }
    }
    let report = OptimizeReport {
        gates_before: c.len(),
        gates_after: current.len(),
        cost_before: opts.cost.cost(c),
        cost_after: opts.cost.cost(&current),
        iterations,
        seconds: started.elapsed().as_secs_f64(),
        templates: stats,
    };
    Ok((current, report))
}
