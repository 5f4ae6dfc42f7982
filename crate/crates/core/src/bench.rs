//! Runtime benchmarks on seeded random circuits, written as CSV.
//!
//! Every `(point, trial)` gets its own seed drawn from the base seed, so a
//! run is reproducible except for the timing columns.

use std::io::Write;
use std::time::Instant;

use rand::RngCore;
use serde::Serialize;
use thiserror::Error;

use crate::brute::{brute_force_matches, BruteCaps, BruteError};
use crate::circuit::Circuit;
use crate::dag::CanonicalDag;
use crate::gate::Gate;
use crate::io::{random_circuit, seeded_rng, ConfigError};
use crate::matcher::{pattern_match_with_dags, MatchError, MatchOptions};
use crate::optimizer::{builtin_templates, find_longest_subcircuits, template_optimize, Engine, OptimizeOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchMode {
    /// Pattern matching while the gate count grows.
    ScalingGates,
    /// Pattern matching while the qubit count grows.
    ScalingQubits,
    /// Template optimization with the shipped library.
    OptimizeRandom,
    /// Longest two-qubit runs.
    Peephole,
}

impl BenchMode {
    pub fn name(self) -> &'static str {
        match self {
            BenchMode::ScalingGates => "scaling-gates",
            BenchMode::ScalingQubits => "scaling-qubits",
            BenchMode::OptimizeRandom => "optimize-random",
            BenchMode::Peephole => "peephole",
        }
    }

    pub fn from_name(s: &str) -> Option<BenchMode> {
        [BenchMode::ScalingGates, BenchMode::ScalingQubits, BenchMode::OptimizeRandom, BenchMode::Peephole]
            .into_iter()
            .find(|m| m.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub mode: BenchMode,
    /// Gate counts; only the first is used by `scaling-qubits`.
    pub gate_counts: Vec<usize>,
    /// Qubit counts; only the first is used outside `scaling-qubits`.
    pub qubit_counts: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Pattern for the scaling modes.
    pub pattern: Circuit,
    pub match_options: MatchOptions,
    /// Use the exhaustive matcher instead of the exact one.
    pub brute: bool,
    /// Window width for `peephole`.
    pub width: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            mode: BenchMode::ScalingGates,
            gate_counts: (10..=250).step_by(30).collect(),
            qubit_counts: vec![6],
            trials: 5,
            seed: 0,
            pattern: default_pattern(),
            match_options: MatchOptions { parallel: false, ..Default::default() },
            brute: false,
            width: 2,
        }
    }
}

/// Six gates on three qubits, used as the default scaling pattern.
pub fn default_pattern() -> Circuit {
    Circuit::from_gates(vec![Gate::x(0), Gate::x(2), Gate::cx(2, 1), Gate::cx(1, 2), Gate::x(1), Gate::ccx(0, 1, 2)])
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Brute(#[from] BruteError),
    #[error("optimizer: {0}")]
    Optimize(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// One CSV line. Trial rows leave the summary columns empty and the other
/// way round.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BenchRow {
    pub row_type: &'static str,
    pub mode: &'static str,
    pub n_gates: usize,
    pub n_qubits: usize,
    pub trial: Option<usize>,
    pub seed: Option<u64>,
    pub engine: &'static str,
    pub heuristic_qubits: Option<usize>,
    pub heuristic_backward: Option<String>,
    /// Matches, applied substitutions, or runs, depending on the mode.
    pub results: Option<usize>,
    /// Largest match or run; gate count after optimization.
    pub best: Option<usize>,
    pub canon_seconds: Option<f64>,
    pub seconds: Option<f64>,
    pub mean_seconds: Option<f64>,
    pub stddev_seconds: Option<f64>,
}

/// Runs the benchmark; rows come out sorted by point, then trial, with
/// each point's summary row after its trials.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    let points: Vec<(usize, usize)> = match cfg.mode {
        BenchMode::ScalingQubits => {
            let g = cfg.gate_counts.first().copied().unwrap_or(100);
            cfg.qubit_counts.iter().map(|&q| (g, q)).collect()
        }
        _ => {
            let q = cfg.qubit_counts.first().copied().unwrap_or(6);
            cfg.gate_counts.iter().map(|&g| (g, q)).collect()
        }
    };
    let heur = cfg.match_options.heuristics;
    let engine = if cfg.brute { "brute" } else { "exact" };
    let backward = heur.backward_depth.zip(heur.backward_survivors).map(|(l, s)| format!("{l},{s}"));
    let templates = match cfg.mode {
        BenchMode::OptimizeRandom => builtin_templates().map_err(|e| BenchError::Optimize(e.to_string()))?,
        _ => Vec::new(),
    };
    let mut seeds = seeded_rng(cfg.seed);
    let mut rows = Vec::new();
    for &(n_gates, n_qubits) in &points {
        let mut times = Vec::with_capacity(cfg.trials);
        for trial in 0..cfg.trials {
            let seed = seeds.next_u64();
            let c = random_circuit(n_gates, n_qubits, seed)?;
            let oracle = &cfg.match_options.oracle;
            let t0 = Instant::now();
            let gc = CanonicalDag::build(&c, oracle);
            let canon = t0.elapsed().as_secs_f64();
            let t1 = Instant::now();
            let (results, best) = match cfg.mode {
                BenchMode::ScalingGates | BenchMode::ScalingQubits => {
                    let ms = if cfg.brute {
                        brute_force_matches(&c, &cfg.pattern, BruteCaps::default(), oracle)?
                    } else {
                        let gt = CanonicalDag::build(&cfg.pattern, oracle);
                        pattern_match_with_dags(&c, &gc, &cfg.pattern, &gt, &cfg.match_options)?
                    };
                    (ms.len(), ms.iter().map(|m| m.len()).max().unwrap_or(0))
                }
                BenchMode::OptimizeRandom => {
                    let opts = OptimizeOptions {
                        engine: if cfg.brute {
                            Engine::Brute(BruteCaps::default())
                        } else {
                            Engine::Exact(cfg.match_options.clone())
                        },
                        ..Default::default()
                    };
                    let (out, report) =
                        template_optimize(&c, &templates, &opts).map_err(|e| BenchError::Optimize(e.to_string()))?;
                    (report.templates.iter().map(|s| s.applied).sum(), out.len())
                }
                BenchMode::Peephole => {
                    let runs = find_longest_subcircuits(&c, &gc, cfg.width);
                    (runs.len(), runs.first().map_or(0, |r| r.len()))
                }
            };
            let seconds = t1.elapsed().as_secs_f64();
            times.push(seconds);
            rows.push(BenchRow {
                row_type: "trial",
                mode: cfg.mode.name(),
                n_gates,
                n_qubits,
                trial: Some(trial),
                seed: Some(seed),
                engine,
                heuristic_qubits: heur.qubit_exploration,
                heuristic_backward: backward.clone(),
                results: Some(results),
                best: Some(best),
                canon_seconds: Some(canon),
                seconds: Some(seconds),
                ..Default::default()
            });
        }
        let (mean, stddev) = mean_stddev(&times);
        rows.push(BenchRow {
            row_type: "summary",
            mode: cfg.mode.name(),
            n_gates,
            n_qubits,
            engine,
            heuristic_qubits: heur.qubit_exploration,
            heuristic_backward: backward.clone(),
            mean_seconds: Some(mean),
            stddev_seconds: Some(stddev),
            ..Default::default()
        });
    }
    Ok(rows)
}

/// Sample mean and (n-1) standard deviation; zero deviation for one sample.
pub fn mean_stddev(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn write_csv(rows: &[BenchRow], out: impl Write) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares polynomial fit `y ~ sum c_k x^k` for `k = 0..=degree`,
/// solved through the normal equations. Returns the coefficients in
/// ascending degree.
pub fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> Option<Vec<f64>> {
    let m = degree + 1;
    if xs.len() != ys.len() || xs.len() < m {
        return None;
    }
    let mut a = vec![vec![0.0; m + 1]; m];
    for (&x, &y) in xs.iter().zip(ys) {
        let powers: Vec<f64> = (0..m).map(|k| x.powi(k as i32)).collect();
        for r in 0..m {
            for c in 0..m {
                a[r][c] += powers[r] * powers[c];
            }
            a[r][m] += powers[r] * y;
        }
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..m {
        let pivot = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col {
                let f = row[col] / pivot_row[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
            }
        }
    }
    Some((0..m).map(|k| a[k][m] / a[k][k]).collect())
}
