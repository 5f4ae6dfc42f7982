//! Command-line front end.
//!
//! Gate indices in all output are one-based; qubit labels are printed as
//! they appear in the input files.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bench::{default_pattern, run_benchmark, write_csv, BenchConfig, BenchError, BenchMode};
use crate::brute::{brute_force_matches, BruteCaps, BruteError};
use crate::circuit::Circuit;
use crate::dag::CanonicalDag;
use crate::gate::Qubit;
use crate::heuristics::HeuristicConfig;
use crate::io::{parse_circuit, random_circuit, serialize_circuit};
use crate::matcher::{filter_maximal, pattern_match, sort_matches, Match, MatchError, MatchOptions};
use crate::optimizer::{
    builtin_templates, find_longest_subcircuits, find_longest_subcircuits_on, load_template_dir, template_optimize,
    CostModel, Engine, OptimizeError, OptimizeOptions, Subcircuit, TemplateError,
};
use crate::simulator::{circuits_equivalent, SimError, MAX_QUBITS, PHASE_TOLERANCE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "qcmatch", version, about = "Pattern matching and template optimization for quantum circuits")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for random circuits and benchmarks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Matching engine.
    #[arg(long, global = true, value_enum, default_value_t = EngineArg::Exact)]
    engine: EngineArg,
    /// Gates explored around each start gate to fix the qubit assignment.
    #[arg(long, global = true, value_name = "F")]
    heuristic_qubits: Option<usize>,
    /// Backward scenario pruning: wave length and survivors.
    #[arg(long, global = true, value_name = "L,S", value_parser = parse_pair)]
    heuristic_backward: Option<(usize, usize)>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Exact,
    Brute,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the canonical form (commutation DAG) of a circuit.
    Canon { file: PathBuf },
    /// Find maximal matches of a pattern in a circuit.
    Match {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        circuit: PathBuf,
        /// Keep dominated and duplicate matches.
        #[arg(long)]
        no_dedup: bool,
        /// Print at most this many matches.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Rewrite a circuit with identity templates.
    Optimize {
        file: PathBuf,
        /// Directory of template files; the built-in library otherwise.
        #[arg(long)]
        templates: Option<PathBuf>,
        /// Cost model preset: unit or cnot.
        #[arg(long, default_value = "unit")]
        cost: String,
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
        /// Accept substitutions that leave the cost unchanged.
        #[arg(long)]
        allow_neutral: bool,
        /// Write the optimized circuit here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Longest connected runs of gates on small qubit windows.
    Peephole {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        width: usize,
        /// Only this window, e.g. `2,3`.
        #[arg(long, value_delimiter = ',')]
        qubits: Option<Vec<Qubit>>,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Compare two circuits by simulation.
    Verify {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = PHASE_TOLERANCE)]
        tol: f64,
    },
    /// Generate a random circuit over x, cx and ccx.
    Random {
        #[arg(long)]
        gates: usize,
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a timing benchmark and write CSV.
    Bench {
        #[arg(long, default_value = "scaling-gates", value_parser = parse_mode)]
        mode: BenchMode,
        /// Gate counts: `N`, `A,B,C` or `START:END:STEP`.
        #[arg(long, default_value = "10:250:30", value_parser = parse_counts)]
        gates: Counts,
        /// Qubit counts, same syntax.
        #[arg(long, default_value = "6", value_parser = parse_counts)]
        qubits: Counts,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Pattern file for the scaling modes.
        #[arg(long)]
        pattern: Option<PathBuf>,
        /// Window width for the peephole mode.
        #[arg(long, default_value_t = 2)]
        width: usize,
        /// Run matching attempts in parallel.
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected L,S, got `{s}`"))?;
    let a = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

fn parse_mode(s: &str) -> Result<BenchMode, String> {
    BenchMode::from_name(s).ok_or_else(|| format!("unknown mode `{s}`"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Counts(Vec<usize>);

/// `N`, `A,B,C`, or `START:END:STEP` (inclusive end).
fn parse_counts(s: &str) -> Result<Counts, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    if let Some((start, rest)) = s.split_once(':') {
        let (end, step) = rest.split_once(':').ok_or_else(|| "expected START:END:STEP".to_string())?;
        let (start, end, step) = (num(start)?, num(end)?, num(step)?);
        if step == 0 {
            return Err("step must be positive".into());
        }
        return Ok(Counts((start..=end).step_by(step).collect()));
    }
    s.split(',').map(num).collect::<Result<_, _>>().map(Counts)
}

/// Failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Failure {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }

    fn cap(message: impl ToString) -> Failure {
        Failure { code: EXIT_CAP, message: message.to_string() }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Failure {
        match e {
            SimError::TooManyQubits { .. } => Failure::cap(e),
            _ => Failure::input(e),
        }
    }
}

impl From<BruteError> for Failure {
    fn from(e: BruteError) -> Failure {
        Failure::cap(e)
    }
}

impl From<MatchError> for Failure {
    fn from(e: MatchError) -> Failure {
        Failure::input(e)
    }
}

impl From<TemplateError> for Failure {
    fn from(e: TemplateError) -> Failure {
        match e {
            TemplateError::Simulation { source: SimError::TooManyQubits { .. }, .. } => Failure::cap(e),
            _ => Failure::input(e),
        }
    }
}

impl From<OptimizeError> for Failure {
    fn from(e: OptimizeError) -> Failure {
        match e {
            OptimizeError::Brute(b) => b.into(),
            other => Failure::input(other),
        }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Failure {
        match e {
            BenchError::Brute(b) => b.into(),
            other => Failure::input(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::input(e)
    }
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_circuit(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_text(path: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(Failure::input)?;
    Ok(writeln!(out, "{text}")?)
}

impl Global {
    fn match_options(&self) -> MatchOptions {
        MatchOptions {
            heuristics: HeuristicConfig {
                qubit_exploration: self.heuristic_qubits,
                backward_depth: self.heuristic_backward.map(|p| p.0),
                backward_survivors: self.heuristic_backward.map(|p| p.1),
            },
            ..Default::default()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Canon { file } => canon(g, file, out),
        Command::Match { pattern, circuit, no_dedup, limit } => run_match(g, pattern, circuit, !no_dedup, *limit, out),
        Command::Optimize { file, templates, cost, max_iters, allow_neutral, output } => {
            let cost =
                CostModel::from_preset(cost).ok_or_else(|| Failure::input(format!("unknown cost model `{cost}`")))?;
            optimize(g, file, templates.as_deref(), cost, *max_iters, *allow_neutral, output, out)
        }
        Command::Peephole { file, width, qubits, limit } => peephole(g, file, *width, qubits.as_deref(), *limit, out),
        Command::Verify { a, b, tol } => verify(g, a, b, *tol, out),
        Command::Random { gates, qubits, output } => {
            let c = random_circuit(*gates, *qubits, g.seed).map_err(Failure::input)?;
            write_text(output, &serialize_circuit(&c), out)
        }
        Command::Bench { mode, gates, qubits, trials, pattern, width, parallel, output } => {
            let pattern = match pattern {
                Some(p) => read_circuit(p)?,
                None => default_pattern(),
            };
            let cfg = BenchConfig {
                mode: *mode,
                gate_counts: gates.0.clone(),
                qubit_counts: qubits.0.clone(),
                trials: *trials,
                seed: g.seed,
                pattern,
                match_options: MatchOptions { parallel: *parallel, ..g.match_options() },
                brute: g.engine == EngineArg::Brute,
                width: *width,
            };
            let rows = run_benchmark(&cfg)?;
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf).map_err(Failure::input)?;
            write_text(output, &String::from_utf8_lossy(&buf), out)
        }
    }
}

fn canon(g: &Global, file: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let c = read_circuit(file)?;
    let dag = CanonicalDag::build(&c, &Default::default());
    let edges: Vec<[usize; 2]> = dag.edges().into_iter().map(|(a, b)| [a + 1, b + 1]).collect();
    if g.json {
        return emit_json(out, &json!({ "gates": c.len(), "edges": edges }));
    }
    writeln!(out, "{} gates, {} edges", c.len(), edges.len())?;
    for [a, b] in edges {
        writeln!(out, "{a} -> {b}")?;
    }
    Ok(())
}

fn run_match(
    g: &Global,
    pattern: &Path,
    circuit: &Path,
    dedup: bool,
    limit: Option<usize>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let t = read_circuit(pattern)?;
    let c = read_circuit(circuit)?;
    let mut matches: Vec<Match> = match g.engine {
        EngineArg::Exact => pattern_match(&c, &t, &MatchOptions { dedup, ..g.match_options() })?,
        EngineArg::Brute => {
            if t.num_qubits() > c.num_qubits() {
                return Err(MatchError::PatternTooWide { pattern: t.num_qubits(), circuit: c.num_qubits() }.into());
            }
            let all = brute_force_matches(&c, &t, BruteCaps::default(), &Default::default())?;
            if dedup {
                filter_maximal(all)
            } else {
                all
            }
        }
    };
    sort_matches(&mut matches);
    matches.truncate(limit.unwrap_or(usize::MAX));
    if g.json {
        let records: Vec<_> = matches.iter().map(Match::to_record).collect();
        return emit_json(out, &records);
    }
    writeln!(out, "{} matches", matches.len())?;
    for m in &matches {
        let pairs: Vec<String> = m.pairs.iter().map(|(a, x)| format!("{}:{}", a + 1, x + 1)).collect();
        let map: Vec<String> = m.qubit_map.iter().map(|(p, q)| format!("{p}->{q}")).collect();
        writeln!(out, "size {} pairs {} map {}", m.len(), pairs.join(" "), map.join(" "))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn optimize(
    g: &Global,
    file: &Path,
    templates: Option<&Path>,
    cost: CostModel,
    max_iters: usize,
    allow_neutral: bool,
    output: &Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let c = read_circuit(file)?;
    let library = match templates {
        Some(dir) => load_template_dir(dir)?,
        None => builtin_templates()?,
    };
    let engine = match g.engine {
        EngineArg::Exact => Engine::Exact(g.match_options()),
        EngineArg::Brute => Engine::Brute(BruteCaps::default()),
    };
    let opts = OptimizeOptions { cost, max_iters, allow_neutral, engine };
    let (optimized, report) = template_optimize(&c, &library, &opts)?;
    let verified = if c.qubit_set().union(&optimized.qubit_set()).count() <= MAX_QUBITS {
        Some(circuits_equivalent(&c, &optimized, PHASE_TOLERANCE)?.0)
    } else {
        None
    };
    let text = serialize_circuit(&optimized);
    if g.json {
        if output.is_some() {
            write_text(output, &text, out)?;
        }
        return emit_json(out, &json!({ "circuit": text, "report": report, "verified": verified }));
    }
    write_text(output, &text, out)?;
    if output.is_some() {
        writeln!(
            out,
            "cost {} -> {}, gates {} -> {}, {:.3}s, verified: {}",
            report.cost_before,
            report.cost_after,
            report.gates_before,
            report.gates_after,
            report.seconds,
            verified.map_or("skipped".to_string(), |v| v.to_string())
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct RunRecord {
    qubits: Vec<Qubit>,
    gates: Vec<usize>,
    size: usize,
}

fn peephole(
    g: &Global,
    file: &Path,
    width: usize,
    qubits: Option<&[Qubit]>,
    limit: Option<usize>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let c = read_circuit(file)?;
    if width == 0 || width > c.num_qubits().max(1) {
        return Err(Failure::input(format!(
            "width {width} must be between 1 and the circuit's {} qubits",
            c.num_qubits()
        )));
    }
    let dag = CanonicalDag::build(&c, &Default::default());
    let mut runs: Vec<Subcircuit> = match qubits {
        Some(window) => find_longest_subcircuits_on(&c, &dag, window),
        None => find_longest_subcircuits(&c, &dag, width),
    };
    runs.truncate(limit.unwrap_or(usize::MAX));
    let records: Vec<RunRecord> = runs
        .iter()
        .map(|r| RunRecord { qubits: r.qubits.clone(), gates: r.gates.iter().map(|k| k + 1).collect(), size: r.len() })
        .collect();
    if g.json {
        return emit_json(out, &records);
    }
    for r in &records {
        let q: Vec<String> = r.qubits.iter().map(ToString::to_string).collect();
        let gates: Vec<String> = r.gates.iter().map(ToString::to_string).collect();
        writeln!(out, "qubits {}: {} gates: {}", q.join(","), r.size, gates.join(" "))?;
    }
    Ok(())
}

fn verify(g: &Global, a: &Path, b: &Path, tol: f64, out: &mut dyn Write) -> Result<(), Failure> {
    let (ca, cb) = (read_circuit(a)?, read_circuit(b)?);
    let (equal, deviation) = circuits_equivalent(&ca, &cb, tol)?;
    if g.json {
        return emit_json(out, &json!({ "equal": equal, "deviation": deviation }));
    }
    writeln!(out, "{} max deviation {deviation:.3e}", if equal { "EQUAL" } else { "UNEQUAL" })?;
    Ok(())
}
