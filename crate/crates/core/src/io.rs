//! Text format for circuits and a seeded random circuit generator.
//!
//! ```text
//! # optional comments
//! qubits 3
//! cx 1 2
//! u3(1.25,0,-0.5) 2
//! ```
//!
//! A file whose first non-empty line is `# template` is a template; a
//! following `# name: <name>` line names it.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::Circuit;
use crate::gate::{Gate, GateError, GateKind, Qubit};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {source}")]
    Gate { line: usize, source: GateError },
    #[error("line {line}: malformed number `{text}`")]
    Number { line: usize, text: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: qubit {qubit} is outside the declared {declared} qubits")]
    UndeclaredQubit { line: usize, qubit: Qubit, declared: u32 },
}

/// A parsed circuit file with its header information.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CircuitFile {
    pub circuit: Circuit,
    pub declared_qubits: Option<u32>,
    pub is_template: bool,
    pub name: Option<String>,
}

pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    parse_circuit_file(text).map(|f| f.circuit)
}

pub fn parse_circuit_file(text: &str) -> Result<CircuitFile, ParseError> {
    let mut file = CircuitFile::default();
    let mut seen_content = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            let comment = comment.trim();
            if !seen_content && comment.eq_ignore_ascii_case("template") {
                file.is_template = true;
            } else if let Some(name) = comment.strip_prefix("name:") {
                file.name = Some(name.trim().to_string());
            }
            seen_content = true;
            continue;
        }
        seen_content = true;
        let body = trimmed.split('#').next().unwrap_or("").trim();
        if let Some(rest) = body.strip_prefix("qubits") {
            if rest.starts_with(char::is_whitespace) {
                if !file.circuit.is_empty() || file.declared_qubits.is_some() {
                    return Err(ParseError::Syntax { line, message: "`qubits` header must precede all gates".into() });
                }
                let n = rest.trim();
                file.declared_qubits = Some(n.parse().map_err(|_| ParseError::Number { line, text: n.to_string() })?);
                continue;
            }
        }
        let gate = parse_gate_line(body, line)?;
        if let Some(declared) = file.declared_qubits {
            if let Some(&q) = gate.qubits().iter().find(|&&q| q >= declared) {
                return Err(ParseError::UndeclaredQubit { line, qubit: q, declared });
            }
        }
        file.circuit.push(gate);
    }
    Ok(file)
}

fn parse_gate_line(body: &str, line: usize) -> Result<Gate, ParseError> {
    let (head, operands) = match body.find('(') {
        Some(open) => {
            let close = body[open..]
                .find(')')
                .map(|c| open + c)
                .ok_or_else(|| ParseError::Syntax { line, message: "unclosed parameter list".into() })?;
            (&body[..close + 1], &body[close + 1..])
        }
        None => match body.find(char::is_whitespace) {
            Some(sp) => (&body[..sp], &body[sp..]),
            None => (body, ""),
        },
    };
    let (name, params) = match head.find('(') {
        Some(open) => {
            let inner = &head[open + 1..head.len() - 1];
            let params = inner
                .split(',')
                .map(|p| {
                    let p = p.trim();
                    p.parse::<f64>().map_err(|_| ParseError::Number { line, text: p.to_string() })
                })
                .collect::<Result<Vec<f64>, _>>()?;
            (head[..open].trim(), params)
        }
        None => (head, Vec::new()),
    };
    let qubits = operands
        .split_whitespace()
        .map(|q| q.parse::<Qubit>().map_err(|_| ParseError::Number { line, text: q.to_string() }))
        .collect::<Result<Vec<Qubit>, _>>()?;
    Gate::named(name, params, qubits).map_err(|source| ParseError::Gate { line, source })
}

/// Text form accepted by [`parse_circuit`]. Parameters are written with
/// round-trip precision.
pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    if !c.is_empty() {
        out.push_str(&format!("qubits {}\n", c.label_bound()));
    }
    out.push_str(&c.to_string());
    out
}

/// Template file text with header lines.
pub fn serialize_template(name: &str, c: &Circuit) -> String {
    format!("# template\n# name: {name}\n{}", serialize_circuit(c))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("random circuits over x/cx/ccx need at least 3 qubits, got {0}")]
    TooFewQubits(usize),
}

/// The generator behind every seeded routine: ChaCha8, which produces the
/// same stream on every platform.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n_gates` gates drawn uniformly from {x, cx, ccx} on distinct qubits
/// chosen uniformly from `0..n_qubits`.
pub fn random_circuit(n_gates: usize, n_qubits: usize, seed: u64) -> Result<Circuit, ConfigError> {
    random_circuit_with(&mut seeded_rng(seed), n_gates, n_qubits)
}

pub fn random_circuit_with(rng: &mut impl Rng, n_gates: usize, n_qubits: usize) -> Result<Circuit, ConfigError> {
    if n_qubits < 3 {
        return Err(ConfigError::TooFewQubits(n_qubits));
    }
    const KINDS: [GateKind; 3] = [GateKind::X, GateKind::Cx, GateKind::Ccx];
    let mut labels: Vec<Qubit> = (0..n_qubits as Qubit).collect();
    let mut c = Circuit::new();
    for _ in 0..n_gates {
        let kind = KINDS[rng.gen_range(0..KINDS.len())];
        let (chosen, _) = labels.partial_shuffle(rng, kind.spec().arity);
        c.push(Gate::new(kind, Vec::new(), chosen.to_vec()).expect("distinct labels"));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_example() {
        let c = parse_circuit("cx 1 2\ncx 1 3\nz 1\nccx 2 3 1").unwrap();
        assert_eq!(c.gates(), &[Gate::cx(1, 2), Gate::cx(1, 3), Gate::z(1), Gate::ccx(2, 3, 1)]);
        assert!(parse_circuit("").unwrap().is_empty());
        let u = parse_circuit("u3(1.25,0,-0.5) 2").unwrap();
        assert_eq!(u[0], Gate::u3(1.25, 0.0, -0.5, 2));
    }

    #[test]
    fn headers_and_comments() {
        let f = parse_circuit_file("# template\n# name: xx\nqubits 2\nx 1 # trailing\n\nx 1\n").unwrap();
        assert!(f.is_template);
        assert_eq!(f.name.as_deref(), Some("xx"));
        assert_eq!(f.declared_qubits, Some(2));
        assert_eq!(f.circuit.len(), 2);
        assert!(!parse_circuit_file("# hello\n# template\nx 0").unwrap().is_template);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_circuit("x 0\nfoo 1").unwrap_err();
        assert!(matches!(e, ParseError::Gate { line: 2, source: GateError::UnknownGate(_) }));
        assert!(matches!(
            parse_circuit("cx 1").unwrap_err(),
            ParseError::Gate { line: 1, source: GateError::Arity { .. } }
        ));
        assert!(matches!(
            parse_circuit("cx 1 1").unwrap_err(),
            ParseError::Gate { line: 1, source: GateError::DuplicateQubit { .. } }
        ));
        assert!(matches!(parse_circuit("u3(1.0,zz,0) 1").unwrap_err(), ParseError::Number { line: 1, .. }));
        assert!(matches!(parse_circuit("x -1").unwrap_err(), ParseError::Number { .. }));
        assert!(matches!(parse_circuit("qubits 2\nx 2").unwrap_err(), ParseError::UndeclaredQubit { .. }));
        assert!(matches!(parse_circuit("u3(1,2,3 0").unwrap_err(), ParseError::Syntax { .. }));
    }

    #[test]
    fn round_trip() {
        let c = Circuit::from_gates(vec![Gate::u3(0.1, -1e-300, std::f64::consts::E, 4), Gate::ccx(3, 0, 1)]);
        assert_eq!(parse_circuit(&serialize_circuit(&c)).unwrap(), c);
        let f = parse_circuit_file(&serialize_template("t", &c)).unwrap();
        assert!(f.is_template);
        assert_eq!(f.circuit, c);
    }

    #[test]
    fn random_circuits_are_deterministic_and_well_formed() {
        let a = random_circuit(100, 10, 42).unwrap();
        assert_eq!(a, random_circuit(100, 10, 42).unwrap());
        assert_ne!(a, random_circuit(100, 10, 43).unwrap());
        assert_eq!(a.len(), 100);
        for g in &a {
            assert!(matches!(g.kind(), GateKind::X | GateKind::Cx | GateKind::Ccx));
            assert!(g.qubits().iter().all(|&q| q < 10));
        }
        assert!(random_circuit(0, 5, 1).unwrap().is_empty());
        assert_eq!(random_circuit(1, 2, 1), Err(ConfigError::TooFewQubits(2)));
    }
}
