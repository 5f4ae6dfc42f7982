//! Identity templates and gate cost models.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::circuit::Circuit;
use crate::io::{parse_circuit_file, ParseError};
use crate::simulator::{circuit_unitary, equal_up_to_phase, DenseUnitary, SimError};

/// Tolerance for the identity check at load time.
pub const TEMPLATE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("template `{name}` is empty")]
    Empty { name: String },
    #[error("template `{name}` does not multiply to the identity")]
    NotIdentity { name: String },
    #[error("template `{name}`: {source}")]
    Simulation { name: String, source: SimError },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: missing `# template` header")]
    NotATemplate { path: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// A gate sequence whose product is the identity up to global phase.
#[derive(Clone, Debug, PartialEq)]
pub struct Template {
    name: String,
    circuit: Circuit,
}

impl Template {
    /// Checks the identity property by simulation. Templates on more than
    /// `crate::simulator::MAX_QUBITS` qubits cannot be checked and are rejected.
    pub fn new(name: impl Into<String>, circuit: Circuit) -> Result<Template, TemplateError> {
        let name = name.into();
        if circuit.is_empty() {
            return Err(TemplateError::Empty { name });
        }
        let labels: Vec<_> = circuit.qubit_set().into_iter().collect();
        let check = |c: &Circuit| -> Result<bool, SimError> {
            let u = circuit_unitary(c)?;
            equal_up_to_phase(&u, &DenseUnitary::identity(&labels)?, TEMPLATE_TOLERANCE)
        };
        match check(&circuit) {
            Ok(true) => Ok(Template { name, circuit }),
            Ok(false) => Err(TemplateError::NotIdentity { name }),
            Err(source) => Err(TemplateError::Simulation { name, source }),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// Parses and verifies template file text. The name falls back to
    /// `fallback_name` when the file has no `# name:` line.
    pub fn parse(text: &str, fallback_name: &str, path: &str) -> Result<Template, TemplateError> {
        let file = parse_circuit_file(text).map_err(|source| TemplateError::Parse { path: path.into(), source })?;
        if !file.is_template {
            return Err(TemplateError::NotATemplate { path: path.into() });
        }
        Template::new(file.name.unwrap_or_else(|| fallback_name.to_string()), file.circuit)
    }
}

const BUILTIN: &[(&str, &str)] = &[
    ("xx", include_str!("../../templates/xx.qc")),
    ("hh", include_str!("../../templates/hh.qc")),
    ("zz", include_str!("../../templates/zz.qc")),
    ("ssdg", include_str!("../../templates/ssdg.qc")),
    ("ttdg", include_str!("../../templates/ttdg.qc")),
    ("ssz", include_str!("../../templates/ssz.qc")),
    ("ttsdg", include_str!("../../templates/ttsdg.qc")),
    ("cxcx", include_str!("../../templates/cxcx.qc")),
    ("ccxccx", include_str!("../../templates/ccxccx.qc")),
    ("five-cnot", include_str!("../../templates/five-cnot.qc")),
    ("x-through-control", include_str!("../../templates/x-through-control.qc")),
    ("x-through-toffoli", include_str!("../../templates/x-through-toffoli.qc")),
    ("cx-through-toffoli", include_str!("../../templates/cx-through-toffoli.qc")),
    ("cx-chain", include_str!("../../templates/cx-chain.qc")),
    ("swap-squared", include_str!("../../templates/swap-squared.qc")),
    ("hzhx", include_str!("../../templates/hzhx.qc")),
    ("hxhz", include_str!("../../templates/hxhz.qc")),
    ("h-cx-h-cz", include_str!("../../templates/h-cx-h-cz.qc")),
];

/// The shipped library, compiled into the binary and verified on every
/// call.
pub fn builtin_templates() -> Result<Vec<Template>, TemplateError> {
    BUILTIN.iter().map(|(name, text)| Template::parse(text, name, &format!("<builtin {name}>"))).collect()
}

/// Loads every `*.qc` file in `dir`, sorted by file name.
pub fn load_template_dir(dir: &Path) -> Result<Vec<Template>, TemplateError> {
    let io_err = |source| TemplateError::Io { path: dir.display().to_string(), source };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io_err)?
        .collect::<Result<Vec<_>, _>>()
        .map_err(io_err)?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "qc"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let shown = p.display().to_string();
            let text =
                std::fs::read_to_string(p).map_err(|source| TemplateError::Io { path: shown.clone(), source })?;
            let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("template");
            Template::parse(&text, stem, &shown)
        })
        .collect()
}

/// Additive gate cost: a weight per gate name with a default for the rest.
#[derive(Clone, Debug, PartialEq)]
pub struct CostModel {
    pub default_weight: f64,
    pub weights: BTreeMap<String, f64>,
}

impl Default for CostModel {
    /// Gate count.
    fn default() -> Self {
        CostModel { default_weight: 1.0, weights: BTreeMap::new() }
    }
}

impl CostModel {
    pub fn unit() -> Self {
        CostModel::default()
    }

    /// Counts CNOTs only.
    pub fn cnot() -> Self {
        CostModel { default_weight: 0.0, weights: [("cx".to_string(), 1.0)].into() }
    }

    pub fn from_preset(name: &str) -> Option<Self> {
        match name {
            "unit" | "gates" => Some(CostModel::unit()),
            "cnot" | "cx" => Some(CostModel::cnot()),
            _ => None,
        }
    }

    pub fn weight(&self, gate_name: &str) -> f64 {
        self.weights.get(gate_name).copied().unwrap_or(self.default_weight)
    }

    pub fn cost<'a>(&self, gates: impl IntoIterator<Item = &'a crate::gate::Gate>) -> f64 {
        gates.into_iter().map(|g| self.weight(g.name())).sum()
    }
}
