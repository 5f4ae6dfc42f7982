use std::collections::BTreeSet;
use std::fmt;
use std::ops::Index;

use crate::gate::{Gate, Qubit};

/// An ordered gate list. Gate `k` of the list is applied after gates `0..k`,
/// so the circuit operator is `U_{n-1} ··· U_1 U_0`.
///
/// Indices are zero-based throughout the library; the CLI and JSON output
/// shift them to one-based numbering.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new() -> Circuit {
        Circuit::default()
    }

    pub fn from_gates(gates: Vec<Gate>) -> Circuit {
        Circuit { gates }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Gate> {
        self.gates.iter()
    }

    /// Labels of all qubits touched by some gate.
    pub fn qubit_set(&self) -> BTreeSet<Qubit> {
        self.gates.iter().flat_map(|g| g.qubits().iter().copied()).collect()
    }

    pub fn num_qubits(&self) -> usize {
        self.qubit_set().len()
    }

    /// Largest label in use plus one (0 for an empty circuit).
    pub fn label_bound(&self) -> usize {
        self.gates.iter().flat_map(|g| g.qubits().iter()).map(|&q| q as usize + 1).max().unwrap_or(0)
    }

    /// Reversed gate order with each gate inverted. Its operator is the
    /// adjoint of this circuit's operator.
    pub fn dagger_reverse(&self) -> Circuit {
        Circuit { gates: self.gates.iter().rev().map(Gate::inverse).collect() }
    }

    /// The gates at `indices`, in the order given.
    pub fn select(&self, indices: &[usize]) -> Circuit {
        Circuit { gates: indices.iter().map(|&k| self.gates[k].clone()).collect() }
    }

    pub fn concat(&self, other: &Circuit) -> Circuit {
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Circuit { gates }
    }

    pub fn relabeled(&self, mut map: impl FnMut(Qubit) -> Qubit) -> Circuit {
        Circuit { gates: self.gates.iter().map(|g| g.relabeled(&mut map)).collect() }
    }
}

impl Index<usize> for Circuit {
    type Output = Gate;

    fn index(&self, k: usize) -> &Gate {
        &self.gates[k]
    }
}

impl FromIterator<Gate> for Circuit {
    fn from_iter<I: IntoIterator<Item = Gate>>(iter: I) -> Circuit {
        Circuit { gates: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a Circuit {
    type Item = &'a Gate;
    type IntoIter = std::slice::Iter<'a, Gate>;

    fn into_iter(self) -> Self::IntoIter {
        self.gates.iter()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}
