//! Pairwise commutation oracle.

use crate::circuit::Circuit;
use crate::gate::{Gate, Qubit, WireRole};
use crate::simulator::circuit_unitary_on;

/// Default tolerance for the numeric commutator check.
pub const COMMUTATION_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CommutationMode {
    /// Per-wire role table only. Gates with a generic role on a shared wire
    /// are treated as non-commuting.
    RuleTable,
    /// Compare `AB` and `BA` as dense matrices on the joint support.
    Numeric,
    /// Rule table, falling back to the numeric check when a generic role
    /// sits on a shared wire.
    #[default]
    Hybrid,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutationOracle {
    pub mode: CommutationMode,
    pub tolerance: f64,
}

impl Default for CommutationOracle {
    fn default() -> Self {
        CommutationOracle { mode: CommutationMode::Hybrid, tolerance: COMMUTATION_TOLERANCE }
    }
}

enum Verdict {
    Commute,
    Conflict,
    /// A generic role meets another gate on a shared wire.
    Undecided,
}

impl CommutationOracle {
    pub fn new(mode: CommutationMode) -> Self {
        CommutationOracle { mode, ..Default::default() }
    }

    pub fn commutes(&self, a: &Gate, b: &Gate) -> bool {
        if a == b {
            return true;
        }
        match self.mode {
            CommutationMode::Numeric => !shares_wire(a, b) || numeric(a, b, self.tolerance),
            CommutationMode::RuleTable => matches!(rule_table(a, b), Verdict::Commute),
            CommutationMode::Hybrid => match rule_table(a, b) {
                Verdict::Commute => true,
                Verdict::Conflict => false,
                Verdict::Undecided => numeric(a, b, self.tolerance),
            },
        }
    }
}

fn shares_wire(a: &Gate, b: &Gate) -> bool {
    a.qubits().iter().any(|&q| b.acts_on(q))
}

fn rule_table(a: &Gate, b: &Gate) -> Verdict {
    let mut verdict = Verdict::Commute;
    for &q in a.qubits() {
        let Some(rb) = b.role_on(q) else { continue };
        let ra = a.role_on(q).expect("a acts on its own qubit");
        if ra == WireRole::Generic || rb == WireRole::Generic {
            verdict = Verdict::Undecided;
        } else if !ra.compatible(rb) {
            return Verdict::Conflict;
        }
    }
    verdict
}

fn numeric(a: &Gate, b: &Gate, tol: f64) -> bool {
    let mut labels: Vec<Qubit> = a.qubits().iter().chain(b.qubits()).copied().collect();
    labels.sort_unstable();
    labels.dedup();
    let ab = Circuit::from_gates(vec![a.clone(), b.clone()]);
    let ba = Circuit::from_gates(vec![b.clone(), a.clone()]);
    let uab = circuit_unitary_on(&ab, &labels).expect("two gates fit the simulator");
    let uba = circuit_unitary_on(&ba, &labels).expect("two gates fit the simulator");
    (0..uab.dim())
        .flat_map(|r| (0..uab.dim()).map(move |c| (r, c)))
        .all(|(r, c)| (uab.entry(r, c) - uba.entry(r, c)).norm() <= tol)
}
