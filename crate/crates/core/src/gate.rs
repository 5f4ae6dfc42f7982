//! Gates and the static gate registry.
//!
//! A [`Gate`] is a registered operation, its real parameters and an ordered
//! tuple of qubit labels. Positions that are interchangeable (the two controls
//! of `ccx`, both wires of `cz`) are kept sorted so that structurally equal
//! gates compare equal.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Qubit label as it appears in circuit files.
pub type Qubit = u32;

/// Absolute tolerance used when comparing gate parameters.
pub const PARAM_TOLERANCE: f64 = 1e-12;

/// How a gate acts on one of its wires, as far as the commutation rules care.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WireRole {
    /// Control wire of a controlled-X family gate. Diagonal in the Z basis.
    Control,
    /// Wire on which an X (or controlled X) acts.
    XTarget,
    /// Wire of a gate that is diagonal in the Z basis.
    ZLike,
    /// Anything else; only the numeric check can decide.
    Generic,
}

impl WireRole {
    /// Whether two gates meeting on a wire with these roles commute there.
    pub fn compatible(self, other: WireRole) -> bool {
        use WireRole::*;
        matches!((self, other), (Control | ZLike, Control | ZLike) | (XTarget, XTarget))
    }
}

/// Every gate the registry knows about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Cx,
    Cz,
    Ccx,
    U3,
}

/// How to build the inverse of a gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InverseRule {
    SelfInverse,
    /// The inverse is a different named gate on the same qubits.
    Partner(GateKind),
    /// `u3(θ, φ, λ)⁻¹ = u3(-θ, -λ, -φ)`.
    U3,
}

/// Registry entry for one gate kind.
#[derive(Debug)]
pub struct GateSpec {
    pub kind: GateKind,
    pub name: &'static str,
    pub arity: usize,
    pub n_params: usize,
    /// Qubit positions that may be permuted among themselves without
    /// changing the operator.
    pub symmetric: &'static [usize],
    /// Commutation role of each qubit position.
    pub roles: &'static [WireRole],
    pub inverse: InverseRule,
}

use WireRole::{Control, Generic, XTarget, ZLike};

static SPECS: [GateSpec; 12] = [
    GateSpec {
        kind: GateKind::X,
        name: "x",
        arity: 1,
        n_params: 0,
        symmetric: &[],
        roles: &[XTarget],
        inverse: InverseRule::SelfInverse,
    },
    GateSpec {
        kind: GateKind::Y,
        name: "y",
        arity: 1,
        n_params: 0,
        symmetric: &[],
        roles: &[Generic],
        inverse: InverseRule::SelfInverse,
    },
    GateSpec {
        kind: GateKind::Z,
        name: "z",
        arity: 1,
        n_params: 0,
        symmetric: &[],
        roles: &[ZLike],
        inverse: InverseRule::SelfInverse,
    },
    GateSpec {
        kind: GateKind::H,
        name: "h",
        arity: 1,
        n_params: 0,
        symmetric: &[],
        roles: &[Generic],
        inverse: InverseRule::SelfInverse,
    },
    GateSpec {
        kind: GateKind::S,
        name: "s",
        arity: 1,
        n_params: 0,
        symmetric: &[],
        roles: &[ZLike],
        inverse: InverseRule::Partner(GateKind::Sdg),
    },
    GateSpec {
        kind: GateKind::Sdg,
        name: "sdg",
        arity: 1,
        n_params: 0,
        symmetric: &[],
        roles: &[ZLike],
        inverse: InverseRule::Partner(GateKind::S),
    },
    GateSpec {
        kind: GateKind::T,
        name: "t",
        arity: 1,
        n_params: 0,
        symmetric: &[],
        roles: &[ZLike],
        inverse: InverseRule::Partner(GateKind::Tdg),
    },
    GateSpec {
        kind: GateKind::Tdg,
        name: "tdg",
        arity: 1,
        n_params: 0,
        symmetric: &[],
        roles: &[ZLike],
        inverse: InverseRule::Partner(GateKind::T),
    },
    GateSpec {
        kind: GateKind::Cx,
        name: "cx",
        arity: 2,
        n_params: 0,
        symmetric: &[],
        roles: &[Control, XTarget],
        inverse: InverseRule::SelfInverse,
    },
    GateSpec {
        kind: GateKind::Cz,
        name: "cz",
        arity: 2,
        n_params: 0,
        symmetric: &[0, 1],
        roles: &[ZLike, ZLike],
        inverse: InverseRule::SelfInverse,
    },
    GateSpec {
        kind: GateKind::Ccx,
        name: "ccx",
        arity: 3,
        n_params: 0,
        symmetric: &[0, 1],
        roles: &[Control, Control, XTarget],
        inverse: InverseRule::SelfInverse,
    },
    GateSpec {
        kind: GateKind::U3,
        name: "u3",
        arity: 1,
        n_params: 3,
        symmetric: &[],
        roles: &[Generic],
        inverse: InverseRule::U3,
    },
];

impl GateKind {
    pub const ALL: [GateKind; 12] = [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Cx,
        GateKind::Cz,
        GateKind::Ccx,
        GateKind::U3,
    ];

    pub fn spec(self) -> &'static GateSpec {
        &SPECS[self as usize]
    }

    pub fn name(self) -> &'static str {
        self.spec().name
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        SPECS.iter().find(|s| s.name == name).map(|s| s.kind)
    }

    /// Position permutations that leave the operator unchanged. The identity
    /// permutation always comes first.
    pub fn position_symmetries(self) -> &'static [&'static [usize]] {
        match self {
            GateKind::Ccx => &[&[0, 1, 2], &[1, 0, 2]],
            GateKind::Cz => &[&[0, 1], &[1, 0]],
            GateKind::Cx => &[&[0, 1]],
            _ => &[&[0]],
        }
    }

    /// Matrix on the gate's own qubits, row-major. Bit `p` of a local basis
    /// index is the state of the qubit at tuple position `p`.
    pub fn base_matrix(self, params: &[f64]) -> Vec<Complex64> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let zero = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let diag = |d: &[Complex64]| {
            let n = d.len();
            let mut m = vec![zero; n * n];
            for (k, v) in d.iter().enumerate() {
                m[k * n + k] = *v;
            }
            m
        };
        match self {
            GateKind::X => vec![zero, one, one, zero],
            GateKind::Y => vec![zero, c(0.0, -1.0), c(0.0, 1.0), zero],
            GateKind::Z => diag(&[one, -one]),
            GateKind::H => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                vec![c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]
            }
            GateKind::S => diag(&[one, c(0.0, 1.0)]),
            GateKind::Sdg => diag(&[one, c(0.0, -1.0)]),
            GateKind::T => diag(&[one, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]),
            GateKind::Tdg => diag(&[one, Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)]),
            GateKind::Cx => permutation_matrix(2, |b| if b & 1 == 1 { b ^ 2 } else { b }),
            GateKind::Ccx => permutation_matrix(3, |b| if b & 3 == 3 { b ^ 4 } else { b }),
            GateKind::Cz => diag(&[one, one, one, -one]),
            GateKind::U3 => {
                let (theta, phi, lambda) = (params[0], params[1], params[2]);
                let (s, co) = (theta / 2.0).sin_cos();
                vec![
                    c(co, 0.0),
                    -Complex64::from_polar(s, lambda),
                    Complex64::from_polar(s, phi),
                    Complex64::from_polar(co, phi + lambda),
                ]
            }
        }
    }
}

fn permutation_matrix(n_qubits: usize, f: impl Fn(usize) -> usize) -> Vec<Complex64> {
    let dim = 1 << n_qubits;
    let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        m[f(col) * dim + col] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Name-based lookup into the static registry.
#[derive(Clone, Copy, Debug, Default)]
pub struct GateRegistry;

impl GateRegistry {
    pub fn lookup(&self, name: &str) -> Option<&'static GateSpec> {
        GateKind::from_name(name).map(GateKind::spec)
    }

    pub fn specs(&self) -> impl Iterator<Item = &'static GateSpec> {
        SPECS.iter()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GateError {
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("gate `{name}` takes {expected} qubit(s), got {got}")]
    Arity { name: &'static str, expected: usize, got: usize },
    #[error("gate `{name}` takes {expected} parameter(s), got {got}")]
    ParamCount { name: &'static str, expected: usize, got: usize },
    #[error("gate `{name}` uses qubit {qubit} more than once")]
    DuplicateQubit { name: &'static str, qubit: Qubit },
    #[error("gate `{name}` has a non-finite parameter")]
    NonFiniteParam { name: &'static str },
}

/// A gate instance: kind, parameters and qubit tuple in canonical order.
#[derive(Clone, Debug)]
pub struct Gate {
    kind: GateKind,
    params: Vec<f64>,
    qubits: Vec<Qubit>,
}

impl Gate {
    /// Validates arity and distinctness and canonicalizes symmetric positions.
    pub fn new(kind: GateKind, params: Vec<f64>, qubits: Vec<Qubit>) -> Result<Gate, GateError> {
        let spec = kind.spec();
        if qubits.len() != spec.arity {
            return Err(GateError::Arity { name: spec.name, expected: spec.arity, got: qubits.len() });
        }
        if params.len() != spec.n_params {
            return Err(GateError::ParamCount { name: spec.name, expected: spec.n_params, got: params.len() });
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(GateError::NonFiniteParam { name: spec.name });
        }
        for (k, q) in qubits.iter().enumerate() {
            if qubits[..k].contains(q) {
                return Err(GateError::DuplicateQubit { name: spec.name, qubit: *q });
            }
        }
        let mut gate = Gate { kind, params, qubits };
        gate.canonicalize();
        Ok(gate)
    }

    /// Like [`Gate::new`] but looks the kind up by name.
    pub fn named(name: &str, params: Vec<f64>, qubits: Vec<Qubit>) -> Result<Gate, GateError> {
        let kind = GateKind::from_name(name).ok_or_else(|| GateError::UnknownGate(name.to_string()))?;
        Gate::new(kind, params, qubits)
    }

    fn fixed(kind: GateKind, qubits: &[Qubit]) -> Gate {
        Gate::new(kind, Vec::new(), qubits.to_vec()).expect("invalid gate literal")
    }

    pub fn x(q: Qubit) -> Gate {
        Gate::fixed(GateKind::X, &[q])
    }
    pub fn z(q: Qubit) -> Gate {
        Gate::fixed(GateKind::Z, &[q])
    }
    pub fn h(q: Qubit) -> Gate {
        Gate::fixed(GateKind::H, &[q])
    }
    pub fn cx(control: Qubit, target: Qubit) -> Gate {
        Gate::fixed(GateKind::Cx, &[control, target])
    }
    pub fn cz(a: Qubit, b: Qubit) -> Gate {
        Gate::fixed(GateKind::Cz, &[a, b])
    }
    pub fn ccx(c1: Qubit, c2: Qubit, target: Qubit) -> Gate {
        Gate::fixed(GateKind::Ccx, &[c1, c2, target])
    }
    pub fn u3(theta: f64, phi: f64, lambda: f64, q: Qubit) -> Gate {
        Gate::new(GateKind::U3, vec![theta, phi, lambda], vec![q]).expect("invalid u3 literal")
    }

    fn canonicalize(&mut self) {
        let sym = self.kind.spec().symmetric;
        if sym.len() > 1 {
            let mut vals: Vec<Qubit> = sym.iter().map(|&p| self.qubits[p]).collect();
            vals.sort_unstable();
            for (&p, v) in sym.iter().zip(vals) {
                self.qubits[p] = v;
            }
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn qubits(&self) -> &[Qubit] {
        &self.qubits
    }

    pub fn roles(&self) -> &'static [WireRole] {
        self.kind.spec().roles
    }

    pub fn acts_on(&self, q: Qubit) -> bool {
        self.qubits.contains(&q)
    }

    /// Role of this gate on wire `q`, if it touches it.
    pub fn role_on(&self, q: Qubit) -> Option<WireRole> {
        self.qubits.iter().position(|&x| x == q).map(|p| self.roles()[p])
    }

    /// Same name and parameters, ignoring qubits.
    pub fn congruent(&self, other: &Gate) -> bool {
        self.kind == other.kind && params_close(&self.params, &other.params)
    }

    /// The inverse gate on the same qubits.
    pub fn inverse(&self) -> Gate {
        match self.kind.spec().inverse {
            InverseRule::SelfInverse => self.clone(),
            InverseRule::Partner(kind) => Gate { kind, params: Vec::new(), qubits: self.qubits.clone() },
            InverseRule::U3 => Gate {
                kind: GateKind::U3,
                params: vec![-self.params[0], -self.params[2], -self.params[1]],
                qubits: self.qubits.clone(),
            },
        }
    }

    /// Relabels every qubit through `map` and re-canonicalizes.
    ///
    /// # Panics
    /// If `map` sends two of the gate's qubits to the same label.
    pub fn relabeled(&self, mut map: impl FnMut(Qubit) -> Qubit) -> Gate {
        let qubits: Vec<Qubit> = self.qubits.iter().map(|&q| map(q)).collect();
        Gate::new(self.kind, self.params.clone(), qubits).expect("qubit relabeling must be injective")
    }

    /// True iff `self`, relabeled through `map`, equals `other`. Qubits that
    /// `map` leaves undefined make the result false.
    pub fn equal_under_map(&self, other: &Gate, map: impl Fn(Qubit) -> Option<Qubit>) -> bool {
        if !self.congruent(other) {
            return false;
        }
        let sym = self.kind.spec().symmetric;
        let mut mapped = [0 as Qubit; 3];
        for (k, &q) in self.qubits.iter().enumerate() {
            match map(q) {
                Some(m) => mapped[k] = m,
                None => return false,
            }
        }
        let mapped = &mut mapped[..self.qubits.len()];
        if sym.len() > 1 {
            // Only contiguous leading symmetric blocks exist in the registry.
            mapped[sym[0]..=sym[sym.len() - 1]].sort_unstable();
        }
        mapped == other.qubits.as_slice()
    }
}

/// Gate equality under a pattern-to-circuit qubit map.
pub fn gate_equal_under_map(t: &Gate, c: &Gate, map: impl Fn(Qubit) -> Option<Qubit>) -> bool {
    t.equal_under_map(c, map)
}

/// Same name and parameters.
pub fn gate_congruent(a: &Gate, b: &Gate) -> bool {
    a.congruent(b)
}

/// Inverse gate per the registry rule.
pub fn inverse_gate(g: &Gate) -> Gate {
    g.inverse()
}

fn params_close(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= PARAM_TOLERANCE)
}

impl PartialEq for Gate {
    fn eq(&self, other: &Gate) -> bool {
        self.congruent(other) && self.qubits == other.qubits
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        if !self.params.is_empty() {
            f.write_str("(")?;
            for (k, p) in self.params.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{p:?}")?;
            }
            f.write_str(")")?;
        }
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_order_matches_kind_discriminants() {
        for kind in GateKind::ALL {
            assert_eq!(kind.spec().kind, kind);
            assert_eq!(GateKind::from_name(kind.name()), Some(kind));
            assert_eq!(kind.spec().roles.len(), kind.spec().arity);
        }
    }

    #[test]
    fn symmetric_positions_are_sorted() {
        assert_eq!(Gate::ccx(3, 1, 2).qubits(), &[1, 3, 2]);
        assert_eq!(Gate::cz(5, 2).qubits(), &[2, 5]);
        assert_eq!(Gate::cx(5, 2).qubits(), &[5, 2]);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(Gate::named("foo", vec![], vec![0]), Err(GateError::UnknownGate(_))));
        assert!(matches!(Gate::named("cx", vec![], vec![0]), Err(GateError::Arity { .. })));
        assert!(matches!(Gate::named("cx", vec![], vec![1, 1]), Err(GateError::DuplicateQubit { .. })));
        assert!(matches!(Gate::named("u3", vec![1.0], vec![1]), Err(GateError::ParamCount { .. })));
    }

    #[test]
    fn inverse_is_involution() {
        let gates = [
            Gate::x(0),
            Gate::named("s", vec![], vec![2]).unwrap(),
            Gate::named("tdg", vec![], vec![2]).unwrap(),
            Gate::u3(0.3, -1.2, 2.5, 4),
            Gate::ccx(0, 1, 2),
        ];
        for g in gates {
            assert_eq!(g.inverse().inverse(), g);
        }
        let u = Gate::u3(0.3, -1.2, 2.5, 4).inverse();
        assert_eq!(u.params(), &[-0.3, -2.5, 1.2]);
    }

    #[test]
    fn equality_under_map_respects_symmetry() {
        let t = Gate::ccx(1, 2, 3);
        let c = Gate::ccx(7, 5, 6);
        let map = |q: Qubit| match q {
            1 => Some(7),
            2 => Some(5),
            3 => Some(6),
            _ => None,
        };
        assert!(t.equal_under_map(&c, map));
        let wrong_target = |q: Qubit| match q {
            1 => Some(7),
            2 => Some(6),
            3 => Some(5),
            _ => None,
        };
        assert!(!t.equal_under_map(&c, wrong_target));
        assert!(!Gate::cx(1, 2).equal_under_map(&Gate::cx(2, 1), Some));
    }

    #[test]
    fn params_compare_with_tolerance() {
        assert_eq!(Gate::u3(1.0, 0.0, 0.0, 0), Gate::u3(1.0 + 1e-13, 0.0, 0.0, 0));
        assert_ne!(Gate::u3(1.0, 0.0, 0.0, 0), Gate::u3(1.0 + 1e-9, 0.0, 0.0, 0));
    }

    #[test]
    fn display_round_trips_params_exactly() {
        let g = Gate::u3(0.1, std::f64::consts::PI, -2.0, 3);
        assert_eq!(g.to_string(), "u3(0.1,3.141592653589793,-2.0) 3");
    }
}
