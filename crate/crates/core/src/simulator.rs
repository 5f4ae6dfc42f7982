//! Dense unitary simulation for verification.
//!
//! Qubit labels are mapped to tensor positions by ascending label: the
//! smallest label is bit 0 of a basis index.

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::Circuit;
use crate::gate::{Gate, Qubit};

/// Hard limit on simulated width. A 10-qubit unitary has 2^20 entries.
pub const MAX_QUBITS: usize = 10;

/// Default tolerance for equality up to global phase.
pub const PHASE_TOLERANCE: f64 = 1e-8;

/// Tolerance for the unitarity self-check.
pub const UNITARITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{n} qubits exceed the simulator cap of {cap}")]
    TooManyQubits { n: usize, cap: usize },
    #[error("operators act on different qubit sets ({left:?} vs {right:?})")]
    SupportMismatch { left: Vec<Qubit>, right: Vec<Qubit> },
    #[error("gate acts on qubit {0} outside the simulated register")]
    QubitOutsideRegister(Qubit),
}

/// A `2^n × 2^n` complex matrix over an ordered set of qubit labels.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseUnitary {
    labels: Vec<Qubit>,
    dim: usize,
    /// Column-major, so that each column is one contiguous state vector.
    data: Vec<Complex64>,
}

impl DenseUnitary {
    /// Identity on the given labels (sorted and deduplicated internally).
    pub fn identity(labels: &[Qubit]) -> Result<DenseUnitary, SimError> {
        let mut labels = labels.to_vec();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() > MAX_QUBITS {
            return Err(SimError::TooManyQubits { n: labels.len(), cap: MAX_QUBITS });
        }
        let dim = 1usize << labels.len();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for k in 0..dim {
            data[k * dim + k] = Complex64::new(1.0, 0.0);
        }
        Ok(DenseUnitary { labels, dim, data })
    }

    pub fn labels(&self) -> &[Qubit] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[col * self.dim + row]
    }

    /// Left-multiplies by the matrix of `gate`, i.e. applies it after the
    /// operator accumulated so far.
    pub fn apply(&mut self, gate: &Gate) -> Result<(), SimError> {
        let mut positions = Vec::with_capacity(gate.qubits().len());
        for &q in gate.qubits() {
            match self.labels.binary_search(&q) {
                Ok(p) => positions.push(p),
                Err(_) => return Err(SimError::QubitOutsideRegister(q)),
            }
        }
        let local = gate.kind().base_matrix(gate.params());
        let k = positions.len();
        let ldim = 1usize << k;
        let offsets: Vec<usize> =
            (0..ldim).map(|l| (0..k).filter(|&b| l >> b & 1 == 1).map(|b| 1usize << positions[b]).sum()).collect();
        let mask: usize = positions.iter().map(|&p| 1usize << p).sum();
        let mut amp = vec![Complex64::new(0.0, 0.0); ldim];
        for col in self.data.chunks_mut(self.dim) {
            for base in (0..self.dim).filter(|b| b & mask == 0) {
                for (a, off) in amp.iter_mut().zip(&offsets) {
                    *a = col[base + off];
                }
                for (row, off) in offsets.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (c, a) in amp.iter().enumerate() {
                        acc += local[row * ldim + c] * a;
                    }
                    col[base + off] = acc;
                }
            }
        }
        Ok(())
    }

    /// Matrix product `self · rhs`. Both must share the same labels.
    pub fn mul(&self, rhs: &DenseUnitary) -> Result<DenseUnitary, SimError> {
        self.check_support(rhs)?;
        let n = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for k in 0..n {
                let b = rhs.data[j * n + k];
                if b.norm_sqr() == 0.0 {
                    continue;
                }
                for i in 0..n {
                    data[j * n + i] += self.data[k * n + i] * b;
                }
            }
        }
        Ok(DenseUnitary { labels: self.labels.clone(), dim: n, data })
    }

    pub fn adjoint(&self) -> DenseUnitary {
        let n = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for i in 0..n {
                data[i * n + j] = self.data[j * n + i].conj();
            }
        }
        DenseUnitary { labels: self.labels.clone(), dim: n, data }
    }

    /// Whether `U†U` is the identity within `tol` (max-entry norm).
    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.adjoint().mul(self).expect("same support");
        let id = DenseUnitary::identity(&self.labels).expect("same width");
        max_abs_difference(&prod.data, &id.data, Complex64::new(1.0, 0.0)) <= tol
    }

    fn check_support(&self, other: &DenseUnitary) -> Result<(), SimError> {
        if self.labels != other.labels {
            return Err(SimError::SupportMismatch { left: self.labels.clone(), right: other.labels.clone() });
        }
        Ok(())
    }
}

fn max_abs_difference(a: &[Complex64], b: &[Complex64], phase: Complex64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - phase * y).norm()).fold(0.0, f64::max)
}

/// Unitary of `c` on its own qubit set.
pub fn circuit_unitary(c: &Circuit) -> Result<DenseUnitary, SimError> {
    let labels: Vec<Qubit> = c.qubit_set().into_iter().collect();
    circuit_unitary_on(c, &labels)
}

/// Unitary of `c` on an explicit register, which must contain every qubit
/// that `c` touches.
pub fn circuit_unitary_on(c: &Circuit, labels: &[Qubit]) -> Result<DenseUnitary, SimError> {
    let mut u = DenseUnitary::identity(labels)?;
    for g in c {
        u.apply(g)?;
    }
    Ok(u)
}

/// Matrix of a single gate on its sorted support.
pub fn gate_matrix(g: &Gate) -> DenseUnitary {
    let mut u = DenseUnitary::identity(g.qubits()).expect("gate width is below the cap");
    u.apply(g).expect("support contains the gate");
    u
}

/// `max |a - e^{ix} b|` over all entries, with the phase `e^{ix}` read off
/// the largest-magnitude entry of `b`.
pub fn phase_deviation(a: &DenseUnitary, b: &DenseUnitary) -> Result<f64, SimError> {
    a.check_support(b)?;
    let (k, _) =
        b.data.iter().enumerate().fold((0, -1.0), |best, (k, v)| if v.norm() > best.1 { (k, v.norm()) } else { best });
    let ratio = a.data[k] / b.data[k];
    let phase = if ratio.norm() > 0.0 { ratio / ratio.norm() } else { Complex64::new(1.0, 0.0) };
    Ok(max_abs_difference(&a.data, &b.data, phase))
}

/// Equality up to a global phase within `tol`.
pub fn equal_up_to_phase(a: &DenseUnitary, b: &DenseUnitary, tol: f64) -> Result<bool, SimError> {
    Ok(phase_deviation(a, b)? <= tol)
}

/// Compares two circuits on the union of their qubits. Returns whether they
/// agree up to phase within `tol` and the measured deviation.
pub fn circuits_equivalent(a: &Circuit, b: &Circuit, tol: f64) -> Result<(bool, f64), SimError> {
    let mut labels: Vec<Qubit> = a.qubit_set().union(&b.qubit_set()).copied().collect();
    labels.sort_unstable();
    let ua = circuit_unitary_on(a, &labels)?;
    let ub = circuit_unitary_on(b, &labels)?;
    let dev = phase_deviation(&ua, &ub)?;
    Ok((dev <= tol, dev))
}
