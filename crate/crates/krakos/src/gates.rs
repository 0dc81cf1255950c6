//! Unitary gates on n-qubit registers and the standard named gates.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mat::ComplexMatrix;
use crate::state::PureState;

/// Acceptable deviation of ‖U†U − I‖_F from zero.
pub const UNITARITY_TOL: f64 = 1e-10;

/// A validated unitary on one or more qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryGate {
    num_qubits: usize,
    matrix: ComplexMatrix,
}

impl UnitaryGate {
    /// Validates squareness, power-of-two dimension, and unitarity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidInput(format!(
                "gate matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let dim = matrix.rows();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "gate dimension must be 2^n with n ≥ 1, got {dim}"
            )));
        }
        let residual = matrix.unitarity_residual();
        if residual > UNITARITY_TOL {
            return Err(Error::NotUnitary {
                residual,
                tolerance: UNITARITY_TOL,
            });
        }
        Ok(Self {
            num_qubits: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Matrix product self · rhs (rhs acts first on a state).
    pub fn mul(&self, rhs: &UnitaryGate) -> Result<UnitaryGate> {
        if self.dim() != rhs.dim() {
            return Err(Error::InvalidInput(format!(
                "cannot compose a {}-qubit gate with a {}-qubit gate",
                self.num_qubits, rhs.num_qubits
            )));
        }
        Ok(UnitaryGate {
            num_qubits: self.num_qubits,
            matrix: self.matrix.mul(&rhs.matrix),
        })
    }

    /// Tensor product, self on the high-order qubits.
    pub fn tensor(&self, rhs: &UnitaryGate) -> UnitaryGate {
        UnitaryGate {
            num_qubits: self.num_qubits + rhs.num_qubits,
            matrix: self.matrix.tensor(&rhs.matrix),
        }
    }

    pub fn adjoint(&self) -> UnitaryGate {
        UnitaryGate {
            num_qubits: self.num_qubits,
            matrix: self.matrix.adjoint(),
        }
    }

    /// e^{iφ}·U; a global phase never changes what the gate does to a state's
    /// entanglement.
    pub fn with_global_phase(&self, phi: f64) -> UnitaryGate {
        UnitaryGate {
            num_qubits: self.num_qubits,
            matrix: self.matrix.scale(Complex64::from_polar(1.0, phi)),
        }
    }

    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        psi.apply_matrix(&self.matrix)
    }
}

impl Serialize for UnitaryGate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("UnitaryGate", 2)?;
        s.serialize_field("qubits", &self.num_qubits)?;
        s.serialize_field("matrix", &self.matrix)?;
        s.end()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gate_from_rows(rows: Vec<Vec<Complex64>>) -> UnitaryGate {
    UnitaryGate::new(ComplexMatrix::from_rows(&rows).expect("built-in gate shape"))
        .expect("built-in gate unitarity")
}

/// Identity on n qubits.
pub fn identity(num_qubits: usize) -> UnitaryGate {
    assert!((1..=24).contains(&num_qubits), "unsupported qubit count");
    UnitaryGate {
        num_qubits,
        matrix: ComplexMatrix::identity(1 << num_qubits),
    }
}

pub fn pauli_x() -> UnitaryGate {
    gate_from_rows(vec![
        vec![c(0.0, 0.0), c(1.0, 0.0)],
        vec![c(1.0, 0.0), c(0.0, 0.0)],
    ])
}

pub fn pauli_y() -> UnitaryGate {
    gate_from_rows(vec![
        vec![c(0.0, 0.0), c(0.0, -1.0)],
        vec![c(0.0, 1.0), c(0.0, 0.0)],
    ])
}

pub fn pauli_z() -> UnitaryGate {
    gate_from_rows(vec![
        vec![c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(-1.0, 0.0)],
    ])
}

pub fn hadamard() -> UnitaryGate {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    gate_from_rows(vec![
        vec![c(h, 0.0), c(h, 0.0)],
        vec![c(h, 0.0), c(-h, 0.0)],
    ])
}

/// Controlled-NOT, control on qubit 0 (high bit), target on qubit 1.
pub fn cnot() -> UnitaryGate {
    gate_from_rows(vec![
        vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
    ])
}

/// Controlled-Z; symmetric in control and target.
pub fn cz() -> UnitaryGate {
    cphase(std::f64::consts::PI)
}

pub fn swap() -> UnitaryGate {
    gate_from_rows(vec![
        vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
    ])
}

/// diag(1, 1, 1, e^{iθ}).
pub fn cphase(theta: f64) -> UnitaryGate {
    let phase = Complex64::from_polar(1.0, theta);
    gate_from_rows(vec![
        vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), phase],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::PureState;

    #[test]
    fn named_gates_are_unitary() {
        for gate in [
            identity(1),
            pauli_x(),
            pauli_y(),
            pauli_z(),
            hadamard(),
            cnot(),
            cz(),
            swap(),
            cphase(0.7),
        ] {
            assert!(gate.matrix().unitarity_residual() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_unitary_and_odd_shapes() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(UnitaryGate::new(m), Err(Error::NotUnitary { .. })));
        let odd = ComplexMatrix::identity(3);
        assert!(UnitaryGate::new(odd).is_err());
        let one = ComplexMatrix::identity(1);
        assert!(UnitaryGate::new(one).is_err());
    }

    #[test]
    fn cnot_flips_the_target_when_the_control_is_set() {
        let gate = cnot();
        // |10⟩ (index 2) → |11⟩ (index 3): control is qubit 0, the high bit.
        let input = PureState::basis(2, 2).unwrap();
        let output = gate.apply(&input).unwrap();
        assert!((output.amplitudes()[3].re - 1.0).abs() < 1e-15);
        // |01⟩ is untouched.
        let input = PureState::basis(2, 1).unwrap();
        let output = gate.apply(&input).unwrap();
        assert!((output.amplitudes()[1].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hadamard_then_cnot_makes_the_bell_state() {
        let circuit = cnot().mul(&hadamard().tensor(&identity(1))).unwrap();
        let out = circuit.apply(&PureState::basis(2, 0).unwrap()).unwrap();
        assert!(out.max_abs_diff_up_to_phase(&PureState::bell_phi_plus()) < 1e-12);
    }

    #[test]
    fn swap_exchanges_qubits() {
        let gate = swap();
        let psi = PureState::basis(1, 0).unwrap();
        let phi = PureState::basis(1, 1).unwrap();
        let joint = psi.tensor(&phi);
        let swapped = gate.apply(&joint).unwrap();
        let expected = phi.tensor(&psi);
        assert!(swapped.max_abs_diff_up_to_phase(&expected) < 1e-15);
    }

    #[test]
    fn cz_matches_cphase_at_pi() {
        assert!(cz().matrix().max_abs_diff(cphase(std::f64::consts::PI).matrix()) < 1e-15);
    }

    #[test]
    fn global_phase_and_adjoint_invert() {
        let g = cphase(0.9).with_global_phase(1.3);
        let prod = g.adjoint().mul(&g).unwrap();
        assert!(prod.matrix().max_abs_diff(identity(2).matrix()) < 1e-12);
    }
}
