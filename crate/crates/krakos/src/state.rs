//! Pure states of an n-qubit register.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mat::ComplexMatrix;

/// Acceptable deviation of the squared norm from 1.
pub const STATE_NORM_TOL: f64 = 1e-12;

/// A normalized state vector over `2^num_qubits` amplitudes.
///
/// Qubit 0 is the most significant bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Builds a state from amplitudes that must already be normalized.
    pub fn new(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_shape(num_qubits, &amplitudes)?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "state vector has squared norm {norm_sq:.3e}, expected 1"
            )));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Builds a state by normalizing the given amplitudes.
    pub fn normalized(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_shape(num_qubits, &amplitudes)?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::InvalidInput("cannot normalize the zero vector".into()));
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    fn check_shape(num_qubits: usize, amplitudes: &[Complex64]) -> Result<()> {
        if num_qubits == 0 || num_qubits > 24 {
            return Err(Error::InvalidInput(format!(
                "unsupported qubit count {num_qubits}"
            )));
        }
        let dim = 1usize << num_qubits;
        if amplitudes.len() != dim {
            return Err(Error::InvalidInput(format!(
                "expected {dim} amplitudes for {num_qubits} qubits, got {}",
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidInput("amplitudes must be finite".into()));
        }
        Ok(())
    }

    /// Computational basis state |index⟩.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize
            .checked_shl(num_qubits as u32)
            .filter(|_| (1..=24).contains(&num_qubits))
            .ok_or_else(|| Error::InvalidInput(format!("unsupported qubit count {num_qubits}")))?;
        if index >= dim {
            return Err(Error::InvalidInput(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[index] = Complex64::ONE;
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// The Bell state (|00⟩ + |11⟩)/√2.
    pub fn bell_phi_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            num_qubits: 2,
            amplitudes: vec![
                Complex64::new(h, 0.0),
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::new(h, 0.0),
            ],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Density operator |ψ⟩⟨ψ|.
    pub fn density(&self) -> ComplexMatrix {
        let dim = self.dim();
        ComplexMatrix::from_fn(dim, dim, |i, j| self.amplitudes[i] * self.amplitudes[j].conj())
    }

    /// Tensor product, self on the high-order qubits.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        PureState {
            num_qubits: self.num_qubits + other.num_qubits,
            amplitudes,
        }
    }

    /// Applies a matrix of matching dimension; the result is renormalized
    /// only through the unitarity of the input, so non-unitary matrices
    /// produce an error.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Result<PureState> {
        if m.rows() != self.dim() || m.cols() != self.dim() {
            return Err(Error::InvalidInput(format!(
                "matrix is {}x{} but the state has dimension {}",
                m.rows(),
                m.cols(),
                self.dim()
            )));
        }
        let amplitudes = m.mul_vec(&self.amplitudes);
        PureState::new(self.num_qubits, amplitudes)
    }

    /// Largest absolute amplitude difference, after aligning global phase to
    /// the other state.
    pub fn max_abs_diff_up_to_phase(&self, other: &PureState) -> f64 {
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        let phase = if overlap.norm() < 1e-300 {
            Complex64::ONE
        } else {
            overlap / overlap.norm()
        };
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PureState", 2)?;
        s.serialize_field("qubits", &self.num_qubits)?;
        let amps: Vec<[f64; 2]> = self.amplitudes.iter().map(|a| [a.re, a.im]).collect();
        s.serialize_field("amplitudes", &amps)?;
        s.end()
    }
}
