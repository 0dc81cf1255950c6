//! Von Neumann entropy and bipartite entanglement of pure states.

use serde::Serialize;

use crate::bipartite::{partial_trace, Bipartition, Side};
use crate::eigen::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::mat::ComplexMatrix;
use crate::state::PureState;

/// Eigenvalues of a density matrix may dip slightly negative from rounding;
/// anything above this floor is clamped to zero, anything below is an error.
pub const NEGATIVE_EIGENVALUE_TOL: f64 = -1e-8;

/// Acceptable deviation of a density matrix trace from 1.
pub const TRACE_TOL: f64 = 1e-10;

/// An entropy in bits (base-2 logarithm); one ebit is the entanglement of a
/// Bell pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyValue {
    pub ebits: f64,
}

/// Von Neumann entropy S(ρ) = −tr(ρ log₂ ρ) of a density matrix.
///
/// The matrix must be Hermitian with unit trace; eigenvalues below
/// `NEGATIVE_EIGENVALUE_TOL` report the state as not positive semidefinite.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<EntropyValue> {
    if !rho.is_square() {
        return Err(Error::InvalidInput(format!(
            "density matrix must be square, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
        return Err(Error::NotAState { trace: trace.re });
    }
    let eigenvalues = hermitian_eigenvalues(rho)?;
    let mut ebits = 0.0;
    for &lambda in &eigenvalues {
        if lambda < NEGATIVE_EIGENVALUE_TOL {
            return Err(Error::NotPositive { eigenvalue: lambda });
        }
        let p = lambda.clamp(0.0, 1.0);
        if p > 0.0 {
            ebits -= p * p.log2();
        }
    }
    // −0.0 can survive the accumulation when every eigenvalue is 0 or 1.
    Ok(EntropyValue { ebits: ebits.max(0.0) })
}

/// Entanglement of a pure state across a cut: the entropy of either reduced
/// density matrix (they share a spectrum, so side A is used).
pub fn entanglement_entropy(psi: &PureState, cut: &Bipartition) -> Result<EntropyValue> {
    if psi.num_qubits() != cut.num_qubits() {
        return Err(Error::InvalidBipartition(format!(
            "state has {} qubits but the cut describes {}",
            psi.num_qubits(),
            cut.num_qubits()
        )));
    }
    let reduced = partial_trace(&psi.density(), cut, Side::A)?;
    von_neumann_entropy(&reduced)
}
