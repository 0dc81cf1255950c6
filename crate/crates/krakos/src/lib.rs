//! Strength measures for quantum gates.
//!
//! The crate quantifies how strongly a unitary acts across a cut of its
//! qubits, two complementary ways:
//!
//! * entangling power `K_Δ(U) = max_ψ |E(Uψ) − E(ψ)|`, the largest change in
//!   bipartite entanglement the gate can cause ([`strength::k_delta`]);
//! * distance to the local gates `K_D(U) = min_{A⊗B} D(U, A⊗B)` under a
//!   choice of metric ([`strength::k_distance`]).
//!
//! Both searches return witnesses that certify the reported value and can be
//! re-verified independently. On top of them sit a property harness checking
//! the chaining / stability / locality laws on sampled ensembles
//! ([`harness`]), and CNOT-count lower bounds ([`bounds`]). A small
//! iterated-function-system module ([`fern`]) renders the classic chaos-game
//! fern, the standard exemplar of a cheap-to-specify but deep-to-produce
//! structure.
//!
//! Conventions: qubit 0 is the most significant bit of a basis index; all
//! randomness is ChaCha8-driven from explicit 64-bit seeds and reproduces
//! bit-identically across runs and platforms.

pub mod bipartite;
pub mod bounds;
pub mod eigen;
pub mod entanglement;
pub mod error;
pub mod fern;
pub mod gates;
pub mod harness;
pub mod mat;
pub mod rng;
mod simplex;
pub mod state;
pub mod strength;

pub use bipartite::{partial_trace, Bipartition, Side};
pub use bounds::{cnot_lower_bound, CnotBound};
pub use entanglement::{entanglement_entropy, von_neumann_entropy, EntropyValue};
pub use error::{Error, Result};
pub use gates::UnitaryGate;
pub use harness::{check_chaining, check_locality, check_stability, PropertyReport};
pub use mat::ComplexMatrix;
pub use rng::{haar_random_unitary, random_pure_state, RngSeed};
pub use state::PureState;
pub use strength::{
    evaluate_delta, k_delta, k_distance, metric_distance, LocalUnitaryTriple, Measure, Metric,
    MetricKind, OptimizerOptions, StrengthReport,
};
