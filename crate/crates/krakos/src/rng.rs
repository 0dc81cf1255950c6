//! Deterministic random sampling: seeds, Haar-random unitaries, and random
//! pure states.
//!
//! All sampling is driven by ChaCha8 keyed from a 64-bit seed, and the
//! uniform/Gaussian transforms are written out here rather than pulled from a
//! distributions crate so a given seed reproduces the same bytes-for-bytes
//! stream on every platform and in every future build.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::gates::UnitaryGate;
use crate::mat::ComplexMatrix;
use crate::state::PureState;

/// Seed for every randomized routine in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl From<u64> for RngSeed {
    fn from(v: u64) -> Self {
        RngSeed(v)
    }
}

impl std::fmt::Display for RngSeed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn rng_from_seed(seed: RngSeed) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.0)
}

/// Uniform on [0, 1), using the top 53 bits of one 64-bit draw.
pub(crate) fn uniform01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform on (0, 1]; safe as a logarithm argument.
fn uniform01_open_low(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// One standard-normal pair via the Box-Muller transform.
pub(crate) fn standard_normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let r = (-2.0 * uniform01_open_low(rng).ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * uniform01(rng);
    (r * theta.cos(), r * theta.sin())
}

fn standard_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let (re, im) = standard_normal_pair(rng);
    Complex64::new(re, im)
}

/// Haar-distributed random unitary on `num_qubits` qubits.
///
/// A Ginibre matrix (i.i.d. complex Gaussian entries) is orthonormalized
/// column by column; forcing the implicit R factor to have a positive real
/// diagonal makes the distribution exactly Haar rather than Haar-up-to-phase.
pub fn haar_random_unitary(num_qubits: usize, seed: RngSeed) -> UnitaryGate {
    assert!((1..=12).contains(&num_qubits), "unsupported qubit count");
    let mut rng = rng_from_seed(seed);
    haar_unitary_from_rng(num_qubits, &mut rng)
}

pub(crate) fn haar_unitary_from_rng(num_qubits: usize, rng: &mut ChaCha8Rng) -> UnitaryGate {
    let dim = 1usize << num_qubits;
    // Columns of the Ginibre matrix, drawn column-major.
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..dim).map(|_| standard_complex(rng)).collect())
        .collect();

    for j in 0..dim {
        // Two orthogonalization passes keep the residual near machine
        // precision even at the largest dimensions used here.
        for _ in 0..2 {
            for k in 0..j {
                let (head, tail) = cols.split_at_mut(j);
                let (col_k, col_j) = (&head[k], &mut tail[0]);
                let proj: Complex64 = col_k
                    .iter()
                    .zip(col_j.iter())
                    .map(|(q, a)| q.conj() * a)
                    .sum();
                for (a, q) in col_j.iter_mut().zip(col_k) {
                    *a -= proj * q;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in cols[j].iter_mut() {
            *a /= norm;
        }
    }

    let matrix = ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i]);
    UnitaryGate::new(matrix).expect("orthonormalized columns form a unitary")
}

/// Random pure state: normalized vector of i.i.d. complex Gaussians, which is
/// uniform on the unit sphere of the Hilbert space.
pub fn random_pure_state(num_qubits: usize, seed: RngSeed) -> PureState {
    assert!((1..=20).contains(&num_qubits), "unsupported qubit count");
    let mut rng = rng_from_seed(seed);
    random_state_from_rng(num_qubits, &mut rng)
}

pub(crate) fn random_state_from_rng(num_qubits: usize, rng: &mut ChaCha8Rng) -> PureState {
    let dim = 1usize << num_qubits;
    let amplitudes: Vec<Complex64> = (0..dim).map(|_| standard_complex(rng)).collect();
    PureState::normalized(num_qubits, amplitudes).expect("Gaussian vector is nonzero")
}
