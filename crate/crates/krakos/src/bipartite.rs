//! Bipartitions of a qubit register and the partial trace across them.
//!
//! Index convention used everywhere in this crate: qubit 0 is the most
//! significant bit of a computational-basis index, so basis state |q0 q1 ...⟩
//! has index q0·2^(n−1) + q1·2^(n−2) + ....

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat::ComplexMatrix;

/// Which side of a bipartition to keep when tracing out the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// A cut of `num_qubits` qubits into a nonempty proper subset `side_a` and
/// its complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bipartition {
    num_qubits: usize,
    side_a: Vec<usize>,
}

impl Bipartition {
    pub fn new(num_qubits: usize, side_a: &[usize]) -> Result<Self> {
        if num_qubits < 2 {
            return Err(Error::InvalidBipartition(format!(
                "need at least 2 qubits to cut, got {num_qubits}"
            )));
        }
        let mut sorted: Vec<usize> = side_a.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != side_a.len() {
            return Err(Error::InvalidBipartition(
                "side A lists a qubit twice".into(),
            ));
        }
        if let Some(&bad) = sorted.iter().find(|&&q| q >= num_qubits) {
            return Err(Error::InvalidBipartition(format!(
                "qubit {bad} out of range for {num_qubits} qubits"
            )));
        }
        if sorted.is_empty() || sorted.len() == num_qubits {
            return Err(Error::InvalidBipartition(
                "side A must be a nonempty proper subset".into(),
            ));
        }
        Ok(Self {
            num_qubits,
            side_a: sorted,
        })
    }

    /// The default cut {0} | {1, ..., n−1}.
    pub fn first_vs_rest(num_qubits: usize) -> Result<Self> {
        Self::new(num_qubits, &[0])
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> Vec<usize> {
        (0..self.num_qubits)
            .filter(|q| !self.side_a.contains(q))
            .collect()
    }

    pub fn side(&self, side: Side) -> Vec<usize> {
        match side {
            Side::A => self.side_a.clone(),
            Side::B => self.side_b(),
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn dim_side(&self, side: Side) -> usize {
        1 << self.side(side).len()
    }

    /// Extend the cut by one ancilla qubit (index n) placed on `side`.
    pub fn with_ancilla(&self, side: Side) -> Bipartition {
        let mut side_a = self.side_a.clone();
        if side == Side::A {
            side_a.push(self.num_qubits);
        }
        Bipartition {
            num_qubits: self.num_qubits + 1,
            side_a,
        }
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let fmt_side = |qs: &[usize]| {
            qs.iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{{{}}}|{{{}}}", fmt_side(&self.side_a), fmt_side(&self.side_b()))
    }
}

/// Reduced density matrix over the kept side of the cut.
///
/// `rho` must be the density operator of the full register (Hermitian,
/// trace 1); the trace over the discarded side preserves the total trace.
pub fn partial_trace(rho: &ComplexMatrix, cut: &Bipartition, keep: Side) -> Result<ComplexMatrix> {
    if rho.rows() != cut.dim() || rho.cols() != cut.dim() {
        return Err(Error::InvalidBipartition(format!(
            "matrix is {}x{} but the cut describes {} qubits (dimension {})",
            rho.rows(),
            rho.cols(),
            cut.num_qubits(),
            cut.dim()
        )));
    }
    let kept = cut.side(keep);
    let traced = cut.side(keep.other());
    let kept_offsets = bit_offsets(&kept, cut.num_qubits());
    let traced_offsets = bit_offsets(&traced, cut.num_qubits());

    let dim_keep = kept_offsets.len();
    let mut out = ComplexMatrix::zeros(dim_keep, dim_keep);
    for (i, &oi) in kept_offsets.iter().enumerate() {
        for (j, &oj) in kept_offsets.iter().enumerate() {
            let mut acc = Complex64::ZERO;
            for &ot in &traced_offsets {
                acc += rho[(oi | ot, oj | ot)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Full-register index contribution of every sub-register basis state, with
/// the first listed qubit most significant within the sub-register.
fn bit_offsets(qubits: &[usize], num_qubits: usize) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|x| {
            qubits
                .iter()
                .enumerate()
                .map(|(j, &q)| {
                    let bit = (x >> (k - 1 - j)) & 1;
                    bit << (num_qubits - 1 - q)
                })
                .sum()
        })
        .collect()
}
