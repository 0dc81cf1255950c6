//! Lower bounds on CNOT counts from strength values.
//!
//! Any circuit of CNOTs and single-qubit unitaries implementing U must use
//! at least K(U)/K(CNOT) CNOTs, because each CNOT adds at most K(CNOT) of
//! strength and local gates add none. The bound is sound only when the
//! numerator under-estimates and the denominator is exact: k-delta reports a
//! lower bound of the maximum and K_Δ(CNOT) = 1 analytically, so k-delta
//! bounds are sound; k-distance reports an upper bound of the minimum (the
//! wrong direction), so those bounds are emitted but flagged unsound.
//!
//! Scope: the entropy argument counts only CNOTs acting across the declared
//! cut; CNOTs inside one side contribute nothing to it. The result is a
//! per-cut bound, and a caller wanting a circuit-wide statement should take
//! the maximum over cuts explicitly.

use serde::Serialize;

use crate::bipartite::Bipartition;
use crate::error::Result;
use crate::gates::{self, UnitaryGate};
use crate::rng::RngSeed;
use crate::strength::{k_distance, Measure, OptimizerOptions, StrengthReport};

/// Numeric slack absorbed before the ceiling so values a hair under an
/// integer do not round the bound up.
pub const BOUND_SLACK: f64 = 1e-6;

/// Optimizer-seed salt for the numeric K(CNOT) run backing k-distance bounds.
const K_CNOT_SALT: u64 = 0x517A_D001_0000_0005;

/// A lower bound M on the number of CNOTs crossing the cut.
#[derive(Debug, Clone, Serialize)]
pub struct CnotBound {
    pub lower_bound: u64,
    pub strength_used: StrengthReport,
    /// The denominator K(CNOT) under the same measure.
    pub k_cnot: f64,
    pub k_cnot_provenance: String,
    /// True only when the strength direction is lower-bound-of-max and
    /// k_cnot is exact.
    pub sound: bool,
    pub note: Option<String>,
}

/// Computes M = max(0, ceil(K(u)/K(CNOT) − slack)) under the chosen measure.
pub fn cnot_lower_bound(
    u: &UnitaryGate,
    cut: &Bipartition,
    measure: &Measure,
    opts: &OptimizerOptions,
) -> Result<CnotBound> {
    let strength = measure.evaluate(u, cut, opts)?;
    let (k_cnot, k_cnot_provenance, sound) = match measure {
        Measure::KDelta => (
            1.0,
            "analytic: a CNOT changes entanglement across a cut by at most \
             one ebit, and the |+0> witness achieves it"
                .to_string(),
            true,
        ),
        Measure::KDistance { metric } => {
            let cnot_opts = OptimizerOptions {
                seed: RngSeed(opts.seed.0 ^ K_CNOT_SALT),
                ..*opts
            };
            let run = k_distance(&gates::cnot(), metric, &cnot_opts)?;
            (
                run.value,
                "numeric: k-distance run on CNOT, an upper bound of the true \
                 minimum"
                    .to_string(),
                false,
            )
        }
    };

    let ratio = strength.value / k_cnot;
    let lower_bound = (ratio - BOUND_SLACK).ceil().max(0.0) as u64;

    let mut notes: Vec<String> = Vec::new();
    if !sound {
        notes.push(
            "not sound as a lower bound: the numerator is an upper bound of \
             the true strength"
                .to_string(),
        );
    }
    if *measure == Measure::KDelta && strength.value <= BOUND_SLACK {
        notes.push(
            "entangling power is blind to gates that move entanglement \
             without creating it; SWAP needs 3 CNOTs yet bounds to 0"
                .to_string(),
        );
    }
    let note = if notes.is_empty() {
        None
    } else {
        Some(notes.join("; "))
    };

    Ok(CnotBound {
        lower_bound,
        strength_used: strength,
        k_cnot,
        k_cnot_provenance,
        sound,
        note,
    })
}
