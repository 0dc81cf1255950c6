//! Run reports: stable JSON envelope around each command's payload.

use serde::Serialize;

use krakos::bounds::CnotBound;
use krakos::harness::PropertyReport;
use krakos::strength::StrengthReport;
use krakos::UnitaryGate;

/// Residual above which a non-converged strength run counts as a convergence
/// failure (exit code 3). A missing residual (single start) cannot vouch for
/// the value either.
pub const RESIDUAL_THRESHOLD: f64 = 1e-3;

/// What a command computed. The payload is the reproducible part of the
/// output: identical argv and seed give byte-identical payload JSON.
#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Strength(StrengthReport),
    Property(PropertyReport),
    Bound(CnotBound),
    Fern(FernStats),
    Gate(UnitaryGate),
}

/// Chaos-game statistics emitted by `fern`.
#[derive(Serialize)]
pub struct FernStats {
    pub iterations: usize,
    pub burn_in: usize,
    pub selection_counts: Vec<u64>,
    pub points: usize,
    pub in_view_fraction: f64,
    pub max_y: f64,
    pub width: usize,
    pub height: usize,
    pub nonzero_pixel_fraction: f64,
}

/// The envelope written to standard output: wall time lives here, outside the
/// payload, so reruns stay byte-comparable on the payload field.
#[derive(Serialize)]
pub struct RunReport {
    pub version: &'static str,
    pub command: Vec<String>,
    pub seed: u64,
    pub wall_ms: f64,
    pub payload: Payload,
}

impl RunReport {
    pub fn new(command: Vec<String>, seed: u64, wall_ms: f64, payload: Payload) -> Self {
        RunReport {
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            wall_ms,
            payload,
        }
    }

    /// Exit code the payload warrants: 3 when a strength optimization failed
    /// to converge without a residual small enough to vouch for the value.
    pub fn exit_code(&self) -> i32 {
        let strength = match &self.payload {
            Payload::Strength(report) => Some(report),
            Payload::Bound(bound) => Some(&bound.strength_used),
            _ => None,
        };
        match strength {
            Some(report)
                if !report.converged
                    && report.residual.is_none_or(|r| r > RESIDUAL_THRESHOLD) =>
            {
                3
            }
            _ => 0,
        }
    }
}
