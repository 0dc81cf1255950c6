//! Strength measures for unitary gates.
//!
//! Two measures are implemented, with opposite numeric bound directions:
//!
//! * `k_delta`: the entangling power max_ψ |E(Uψ) − E(ψ)| across a declared
//!   cut, found by multi-start maximization over pure states. The reported
//!   value is achieved by the stored witness state, so it is a certified
//!   lower bound on the true maximum.
//! * `k_distance`: the distance min_{A⊗B} D(U, A⊗B) from the set of local
//!   (per-qubit) unitaries, found by multi-start minimization over Euler
//!   angles. The reported value is achieved by the stored witness factors,
//!   so it is a certified upper bound on the true minimum.
//!
//! Every report can be re-verified: evaluating the objective at the stored
//! witness reproduces the value within 1e-9.

use num_complex::Complex64;
use serde::Serialize;

use crate::bipartite::Bipartition;
use crate::entanglement::entanglement_entropy;
use crate::error::{Error, Result};
use crate::gates::UnitaryGate;
use crate::mat::ComplexMatrix;
use crate::rng::{self, RngSeed};
use crate::simplex::{self, SimplexOptions};
use crate::state::PureState;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Base distance on unitaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    FrobeniusRaw,
    /// Frobenius divided by sqrt(dimension), making the identity-vs-anything
    /// scale independent of qubit count.
    FrobeniusNormalized,
    Spectral,
}

impl MetricKind {
    pub fn id(self) -> &'static str {
        match self {
            MetricKind::FrobeniusRaw => "frobenius-raw",
            MetricKind::FrobeniusNormalized => "frobenius-normalized",
            MetricKind::Spectral => "spectral",
        }
    }
}

/// A distance on unitaries, optionally quotiented by global phase:
/// D(U, V) = min over real φ of dist(U, e^{iφ}V).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Metric {
    pub kind: MetricKind,
    pub phase_optimized: bool,
}

impl Metric {
    pub fn new(kind: MetricKind, phase_optimized: bool) -> Self {
        Metric {
            kind,
            phase_optimized,
        }
    }

    pub fn frobenius_raw() -> Self {
        Metric::new(MetricKind::FrobeniusRaw, false)
    }

    pub fn frobenius_normalized() -> Self {
        Metric::new(MetricKind::FrobeniusNormalized, false)
    }

    pub fn spectral() -> Self {
        Metric::new(MetricKind::Spectral, false)
    }

    pub fn phase_optimized(mut self) -> Self {
        self.phase_optimized = true;
        self
    }

    pub fn id(&self) -> String {
        if self.phase_optimized {
            format!("{}+phase-opt", self.kind.id())
        } else {
            self.kind.id().to_string()
        }
    }
}

impl Default for Metric {
    /// Phase-optimized Frobenius: the phase quotient has a closed form and
    /// the unitary invariance of the Frobenius norm carries the chaining
    /// property over to the induced distance measure.
    fn default() -> Self {
        Metric::frobenius_raw().phase_optimized()
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// A product of single-qubit unitaries (one per qubit, first factor on
/// qubit 0) with one shared global phase φ ∈ [0, 2π).
#[derive(Debug, Clone, Serialize)]
pub struct LocalUnitaryTriple {
    factors: Vec<UnitaryGate>,
    phase: f64,
}

impl LocalUnitaryTriple {
    pub fn new(factors: Vec<UnitaryGate>, phase: f64) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput(
                "a local product needs at least one factor".into(),
            ));
        }
        if let Some(bad) = factors.iter().find(|f| f.num_qubits() != 1) {
            return Err(Error::InvalidInput(format!(
                "local factors must be single-qubit unitaries, got {} qubits",
                bad.num_qubits()
            )));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidInput("phase must be finite".into()));
        }
        Ok(Self {
            factors,
            phase: phase.rem_euclid(TAU),
        })
    }

    pub fn factors(&self) -> &[UnitaryGate] {
        &self.factors
    }

    /// Factor acting on qubit 0.
    pub fn a(&self) -> &UnitaryGate {
        &self.factors[0]
    }

    /// Factor acting on qubit 1 (two-qubit products only).
    pub fn b(&self) -> Option<&UnitaryGate> {
        self.factors.get(1)
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// e^{iφ} · (f₀ ⊗ f₁ ⊗ …).
    pub fn product(&self) -> UnitaryGate {
        let mut gate = self.factors[0].clone();
        for factor in &self.factors[1..] {
            gate = gate.tensor(factor);
        }
        gate.with_global_phase(self.phase)
    }
}

/// Which way the numeric value bounds the true optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundDirection {
    /// The witness achieves the value, so the true maximum is at least it.
    LowerBoundOfMax,
    /// The witness achieves the value, so the true minimum is at most it.
    UpperBoundOfMin,
}

/// The optimizer's certificate: the concrete point achieving the reported
/// value.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    State { state: PureState },
    LocalUnitaries { locals: LocalUnitaryTriple },
}

/// Result of a strength-measure run.
#[derive(Debug, Clone, Serialize)]
pub struct StrengthReport {
    /// "k-delta" or "k-distance+<metric id>".
    pub measure: String,
    pub direction: BoundDirection,
    /// Ebits for k-delta; metric units for k-distance.
    pub value: f64,
    pub witness: Witness,
    /// The cut the entropy is measured across; absent for k-distance, which
    /// minimizes over fully local products instead of a two-sided cut.
    pub cut: Option<Bipartition>,
    pub metric: Option<Metric>,
    pub starts: usize,
    pub seed: RngSeed,
    /// Whether the winning start's simplex met its tolerance.
    pub converged: bool,
    /// Spread between the best and second-best start values; absent for a
    /// single start.
    pub residual: Option<f64>,
}

impl StrengthReport {
    /// Recomputes the objective at the stored witness. The invariant on
    /// every report is that this agrees with `value` within 1e-9.
    pub fn reevaluate_witness(&self, u: &UnitaryGate) -> Result<f64> {
        match &self.witness {
            Witness::State { state } => {
                let cut = self.cut.as_ref().ok_or_else(|| {
                    Error::InvalidInput("state witness requires a cut".into())
                })?;
                evaluate_delta(u, state, cut)
            }
            Witness::LocalUnitaries { locals } => {
                let metric = self.metric.ok_or_else(|| {
                    Error::InvalidInput("local-unitary witness requires a metric".into())
                })?;
                metric_distance(u, &locals.product(), &metric)
            }
        }
    }
}

/// Multi-start search controls.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OptimizerOptions {
    pub starts: usize,
    /// Simplex iterations per start (shared across the polish restarts).
    pub max_iterations: usize,
    /// Simplex convergence tolerance on the objective spread.
    pub tolerance: f64,
    pub seed: RngSeed,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        OptimizerOptions {
            starts: 32,
            max_iterations: 2000,
            tolerance: 1e-9,
            seed: RngSeed(0),
        }
    }
}

impl OptimizerOptions {
    pub fn with_seed(seed: RngSeed) -> Self {
        OptimizerOptions {
            seed,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::InvalidOptions("starts must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidOptions(
                "max_iterations must be at least 1".into(),
            ));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidOptions(
                "tolerance must be positive and finite".into(),
            ));
        }
        Ok(())
    }
}

/// Selects which strength measure a harness or bound computation runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "measure", rename_all = "kebab-case")]
pub enum Measure {
    KDelta,
    KDistance { metric: Metric },
}

impl Measure {
    pub fn id(&self) -> String {
        match self {
            Measure::KDelta => "k-delta".to_string(),
            Measure::KDistance { metric } => format!("k-distance+{}", metric.id()),
        }
    }

    /// Runs the measure; the cut is only consulted by k-delta (k-distance
    /// minimizes over fully local products).
    pub fn evaluate(
        &self,
        u: &UnitaryGate,
        cut: &Bipartition,
        opts: &OptimizerOptions,
    ) -> Result<StrengthReport> {
        match self {
            Measure::KDelta => k_delta(u, cut, opts),
            Measure::KDistance { metric } => k_distance(u, metric, opts),
        }
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// |E(Uψ) − E(ψ)| in ebits across the cut: the inner objective of the
/// entangling-power measure.
pub fn evaluate_delta(u: &UnitaryGate, psi: &PureState, cut: &Bipartition) -> Result<f64> {
    if u.num_qubits() != psi.num_qubits() || u.num_qubits() != cut.num_qubits() {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: gate on {} qubits, state on {}, cut on {}",
            u.num_qubits(),
            psi.num_qubits(),
            cut.num_qubits()
        )));
    }
    let before = entanglement_entropy(psi, cut)?.ebits;
    let after = entanglement_entropy(&u.apply(psi)?, cut)?.ebits;
    Ok((after - before).abs())
}

fn state_from_coords(num_qubits: usize, coords: &[f64]) -> Option<PureState> {
    let dim = 1usize << num_qubits;
    let amplitudes: Vec<Complex64> = (0..dim)
        .map(|i| Complex64::new(coords[2 * i], coords[2 * i + 1]))
        .collect();
    PureState::normalized(num_qubits, amplitudes).ok()
}

struct StartOutcome {
    value: f64,
    point: Vec<f64>,
    converged: bool,
}

/// Runs all starts sequentially; each start derives its sub-seed as
/// seed ⊕ start-index, so the outcome set is independent of execution order.
fn run_starts<I, O>(opts: &OptimizerOptions, init: I, mut objective: O, step: f64) -> Vec<StartOutcome>
where
    I: Fn(RngSeed) -> Vec<f64>,
    O: FnMut(&[f64]) -> f64,
{
    let simplex_options = SimplexOptions {
        max_iterations: opts.max_iterations,
        tolerance: opts.tolerance,
        initial_step: step,
        polish_rounds: 3,
    };
    (0..opts.starts)
        .map(|start| {
            let sub_seed = RngSeed(opts.seed.0 ^ start as u64);
            let x0 = init(sub_seed);
            let result = simplex::minimize(&mut objective, &x0, &simplex_options);
            StartOutcome {
                value: result.value,
                point: result.point,
                converged: result.converged,
            }
        })
        .collect()
}

/// Index of the winning start (smallest objective value, ties broken by the
/// lowest start index) and the spread to the runner-up.
fn pick_best(outcomes: &[StartOutcome]) -> (usize, Option<f64>) {
    let mut best = 0usize;
    for (i, o) in outcomes.iter().enumerate().skip(1) {
        if o.value < outcomes[best].value {
            best = i;
        }
    }
    let runner_up = outcomes
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != best)
        .map(|(_, o)| o.value)
        .min_by(|a, b| a.total_cmp(b));
    let residual = runner_up.map(|v| (v - outcomes[best].value).abs());
    (best, residual)
}

/// Entangling power K_Δ(U) across the cut by multi-start maximization over
/// pure states (2·2^n unconstrained real coordinates, normalized inside the
/// objective). The report's value is a certified lower bound on the true
/// maximum, achieved by the witness state.
pub fn k_delta(u: &UnitaryGate, cut: &Bipartition, opts: &OptimizerOptions) -> Result<StrengthReport> {
    opts.validate()?;
    if u.num_qubits() != cut.num_qubits() {
        return Err(Error::InvalidInput(format!(
            "gate acts on {} qubits but the cut describes {}",
            u.num_qubits(),
            cut.num_qubits()
        )));
    }
    let n = u.num_qubits();

    // Negated objective: the simplex minimizes.
    let objective = |x: &[f64]| -> f64 {
        match state_from_coords(n, x) {
            Some(psi) => -evaluate_delta(u, &psi, cut).expect("dimensions checked"),
            // Degenerate coordinates (unnormalizable) carry no signal.
            None => 0.0,
        }
    };
    let init = |sub_seed: RngSeed| -> Vec<f64> {
        let mut rng = rng::rng_from_seed(sub_seed);
        let psi = rng::random_state_from_rng(n, &mut rng);
        psi.amplitudes().iter().flat_map(|a| [a.re, a.im]).collect()
    };

    let outcomes = run_starts(opts, init, objective, 0.35);
    let (best, residual) = pick_best(&outcomes);
    let winner = &outcomes[best];
    let witness_state =
        state_from_coords(n, &winner.point).expect("winning point is normalizable");
    Ok(StrengthReport {
        measure: "k-delta".to_string(),
        direction: BoundDirection::LowerBoundOfMax,
        value: -winner.value,
        witness: Witness::State {
            state: witness_state,
        },
        cut: Some(cut.clone()),
        metric: None,
        starts: opts.starts,
        seed: opts.seed,
        converged: winner.converged,
        residual,
    })
}

/// D(U, V) under the chosen metric. Symmetric, and zero exactly when the
/// operators agree up to the allowed phase.
pub fn metric_distance(u: &UnitaryGate, v: &UnitaryGate, metric: &Metric) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::InvalidInput(format!(
            "cannot compare a {}-qubit gate with a {}-qubit gate",
            u.num_qubits(),
            v.num_qubits()
        )));
    }
    Ok(metric_distance_mats(u.matrix(), v.matrix(), metric))
}

/// Distance between two equal-dimension matrices; shared by the public entry
/// point and the optimizer's inner loop (which builds its candidates as raw
/// matrices to skip re-validation).
fn metric_distance_mats(u: &ComplexMatrix, v: &ComplexMatrix, metric: &Metric) -> f64 {
    let dim = u.rows() as f64;
    match metric.kind {
        MetricKind::FrobeniusRaw | MetricKind::FrobeniusNormalized => {
            let raw = if metric.phase_optimized {
                // ‖U − e^{iφ}V‖ is minimized at φ* = arg tr(V†U). Evaluating
                // by direct subtraction at φ* instead of the closed form
                // ‖U‖² + ‖V‖² − 2|tr(V†U)| avoids the catastrophic
                // cancellation of the latter near zero distance.
                let overlap = v.inner(u);
                let phase = if overlap.norm() < 1e-300 {
                    Complex64::ONE
                } else {
                    overlap / overlap.norm()
                };
                u.sub(&v.scale(phase)).frobenius_norm()
            } else {
                u.sub(v).frobenius_norm()
            };
            if metric.kind == MetricKind::FrobeniusNormalized {
                raw / dim.sqrt()
            } else {
                raw
            }
        }
        MetricKind::Spectral => {
            if metric.phase_optimized {
                let objective = |phi: f64| spectral_gap(u, v, phi);
                let (_, value) = minimize_over_phase(objective);
                value
            } else {
                u.sub(v).norms().spectral
            }
        }
    }
}

fn spectral_gap(u: &ComplexMatrix, v: &ComplexMatrix, phi: f64) -> f64 {
    let shifted = u.sub(&v.scale(Complex64::from_polar(1.0, phi)));
    shifted.norms().spectral
}

/// The phase minimizing the Frobenius distance ‖U − e^{iφ}V‖, in [0, 2π).
fn optimal_frobenius_phase(u: &ComplexMatrix, v: &ComplexMatrix) -> f64 {
    let overlap = v.inner(u);
    if overlap.norm() < 1e-300 {
        0.0
    } else {
        overlap.arg().rem_euclid(TAU)
    }
}

/// 1-D minimization over φ ∈ [0, 2π): coarse 64-point grid, then
/// golden-section refinement around the best grid point. Used where no
/// closed-form phase optimum exists (spectral norm).
fn minimize_over_phase<F: Fn(f64) -> f64>(f: F) -> (f64, f64) {
    const GRID: usize = 64;
    let step = TAU / GRID as f64;
    let mut best_phi = 0.0;
    let mut best_val = f(0.0);
    for k in 1..GRID {
        let phi = k as f64 * step;
        let val = f(phi);
        if val < best_val {
            best_val = val;
            best_phi = phi;
        }
    }
    let (mut lo, mut hi) = (best_phi - step, best_phi + step);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..60 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    let val = f(mid);
    if val < best_val {
        (mid.rem_euclid(TAU), val)
    } else {
        (best_phi.rem_euclid(TAU), best_val)
    }
}

/// Single-qubit unitary Rz(α)·Ry(β)·Rz(γ); covers SU(2), and with the shared
/// global phase covers every product of single-qubit unitaries exactly.
fn euler_matrix(alpha: f64, beta: f64, gamma: f64) -> ComplexMatrix {
    let c = (beta / 2.0).cos();
    let s = (beta / 2.0).sin();
    let plus = Complex64::from_polar(1.0, -(alpha + gamma) / 2.0);
    let minus = Complex64::from_polar(1.0, -(alpha - gamma) / 2.0);
    ComplexMatrix::from_rows(&[
        vec![plus * c, -minus * s],
        vec![minus.conj() * s, plus.conj() * c],
    ])
    .expect("fixed 2x2 shape")
}

/// Tensor product of per-qubit Euler factors; the trailing angle, when
/// present, is a searched global phase (omitted when the metric already
/// quotients phase in closed form).
fn local_product_matrix(num_qubits: usize, params: &[f64], search_phase: bool) -> ComplexMatrix {
    let mut m = euler_matrix(params[0], params[1], params[2]);
    for q in 1..num_qubits {
        let factor = euler_matrix(params[3 * q], params[3 * q + 1], params[3 * q + 2]);
        m = m.tensor(&factor);
    }
    if search_phase {
        m = m.scale(Complex64::from_polar(1.0, params[3 * num_qubits]));
    }
    m
}

/// Distance K_D(U) to the set of local-unitary products by multi-start
/// minimization over per-qubit Euler angles (plus a searched global phase
/// when the metric is not already phase-optimized). The report's value is a
/// certified upper bound on the true minimum, achieved by the witness.
pub fn k_distance(u: &UnitaryGate, metric: &Metric, opts: &OptimizerOptions) -> Result<StrengthReport> {
    opts.validate()?;
    let n = u.num_qubits();
    let search_phase = !metric.phase_optimized;
    let num_params = 3 * n + usize::from(search_phase);

    let objective = |x: &[f64]| -> f64 {
        let candidate = local_product_matrix(n, x, search_phase);
        metric_distance_mats(u.matrix(), &candidate, metric)
    };
    let init = |sub_seed: RngSeed| -> Vec<f64> {
        let mut rng = rng::rng_from_seed(sub_seed);
        (0..num_params)
            .map(|_| TAU * rng::uniform01(&mut rng))
            .collect()
    };

    let outcomes = run_starts(opts, init, objective, 0.5);
    let (best, residual) = pick_best(&outcomes);
    let winner = &outcomes[best];

    let factors: Vec<UnitaryGate> = (0..n)
        .map(|q| {
            UnitaryGate::new(euler_matrix(
                winner.point[3 * q],
                winner.point[3 * q + 1],
                winner.point[3 * q + 2],
            ))
            .expect("Euler factors are unitary by construction")
        })
        .collect();
    let phase = if search_phase {
        winner.point[3 * n]
    } else {
        let product = local_product_matrix(n, &winner.point, false);
        optimal_frobenius_phase(u.matrix(), &product)
    };
    let locals = LocalUnitaryTriple::new(factors, phase)?;

    Ok(StrengthReport {
        measure: format!("k-distance+{}", metric.id()),
        direction: BoundDirection::UpperBoundOfMin,
        value: winner.value,
        witness: Witness::LocalUnitaries { locals },
        cut: None,
        metric: Some(*metric),
        starts: opts.starts,
        seed: opts.seed,
        converged: winner.converged,
        residual,
    })
}
