//! Argument surface: clap definitions, the config-file merge, and helpers
//! turning flags into library options.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use krakos::bipartite::Side;
use krakos::strength::{Measure, Metric, MetricKind, OptimizerOptions};
use krakos::{Bipartition, Error, Result, RngSeed};

#[derive(Parser)]
#[command(
    name = "krakos",
    version,
    about = "Strength measures for quantum gates: entangling power, distance to local \
             products, algebraic property checks, CNOT-count bounds, and the fern exemplar"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Compute a strength measure of one gate
    Strength {
        #[command(subcommand)]
        which: StrengthCommand,
    },
    /// Check an algebraic property over random ensembles
    Check {
        #[command(subcommand)]
        which: CheckCommand,
    },
    /// Derive gate-count lower bounds
    Bound {
        #[command(subcommand)]
        which: BoundCommand,
    },
    /// Run the chaos game and render the fern
    Fern(FernArgs),
    /// Inspect gate specifications
    Gate {
        #[command(subcommand)]
        which: GateCommand,
    },
}

#[derive(Subcommand)]
pub enum StrengthCommand {
    /// Entangling power: certified lower bound of the maximum entropy change
    Kdelta(KdeltaArgs),
    /// Distance to local products: certified upper bound of the minimum
    Kdist(KdistArgs),
}

#[derive(Subcommand)]
pub enum CheckCommand {
    /// Measures vanish on local products A (x) B
    Locality(EnsembleArgs),
    /// K(UV) <= K(U) + K(V) over random pairs
    Chaining(EnsembleArgs),
    /// K(U (x) I) = K(U) for an appended idle qubit
    Stability(StabilityArgs),
}

#[derive(Subcommand)]
pub enum BoundCommand {
    /// Lower bound on the CNOT count of a gate
    Cnot(BoundArgs),
}

#[derive(Subcommand)]
pub enum GateCommand {
    /// Parse a gate spec and print its matrix
    Show(GateShowArgs),
}

#[derive(Args, Default)]
pub struct GateInput {
    /// Gate spec: I, X, Y, Z, H, CNOT, CZ, SWAP, CPHASE(angle), or inline JSON
    #[arg(long)]
    pub gate: Option<String>,
    /// File containing a gate spec
    #[arg(long)]
    pub gate_file: Option<PathBuf>,
}

#[derive(Args, Default)]
pub struct OptimizerFlags {
    /// Number of random optimizer restarts
    #[arg(long)]
    pub starts: Option<usize>,
    /// Master seed (falls back to config, then KRAKOS_SEED, then 0)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Convergence tolerance (chaining tolerance for `check chaining`)
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Iteration budget per restart
    #[arg(long)]
    pub max_iterations: Option<usize>,
}

#[derive(Args, Default)]
pub struct MetricFlags {
    /// Distance metric
    #[arg(long, value_enum)]
    pub metric: Option<MetricName>,
    /// Quotient out the global phase inside the metric
    #[arg(long)]
    pub phase_opt: bool,
}

#[derive(Args, Default)]
pub struct OutputFlags {
    /// Also write the JSON report to this file
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON config file whose keys mirror the long flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum MetricName {
    Frob,
    FrobNorm,
    Spectral,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum MeasureName {
    Kdelta,
    Kdist,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum AncillaSide {
    A,
    B,
}

#[derive(Args)]
pub struct KdeltaArgs {
    #[command(flatten)]
    pub gate: GateInput,
    /// Comma-separated qubit indices forming side A (default: qubit 0)
    #[arg(long)]
    pub cut: Option<String>,
    #[command(flatten)]
    pub optimizer: OptimizerFlags,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Args)]
pub struct KdistArgs {
    #[command(flatten)]
    pub gate: GateInput,
    #[command(flatten)]
    pub metric: MetricFlags,
    #[command(flatten)]
    pub optimizer: OptimizerFlags,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Args)]
pub struct EnsembleArgs {
    /// Number of sampled gates or pairs
    #[arg(long)]
    pub samples: Option<usize>,
    /// Measure the property is checked for
    #[arg(long, value_enum)]
    pub measure: Option<MeasureName>,
    #[command(flatten)]
    pub metric: MetricFlags,
    #[command(flatten)]
    pub optimizer: OptimizerFlags,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Args)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub gate: GateInput,
    /// Side of the cut the ancilla joins
    #[arg(long, value_enum)]
    pub ancilla: Option<AncillaSide>,
    /// Measure the property is checked for
    #[arg(long, value_enum)]
    pub measure: Option<MeasureName>,
    #[command(flatten)]
    pub metric: MetricFlags,
    #[command(flatten)]
    pub optimizer: OptimizerFlags,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub gate: GateInput,
    /// Comma-separated qubit indices forming side A (default: qubit 0)
    #[arg(long)]
    pub cut: Option<String>,
    /// Measure the bound is derived from
    #[arg(long, value_enum)]
    pub measure: Option<MeasureName>,
    #[command(flatten)]
    pub metric: MetricFlags,
    #[command(flatten)]
    pub optimizer: OptimizerFlags,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Args)]
pub struct FernArgs {
    /// Chaos-game iterations
    #[arg(long)]
    pub iters: Option<usize>,
    /// Leading iterations discarded from the emitted points
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Master seed (falls back to config, then KRAKOS_SEED, then 0)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Raster width in pixels
    #[arg(long)]
    pub width: Option<usize>,
    /// Raster height in pixels
    #[arg(long)]
    pub height: Option<usize>,
    /// Write the render here as ASCII PGM
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the emitted points here as CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// JSON config file whose keys mirror the long flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct GateShowArgs {
    /// Gate spec (positional); alternatively use --gate-file
    pub spec: Option<String>,
    #[command(flatten)]
    pub gate: GateInput,
    #[command(flatten)]
    pub output: OutputFlags,
}

/// Keys a config file may define; each maps 1:1 onto a long flag.
const CONFIG_KEYS: &[&str] = &[
    "gate",
    "gate-file",
    "cut",
    "metric",
    "phase-opt",
    "starts",
    "seed",
    "tolerance",
    "max-iterations",
    "samples",
    "measure",
    "ancilla",
    "iters",
    "burn-in",
    "width",
    "height",
    "out",
    "csv",
];

/// Parsed config file: flat JSON object mirroring the flag names. Flags given
/// on the command line always win.
#[derive(Debug)]
pub struct Config {
    values: serde_json::Map<String, Value>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Config {
                values: serde_json::Map::new(),
            });
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidInput(format!("cannot read config {}: {e}", path.display()))
        })?;
        let parsed: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: format!("config {}: {e}", path.display()),
        })?;
        let Value::Object(values) = parsed else {
            return Err(Error::InvalidInput(format!(
                "config {} must be a JSON object",
                path.display()
            )));
        };
        for key in values.keys() {
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "config key {key:?} does not correspond to a flag"
                )));
            }
        }
        Ok(Config { values })
    }

    fn string(&self, key: &str) -> Result<Option<String>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(other) => Err(Error::InvalidInput(format!(
                "config key {key:?} must be a string, got {other}"
            ))),
        }
    }

    fn unsigned(&self, key: &str) -> Result<Option<u64>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::Number(n)) if n.as_u64().is_some() => Ok(n.as_u64()),
            Some(other) => Err(Error::InvalidInput(format!(
                "config key {key:?} must be a nonnegative integer, got {other}"
            ))),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::Number(n)) if n.as_f64().is_some() => Ok(n.as_f64()),
            Some(other) => Err(Error::InvalidInput(format!(
                "config key {key:?} must be a number, got {other}"
            ))),
        }
    }

    fn boolean(&self, key: &str) -> Result<Option<bool>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(Value::Bool(b)) => Ok(Some(*b)),
            Some(other) => Err(Error::InvalidInput(format!(
                "config key {key:?} must be a boolean, got {other}"
            ))),
        }
    }

    fn usize_value(&self, key: &str) -> Result<Option<usize>> {
        Ok(self.unsigned(key)?.map(|v| v as usize))
    }
}

impl GateInput {
    pub fn merge(&mut self, config: &Config) -> Result<()> {
        if self.gate.is_none() {
            self.gate = config.string("gate")?;
        }
        if self.gate_file.is_none() {
            self.gate_file = config.string("gate-file")?.map(PathBuf::from);
        }
        Ok(())
    }
}

impl OptimizerFlags {
    pub fn merge(&mut self, config: &Config) -> Result<()> {
        if self.starts.is_none() {
            self.starts = config.usize_value("starts")?;
        }
        if self.seed.is_none() {
            self.seed = config.unsigned("seed")?;
        }
        if self.tolerance.is_none() {
            self.tolerance = config.float("tolerance")?;
        }
        if self.max_iterations.is_none() {
            self.max_iterations = config.usize_value("max-iterations")?;
        }
        Ok(())
    }

    /// Builds optimizer options; `use_tolerance_flag` is false for commands
    /// where --tolerance means something else (chaining).
    pub fn build(&self, use_tolerance_flag: bool) -> Result<OptimizerOptions> {
        let defaults = OptimizerOptions::default();
        Ok(OptimizerOptions {
            starts: self.starts.unwrap_or(defaults.starts),
            max_iterations: self.max_iterations.unwrap_or(defaults.max_iterations),
            tolerance: if use_tolerance_flag {
                self.tolerance.unwrap_or(defaults.tolerance)
            } else {
                defaults.tolerance
            },
            seed: resolve_seed(self.seed)?,
        })
    }
}

impl MetricFlags {
    pub fn merge(&mut self, config: &Config) -> Result<()> {
        if self.metric.is_none() {
            self.metric = match config.string("metric")?.as_deref() {
                None => None,
                Some("frob") => Some(MetricName::Frob),
                Some("frob-norm") => Some(MetricName::FrobNorm),
                Some("spectral") => Some(MetricName::Spectral),
                Some(other) => {
                    return Err(Error::InvalidInput(format!(
                        "config metric {other:?} must be frob, frob-norm, or spectral"
                    )))
                }
            };
        }
        self.phase_opt = self.phase_opt || config.boolean("phase-opt")?.unwrap_or(false);
        Ok(())
    }

    pub fn build(&self) -> Metric {
        let kind = match self.metric.unwrap_or(MetricName::Frob) {
            MetricName::Frob => MetricKind::FrobeniusRaw,
            MetricName::FrobNorm => MetricKind::FrobeniusNormalized,
            MetricName::Spectral => MetricKind::Spectral,
        };
        Metric::new(kind, self.phase_opt)
    }
}

pub fn merge_measure(
    flag: Option<MeasureName>,
    config: &Config,
) -> Result<Option<MeasureName>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match config.string("measure")?.as_deref() {
        None => Ok(None),
        Some("kdelta") => Ok(Some(MeasureName::Kdelta)),
        Some("kdist") => Ok(Some(MeasureName::Kdist)),
        Some(other) => Err(Error::InvalidInput(format!(
            "config measure {other:?} must be kdelta or kdist"
        ))),
    }
}

pub fn build_measure(name: Option<MeasureName>, metric: &MetricFlags) -> Measure {
    match name.unwrap_or(MeasureName::Kdelta) {
        MeasureName::Kdelta => Measure::KDelta,
        MeasureName::Kdist => Measure::KDistance {
            metric: metric.build(),
        },
    }
}

pub fn merge_ancilla(
    flag: Option<AncillaSide>,
    config: &Config,
) -> Result<Option<AncillaSide>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match config.string("ancilla")?.as_deref() {
        None => Ok(None),
        Some("a") | Some("A") => Ok(Some(AncillaSide::A)),
        Some("b") | Some("B") => Ok(Some(AncillaSide::B)),
        Some(other) => Err(Error::InvalidInput(format!(
            "config ancilla {other:?} must be a or b"
        ))),
    }
}

impl AncillaSide {
    pub fn to_side(self) -> Side {
        match self {
            AncillaSide::A => Side::A,
            AncillaSide::B => Side::B,
        }
    }
}

/// Seed precedence: --seed flag, config "seed", KRAKOS_SEED, then 0.
pub fn resolve_seed(flag_or_config: Option<u64>) -> Result<RngSeed> {
    if let Some(seed) = flag_or_config {
        return Ok(RngSeed(seed));
    }
    match std::env::var("KRAKOS_SEED") {
        Ok(text) => {
            let value = text.trim().parse::<u64>().map_err(|_| {
                Error::InvalidInput(format!(
                    "KRAKOS_SEED must be an unsigned integer, got {text:?}"
                ))
            })?;
            Ok(RngSeed(value))
        }
        Err(_) => Ok(RngSeed(0)),
    }
}

pub fn parse_cut(text: &str, num_qubits: usize) -> Result<Bipartition> {
    let mut indices = Vec::new();
    for part in text.split(',') {
        let index = part.trim().parse::<usize>().map_err(|_| {
            Error::InvalidInput(format!("cut {text:?}: {part:?} is not a qubit index"))
        })?;
        indices.push(index);
    }
    Bipartition::new(num_qubits, &indices)
}

/// Merges an Option-valued flag from the config, used by fern and ensemble
/// sizes.
pub fn merge_usize(slot: &mut Option<usize>, config: &Config, key: &str) -> Result<()> {
    if slot.is_none() {
        *slot = config.usize_value(key)?;
    }
    Ok(())
}

pub fn merge_u64(slot: &mut Option<u64>, config: &Config, key: &str) -> Result<()> {
    if slot.is_none() {
        *slot = config.unsigned(key)?;
    }
    Ok(())
}

pub fn merge_string(slot: &mut Option<String>, config: &Config, key: &str) -> Result<()> {
    if slot.is_none() {
        *slot = config.string(key)?;
    }
    Ok(())
}

pub fn merge_path(slot: &mut Option<PathBuf>, config: &Config, key: &str) -> Result<()> {
    if slot.is_none() {
        *slot = config.string(key)?.map(PathBuf::from);
    }
    Ok(())
}
