//! Command dispatch: resolve flags against the config, run the library, and
//! emit one JSON report on standard output plus a summary on standard error.

use std::path::Path;
use std::time::Instant;

use krakos::fern;
use krakos::{Bipartition, RngSeed, UnitaryGate};

use crate::cli::{
    build_measure, merge_ancilla, merge_measure, merge_path, merge_string, merge_u64,
    merge_usize, parse_cut, resolve_seed, AncillaSide, BoundArgs, BoundCommand, CheckCommand,
    Cli, Command, Config, EnsembleArgs, FernArgs, GateInput, GateShowArgs, KdeltaArgs,
    KdistArgs, StabilityArgs, StrengthCommand,
};
use crate::gatespec::parse_gate_spec;
use crate::report::{FernStats, Payload, RunReport};

/// A run that ended without a report: exit code plus the stderr message.
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<krakos::Error> for Failure {
    fn from(e: krakos::Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn internal(message: String) -> Failure {
    Failure { code: 1, message }
}

pub fn dispatch(cli: Cli, argv: &[String], started: Instant) -> Result<i32, Failure> {
    match cli.command {
        Command::Strength { which } => match which {
            StrengthCommand::Kdelta(args) => run_kdelta(args, argv, started),
            StrengthCommand::Kdist(args) => run_kdist(args, argv, started),
        },
        Command::Check { which } => match which {
            CheckCommand::Locality(args) => run_locality(args, argv, started),
            CheckCommand::Chaining(args) => run_chaining(args, argv, started),
            CheckCommand::Stability(args) => run_stability(args, argv, started),
        },
        Command::Bound { which } => match which {
            BoundCommand::Cnot(args) => run_bound(args, argv, started),
        },
        Command::Fern(args) => run_fern(args, argv, started),
        Command::Gate { which } => match which {
            crate::cli::GateCommand::Show(args) => run_gate_show(args, argv, started),
        },
    }
}

fn load_gate(input: &GateInput) -> krakos::Result<UnitaryGate> {
    match (&input.gate, &input.gate_file) {
        (Some(_), Some(_)) => Err(krakos::Error::InvalidInput(
            "give either --gate or --gate-file, not both".into(),
        )),
        (Some(text), None) => parse_gate_spec(text),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                krakos::Error::InvalidInput(format!("cannot read {}: {e}", path.display()))
            })?;
            parse_gate_spec(&text)
        }
        (None, None) => Err(krakos::Error::InvalidInput(
            "a gate is required: pass --gate or --gate-file".into(),
        )),
    }
}

fn build_cut(text: Option<&str>, num_qubits: usize) -> krakos::Result<Bipartition> {
    match text {
        Some(t) => parse_cut(t, num_qubits),
        None => Bipartition::first_vs_rest(num_qubits),
    }
}

fn emit(
    argv: &[String],
    seed: RngSeed,
    payload: Payload,
    out: Option<&Path>,
    started: Instant,
    summary: String,
) -> Result<i32, Failure> {
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;
    let report = RunReport::new(argv.to_vec(), seed.0, wall_ms, payload);
    let json = serde_json::to_string(&report)
        .map_err(|e| internal(format!("report serialization failed: {e}")))?;
    println!("{json}");
    if let Some(path) = out {
        std::fs::write(path, format!("{json}\n"))
            .map_err(|e| internal(format!("cannot write {}: {e}", path.display())))?;
    }
    eprintln!("{summary}");
    Ok(report.exit_code())
}

fn run_kdelta(mut args: KdeltaArgs, argv: &[String], started: Instant) -> Result<i32, Failure> {
    let config = Config::load(args.output.config.as_deref())?;
    args.gate.merge(&config)?;
    args.optimizer.merge(&config)?;
    merge_string(&mut args.cut, &config, "cut")?;
    merge_path(&mut args.output.out, &config, "out")?;

    let gate = load_gate(&args.gate)?;
    let cut = build_cut(args.cut.as_deref(), gate.num_qubits())?;
    let opts = args.optimizer.build(true)?;
    let report = krakos::k_delta(&gate, &cut, &opts)?;
    let summary = format!(
        "k-delta = {:.6} over cut {cut} ({}, {} starts, seed {})",
        report.value,
        if report.converged { "converged" } else { "not converged" },
        opts.starts,
        opts.seed,
    );
    emit(
        argv,
        opts.seed,
        Payload::Strength(report),
        args.output.out.as_deref(),
        started,
        summary,
    )
}

fn run_kdist(mut args: KdistArgs, argv: &[String], started: Instant) -> Result<i32, Failure> {
    let config = Config::load(args.output.config.as_deref())?;
    args.gate.merge(&config)?;
    args.metric.merge(&config)?;
    args.optimizer.merge(&config)?;
    merge_path(&mut args.output.out, &config, "out")?;

    let gate = load_gate(&args.gate)?;
    let metric = args.metric.build();
    let opts = args.optimizer.build(true)?;
    let report = krakos::k_distance(&gate, &metric, &opts)?;
    let summary = format!(
        "k-distance[{metric}] = {:.6} ({}, {} starts, seed {})",
        report.value,
        if report.converged { "converged" } else { "not converged" },
        opts.starts,
        opts.seed,
    );
    emit(
        argv,
        opts.seed,
        Payload::Strength(report),
        args.output.out.as_deref(),
        started,
        summary,
    )
}

fn run_locality(
    mut args: EnsembleArgs,
    argv: &[String],
    started: Instant,
) -> Result<i32, Failure> {
    let config = Config::load(args.output.config.as_deref())?;
    args.metric.merge(&config)?;
    args.optimizer.merge(&config)?;
    merge_usize(&mut args.samples, &config, "samples")?;
    merge_path(&mut args.output.out, &config, "out")?;
    let measure = build_measure(merge_measure(args.measure, &config)?, &args.metric);

    let samples = args.samples.unwrap_or(20);
    let opts = args.optimizer.build(true)?;
    let report = krakos::check_locality(&measure, samples, opts.seed, &opts)?;
    let summary = format!(
        "locality[{}]: {}/{} violations (worst {:.3e}, tolerance {:.0e})",
        report.measure, report.violations, report.samples, report.worst_excess, report.tolerance,
    );
    emit(
        argv,
        opts.seed,
        Payload::Property(report),
        args.output.out.as_deref(),
        started,
        summary,
    )
}

fn run_chaining(
    mut args: EnsembleArgs,
    argv: &[String],
    started: Instant,
) -> Result<i32, Failure> {
    let config = Config::load(args.output.config.as_deref())?;
    args.metric.merge(&config)?;
    args.optimizer.merge(&config)?;
    merge_usize(&mut args.samples, &config, "samples")?;
    merge_path(&mut args.output.out, &config, "out")?;
    let measure = build_measure(merge_measure(args.measure, &config)?, &args.metric);

    let samples = args.samples.unwrap_or(20);
    // For chaining, --tolerance is the property tolerance; the optimizer
    // keeps its default convergence tolerance.
    let tolerance = args.optimizer.tolerance.unwrap_or(0.02);
    let opts = args.optimizer.build(false)?;
    let report = krakos::check_chaining(&measure, samples, opts.seed, tolerance, &opts)?;
    let summary = format!(
        "chaining[{}]: {}/{} persistent violations, {} transient (tolerance {})",
        report.measure, report.violations, report.samples, report.transient_violations,
        report.tolerance,
    );
    emit(
        argv,
        opts.seed,
        Payload::Property(report),
        args.output.out.as_deref(),
        started,
        summary,
    )
}

fn run_stability(
    mut args: StabilityArgs,
    argv: &[String],
    started: Instant,
) -> Result<i32, Failure> {
    let config = Config::load(args.output.config.as_deref())?;
    args.gate.merge(&config)?;
    args.metric.merge(&config)?;
    args.optimizer.merge(&config)?;
    merge_path(&mut args.output.out, &config, "out")?;
    let measure = build_measure(merge_measure(args.measure, &config)?, &args.metric);
    let ancilla = merge_ancilla(args.ancilla, &config)?
        .unwrap_or(AncillaSide::B)
        .to_side();

    let gate = load_gate(&args.gate)?;
    let opts = args.optimizer.build(true)?;
    let report = krakos::check_stability(&measure, &gate, ancilla, &opts)?;
    let record = &report.details[0];
    let summary = format!(
        "stability[{}]: K = {:.6} with idle qubit vs {:.6} without (ancilla on side {:?})",
        report.measure, record.lhs, record.rhs, ancilla,
    );
    emit(
        argv,
        opts.seed,
        Payload::Property(report),
        args.output.out.as_deref(),
        started,
        summary,
    )
}

fn run_bound(mut args: BoundArgs, argv: &[String], started: Instant) -> Result<i32, Failure> {
    let config = Config::load(args.output.config.as_deref())?;
    args.gate.merge(&config)?;
    args.metric.merge(&config)?;
    args.optimizer.merge(&config)?;
    merge_string(&mut args.cut, &config, "cut")?;
    merge_path(&mut args.output.out, &config, "out")?;
    let measure = build_measure(merge_measure(args.measure, &config)?, &args.metric);

    let gate = load_gate(&args.gate)?;
    let cut = build_cut(args.cut.as_deref(), gate.num_qubits())?;
    let opts = args.optimizer.build(true)?;
    let bound = krakos::cnot_lower_bound(&gate, &cut, &measure, &opts)?;
    let mut summary = format!(
        "at least {} CNOT(s) needed ({}; strength {:.6}, k_cnot {:.6})",
        bound.lower_bound,
        if bound.sound { "sound" } else { "not sound" },
        bound.strength_used.value,
        bound.k_cnot,
    );
    if let Some(note) = &bound.note {
        summary.push_str(&format!("; note: {note}"));
    }
    emit(
        argv,
        opts.seed,
        Payload::Bound(bound),
        args.output.out.as_deref(),
        started,
        summary,
    )
}

fn run_fern(mut args: FernArgs, argv: &[String], started: Instant) -> Result<i32, Failure> {
    let config = Config::load(args.config.as_deref())?;
    merge_usize(&mut args.iters, &config, "iters")?;
    merge_usize(&mut args.burn_in, &config, "burn-in")?;
    merge_u64(&mut args.seed, &config, "seed")?;
    merge_usize(&mut args.width, &config, "width")?;
    merge_usize(&mut args.height, &config, "height")?;
    merge_path(&mut args.out, &config, "out")?;
    merge_path(&mut args.csv, &config, "csv")?;

    let iterations = args.iters.unwrap_or(100_000);
    let burn_in = args.burn_in.unwrap_or(100);
    let seed = resolve_seed(args.seed)?;
    let width = args.width.unwrap_or(400);
    let height = args.height.unwrap_or(800);

    let sys = fern::IfsSystem::barnsley_fern();
    let (points, selection_counts) = fern::chaos_game_traced(&sys, iterations, burn_in, seed)?;
    let bbox = fern::fern_view();
    let raster = fern::rasterize(&points, width, height, bbox)?;

    let inside = points.iter().filter(|p| bbox.contains(**p)).count();
    let stats = FernStats {
        iterations,
        burn_in,
        selection_counts,
        points: points.len(),
        in_view_fraction: inside as f64 / points.len() as f64,
        max_y: points.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max),
        width,
        height,
        nonzero_pixel_fraction: raster.nonzero_fraction(),
    };

    let mut written = Vec::new();
    if let Some(path) = &args.out {
        std::fs::write(path, fern::to_pgm(&raster))
            .map_err(|e| internal(format!("cannot write {}: {e}", path.display())))?;
        written.push(path.display().to_string());
    }
    if let Some(path) = &args.csv {
        std::fs::write(path, fern::points_to_csv(&points))
            .map_err(|e| internal(format!("cannot write {}: {e}", path.display())))?;
        written.push(path.display().to_string());
    }
    let summary = if written.is_empty() {
        format!("fern: {} points from {iterations} iterations (seed {seed})", points.len())
    } else {
        format!(
            "fern: {} points from {iterations} iterations (seed {seed}); wrote {}",
            points.len(),
            written.join(", ")
        )
    };
    emit(argv, seed, Payload::Fern(stats), None, started, summary)
}

fn run_gate_show(
    mut args: GateShowArgs,
    argv: &[String],
    started: Instant,
) -> Result<i32, Failure> {
    let config = Config::load(args.output.config.as_deref())?;
    args.gate.merge(&config)?;
    merge_path(&mut args.output.out, &config, "out")?;
    if args.spec.is_some() && (args.gate.gate.is_some() || args.gate.gate_file.is_some()) {
        return Err(krakos::Error::InvalidInput(
            "give the gate spec either positionally or via --gate/--gate-file".into(),
        )
        .into());
    }
    let gate = match &args.spec {
        Some(text) => parse_gate_spec(text)?,
        None => load_gate(&args.gate)?,
    };
    let summary = format!(
        "{} qubit(s), dim {}, unitarity residual {:.2e}",
        gate.num_qubits(),
        gate.dim(),
        gate.matrix().unitarity_residual(),
    );
    emit(
        argv,
        RngSeed(0),
        Payload::Gate(gate),
        args.output.out.as_deref(),
        started,
        summary,
    )
}
