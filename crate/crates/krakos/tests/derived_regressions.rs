//! Regression pins for every derived constant: Monte-Carlo and chaos-game
//! statistics computed once at fixed seeds and frozen here, plus worked
//! numeric examples checked against closed forms.

use num_complex::Complex64;

use krakos::fern;
use krakos::harness;
use krakos::strength::{Measure, OptimizerOptions};
use krakos::{
    entanglement_entropy, haar_random_unitary, random_pure_state, von_neumann_entropy,
    Bipartition, ComplexMatrix, PureState, RngSeed,
};

#[test]
fn tensor_of_x_and_identity_has_expected_entries() {
    let x = krakos::gates::pauli_x();
    let m = x.matrix().tensor(&ComplexMatrix::identity(2));
    for i in 0..4 {
        for j in 0..4 {
            let expected = if matches!((i, j), (0, 2) | (1, 3) | (2, 0) | (3, 1)) {
                Complex64::ONE
            } else {
                Complex64::ZERO
            };
            assert_eq!(m[(i, j)], expected, "entry ({i},{j})");
        }
    }
}

#[test]
fn norm_examples() {
    let id4 = ComplexMatrix::identity(4);
    let norms = id4.norms();
    assert!((norms.frobenius - 2.0).abs() < 1e-12);
    assert!((norms.spectral - 1.0).abs() < 1e-10);

    let diff = krakos::gates::cnot().matrix().sub(&id4);
    let norms = diff.norms();
    assert!((norms.frobenius - 2.0).abs() < 1e-12, "{}", norms.frobenius);
    assert!((norms.spectral - 2.0).abs() < 1e-10, "{}", norms.spectral);
}

#[test]
fn entropy_of_qubit_diagonal_example() {
    let rho = ComplexMatrix::from_rows(&[
        vec![Complex64::new(0.25, 0.0), Complex64::ZERO],
        vec![Complex64::ZERO, Complex64::new(0.75, 0.0)],
    ])
    .unwrap();
    let entropy = von_neumann_entropy(&rho).unwrap();
    assert!(
        (entropy.ebits - 0.811278).abs() < 1e-6,
        "entropy {:.7}",
        entropy.ebits
    );
}

#[test]
fn entanglement_of_tilted_superposition_example() {
    let theta = std::f64::consts::PI / 8.0;
    let mut amplitudes = vec![Complex64::ZERO; 4];
    amplitudes[0] = Complex64::new(theta.cos(), 0.0);
    amplitudes[3] = Complex64::new(theta.sin(), 0.0);
    let psi = PureState::new(2, amplitudes).unwrap();
    let cut = Bipartition::first_vs_rest(2).unwrap();
    let entropy = entanglement_entropy(&psi, &cut).unwrap();
    assert!(
        (entropy.ebits - 0.60088).abs() < 1e-4,
        "entropy {:.6}",
        entropy.ebits
    );
}

/// Eigenvalue phases of Haar-random one-qubit unitaries are uniform on the
/// circle. Eigenvalues come from the quadratic formula, independent of any
/// library eigensolver. Chi-square over 8 bins, 4000 phases; 7 degrees of
/// freedom give a 24.322 critical value at p = 0.001.
#[test]
fn haar_eigenphases_are_uniform() {
    let mut bins = [0u64; 8];
    let samples = 2000;
    for i in 0..samples {
        let u = haar_random_unitary(1, RngSeed(50_000 + i));
        let m = u.matrix();
        let tr = m[(0, 0)] + m[(1, 1)];
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let disc = (tr * tr - det.scale(4.0)).sqrt();
        for lambda in [(tr + disc) * 0.5, (tr - disc) * 0.5] {
            let phase = lambda.arg().rem_euclid(2.0 * std::f64::consts::PI);
            let bin = ((phase / (2.0 * std::f64::consts::PI) * 8.0) as usize).min(7);
            bins[bin] += 1;
        }
    }
    let expected = (2 * samples) as f64 / 8.0;
    let chi2: f64 = bins
        .iter()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum();
    assert!(chi2 < 24.322, "chi2 = {chi2:.3}, bins = {bins:?}");
}

/// Mean entanglement entropy of Haar-random two-qubit states. The asymptotic
/// (Page) average for a 2x2 bipartition is 1/(3 ln 2) ~ 0.4809 ebits; the
/// pinned value is the Monte-Carlo mean at these exact seeds.
#[test]
fn mean_two_qubit_entanglement_regression() {
    let cut = Bipartition::first_vs_rest(2).unwrap();
    let samples = 2000;
    let mut sum = 0.0;
    for i in 0..samples {
        let psi = random_pure_state(2, RngSeed(900_000 + i));
        sum += entanglement_entropy(&psi, &cut).unwrap().ebits;
    }
    let mean = sum / samples as f64;
    assert!((mean - 0.479880).abs() < 1e-2, "mean {mean:.6}");
    assert!((mean - 1.0 / (3.0 * std::f64::consts::LN_2)).abs() < 0.02);
}

/// Chaos game at seed 1 for 100k iterations: selection counts are pinned
/// exactly (the generator is deterministic) and stay chi-square-consistent
/// with the stated map probabilities (3 dof, crit 16.266 at p = 0.001).
#[test]
fn fern_map_selection_regression() {
    let sys = fern::IfsSystem::barnsley_fern();
    let (points, counts) = fern::chaos_game_traced(&sys, 100_000, 100, RngSeed(1)).unwrap();
    assert_eq!(counts, vec![980, 85002, 6959, 7059]);
    let probs = [0.01, 0.85, 0.07, 0.07];
    let total: u64 = counts.iter().sum();
    let chi2: f64 = counts
        .iter()
        .zip(&probs)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    assert!(chi2 < 16.266, "chi2 = {chi2:.3}");
    assert_eq!(points.len(), 99_900);
}

/// Nonzero-pixel fraction of the 400x800 render at seed 1, pinned with the
/// +/-20% relative window.
#[test]
fn fern_render_density_regression() {
    let sys = fern::IfsSystem::barnsley_fern();
    let points = fern::chaos_game(&sys, 100_000, 100, RngSeed(1)).unwrap();
    let raster = fern::rasterize(&points, 400, 800, fern::fern_view()).unwrap();
    let fraction = raster.nonzero_fraction();
    let pinned = 0.147616;
    assert!(
        (fraction - pinned).abs() < 0.2 * pinned,
        "fraction {fraction:.6} vs pinned {pinned:.6}"
    );
}

/// Transient chaining violations at this master seed: none were observed when
/// the constant was pinned. Per-sample gate seeds depend only on (master,
/// index), so the 10-pair prefix is stable regression data.
#[test]
fn chaining_transient_count_regression() {
    let report = harness::check_chaining(
        &Measure::KDelta,
        10,
        RngSeed(2026),
        0.02,
        &OptimizerOptions::default(),
    )
    .unwrap();
    assert_eq!(report.violations, 0);
    assert_eq!(report.transient_violations, 0);
    assert_eq!(report.details.len(), 10);
}

/// Every chaining sample can be re-run from its recorded gate seed to the
/// same lhs/rhs within 1e-9.
#[test]
fn chaining_samples_replay_from_recorded_seeds() {
    let opts = OptimizerOptions::default();
    let report =
        harness::check_chaining(&Measure::KDelta, 4, RngSeed(77), 0.02, &opts).unwrap();
    for record in &report.details {
        let factor = if record.retried { 4 } else { 1 };
        let (lhs, rhs) = harness::chaining_values(
            &Measure::KDelta,
            record.gate_seed,
            &Bipartition::first_vs_rest(2).unwrap(),
            &opts,
            factor,
        )
        .unwrap();
        assert!((lhs - record.lhs).abs() < 1e-9, "lhs replay drift");
        assert!((rhs - record.rhs).abs() < 1e-9, "rhs replay drift");
    }
}

#[test]
fn pgm_output_is_bit_exact_per_seed() {
    let sys = fern::IfsSystem::barnsley_fern();
    let render = |seed: u64| {
        let points = fern::chaos_game(&sys, 20_000, 100, RngSeed(seed)).unwrap();
        let raster = fern::rasterize(&points, 100, 200, fern::fern_view()).unwrap();
        fern::to_pgm(&raster)
    };
    let first = render(9);
    assert_eq!(first, render(9));
    assert_ne!(first, render(10));
    assert!(first.starts_with("P2\n100 200\n255\n"));
}
