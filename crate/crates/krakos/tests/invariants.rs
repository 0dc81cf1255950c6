//! Randomized falsification suite: algebraic invariants checked over
//! generated matrices, states, seeds, and affine maps.

use num_complex::Complex64;
use proptest::prelude::*;

use krakos::bipartite::partial_trace;
use krakos::eigen::hermitian_eigenvalues;
use krakos::fern::{self, AffineMap, Point2};
use krakos::strength::{Measure, Metric, OptimizerOptions};
use krakos::{
    entanglement_entropy, haar_random_unitary, k_delta, k_distance, random_pure_state,
    Bipartition, ComplexMatrix, PureState, RngSeed,
};

fn arb_matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-1.0..1.0f64, 2 * dim * dim).prop_map(move |raw| {
        ComplexMatrix::from_fn(dim, dim, |i, j| {
            let k = 2 * (i * dim + j);
            Complex64::new(raw[k], raw[k + 1])
        })
    })
}

proptest! {
    #[test]
    fn tensor_is_associative(
        a in arb_matrix(2),
        b in arb_matrix(2),
        c in arb_matrix(2),
    ) {
        let left = a.tensor(&b).tensor(&c);
        let right = a.tensor(&b.tensor(&c));
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn tensor_respects_matrix_product(
        a in arb_matrix(2),
        b in arb_matrix(3),
        c in arb_matrix(2),
        d in arb_matrix(3),
    ) {
        let left = a.tensor(&b).mul(&c.tensor(&d));
        let right = a.mul(&c).tensor(&b.mul(&d));
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn eigenvalue_sum_matches_trace(m in arb_matrix(4)) {
        // Symmetrize to get a Hermitian input.
        let h = m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0));
        let eigenvalues = hermitian_eigenvalues(&h).unwrap();
        let sum: f64 = eigenvalues.iter().sum();
        prop_assert!((sum - h.trace().re).abs() < 1e-10);
    }

    #[test]
    fn schmidt_spectra_of_both_sides_agree(seed in any::<u64>(), qubits in 2usize..5) {
        let psi = random_pure_state(qubits, RngSeed(seed));
        let cut = Bipartition::first_vs_rest(qubits).unwrap();
        let rho = psi.density();
        let rho_a = partial_trace(&rho, &cut, krakos::Side::A).unwrap();
        let rho_b = partial_trace(&rho, &cut, krakos::Side::B).unwrap();
        let spec_a = hermitian_eigenvalues(&rho_a).unwrap();
        let spec_b = hermitian_eigenvalues(&rho_b).unwrap();
        // Side A has 1 qubit here; its spectrum must appear in side B's,
        // with everything else vanishing.
        let mut b_sorted = spec_b.clone();
        b_sorted.sort_by(|x, y| y.total_cmp(x));
        let mut a_sorted = spec_a.clone();
        a_sorted.sort_by(|x, y| y.total_cmp(x));
        for (x, y) in a_sorted.iter().zip(&b_sorted) {
            prop_assert!((x - y).abs() < 1e-9, "spectra {spec_a:?} vs {spec_b:?}");
        }
        for y in &b_sorted[a_sorted.len()..] {
            prop_assert!(y.abs() < 1e-9);
        }
    }

    #[test]
    fn entanglement_entropy_bounds_and_symmetry(seed in any::<u64>(), qubits in 2usize..5) {
        let psi = random_pure_state(qubits, RngSeed(seed));
        let cut = Bipartition::first_vs_rest(qubits).unwrap();
        let e = entanglement_entropy(&psi, &cut).unwrap().ebits;
        let max = cut.side_a().len().min(cut.side_b().len()) as f64;
        prop_assert!(e >= 0.0 && e <= max + 1e-9, "entropy {e} outside [0, {max}]");

        let mirrored = Bipartition::new(qubits, &cut.side_b().to_vec()).unwrap();
        let e_b = entanglement_entropy(&psi, &mirrored).unwrap().ebits;
        prop_assert!((e - e_b).abs() < 1e-9);
    }

    #[test]
    fn entanglement_entropy_is_continuous(seed in any::<u64>()) {
        let psi = random_pure_state(2, RngSeed(seed));
        let mut amplitudes = psi.amplitudes().to_vec();
        amplitudes[0] += Complex64::new(4e-7, -4e-7);
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amplitudes {
            *a /= norm;
        }
        let nearby = PureState::new(2, amplitudes).unwrap();
        let cut = Bipartition::first_vs_rest(2).unwrap();
        let e1 = entanglement_entropy(&psi, &cut).unwrap().ebits;
        let e2 = entanglement_entropy(&nearby, &cut).unwrap().ebits;
        prop_assert!((e1 - e2).abs() <= 1e-4, "entropy jump {:.3e}", (e1 - e2).abs());
    }

    #[test]
    fn local_conjugation_preserves_entanglement(seed in any::<u64>()) {
        let psi = random_pure_state(2, RngSeed(seed));
        let local = haar_random_unitary(1, RngSeed(seed ^ 0xABCD))
            .tensor(&haar_random_unitary(1, RngSeed(seed ^ 0x1234)));
        let rotated = local.apply(&psi).unwrap();
        let cut = Bipartition::first_vs_rest(2).unwrap();
        let before = entanglement_entropy(&psi, &cut).unwrap().ebits;
        let after = entanglement_entropy(&rotated, &cut).unwrap().ebits;
        prop_assert!((before - after).abs() < 1e-9);
    }

    #[test]
    fn affine_maps_are_affine(
        raw in prop::collection::vec(-0.9..0.9f64, 6),
        px in -2.0..2.0f64,
        py in -2.0..2.0f64,
        qx in -2.0..2.0f64,
        qy in -2.0..2.0f64,
        alpha in 0.0..1.0f64,
    ) {
        let m = AffineMap::new(
            [[raw[0], raw[1]], [raw[2], raw[3]]],
            [raw[4], raw[5]],
            0.5,
        ).unwrap();
        let p = Point2::new(px, py);
        let q = Point2::new(qx, qy);
        let blend = Point2::new(
            alpha * p.x + (1.0 - alpha) * q.x,
            alpha * p.y + (1.0 - alpha) * q.y,
        );
        let fp = fern::apply_map(&m, p);
        let fq = fern::apply_map(&m, q);
        let fblend = fern::apply_map(&m, blend);
        prop_assert!((fblend.x - (alpha * fp.x + (1.0 - alpha) * fq.x)).abs() < 1e-12);
        prop_assert!((fblend.y - (alpha * fp.y + (1.0 - alpha) * fq.y)).abs() < 1e-12);
    }

    #[test]
    fn fixed_points_are_fixed(raw in prop::collection::vec(-0.45..0.45f64, 6)) {
        // Entries bounded by 0.45 keep I - linear diagonally dominant, hence
        // invertible.
        let m = AffineMap::new(
            [[raw[0], raw[1]], [raw[2], raw[3]]],
            [raw[4], raw[5]],
            0.5,
        ).unwrap();
        let p = fern::fixed_point(&m).unwrap();
        let image = fern::apply_map(&m, p);
        prop_assert!((image.x - p.x).abs() < 1e-10);
        prop_assert!((image.y - p.y).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    // Optimizer-backed invariants are expensive; a handful of cases each.
    #[test]
    fn strength_reports_replay_their_witnesses(seed in any::<u64>()) {
        let gate = haar_random_unitary(2, RngSeed(seed));
        let cut = Bipartition::first_vs_rest(2).unwrap();
        let opts = OptimizerOptions {
            starts: 6,
            max_iterations: 800,
            tolerance: 1e-9,
            seed: RngSeed(seed),
        };
        let delta = k_delta(&gate, &cut, &opts).unwrap();
        let replayed = delta.reevaluate_witness(&gate).unwrap();
        prop_assert!((replayed - delta.value).abs() < 1e-9);

        let dist = k_distance(&gate, &Metric::default(), &opts).unwrap();
        let replayed = dist.reevaluate_witness(&gate).unwrap();
        prop_assert!((replayed - dist.value).abs() < 1e-9);
    }

    #[test]
    fn global_phase_leaves_both_measures_unchanged(seed in any::<u64>(), phase in 0.1..6.0f64) {
        let gate = haar_random_unitary(2, RngSeed(seed));
        let rotated = gate.with_global_phase(phase);
        let cut = Bipartition::first_vs_rest(2).unwrap();
        let opts = OptimizerOptions {
            starts: 4,
            max_iterations: 600,
            tolerance: 1e-9,
            seed: RngSeed(seed),
        };
        for measure in [
            Measure::KDelta,
            Measure::KDistance { metric: Metric::default() },
        ] {
            let plain = measure.evaluate(&gate, &cut, &opts).unwrap().value;
            let spun = measure.evaluate(&rotated, &cut, &opts).unwrap().value;
            prop_assert!((plain - spun).abs() < 1e-9, "{measure}: {plain} vs {spun}");
        }
    }
}

/// The chaos game's limit set is seed-independent: long runs from different
/// seeds occupy almost the same pixels.
#[test]
fn attractor_occupancy_is_seed_stable() {
    let sys = fern::IfsSystem::barnsley_fern();
    let bbox = fern::fern_view();
    let render = |seed: u64| {
        let points = fern::chaos_game(&sys, 500_000, 100, RngSeed(seed)).unwrap();
        fern::rasterize(&points, 200, 400, bbox).unwrap()
    };
    let a = render(1);
    let b = render(2);
    assert!(
        a.occupancy_difference(&b) < 0.05,
        "occupancy difference {:.4}",
        a.occupancy_difference(&b)
    );
}
