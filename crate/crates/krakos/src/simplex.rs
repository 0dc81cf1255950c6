//! Derivative-free minimization with the Nelder-Mead simplex.
//!
//! The optimizer is deliberately self-contained: the strength-measure
//! landscapes are smooth but multimodal, so the searches always run from many
//! starts (handled by the caller) and each local search only has to polish
//! one basin. Coefficients follow the dimension-adaptive variant of Gao and
//! Han, which behaves much better than the classic constants once the
//! parameter count grows past a handful.

/// Controls for one local simplex search.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SimplexOptions {
    /// Hard cap on reflect/contract/shrink iterations, shared across polish
    /// rounds.
    pub max_iterations: usize,
    /// Converged when the spread of objective values across the simplex
    /// falls below this.
    pub tolerance: f64,
    /// Edge length of the initial simplex around the start point.
    pub initial_step: f64,
    /// After convergence, restart up to this many times from a fresh small
    /// simplex at the best point (while budget remains) to escape near-flat
    /// plateaus.
    pub polish_rounds: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct SimplexResult {
    pub point: Vec<f64>,
    pub value: f64,
    #[allow(dead_code)]
    pub iterations: usize,
    /// True when the final round met the tolerance rather than the budget.
    pub converged: bool,
}

/// Minimizes `f` starting from `start`, spending at most
/// `options.max_iterations` simplex iterations in total across polish rounds.
pub(crate) fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    options: &SimplexOptions,
) -> SimplexResult {
    let mut iterations = 0usize;
    let mut best_point = start.to_vec();
    let mut best_value = f(start);
    let mut converged = false;
    let mut step = options.initial_step;

    for _ in 0..=options.polish_rounds {
        if iterations >= options.max_iterations {
            break;
        }
        let budget = options.max_iterations - iterations;
        let round = nelder_mead_round(
            &mut f,
            &best_point,
            best_value,
            step,
            budget,
            options.tolerance,
        );
        iterations += round.iterations;
        converged = round.converged;
        let improved = round.value < best_value - 1e-15;
        if round.value < best_value {
            best_value = round.value;
            best_point = round.point;
        }
        if !improved && converged {
            // A restart that finds nothing new means the point is stable.
            break;
        }
        // Polish from a tighter simplex around the current best point.
        step *= 0.1;
    }

    SimplexResult {
        point: best_point,
        value: best_value,
        iterations,
        converged,
    }
}

struct Round {
    point: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

fn nelder_mead_round<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    start: &[f64],
    start_value: f64,
    step: f64,
    max_iterations: usize,
    tolerance: f64,
) -> Round {
    let n = start.len();
    assert!(n >= 1, "cannot optimize over zero parameters");

    // Gao-Han adaptive coefficients.
    let nf = n as f64;
    let reflect = 1.0;
    let expand = 1.0 + 2.0 / nf;
    let contract = 0.75 - 1.0 / (2.0 * nf);
    let shrink = 1.0 - 1.0 / nf;

    // Initial simplex: start point plus one vertex per coordinate direction.
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), start_value));
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += step;
        let fv = f(&v);
        simplex.push((v, fv));
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut iterations = 0usize;
    let mut converged = false;
    while iterations < max_iterations {
        let spread = simplex[n].1 - simplex[0].1;
        if spread.abs() <= tolerance {
            converged = true;
            break;
        }
        iterations += 1;

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; n];
        for (v, _) in simplex.iter().take(n) {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= nf;
        }

        let worst = simplex[n].clone();
        let mix = |alpha: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + alpha * (c - w))
                .collect()
        };

        let reflected = mix(reflect);
        let f_reflected = f(&reflected);

        if f_reflected < simplex[0].1 {
            // Try to expand past the reflection.
            let expanded = mix(expand);
            let f_expanded = f(&expanded);
            simplex[n] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
        } else if f_reflected < simplex[n - 1].1 {
            simplex[n] = (reflected, f_reflected);
        } else {
            let (candidate, f_candidate) = if f_reflected < worst.1 {
                let outside = mix(contract);
                let f_outside = f(&outside);
                (outside, f_outside)
            } else {
                let inside = mix(-contract);
                let f_inside = f(&inside);
                (inside, f_inside)
            };
            if f_candidate < worst.1.min(f_reflected) {
                simplex[n] = (candidate, f_candidate);
            } else {
                // Shrink everything toward the best vertex.
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for (x, b) in entry.0.iter_mut().zip(&best) {
                        *x = b + shrink * (*x - b);
                    }
                    entry.1 = f(&entry.0);
                }
            }
        }

        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    }

    let (point, value) = simplex.swap_remove(0);
    Round {
        point,
        value,
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn options(max_iterations: usize) -> SimplexOptions {
        SimplexOptions {
            max_iterations,
            tolerance: 1e-10,
            initial_step: 0.5,
            polish_rounds: 2,
        }
    }

    #[test]
    fn minimizes_a_quadratic_bowl() {
        let f = |x: &[f64]| x.iter().map(|v| (v - 1.5) * (v - 1.5)).sum::<f64>();
        let result = minimize(f, &[0.0, 0.0, 0.0], &options(4000));
        assert!(result.converged);
        assert!(result.value < 1e-9, "value = {}", result.value);
        for v in &result.point {
            assert!((v - 1.5).abs() < 1e-4);
        }
    }

    #[test]
    fn handles_the_rosenbrock_valley() {
        let f = |x: &[f64]| {
            let (a, b) = (x[0], x[1]);
            (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
        };
        let result = minimize(f, &[-1.2, 1.0], &options(8000));
        assert!(result.value < 1e-8, "value = {}", result.value);
        assert!((result.point[0] - 1.0).abs() < 1e-3);
        assert!((result.point[1] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn respects_the_iteration_budget() {
        let result = minimize(
            |x: &[f64]| x.iter().map(|v| v * v).sum(),
            &[3.0; 6],
            &options(50),
        );
        assert!(result.iterations <= 50);
    }

    #[test]
    fn flat_objective_converges_immediately() {
        let result = minimize(|_: &[f64]| 2.5, &[1.0, -1.0], &options(100));
        assert!(result.converged);
        assert_eq!(result.value, 2.5);
    }

    #[test]
    fn polish_rounds_refine_a_rough_basin() {
        // |x|^0.5 has a non-smooth minimum that a single round stalls near.
        let f = |x: &[f64]| x.iter().map(|v| v.abs().sqrt()).sum::<f64>();
        let base = SimplexOptions {
            max_iterations: 2000,
            tolerance: 1e-10,
            initial_step: 0.5,
            polish_rounds: 0,
        };
        let coarse = minimize(f, &[2.0, -2.0], &base);
        let polished = minimize(
            f,
            &[2.0, -2.0],
            &SimplexOptions {
                polish_rounds: 4,
                ..base
            },
        );
        assert!(polished.value <= coarse.value + 1e-12);
    }
}
