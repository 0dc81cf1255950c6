//! Cyclic Jacobi eigensolver for small complex Hermitian matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat::{ComplexMatrix, HERMITICITY_TOL};

/// Off-diagonal Frobenius residual at which the sweep loop stops.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian matrix, sorted ascending.
///
/// Cyclic-by-row Jacobi rotations: each rotation phases the pivot entry real
/// and then applies the classic symmetric 2x2 rotation that annihilates it.
/// Quadratic convergence makes a handful of sweeps enough at the sizes used
/// here (at most 32 x 32).
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    if !h.is_square() {
        return Err(Error::InvalidInput(format!(
            "eigensolve requires a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let residual = h.hermiticity_residual();
    if residual > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            residual,
            tolerance: HERMITICITY_TOL,
        });
    }

    let n = h.rows();
    // Symmetrize so round-off asymmetry cannot drift through the sweeps.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        0.5 * (h[(i, j)] + h[(j, i)].conj())
    });

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < OFF_DIAGONAL_TOL {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    Ok(eigs)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc += a[(p, q)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi rotation zeroing entry (p, q) of the Hermitian matrix `a`.
fn rotate(a: &mut ComplexMatrix, p: usize, q: usize) {
    let u = a[(p, q)];
    let abs_u = u.norm();
    if abs_u < 1e-300 {
        a[(p, q)] = Complex64::ZERO;
        a[(q, p)] = Complex64::ZERO;
        return;
    }
    let phase = u / abs_u;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    // Rotation angle for the phased-real 2x2 block [[app, |u|], [|u|, aqq]].
    let tau = (aqq - app) / (2.0 * abs_u);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;

    let n = a.rows();
    // Column update: B = A G with G[p][p] = c, G[p][q] = s·phase,
    // G[q][p] = −s·conj(phase), G[q][q] = c.
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * phase.conj() * akq;
        a[(k, q)] = s * phase * akp + c * akq;
    }
    // Row update: A' = G† B.
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * phase * aqk;
        a[(q, k)] = s * phase.conj() * apk + c * aqk;
    }

    a[(p, q)] = Complex64::ZERO;
    a[(q, p)] = Complex64::ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}
