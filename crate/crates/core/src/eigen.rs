//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! The dimensions in play never exceed a few qubits, where Jacobi iteration
//! is simple, accurate and fast. Each rotation zeroes one off-diagonal pair;
//! sweeps repeat until the off-diagonal Frobenius norm is negligible.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tol;

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted ascending; column `k` of `eigenvectors` is the
/// unit eigenvector for `eigenvalues[k]`.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Eigensystem {
    /// Copies out eigenvector `k` as a column vector.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.eigenvectors.dim())
            .map(|i| self.eigenvectors[(i, k)])
            .collect()
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Diagonalizes a Hermitian matrix.
///
/// Rejects input whose hermiticity deviation exceeds `UNITARY_TOL`; the
/// returned eigenvectors satisfy `||M v - lambda v|| <= EIGEN_RESIDUAL_TOL`.
pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<Eigensystem> {
    let deviation = m.hermiticity_deviation();
    if deviation > tol::UNITARY_TOL {
        return Err(Error::NotHermitian { deviation });
    }

    let n = m.dim();
    // Work on the symmetrized copy so rounding asymmetry cannot accumulate.
    let mut a = m.add(&m.dagger()).scale(0.5);
    let mut v = ComplexMatrix::identity(n);

    for _ in 0..tol::EIGEN_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= tol::EIGEN_CONVERGENCE_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());

    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(Eigensystem {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation zeroing the (p, q) entry of the Hermitian matrix `a`,
/// accumulated into `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    // Inner rotation angle for the phase-stripped real 2x2 block.
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // U differs from the identity only in rows/columns p and q:
    //   U[p][p] = c         U[p][q] = s
    //   U[q][p] = -s/phase  U[q][q] = c/phase
    let u_qp = -s * phase.conj();
    let u_qq = c * phase.conj();

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * u_qp;
        a[(k, q)] = akp * s + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * u_qp.conj();
        a[(q, k)] = apk * s + aqk * u_qq.conj();
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * u_qp;
        v[(k, q)] = vkp * s + vkq * u_qq;
    }
}
