//! Affine maps between density matrices.
//!
//! `A_a(rho) = a rho + (1 - a) 1/N` rescales a state about the maximally
//! mixed point. For `a <= 1` this is physical depolarization; for `a > 1` it
//! is the formal inverse, which can push eigenvalues and probabilities
//! negative. Those outputs are carried as plain matrices or flagged tables
//! rather than rejected, since the interesting regime is exactly the one
//! where a classical account books negative weights.

use serde::{Deserialize, Serialize};

use crate::eigen::hermitian_eigensystem;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::measurement::ProbabilityTable;
use crate::qstate::{DensityMatrix, UnitaryGate};
use crate::tol;

/// Rescaling map `A_a` on an `N`-dimensional state space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub a: f64,
    pub dim: usize,
}

impl AffineMap {
    /// Requires a strictly positive parameter.
    pub fn new(a: f64, dim: usize) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "a",
                reason: format!("affine parameter must be positive, got {a}"),
            });
        }
        if dim == 0 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: "dimension must be positive".into(),
            });
        }
        Ok(Self { a, dim })
    }
}

/// `a m + (1 - a) 1/N` on a Hermitian unit-trace matrix.
///
/// The output may fail positivity when `a > 1`; it is returned as a plain
/// matrix so callers can decide what that means.
pub fn affine_apply(map: &AffineMap, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.dim() != map.dim {
        return Err(Error::DimensionMismatch {
            expected: map.dim,
            actual: m.dim(),
        });
    }
    let offset = (1.0 - map.a) / map.dim as f64;
    Ok(m.scale(map.a)
        .add(&ComplexMatrix::identity(map.dim).scale(offset)))
}

/// The inverse map `A_a^{-1} = A_{1/a}`.
pub fn affine_inverse(map: &AffineMap) -> AffineMap {
    AffineMap {
        a: 1.0 / map.a,
        dim: map.dim,
    }
}

/// Action of `A_a` on full projective-measurement statistics:
/// `p'_k = a p_k - (a - 1) / N`.
///
/// Entries may come out negative; they are flagged, not clamped, and the
/// table still sums to one.
pub fn transform_probabilities(
    map: &AffineMap,
    table: &ProbabilityTable,
) -> Result<ProbabilityTable> {
    if table.len() != map.dim {
        return Err(Error::DimensionMismatch {
            expected: map.dim,
            actual: table.len(),
        });
    }
    let offset = (map.a - 1.0) / map.dim as f64;
    let values = table.values().iter().map(|p| map.a * p - offset).collect();
    ProbabilityTable::new(values)
}

/// Frobenius norm of `A_a(U rho U^dag) - U A_a(rho) U^dag`.
///
/// Zero (to rounding) for every unitary: the rescaling commutes with
/// basis changes, which is what lets a calibration error masquerade as a
/// different state class in any measurement basis.
pub fn check_commutation(rho: &DensityMatrix, u: &UnitaryGate, map: &AffineMap) -> Result<f64> {
    let rotated = crate::qstate::apply_unitary(rho, u)?;
    let path_a = affine_apply(map, rotated.matrix())?;
    let path_b = {
        let mapped = affine_apply(map, rho.matrix())?;
        u.matrix().mul(&mapped).mul(&u.matrix().dagger())
    };
    Ok(path_a.frobenius_distance(&path_b))
}

/// Decomposition `rho = (1/a) P + (1 - 1/a) 1/N` of a pseudo-pure state.
#[derive(Clone, Debug)]
pub struct PseudoPureSplit {
    /// Affine parameter relating the state to the pure projector, `a >= 1`.
    pub a: f64,
    /// Rank-one projector onto the dominant eigenvector.
    pub pure: DensityMatrix,
}

impl PseudoPureSplit {
    /// `(1/a) P + (1 - 1/a) 1/N`, which should reproduce the input.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.pure.dim() as f64;
        let mixed = ComplexMatrix::identity(self.pure.dim()).scale((1.0 - 1.0 / self.a) / n);
        self.pure.matrix().scale(1.0 / self.a).add(&mixed)
    }
}

/// Splits a pseudo-pure state into its pure projector and affine parameter.
///
/// A state qualifies when its spectrum is an `(N-1)`-fold degenerate floor
/// plus one simple top eigenvalue; then `a = 1 / (lambda_max - floor)`.
/// Returns `None` for anything else (including the maximally mixed state).
pub fn pseudo_pure_split(rho: &DensityMatrix) -> Option<PseudoPureSplit> {
    let n = rho.dim();
    if n == 1 {
        return Some(PseudoPureSplit {
            a: 1.0,
            pure: rho.clone(),
        });
    }
    let eig = hermitian_eigensystem(rho.matrix()).expect("density matrix is Hermitian");
    let floor_spread = eig.eigenvalues[n - 2] - eig.eigenvalues[0];
    let gap = eig.eigenvalues[n - 1] - eig.eigenvalues[n - 2];
    if floor_spread > tol::DEGENERACY_TOL || gap <= tol::DEGENERACY_TOL {
        return None;
    }
    let floor = eig.eigenvalues[..n - 1].iter().sum::<f64>() / (n - 1) as f64;
    let a = 1.0 / (eig.eigenvalues[n - 1] - floor);
    let top = eig.eigenvector(n - 1);
    let pure = DensityMatrix::pure_from_vector(&top).expect("eigenvector is unit length");
    Some(PseudoPureSplit { a, pure })
}
