//! Numerical tolerances used throughout the library.
//!
//! All state validation, decomposition and equivalence checks share these
//! constants so the whole pipeline agrees on what "equal" means.

/// Hermiticity and trace deviation allowed when validating a density matrix.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues of a density matrix may round this far below zero.
pub const PSD_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius norm at which the Jacobi eigensolver stops.
pub const EIGEN_CONVERGENCE_TOL: f64 = 1e-12;

/// Maximum Jacobi sweeps before giving up.
pub const EIGEN_MAX_SWEEPS: usize = 100;

/// Residual `||M v - lambda v||` guaranteed by the eigensolver.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-9;

/// Unitarity deviation allowed for gates (entrywise, `U U^dag - 1`).
pub const UNITARY_TOL: f64 = 1e-10;

/// Measurement directions must be unit length within this tolerance.
pub const UNIT_NORM_TOL: f64 = 1e-10;

/// Probability tables must sum to one within this tolerance.
pub const PROB_SUM_TOL: f64 = 1e-9;

/// Entries below minus this are flagged as genuinely negative probabilities.
pub const NEGATIVITY_FLAG_TOL: f64 = 1e-12;

/// Product-basis coefficients within this of zero are dropped.
pub const CONSOLIDATION_TOL: f64 = 1e-12;

/// Eigenvalue spread treated as degenerate by the pseudo-pure splitter.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Default bisection tolerance for the minimal mixing parameter.
pub const MIXING_SEARCH_TOL: f64 = 1e-6;
