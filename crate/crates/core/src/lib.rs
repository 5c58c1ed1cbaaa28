//! Affine relations between quantum state classes, and what they do to
//! entanglement tests when detectors are miscalibrated.
//!
//! The library is built around one observation: rescaling a state about
//! the maximally mixed point (`A_a(rho) = a rho + (1 - a) 1/N`) commutes
//! with unitary dynamics and acts on measured probabilities as a plain
//! affine recalibration. Consequently a separable state can carry the
//! full program of an entangled one, with the difference hidden in what
//! looks like detector loss.
//!
//! Modules:
//! - [`qstate`]: density matrices, Bloch vectors, Pauli product basis;
//! - [`affine`]: the rescaling maps and pseudo-pure splits;
//! - [`separability`]: constructive separable decompositions and the
//!   partial-transpose benchmark;
//! - [`measurement`]: projective statistics and correlators;
//! - [`lhv`]: the classical sampling source built from a decomposition;
//! - [`distortion`]: linear corrections, misclassification, thresholds;
//! - [`bellharness`]: exact and Monte Carlo CHSH runs and angle sweeps.

pub mod affine;
pub mod bellharness;
pub mod distortion;
pub mod eigen;
pub mod error;
pub mod lhv;
pub mod matrix;
pub mod measurement;
pub mod qstate;
pub mod rng;
pub mod separability;
pub mod tol;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
