//! Detector miscalibration models.
//!
//! Three distortions of recorded statistics, each exactly an affine
//! rescaling of the true probabilities as long as nothing clips:
//! a linear correction applied to measured values, symmetric binary
//! misclassification, and a per-cell count threshold followed by
//! renormalization. The last one is the detection-loophole mechanism:
//! subtracting a constant `theta` from every cell and renormalizing acts
//! on probabilities as `A_a` with `a = 1 / (1 - N theta / T)`.

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::lhv::CountTable;
use crate::measurement::ProbabilityTable;

/// Analyst-side rescaling `X0 = s (X - b)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearCorrection {
    pub scale: f64,
    pub background: f64,
}

impl LinearCorrection {
    /// Requires a positive, finite scale.
    pub fn new(scale: f64, background: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "scale",
                reason: format!("must be positive, got {scale}"),
            });
        }
        if !background.is_finite() {
            return Err(Error::InvalidParameter {
                name: "background",
                reason: "must be finite".into(),
            });
        }
        Ok(Self { scale, background })
    }

    /// The single correction equivalent to `inner` followed by `self`.
    pub fn compose(&self, inner: &LinearCorrection) -> LinearCorrection {
        LinearCorrection {
            scale: self.scale * inner.scale,
            background: inner.background + self.background / inner.scale,
        }
    }
}

/// Applies `s (x - b)` to a measured value.
pub fn correct_value(c: &LinearCorrection, x: f64) -> f64 {
    c.scale * (x - c.background)
}

/// Symmetric binary misclassification: each recorded outcome is wrong with
/// rate `epsilon` relative to the true one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MisclassificationModel {
    pub epsilon: f64,
}

impl MisclassificationModel {
    /// Requires `epsilon > -1` so the implied rescaling stays invertible.
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > -1.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("must exceed -1, got {epsilon}"),
            });
        }
        Ok(Self { epsilon })
    }
}

/// `p'_i = (1 + epsilon) p_i - epsilon / 2` on a binary table.
///
/// Identical to `transform_probabilities` with `a = 1 + epsilon`, `N = 2`:
/// a miscalibrated classifier and a rescaled state class are the same
/// statistics.
pub fn misclassify(
    m: &MisclassificationModel,
    table: &ProbabilityTable,
) -> Result<ProbabilityTable> {
    if table.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: table.len(),
        });
    }
    let values = table
        .values()
        .iter()
        .map(|p| (1.0 + m.epsilon) * p - m.epsilon / 2.0)
        .collect();
    ProbabilityTable::new(values)
}

/// Detector that silently loses a constant `theta` counts per outcome cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdDevice {
    pub theta: f64,
}

impl ThresholdDevice {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta >= 0.0 && theta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "theta",
                reason: format!("must be nonnegative, got {theta}"),
            });
        }
        Ok(Self { theta })
    }

    /// True when some cell falls strictly below `theta`: that cell clips to
    /// zero and the affine equivalence stops holding exactly.
    pub fn clips(&self, raw: &CountTable) -> bool {
        raw.counts.iter().any(|&c| c < self.theta)
    }
}

/// `max(c_k - theta, 0)` per cell; the total becomes whatever survives.
pub fn threshold_counts(device: &ThresholdDevice, raw: &CountTable) -> CountTable {
    let counts: Vec<f64> = raw
        .counts
        .iter()
        .map(|&c| (c - device.theta).max(0.0))
        .collect();
    let total = counts.iter().sum();
    CountTable { total, counts }
}

/// Normalizes counts into probabilities.
pub fn analyze_counts(table: &CountTable) -> Result<ProbabilityTable> {
    let sum = table.sum();
    if sum <= 0.0 {
        return Err(Error::DegenerateData(
            "no counts survive normalization".into(),
        ));
    }
    ProbabilityTable::new(table.counts.iter().map(|c| c / sum).collect())
}

/// The rescaling a clip-free threshold run performs on probabilities:
/// `a = 1 / (1 - N theta / total)`.
///
/// Saturates (errors) once the device would eat the whole sample.
pub fn equivalent_affine(theta: f64, total: f64, dim: usize) -> Result<AffineMap> {
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "theta",
            reason: format!("must be nonnegative, got {theta}"),
        });
    }
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "total",
            reason: format!("must be positive, got {total}"),
        });
    }
    let removed = dim as f64 * theta;
    if removed >= total {
        return Err(Error::DeviceSaturated { removed, total });
    }
    AffineMap::new(total / (total - removed), dim)
}
