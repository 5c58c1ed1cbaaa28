//! Projective spin measurements and correlation statistics.
//!
//! Outcome indices follow the qubit order: bit `k` of the index is 0 when
//! qubit `k` lands on the `+m` projector, and qubit 0 owns the most
//! significant bit.

use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tol;

/// Spin measurement along a unit direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSetting {
    pub direction: [f64; 3],
}

impl MeasurementSetting {
    /// Requires a unit-length direction.
    pub fn new(direction: [f64; 3]) -> Result<Self> {
        let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol::UNIT_NORM_TOL {
            return Err(Error::InvalidParameter {
                name: "direction",
                reason: format!("norm {norm} is not 1"),
            });
        }
        Ok(Self { direction })
    }

    /// Direction at `angle` from the z axis inside the x-z plane.
    pub fn from_xz_angle(angle: f64) -> Self {
        Self {
            direction: [angle.sin(), 0.0, angle.cos()],
        }
    }

    /// Projector `(1 + sign m . sigma) / 2`; `sign = +1` is outcome bit 0.
    pub fn projector(&self, sign: f64) -> ComplexMatrix {
        use num_complex::Complex64;
        let [x, y, z] = self.direction;
        let c = Complex64::new;
        ComplexMatrix::from_rows(vec![
            vec![
                c((1.0 + sign * z) / 2.0, 0.0),
                c(sign * x / 2.0, -sign * y / 2.0),
            ],
            vec![
                c(sign * x / 2.0, sign * y / 2.0),
                c((1.0 - sign * z) / 2.0, 0.0),
            ],
        ])
        .unwrap()
    }
}

/// Outcome distribution of a full projective measurement.
///
/// Sums to one within `PROB_SUM_TOL`. Individual entries may be negative
/// (distorted statistics are carried, not clamped); `has_negative` reports
/// whether any entry sits below `-NEGATIVITY_FLAG_TOL`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityTable {
    values: Vec<f64>,
    negative: bool,
}

impl ProbabilityTable {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > tol::PROB_SUM_TOL {
            return Err(Error::InvalidParameter {
                name: "probabilities",
                reason: format!("sum {sum} is not 1"),
            });
        }
        let negative = values.iter().any(|&p| p < -tol::NEGATIVITY_FLAG_TOL);
        Ok(Self { values, negative })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn has_negative(&self) -> bool {
        self.negative
    }
}

impl Serialize for ProbabilityTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.values.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ProbabilityTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<f64>::deserialize(deserializer)?;
        ProbabilityTable::new(values).map_err(serde::de::Error::custom)
    }
}

/// Outcome probabilities `p_k = Tr(m Pi_k)` for one spin setting per qubit.
///
/// Accepts any Hermitian unit-trace matrix so distorted (non-positive)
/// inputs produce their negative quasi-probabilities instead of an error.
pub fn projective_probabilities(
    m: &ComplexMatrix,
    settings: &[MeasurementSetting],
) -> Result<ProbabilityTable> {
    let n = settings.len();
    let dim = 1usize << n;
    if m.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: m.dim(),
        });
    }
    let mut values = Vec::with_capacity(dim);
    for outcome in 0..dim {
        let mut projector = ComplexMatrix::identity(1);
        for (k, setting) in settings.iter().enumerate() {
            let bit = (outcome >> (n - 1 - k)) & 1;
            let sign = if bit == 0 { 1.0 } else { -1.0 };
            projector = projector.kron(&setting.projector(sign));
        }
        values.push(m.mul(&projector).trace().re);
    }
    ProbabilityTable::new(values)
}

/// Two-party correlator `E = p00 - p01 - p10 + p11`.
pub fn correlation(table: &ProbabilityTable) -> Result<f64> {
    if table.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: table.len(),
        });
    }
    let p = table.values();
    Ok(p[0] - p[1] - p[2] + p[3])
}

/// Exact singlet correlator for settings separated by `theta`.
pub fn singlet_correlation(theta: f64) -> f64 {
    -theta.cos()
}
