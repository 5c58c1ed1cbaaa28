//! CHSH harness over quantum states and classical sources.
//!
//! The demonstration this crate exists for: a local hidden-variable source
//! caps the CHSH value at 2 on its raw record, yet the same record pushed
//! through a thresholding detector reproduces singlet statistics, maximal
//! violation included. The harness computes both exact and sampled values
//! with the distortion pipeline applied per correlator.

use serde::{Deserialize, Serialize};

use crate::affine::{transform_probabilities, AffineMap};
use crate::distortion::{analyze_counts, equivalent_affine, threshold_counts, ThresholdDevice};
use crate::error::{Error, Result};
use crate::lhv::{exact_probabilities, run_trials, HiddenVariableModel};
use crate::measurement::{
    correlation, projective_probabilities, MeasurementSetting, ProbabilityTable,
};
use crate::qstate::DensityMatrix;
use crate::rng::RandomStream;

/// What feeds the correlators: a quantum state or a classical source.
#[derive(Clone, Debug)]
pub enum ChshSource {
    Quantum(DensityMatrix),
    Classical(HiddenVariableModel),
}

/// Statistics post-processing applied to every correlator's table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pipeline {
    /// Record used as-is.
    Raw,
    /// Probability-level rescaling by `A_a`.
    Affine { a: f64 },
    /// Per-cell threshold at `fraction` of the run total, then renormalize.
    Threshold { fraction: f64 },
}

impl Pipeline {
    /// The affine parameter the pipeline applies to clip-free statistics.
    pub fn equivalent_parameter(&self, dim: usize) -> Result<f64> {
        match *self {
            Pipeline::Raw => Ok(1.0),
            Pipeline::Affine { a } => Ok(a),
            Pipeline::Threshold { fraction } => Ok(equivalent_affine(fraction, 1.0, dim)?.a),
        }
    }

    /// Applies the pipeline to an exact probability table; the flag reports
    /// whether thresholding clipped a cell.
    pub fn apply_exact(&self, table: &ProbabilityTable) -> Result<(ProbabilityTable, bool)> {
        match *self {
            Pipeline::Raw => Ok((table.clone(), false)),
            Pipeline::Affine { a } => {
                let map = AffineMap::new(a, table.len())?;
                Ok((transform_probabilities(&map, table)?, false))
            }
            Pipeline::Threshold { fraction } => {
                let device = ThresholdDevice::new(fraction)?;
                let raw = crate::lhv::CountTable::new(1.0, table.values().to_vec())?;
                let clipped = device.clips(&raw);
                Ok((analyze_counts(&threshold_counts(&device, &raw))?, clipped))
            }
        }
    }

    /// Applies the pipeline to sampled counts.
    fn apply_counts(&self, raw: &crate::lhv::CountTable) -> Result<(ProbabilityTable, bool)> {
        match *self {
            Pipeline::Raw => Ok((analyze_counts(raw)?, false)),
            Pipeline::Affine { a } => {
                let p = analyze_counts(raw)?;
                let map = AffineMap::new(a, p.len())?;
                Ok((transform_probabilities(&map, &p)?, false))
            }
            Pipeline::Threshold { fraction } => {
                let device = ThresholdDevice::new(fraction * raw.total)?;
                let clipped = device.clips(raw);
                Ok((analyze_counts(&threshold_counts(&device, raw))?, clipped))
            }
        }
    }
}

/// The four CHSH settings: two per party.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChshSettings {
    pub alice: [MeasurementSetting; 2],
    pub bob: [MeasurementSetting; 2],
}

impl ChshSettings {
    /// The coplanar angles that maximize the singlet value:
    /// 0 and pi/2 against pi/4 and 3 pi/4 in the x-z plane.
    pub fn canonical() -> Self {
        use std::f64::consts::PI;
        Self {
            alice: [
                MeasurementSetting::from_xz_angle(0.0),
                MeasurementSetting::from_xz_angle(PI / 2.0),
            ],
            bob: [
                MeasurementSetting::from_xz_angle(PI / 4.0),
                MeasurementSetting::from_xz_angle(3.0 * PI / 4.0),
            ],
        }
    }

    /// Four independent uniformly random directions.
    pub fn random(rng: &mut RandomStream) -> Self {
        let mut direction = || loop {
            let v = [rng.gaussian(), rng.gaussian(), rng.gaussian()];
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if norm > 1e-6 {
                return MeasurementSetting::new([v[0] / norm, v[1] / norm, v[2] / norm])
                    .expect("normalized direction");
            }
        };
        Self {
            alice: [direction(), direction()],
            bob: [direction(), direction()],
        }
    }

    /// Correlator setting pairs in the order (a,b), (a,b'), (a',b), (a',b').
    pub fn pairs(&self) -> [[MeasurementSetting; 2]; 4] {
        [
            [self.alice[0], self.bob[0]],
            [self.alice[0], self.bob[1]],
            [self.alice[1], self.bob[0]],
            [self.alice[1], self.bob[1]],
        ]
    }
}

/// CHSH outcome: the four correlators and `S = |E1 - E2 + E3 + E4|`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChshResult {
    pub correlations: [f64; 4],
    pub s_value: f64,
    /// Multinomial standard errors (zero in exact mode), propagated through
    /// the pipeline's affine factor.
    pub std_errors: [f64; 4],
    pub s_std_error: f64,
    /// Some cell fell below the threshold, so the affine law was cut short.
    pub clipped: bool,
}

fn combine(correlations: [f64; 4], std_errors: [f64; 4], clipped: bool) -> ChshResult {
    let s_value = (correlations[0] - correlations[1] + correlations[2] + correlations[3]).abs();
    let s_std_error = std_errors.iter().map(|e| e * e).sum::<f64>().sqrt();
    ChshResult {
        correlations,
        s_value,
        std_errors,
        s_std_error,
        clipped,
    }
}

fn exact_pair_table(
    source: &ChshSource,
    pair: &[MeasurementSetting; 2],
) -> Result<ProbabilityTable> {
    match source {
        ChshSource::Quantum(rho) => {
            if rho.n_qubits() != 2 {
                return Err(Error::NotTwoQubit(rho.n_qubits()));
            }
            projective_probabilities(rho.matrix(), pair)
        }
        ChshSource::Classical(model) => exact_probabilities(model, pair),
    }
}

/// Exact CHSH value of a source with the pipeline applied per correlator.
pub fn chsh_exact(
    source: &ChshSource,
    settings: &ChshSettings,
    pipeline: &Pipeline,
) -> Result<ChshResult> {
    let mut correlations = [0.0; 4];
    let mut clipped = false;
    for (i, pair) in settings.pairs().iter().enumerate() {
        let table = exact_pair_table(source, pair)?;
        let (distorted, clip) = pipeline.apply_exact(&table)?;
        clipped |= clip;
        correlations[i] = correlation(&distorted)?;
    }
    Ok(combine(correlations, [0.0; 4], clipped))
}

/// Sampled CHSH run: `trials` trials per correlator, arm `i` on RNG
/// substream `i` of the seed.
pub fn chsh_sampled(
    model: &HiddenVariableModel,
    settings: &ChshSettings,
    pipeline: &Pipeline,
    trials: u64,
    seed: u64,
) -> Result<ChshResult> {
    if trials == 0 {
        return Err(Error::DegenerateData("zero trials".into()));
    }
    let a_equiv = pipeline.equivalent_parameter(4)?;
    let mut correlations = [0.0; 4];
    let mut std_errors = [0.0; 4];
    let mut clipped = false;
    for (i, pair) in settings.pairs().iter().enumerate() {
        let mut rng = RandomStream::substream(seed, i as u64);
        let raw = run_trials(model, pair, trials, &mut rng)?;
        let raw_e = correlation(&analyze_counts(&raw)?)?;
        let (distorted, clip) = pipeline.apply_counts(&raw)?;
        clipped |= clip;
        correlations[i] = correlation(&distorted)?;
        std_errors[i] = a_equiv * ((1.0 - raw_e * raw_e).max(0.0) / trials as f64).sqrt();
    }
    Ok(combine(correlations, std_errors, clipped))
}

/// Correlator-vs-angle curve for coplanar settings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AngularCurve {
    /// quantum | classical-raw | classical-distorted (with a quantum-distorted corner case).
    pub source: String,
    pub thetas: Vec<f64>,
    pub values: Vec<f64>,
    pub clipped: bool,
}

/// Sweeps the exact correlator over `n_points` relative angles in
/// `[0, pi]`, one party fixed on the z axis, both in the x-z plane.
pub fn angular_sweep(
    source: &ChshSource,
    pipeline: &Pipeline,
    n_points: usize,
) -> Result<AngularCurve> {
    if n_points < 2 {
        return Err(Error::InvalidParameter {
            name: "n_points",
            reason: "need at least two points".into(),
        });
    }
    let label = match (source, pipeline) {
        (ChshSource::Quantum(_), Pipeline::Raw) => "quantum",
        (ChshSource::Quantum(_), _) => "quantum-distorted",
        (ChshSource::Classical(_), Pipeline::Raw) => "classical-raw",
        (ChshSource::Classical(_), _) => "classical-distorted",
    };
    let mut thetas = Vec::with_capacity(n_points);
    let mut values = Vec::with_capacity(n_points);
    let mut clipped = false;
    for k in 0..n_points {
        let theta = k as f64 * std::f64::consts::PI / (n_points - 1) as f64;
        let pair = [
            MeasurementSetting::from_xz_angle(0.0),
            MeasurementSetting::from_xz_angle(theta),
        ];
        let table = exact_pair_table(source, &pair)?;
        let (distorted, clip) = pipeline.apply_exact(&table)?;
        clipped |= clip;
        thetas.push(theta);
        values.push(correlation(&distorted)?);
    }
    Ok(AngularCurve {
        source: label.to_string(),
        thetas,
        values,
        clipped,
    })
}
