//! Local hidden-variable source backed by a separable decomposition.
//!
//! A trial draws one mixture term, then each party measures its own
//! single-qubit state independently. Every trial consumes exactly
//! `1 + n_parties` uniform draws, so a run over a trial range lands on the
//! same stream positions no matter how it is batched.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::{MeasurementSetting, ProbabilityTable};
use crate::rng::RandomStream;
use crate::separability::SeparableDecomposition;
use crate::tol;

/// Classical source: a distribution over assignments of one Bloch vector
/// per party.
#[derive(Clone, Debug)]
pub struct HiddenVariableModel {
    weights: Vec<f64>,
    local_states: Vec<Vec<[f64; 3]>>,
    n_parties: usize,
}

impl HiddenVariableModel {
    /// Builds the source from a separable mixture, dropping its affine
    /// parameter: this is the part a purely classical device can run.
    pub fn from_decomposition(dec: &SeparableDecomposition) -> Result<Self> {
        if dec.terms.is_empty() {
            return Err(Error::DegenerateData("decomposition has no terms".into()));
        }
        let n_parties = dec.n_qubits;
        let mut weights = Vec::with_capacity(dec.terms.len());
        let mut local_states = Vec::with_capacity(dec.terms.len());
        for term in &dec.terms {
            if term.factors.len() != n_parties {
                return Err(Error::DimensionMismatch {
                    expected: n_parties,
                    actual: term.factors.len(),
                });
            }
            if term.coefficient < -tol::NEGATIVITY_FLAG_TOL {
                return Err(Error::InvalidParameter {
                    name: "weights",
                    reason: format!("negative weight {}", term.coefficient),
                });
            }
            weights.push(term.coefficient.max(0.0));
            local_states.push(term.factors.iter().map(|f| f.bloch()).collect());
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol::PROB_SUM_TOL {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: format!("sum {total} is not 1"),
            });
        }
        Ok(Self {
            weights,
            local_states,
            n_parties,
        })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn n_terms(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Bloch vector held by `party` under mixture term `term`.
    pub fn local_state(&self, term: usize, party: usize) -> [f64; 3] {
        self.local_states[term][party]
    }

    /// Uniform draws one trial consumes.
    pub fn draws_per_trial(&self) -> u64 {
        1 + self.n_parties as u64
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn check_settings(model: &HiddenVariableModel, settings: &[MeasurementSetting]) -> Result<()> {
    if settings.len() != model.n_parties {
        return Err(Error::DimensionMismatch {
            expected: model.n_parties,
            actual: settings.len(),
        });
    }
    Ok(())
}

/// Picks a mixture term from one uniform draw.
pub fn sample_term(model: &HiddenVariableModel, u: f64) -> usize {
    let mut acc = 0.0;
    for (i, w) in model.weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    model.weights.len() - 1
}

/// Outcome bits for a fixed term; consumes one uniform per party.
pub fn sample_outcome_given_term(
    model: &HiddenVariableModel,
    term: usize,
    settings: &[MeasurementSetting],
    rng: &mut RandomStream,
) -> usize {
    let n = model.n_parties;
    let mut outcome = 0usize;
    for (party, setting) in settings.iter().enumerate() {
        let p_plus = 0.5 * (1.0 + dot(setting.direction, model.local_state(term, party)));
        let bit = usize::from(rng.uniform() >= p_plus);
        outcome |= bit << (n - 1 - party);
    }
    outcome
}

/// One trial: draw a term, then every party's outcome.
pub fn sample_trial(
    model: &HiddenVariableModel,
    settings: &[MeasurementSetting],
    rng: &mut RandomStream,
) -> Result<usize> {
    check_settings(model, settings)?;
    let term = sample_term(model, rng.uniform());
    Ok(sample_outcome_given_term(model, term, settings, rng))
}

/// Raw outcome counts of a run.
///
/// Counts are nonnegative reals (integers for raw runs) and sum to at most
/// `total`, with equality when nothing was discarded downstream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountTable {
    pub total: f64,
    pub counts: Vec<f64>,
}

impl CountTable {
    pub fn new(total: f64, counts: Vec<f64>) -> Result<Self> {
        if counts.iter().any(|&c| c < 0.0) {
            return Err(Error::InvalidParameter {
                name: "counts",
                reason: "negative count".into(),
            });
        }
        let sum: f64 = counts.iter().sum();
        if sum > total * (1.0 + 1e-12) + 1e-9 {
            return Err(Error::InvalidParameter {
                name: "counts",
                reason: format!("counts sum {sum} exceeds total {total}"),
            });
        }
        Ok(Self { total, counts })
    }

    pub fn sum(&self) -> f64 {
        self.counts.iter().sum()
    }
}

/// Runs trials `range.start..range.end` of the deterministic trial
/// sequence owned by `rng`'s `(seed, stream)` pair.
///
/// Counts from disjoint ranges on the same pair merge by summation into
/// exactly the full run, which is what makes batched execution safe.
pub fn run_trial_range(
    model: &HiddenVariableModel,
    settings: &[MeasurementSetting],
    range: std::ops::Range<u64>,
    rng: &mut RandomStream,
) -> Result<CountTable> {
    check_settings(model, settings)?;
    let mut counts = vec![0.0; 1usize << model.n_parties];
    let draws = model.draws_per_trial();
    rng.jump(range.start * draws);
    for _ in range.clone() {
        let term = sample_term(model, rng.uniform());
        let outcome = sample_outcome_given_term(model, term, settings, rng);
        counts[outcome] += 1.0;
    }
    CountTable::new((range.end - range.start) as f64, counts)
}

/// Full run of `trials` trials.
pub fn run_trials(
    model: &HiddenVariableModel,
    settings: &[MeasurementSetting],
    trials: u64,
    rng: &mut RandomStream,
) -> Result<CountTable> {
    run_trial_range(model, settings, 0..trials, rng)
}

/// Exact outcome distribution of the source: the mixture expectation of
/// independent per-party response probabilities.
pub fn exact_probabilities(
    model: &HiddenVariableModel,
    settings: &[MeasurementSetting],
) -> Result<ProbabilityTable> {
    check_settings(model, settings)?;
    let n = model.n_parties;
    let dim = 1usize << n;
    let mut values = vec![0.0; dim];
    for (term, &w) in model.weights.iter().enumerate() {
        for (outcome, value) in values.iter_mut().enumerate() {
            let mut p = w;
            for (party, setting) in settings.iter().enumerate() {
                let overlap = dot(setting.direction, model.local_state(term, party));
                let bit = (outcome >> (n - 1 - party)) & 1;
                p *= 0.5 * (1.0 + if bit == 0 { overlap } else { -overlap });
            }
            *value += p;
        }
    }
    ProbabilityTable::new(values)
}
