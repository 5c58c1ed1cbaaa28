//! Command-line front end.
//!
//! Artifacts are JSON (or CSV for curves) and embed the tool version, the
//! full run configuration and the seed, so a run is reproducible from its
//! artifact alone. Output bytes depend only on the configuration; timing
//! goes to stderr. Exit codes: 0 success, 2 invalid input, 3 saturated
//! device or degenerate data.

mod states;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use affine_loophole::affine::pseudo_pure_split;
use affine_loophole::bellharness::{
    angular_sweep, chsh_exact, chsh_sampled, AngularCurve, ChshSettings, ChshSource, Pipeline,
};
use affine_loophole::distortion::{
    analyze_counts, equivalent_affine, threshold_counts, ThresholdDevice,
};
use affine_loophole::eigen::hermitian_eigensystem;
use affine_loophole::error::Error;
use affine_loophole::lhv::{run_trials, CountTable, HiddenVariableModel};
use affine_loophole::measurement::projective_probabilities;
use affine_loophole::qstate::bell_singlet;
use affine_loophole::rng::RandomStream;
use affine_loophole::separability::{
    minimal_mixing_parameter, partial_transpose_min_eigenvalue, qdice_decomposition, separate,
};
use affine_loophole::tol;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    InvalidInput(String),
    InvalidState(String),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::InvalidInput(msg) | CliError::InvalidState(msg) => write!(f, "{msg}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::DeviceSaturated { .. })
            | CliError::Core(Error::DegenerateData(_)) => 3,
            CliError::Core(_) | CliError::InvalidInput(_) | CliError::InvalidState(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qloop",
    version,
    about = "Separable decompositions, detector distortion and CHSH runs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the artifact here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StateArgs {
    /// bell-singlet | qdice-sigma | maximally-mixed | bloch:x,y,z | FILE.json
    #[arg(long)]
    state: String,
    /// Qubit count for states that need one (maximally-mixed).
    #[arg(long, default_value_t = 2)]
    qubits: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a state into a separable mixture plus affine parameter.
    Separate {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check hermiticity, trace and positivity of a state spec.
    Validate {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Split a pseudo-pure state into its pure projector and parameter.
    Pseudopure {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the classical source through a thresholding detector and
    /// compare against singlet statistics.
    Mimic {
        /// Trials per correlator.
        #[arg(long, default_value_t = 1_200_000)]
        trials: u64,
        /// Counts removed per cell; defaults to trials/6 (equivalent a = 3).
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, env = "QLOOP_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// CHSH value of a source, exact or sampled, with optional pipeline.
    Chsh {
        /// bell-singlet (quantum) | qdice (classical source)
        #[arg(long)]
        source: String,
        /// none | a<value> | threshold:<fraction of total>
        #[arg(long, default_value = "none")]
        pipeline: String,
        /// Sample this many trials per correlator (classical sources only);
        /// omit for the exact value.
        #[arg(long)]
        trials: Option<u64>,
        /// Absolute per-cell threshold in counts; needs --trials.
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, env = "QLOOP_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact correlator-vs-angle curve of a source.
    Curve {
        /// bell-singlet (quantum) | qdice (classical source)
        #[arg(long)]
        source: String,
        /// none | a<value> | threshold:<fraction of total>
        #[arg(long, default_value = "none")]
        pipeline: String,
        #[arg(long, default_value_t = 64)]
        points: usize,
        /// csv | json
        #[arg(long, default_value = "csv")]
        format: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Serialize)]
struct Tool {
    name: &'static str,
    version: &'static str,
}

impl Tool {
    fn current() -> Self {
        Tool {
            name: "qloop",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Serialize)]
struct Artifact<C: Serialize, R: Serialize> {
    tool: Tool,
    command: &'static str,
    config: C,
    results: R,
}

fn write_output(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn write_artifact<C: Serialize, R: Serialize>(
    out: &Option<PathBuf>,
    command: &'static str,
    config: C,
    results: R,
) -> Result<(), CliError> {
    let artifact = Artifact {
        tool: Tool::current(),
        command,
        config,
        results,
    };
    let mut bytes = serde_json::to_vec_pretty(&artifact).expect("artifact serializes");
    bytes.push(b'\n');
    write_output(out, &bytes)
}

fn parse_pipeline(spec: &str) -> Result<Pipeline, CliError> {
    if spec == "none" || spec == "raw" {
        return Ok(Pipeline::Raw);
    }
    if let Some(rest) = spec.strip_prefix("threshold:") {
        let fraction: f64 = rest
            .parse()
            .map_err(|_| CliError::InvalidInput(format!("bad threshold fraction {rest:?}")))?;
        if !(0.0..1.0).contains(&fraction) {
            return Err(CliError::InvalidInput(format!(
                "threshold fraction must be in [0, 1), got {fraction}"
            )));
        }
        return Ok(Pipeline::Threshold { fraction });
    }
    if let Some(rest) = spec.strip_prefix('a') {
        let a: f64 = rest
            .parse()
            .map_err(|_| CliError::InvalidInput(format!("bad affine parameter {rest:?}")))?;
        if a.is_nan() || a <= 0.0 {
            return Err(CliError::InvalidInput(format!(
                "affine parameter must be positive, got {a}"
            )));
        }
        return Ok(Pipeline::Affine { a });
    }
    Err(CliError::InvalidInput(format!(
        "unknown pipeline {spec:?}; use none, a<value> or threshold:<fraction>"
    )))
}

fn load_source(spec: &str) -> Result<ChshSource, CliError> {
    match spec {
        "qdice" => Ok(ChshSource::Classical(
            HiddenVariableModel::from_decomposition(&qdice_decomposition())?,
        )),
        other => Ok(ChshSource::Quantum(states::load_state(other, 2)?)),
    }
}

#[derive(Serialize)]
struct StateConfig {
    state: String,
    qubits: usize,
}

#[derive(Serialize)]
struct SeparateResults {
    decomposition: affine_loophole::separability::SeparableDecomposition,
    reconstruction_error: f64,
    partial_transpose_min_eigenvalue: Option<f64>,
    minimal_mixing_parameter: Option<f64>,
}

fn cmd_separate(state: &StateArgs, output: &OutputArgs) -> Result<(), CliError> {
    let rho = states::load_state(&state.state, state.qubits)?;
    let decomposition = separate(&rho)?;
    let reconstruction_error = decomposition.reconstruct().frobenius_distance(rho.matrix());
    let (pt_min, minimal) = if rho.n_qubits() == 2 {
        (
            Some(partial_transpose_min_eigenvalue(&rho)?),
            Some(minimal_mixing_parameter(&rho, tol::MIXING_SEARCH_TOL)?),
        )
    } else {
        (None, None)
    };
    write_artifact(
        &output.out,
        "separate",
        StateConfig {
            state: state.state.clone(),
            qubits: state.qubits,
        },
        SeparateResults {
            decomposition,
            reconstruction_error,
            partial_transpose_min_eigenvalue: pt_min,
            minimal_mixing_parameter: minimal,
        },
    )
}

#[derive(Serialize)]
struct Check {
    value: f64,
    pass: bool,
}

#[derive(Serialize)]
struct ValidateResults {
    dim: usize,
    hermiticity_deviation: Check,
    trace_error: Check,
    min_eigenvalue: Option<Check>,
    valid: bool,
}

fn cmd_validate(state: &StateArgs, output: &OutputArgs) -> Result<(), CliError> {
    let m = states::load_matrix(&state.state, state.qubits)?;
    if !m.dim().is_power_of_two() {
        return Err(CliError::InvalidInput(format!(
            "matrix dimension {} is not a power of two",
            m.dim()
        )));
    }
    let hermiticity = m.hermiticity_deviation();
    let trace = m.trace();
    let trace_error = ((trace.re - 1.0).powi(2) + trace.im.powi(2)).sqrt();
    let hermiticity_check = Check {
        value: hermiticity,
        pass: hermiticity <= tol::HERMITIAN_TOL,
    };
    let trace_check = Check {
        value: trace_error,
        pass: trace_error <= tol::HERMITIAN_TOL,
    };
    let eigen_check = hermitian_eigensystem(&m).ok().map(|eig| Check {
        value: eig.eigenvalues[0],
        pass: eig.eigenvalues[0] >= -tol::PSD_TOL,
    });
    let valid = hermiticity_check.pass
        && trace_check.pass
        && eigen_check.as_ref().map(|c| c.pass).unwrap_or(false);
    write_artifact(
        &output.out,
        "validate",
        StateConfig {
            state: state.state.clone(),
            qubits: state.qubits,
        },
        ValidateResults {
            dim: m.dim(),
            hermiticity_deviation: hermiticity_check,
            trace_error: trace_check,
            min_eigenvalue: eigen_check,
            valid,
        },
    )?;
    if !valid {
        return Err(CliError::InvalidState(format!(
            "{:?} is not a valid density matrix",
            state.state
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct PseudopureResults {
    pseudo_pure: bool,
    a: Option<f64>,
    pure_projector: Option<affine_loophole::ComplexMatrix>,
    reconstruction_error: Option<f64>,
}

fn cmd_pseudopure(state: &StateArgs, output: &OutputArgs) -> Result<(), CliError> {
    let rho = states::load_state(&state.state, state.qubits)?;
    let results = match pseudo_pure_split(&rho) {
        Some(split) => PseudopureResults {
            pseudo_pure: true,
            a: Some(split.a),
            reconstruction_error: Some(split.reconstruct().frobenius_distance(rho.matrix())),
            pure_projector: Some(split.pure.matrix().clone()),
        },
        None => PseudopureResults {
            pseudo_pure: false,
            a: None,
            pure_projector: None,
            reconstruction_error: None,
        },
    };
    write_artifact(
        &output.out,
        "pseudopure",
        StateConfig {
            state: state.state.clone(),
            qubits: state.qubits,
        },
        results,
    )
}

#[derive(Serialize)]
struct MimicConfig {
    trials: u64,
    theta: f64,
    seed: u64,
}

#[derive(Serialize)]
struct MimicZz {
    raw_counts: CountTable,
    surviving_counts: CountTable,
    clipped: bool,
    distorted: Vec<f64>,
    quantum: Vec<f64>,
    max_abs_error: f64,
}

#[derive(Serialize)]
struct MimicResults {
    equivalent_affine: affine_loophole::affine::AffineMap,
    zz: MimicZz,
    chsh_raw: affine_loophole::bellharness::ChshResult,
    chsh_distorted: affine_loophole::bellharness::ChshResult,
    chsh_quantum_exact: f64,
}

fn cmd_mimic(
    trials: u64,
    theta: Option<f64>,
    seed: u64,
    output: &OutputArgs,
) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::InvalidInput("need at least one trial".into()));
    }
    let theta = theta.unwrap_or(trials as f64 / 6.0);
    let map = equivalent_affine(theta, trials as f64, 4)?;
    let model = HiddenVariableModel::from_decomposition(&qdice_decomposition())?;
    let settings = ChshSettings::canonical();

    // The z-z table, raw and pushed through the detector.
    let zz = [
        affine_loophole::measurement::MeasurementSetting::from_xz_angle(0.0),
        affine_loophole::measurement::MeasurementSetting::from_xz_angle(0.0),
    ];
    let raw_counts = run_trials(&model, &zz, trials, &mut RandomStream::substream(seed, 100))?;
    let device = ThresholdDevice::new(theta)?;
    let clipped = device.clips(&raw_counts);
    let surviving = threshold_counts(&device, &raw_counts);
    let distorted = analyze_counts(&surviving)?;
    let quantum = projective_probabilities(bell_singlet().matrix(), &zz)?;
    let max_abs_error = distorted
        .values()
        .iter()
        .zip(quantum.values())
        .map(|(d, q)| (d - q).abs())
        .fold(0.0f64, f64::max);

    let fraction = theta / trials as f64;
    let chsh_raw = chsh_sampled(&model, &settings, &Pipeline::Raw, trials, seed)?;
    let chsh_distorted = chsh_sampled(
        &model,
        &settings,
        &Pipeline::Threshold { fraction },
        trials,
        seed,
    )?;
    let chsh_quantum_exact = chsh_exact(
        &ChshSource::Quantum(bell_singlet()),
        &settings,
        &Pipeline::Raw,
    )?
    .s_value;

    write_artifact(
        &output.out,
        "mimic",
        MimicConfig {
            trials,
            theta,
            seed,
        },
        MimicResults {
            equivalent_affine: map,
            zz: MimicZz {
                raw_counts,
                surviving_counts: surviving,
                clipped,
                distorted: distorted.values().to_vec(),
                quantum: quantum.values().to_vec(),
                max_abs_error,
            },
            chsh_raw,
            chsh_distorted,
            chsh_quantum_exact,
        },
    )
}

#[derive(Serialize)]
struct ChshConfig {
    source: String,
    pipeline: Pipeline,
    mode: &'static str,
    trials: Option<u64>,
    seed: u64,
}

#[derive(Serialize)]
struct ChshResults {
    settings: ChshSettings,
    result: affine_loophole::bellharness::ChshResult,
}

#[allow(clippy::too_many_arguments)]
fn cmd_chsh(
    source_spec: &str,
    pipeline_spec: &str,
    trials: Option<u64>,
    theta: Option<f64>,
    seed: u64,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let mut pipeline = parse_pipeline(pipeline_spec)?;
    if let Some(theta) = theta {
        if !matches!(pipeline, Pipeline::Raw) {
            return Err(CliError::InvalidInput(
                "--theta conflicts with --pipeline; pick one".into(),
            ));
        }
        let trials = trials.ok_or_else(|| {
            CliError::InvalidInput("--theta needs --trials to fix the run total".into())
        })?;
        pipeline = Pipeline::Threshold {
            fraction: theta / trials as f64,
        };
    }
    let source = load_source(source_spec)?;
    let settings = ChshSettings::canonical();
    let (mode, result) = match trials {
        None => ("exact", chsh_exact(&source, &settings, &pipeline)?),
        Some(t) => {
            let ChshSource::Classical(model) = &source else {
                return Err(CliError::InvalidInput(
                    "sampling needs a classical source; drop --trials for the exact value".into(),
                ));
            };
            (
                "sampled",
                chsh_sampled(model, &settings, &pipeline, t, seed)?,
            )
        }
    };
    write_artifact(
        &output.out,
        "chsh",
        ChshConfig {
            source: source_spec.to_string(),
            pipeline,
            mode,
            trials,
            seed,
        },
        ChshResults { settings, result },
    )
}

#[derive(Serialize)]
struct CurveConfig {
    source: String,
    pipeline: Pipeline,
    points: usize,
}

fn curve_csv(curve: &AngularCurve) -> Vec<u8> {
    let mut text = String::from("theta,E,source\n");
    for (theta, value) in curve.thetas.iter().zip(&curve.values) {
        text.push_str(&format!("{theta:.12e},{value:.12e},{}\n", curve.source));
    }
    text.into_bytes()
}

fn cmd_curve(
    source_spec: &str,
    pipeline_spec: &str,
    points: usize,
    format: &str,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let pipeline = parse_pipeline(pipeline_spec)?;
    let source = load_source(source_spec)?;
    let curve = angular_sweep(&source, &pipeline, points)?;
    match format {
        "csv" => write_output(&output.out, &curve_csv(&curve)),
        "json" => write_artifact(
            &output.out,
            "curve",
            CurveConfig {
                source: source_spec.to_string(),
                pipeline,
                points,
            },
            curve,
        ),
        other => Err(CliError::InvalidInput(format!(
            "unknown format {other:?}; use csv or json"
        ))),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Separate { state, output } => cmd_separate(state, output),
        Command::Validate { state, output } => cmd_validate(state, output),
        Command::Pseudopure { state, output } => cmd_pseudopure(state, output),
        Command::Mimic {
            trials,
            theta,
            seed,
            output,
        } => cmd_mimic(*trials, *theta, *seed, output),
        Command::Chsh {
            source,
            pipeline,
            trials,
            theta,
            seed,
            output,
        } => cmd_chsh(source, pipeline, *trials, *theta, *seed, output),
        Command::Curve {
            source,
            pipeline,
            points,
            format,
            output,
        } => cmd_curve(source, pipeline, *points, format, output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli) {
        Ok(()) => {
            eprintln!(
                "completed in {:.1} ms",
                started.elapsed().as_secs_f64() * 1e3
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
