//! JSON scenario/report formats and the `holonomy` command line.
//!
//! Exit codes: 0 success, 1 parse or validation error, 2 non-cyclic input,
//! 3 nodal input, 4 composite phases disagree beyond 1e−6.

use std::f64::consts::{FRAC_PI_3, PI};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::composite::{build_correlated, theorem_check_with, CompositeState, TheoremCheck};
use crate::evolution::{
    is_global_cyclic, propagate, HamiltonianSchedule, Segment, DEFAULT_SAMPLES_PER_SEGMENT,
};
use crate::matcore::{ComplexMatrix, C64};
use crate::phases::{phase_distance, PhaseReport, Tolerances, NODAL_TOL};
use crate::scenarios::{bloch_path, example_one, example_two, ExpectedPhases, ScenarioSpec};
use crate::states::{qubit_state, DensityOperator};
use crate::transport::{counterexample_lift, parallel_lift_with, sjoqvist_phase_with};
use crate::Error;

/// Environment variable overriding the default cyclicity tolerance.
pub const TOL_ENV: &str = "HOLONOMY_TOL";

/// Largest acceptable geometric-phase discrepancy for `holonomy composite`.
pub const COMPOSITE_AGREEMENT_TOL: f64 = 1e-6;

// ---------------------------------------------------------------------------
// Errors and exit codes

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn context(self, prefix: &str) -> Self {
        Self {
            code: self.code,
            message: format!("{prefix}: {}", self.message),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotCyclic { .. } => 2,
        Error::NodalPoint { .. } => 3,
        _ => 1,
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        Self {
            code: exit_code(&err),
            message: err.to_string(),
        }
    }
}

fn io_error(path: &Path, err: std::io::Error) -> CliError {
    CliError::usage(format!("{}: {err}", path.display()))
}

// ---------------------------------------------------------------------------
// File formats

/// Square matrix as rows of `[re, im]` pairs.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_from_json(rows: &MatrixJson) -> crate::Result<ComplexMatrix> {
    let rows: Vec<Vec<C64>> = rows
        .iter()
        .map(|row| row.iter().map(|[re, im]| C64::new(*re, *im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Rho0Json {
    Qubit {
        r: f64,
        theta: f64,
        #[serde(default)]
        phi: f64,
    },
    Matrix(MatrixJson),
}

impl Rho0Json {
    pub fn build(&self) -> Result<DensityOperator, CliError> {
        match self {
            Self::Qubit { r, theta, phi } => Ok(qubit_state(*r, *theta, *phi)?),
            Self::Matrix(m) => matrix_from_json(m)
                .and_then(DensityOperator::new)
                .map_err(|e| CliError::from(e).context("matrix")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentJson {
    pub duration: f64,
    pub h: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ScheduleJson {
    Segments(Vec<SegmentJson>),
    Sampled { tau: f64, h: Vec<MatrixJson> },
}

impl ScheduleJson {
    pub fn build(&self) -> Result<HamiltonianSchedule, CliError> {
        match self {
            Self::Segments(segments) => {
                let segments = segments
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        matrix_from_json(&s.h)
                            .map(|h| Segment::new(s.duration, h))
                            .map_err(|e| CliError::from(e).context(&format!("segment {i}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(HamiltonianSchedule::piecewise(segments)?)
            }
            Self::Sampled { tau, h } => {
                let h = h
                    .iter()
                    .enumerate()
                    .map(|(i, m)| {
                        matrix_from_json(m)
                            .map_err(|e| CliError::from(e).context(&format!("sample {i}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(HamiltonianSchedule::sampled(*tau, h)?)
            }
        }
    }

    pub fn from_schedule(schedule: &HamiltonianSchedule) -> Self {
        match (schedule.segments(), schedule.samples()) {
            (Some(segments), _) => Self::Segments(
                segments
                    .iter()
                    .map(|s| SegmentJson {
                        duration: s.duration,
                        h: matrix_to_json(&s.h),
                    })
                    .collect(),
            ),
            (None, Some((tau, h))) => Self::Sampled {
                tau,
                h: h.iter().map(matrix_to_json).collect(),
            },
            (None, None) => unreachable!("a schedule is either piecewise or sampled"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_per_segment: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclicity_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodal_tol: Option<f64>,
}

/// A scenario as read from (and echoed to) JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub rho0: Rho0Json,
    pub schedule: ScheduleJson,
    #[serde(default)]
    pub options: OptionsJson,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::usage(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        Self::parse(&text).map_err(|e| e.context(&path.display().to_string()))
    }

    pub fn from_spec(spec: &ScenarioSpec) -> Self {
        Self {
            name: spec.name.clone(),
            rho0: Rho0Json::Matrix(matrix_to_json(spec.rho0.matrix())),
            schedule: ScheduleJson::from_schedule(&spec.schedule),
            options: OptionsJson::default(),
        }
    }

    pub fn build(&self) -> Result<ScenarioSpec, CliError> {
        let rho0 = self.rho0.build().map_err(|e| e.context("rho0"))?;
        let schedule = self.schedule.build().map_err(|e| e.context("schedule"))?;
        if rho0.dim() != schedule.dim() {
            return Err(CliError::usage(format!(
                "rho0 has dimension {} but the schedule acts on dimension {}",
                rho0.dim(),
                schedule.dim()
            )));
        }
        Ok(ScenarioSpec {
            name: self.name.clone(),
            rho0,
            schedule,
            expected: None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParallelJson {
    pub xi_tau: f64,
    pub sjoqvist_phase: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationJson {
    pub total: f64,
    pub dynamical: f64,
    pub geometric: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedJson {
    pub total: f64,
    pub dynamical: f64,
    pub geometric: f64,
    pub source: String,
    pub deviation: DeviationJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub name: String,
    pub total: f64,
    pub dynamical: f64,
    pub geometric: f64,
    pub geometric_mod: f64,
    pub trace_magnitude: f64,
    pub cyclicity_residual: f64,
    pub nodal: bool,
    pub global_cyclic: bool,
    pub parallel: ParallelJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedJson>,
    /// The scenario exactly as evaluated; re-running it reproduces the report.
    pub scenario: ScenarioFile,
}

// ---------------------------------------------------------------------------
// Evaluation

/// Settings that come from the command line or the environment rather than
/// from the scenario file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunConfig {
    pub samples_per_segment: Option<usize>,
    /// Cyclicity tolerance from the environment; file options take precedence.
    pub env_cyclicity_tol: Option<f64>,
}

impl RunConfig {
    pub fn from_env(samples_per_segment: Option<usize>) -> Result<Self, CliError> {
        let env_cyclicity_tol = match std::env::var(TOL_ENV) {
            Ok(v) => Some(parse_tolerance(&v).map_err(|e| e.context(TOL_ENV))?),
            Err(_) => None,
        };
        Ok(Self {
            samples_per_segment,
            env_cyclicity_tol,
        })
    }
}

fn parse_tolerance(text: &str) -> Result<f64, CliError> {
    match text.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(CliError::usage(format!(
            "'{text}' is not a positive tolerance"
        ))),
    }
}

fn resolve_tolerances(options: &OptionsJson, cfg: &RunConfig) -> Result<Tolerances, CliError> {
    for (name, v) in [
        ("cyclicity_tol", options.cyclicity_tol),
        ("nodal_tol", options.nodal_tol),
    ] {
        if let Some(v) = v {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::usage(format!(
                    "options.{name} = {v} must be positive"
                )));
            }
        }
    }
    Ok(Tolerances {
        cyclicity: options.cyclicity_tol.or(cfg.env_cyclicity_tol),
        nodal: options.nodal_tol.unwrap_or(NODAL_TOL),
    })
}

fn expected_json(expected: &ExpectedPhases, report: &PhaseReport) -> ExpectedJson {
    ExpectedJson {
        total: expected.total,
        dynamical: expected.dynamical,
        geometric: expected.geometric,
        source: expected.source.to_string(),
        deviation: DeviationJson {
            total: phase_distance(report.total, expected.total),
            dynamical: phase_distance(report.dynamical, expected.dynamical),
            geometric: phase_distance(report.geometric, expected.geometric),
        },
    }
}

/// Evaluate a parsed scenario (plus optional closed-form expectations).
pub fn evaluate_spec(
    spec: &ScenarioSpec,
    options: &OptionsJson,
    cfg: &RunConfig,
) -> Result<ReportFile, CliError> {
    let tol = resolve_tolerances(options, cfg)?;
    let samples = cfg
        .samples_per_segment
        .or(options.samples_per_segment)
        .unwrap_or(DEFAULT_SAMPLES_PER_SEGMENT);
    let path = propagate(&spec.schedule, samples)?;
    let report = tol.geometric_phase(&spec.rho0, &path)?;
    let lift = parallel_lift_with(&tol, &spec.rho0, &path)?;
    let parallel = ParallelJson {
        xi_tau: lift.xi_final(),
        sjoqvist_phase: sjoqvist_phase_with(&tol, &spec.rho0, &lift)?,
        residual: lift.residual(),
    };
    let mut scenario = ScenarioFile::from_spec(spec);
    scenario.options = OptionsJson {
        samples_per_segment: Some(samples),
        cyclicity_tol: tol.cyclicity,
        nodal_tol: Some(tol.nodal),
    };
    Ok(ReportFile {
        name: spec.name.clone(),
        total: report.total,
        dynamical: report.dynamical,
        geometric: report.geometric,
        geometric_mod: report.geometric_mod,
        trace_magnitude: report.trace_magnitude,
        cyclicity_residual: report.cyclicity_residual,
        nodal: report.nodal,
        global_cyclic: is_global_cyclic(&path).is_some(),
        parallel,
        expected: spec.expected.as_ref().map(|e| expected_json(e, &report)),
        scenario,
    })
}

/// Evaluate a scenario file. Qubit-form `rho0` entries are echoed back in
/// their original form so the report stays readable.
pub fn evaluate_file(file: &ScenarioFile, cfg: &RunConfig) -> Result<ReportFile, CliError> {
    let spec = file.build()?;
    let mut report = evaluate_spec(&spec, &file.options, cfg)?;
    report.scenario.rho0 = file.rho0.clone();
    report.scenario.schedule = file.schedule.clone();
    Ok(report)
}

// ---------------------------------------------------------------------------
// Composite output

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseJson {
    pub total: f64,
    pub dynamical: f64,
    pub geometric: f64,
    pub geometric_mod: f64,
    pub trace_magnitude: f64,
    pub cyclicity_residual: f64,
}

impl From<&PhaseReport> for PhaseJson {
    fn from(r: &PhaseReport) -> Self {
        Self {
            total: r.total,
            dynamical: r.dynamical,
            geometric: r.geometric,
            geometric_mod: r.geometric_mod,
            trace_magnitude: r.trace_magnitude,
            cyclicity_residual: r.cyclicity_residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeReport {
    pub name: String,
    pub dim_a: usize,
    pub dim_b: usize,
    pub composite: PhaseJson,
    pub reduced: PhaseJson,
    /// phase_distance between the two geometric phases.
    pub agreement: f64,
    pub total_difference: f64,
    pub dynamical_difference: f64,
    /// Bloch vector of ρ^B read off as Tr[ρ^{AB}(I ⊗ σ_j)], qubit B only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pauli_b: Option<[f64; 3]>,
}

fn composite_report(name: &str, state: &CompositeState, check: &TheoremCheck) -> CompositeReport {
    CompositeReport {
        name: name.to_string(),
        dim_a: state.dim_a(),
        dim_b: state.dim_b(),
        composite: (&check.composite).into(),
        reduced: (&check.reduced).into(),
        agreement: check.agreement,
        total_difference: phase_distance(check.composite.total, check.reduced.total),
        dynamical_difference: (check.composite.dynamical - check.reduced.dynamical).abs(),
        pauli_b: state.pauli_coefficients_b().ok(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub r: f64,
    pub theta: f64,
    pub residual_plus: f64,
    pub residual_minus: f64,
    pub phase: f64,
    pub geometric: f64,
    pub distance: f64,
}

// ---------------------------------------------------------------------------
// Command line

#[derive(Debug, Parser)]
#[command(
    name = "holonomy",
    version,
    about = "Total, dynamical and geometric phases of mixed states under cyclic unitary evolution (hbar = 1)"
)]
pub struct Cli {
    /// Interpret angle flags (--theta, --phi) in degrees.
    #[arg(long, global = true)]
    pub degrees: bool,

    /// Grid intervals per piecewise-constant segment (rounded up to even).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(2..))]
    pub samples_per_segment: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompositeDemo {
    /// (I/2) ⊗ ρ^B with ρ^B = qubit_state(0.5, π/3, 0) under Example I.
    Product,
    /// 0.3 |0⟩⟨0| ⊗ diag(0.9, 0.1) + 0.7 |1⟩⟨1| ⊗ diag(0.2, 0.8) under Example I.
    Correlated,
    /// The product demo state under the identity evolution.
    Identity,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one or more scenario files and print their reports.
    Run {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Evaluate scenarios on this many threads; reports are printed as
        /// they finish, one JSON document per line.
        #[arg(long, short = 'j')]
        jobs: Option<usize>,
    },
    /// Spin-1/2 in a static field, H = −ω σ_z for τ = π/ω.
    Example1 {
        #[arg(long)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Print the scenario file instead of evaluating it.
        #[arg(long)]
        emit_scenario: bool,
    },
    /// Three-segment geodesic cycle enclosing azimuth φ at polar angle θ.
    Example2 {
        #[arg(long)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Print the scenario file instead of evaluating it.
        #[arg(long)]
        emit_scenario: bool,
    },
    /// Write the Bloch-vector trajectory of a qubit scenario as CSV.
    Bloch {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Output file (standard output if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the geometric phase of ρ^{AB} under I ⊗ U^B with that of ρ^B.
    Composite {
        /// Built-in demonstration instead of files.
        #[arg(long, conflicts_with_all = ["weights", "states", "schedule"])]
        demo: Option<CompositeDemo>,
        /// Classical weights p_i of the A register.
        #[arg(long, value_delimiter = ',', requires_all = ["states", "schedule"])]
        weights: Vec<f64>,
        /// JSON array of subsystem-B states, one per weight, each in scenario `rho0` form.
        #[arg(long)]
        states: Option<PathBuf>,
        /// JSON schedule for subsystem B, in scenario `schedule` form.
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Alternative parallel transport on Example I that misses the geometric phase.
    Counterexample {
        #[arg(long)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
    },
}

fn to_json<T: Serialize>(value: &T, pretty: bool) -> String {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    text.expect("report types always serialise")
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|e| CliError::usage(format!("write failed: {e}")))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// Format Bloch samples as CSV with header `t,rx,ry,rz`.
pub fn bloch_csv(points: &[(f64, crate::states::BlochVector)]) -> String {
    let mut csv = String::from("t,rx,ry,rz\n");
    for (t, b) in points {
        csv.push_str(&format!(
            "{t:.16e},{:.16e},{:.16e},{:.16e}\n",
            b.x(),
            b.y(),
            b.z()
        ));
    }
    csv
}

impl Cli {
    fn angle(&self, value: f64) -> f64 {
        if self.degrees {
            value.to_radians()
        } else {
            value
        }
    }

    fn config(&self) -> Result<RunConfig, CliError> {
        RunConfig::from_env(self.samples_per_segment.map(|n| n as usize))
    }

    fn example_output(
        &self,
        spec: ScenarioSpec,
        emit_scenario: bool,
        out: &mut dyn Write,
    ) -> Result<(), CliError> {
        if emit_scenario {
            return write_out(out, &to_json(&ScenarioFile::from_spec(&spec), true));
        }
        let report = evaluate_spec(&spec, &OptionsJson::default(), &self.config()?)?;
        write_out(out, &to_json(&report, true))
    }

    /// Execute the parsed command, writing results to `out`.
    ///
    /// Diagnostics for individual scenarios in a multi-file `run` go to
    /// standard error; the returned error carries the exit code.
    pub fn execute(&self, out: &mut dyn Write) -> Result<(), CliError> {
        match &self.command {
            Command::Run { files, jobs } => self.run_files(files, *jobs, out),
            Command::Example1 {
                r,
                theta,
                omega,
                emit_scenario,
            } => {
                let spec = example_one(*r, self.angle(*theta), *omega)?;
                self.example_output(spec, *emit_scenario, out)
            }
            Command::Example2 {
                r,
                theta,
                phi,
                omega,
                emit_scenario,
            } => {
                let spec = example_two(*r, self.angle(*theta), self.angle(*phi), *omega)?;
                self.example_output(spec, *emit_scenario, out)
            }
            Command::Bloch {
                scenario,
                samples,
                out: target,
            } => {
                let spec = ScenarioFile::load(scenario)?.build()?;
                let csv = bloch_csv(&bloch_path(&spec, *samples)?);
                match target {
                    Some(p) => std::fs::write(p, csv).map_err(|e| io_error(p, e)),
                    None => out
                        .write_all(csv.as_bytes())
                        .map_err(|e| CliError::usage(format!("write failed: {e}"))),
                }
            }
            Command::Composite {
                demo,
                weights,
                states,
                schedule,
            } => self.composite(*demo, weights, states.as_deref(), schedule.as_deref(), out),
            Command::Counterexample { r, theta } => {
                let theta = self.angle(*theta);
                let ce = counterexample_lift(*r, theta)?;
                let report = CounterexampleReport {
                    r: *r,
                    theta,
                    residual_plus: ce.residual_plus,
                    residual_minus: ce.residual_minus,
                    phase: ce.phase,
                    geometric: ce.geometric,
                    distance: phase_distance(ce.phase, ce.geometric),
                };
                write_out(out, &to_json(&report, true))
            }
        }
    }

    fn run_files(
        &self,
        files: &[PathBuf],
        jobs: Option<usize>,
        out: &mut dyn Write,
    ) -> Result<(), CliError> {
        let cfg = self.config()?;
        let evaluate = |p: &PathBuf| ScenarioFile::load(p).and_then(|f| evaluate_file(&f, &cfg));
        if files.len() == 1 {
            let report = evaluate(&files[0])?;
            return write_out(out, &to_json(&report, true));
        }
        let outcomes: Vec<(usize, Result<String, CliError>)> = match jobs {
            Some(n) if n > 1 => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
                pool.install(|| {
                    files
                        .par_iter()
                        .enumerate()
                        .map(|(i, p)| (i, evaluate(p).map(|r| to_json(&r, false))))
                        .collect()
                })
            }
            Some(0) => return Err(CliError::usage("--jobs must be at least 1")),
            _ => files
                .iter()
                .enumerate()
                .map(|(i, p)| (i, evaluate(p).map(|r| to_json(&r, false))))
                .collect(),
        };
        let mut first_failure: Option<CliError> = None;
        let mut failures = 0;
        for (i, outcome) in outcomes {
            match outcome {
                Ok(line) => write_out(out, &line)?,
                Err(e) => {
                    let e = e.context(&files[i].display().to_string());
                    eprintln!("{e}");
                    failures += 1;
                    first_failure.get_or_insert(e);
                }
            }
        }
        match first_failure {
            Some(e) => Err(CliError {
                code: e.code,
                message: format!("{failures} of {} scenarios failed", files.len()),
            }),
            None => Ok(()),
        }
    }

    fn composite(
        &self,
        demo: Option<CompositeDemo>,
        weights: &[f64],
        states: Option<&Path>,
        schedule: Option<&Path>,
        out: &mut dyn Write,
    ) -> Result<(), CliError> {
        let cfg = self.config()?;
        let samples = cfg
            .samples_per_segment
            .unwrap_or(DEFAULT_SAMPLES_PER_SEGMENT);
        let tol = resolve_tolerances(&OptionsJson::default(), &cfg)?;
        let ex1 = || example_one(0.5, FRAC_PI_3, 1.0).map(|s| s.schedule);
        let (name, state, schedule) = match demo {
            Some(CompositeDemo::Product) => (
                "product",
                CompositeState::product(
                    &DensityOperator::maximally_mixed(2),
                    &qubit_state(0.5, FRAC_PI_3, 0.0)?,
                ),
                ex1()?,
            ),
            Some(CompositeDemo::Correlated) => {
                let diag = |a: f64| {
                    DensityOperator::new(ComplexMatrix::from_diagonal(&[
                        C64::new(a, 0.0),
                        C64::new(1.0 - a, 0.0),
                    ]))
                };
                (
                    "correlated",
                    build_correlated(&[0.3, 0.7], &[diag(0.9)?, diag(0.2)?])?,
                    ex1()?,
                )
            }
            Some(CompositeDemo::Identity) => (
                "identity",
                CompositeState::product(
                    &DensityOperator::maximally_mixed(2),
                    &qubit_state(0.5, FRAC_PI_3, 0.0)?,
                ),
                HamiltonianSchedule::zero(2, PI)?,
            ),
            None => {
                let (Some(states), Some(schedule)) = (states, schedule) else {
                    return Err(CliError::usage(
                        "composite needs --demo or all of --weights, --states and --schedule",
                    ));
                };
                let rho_b: Vec<Rho0Json> = load_json(states)?;
                let rho_b = rho_b
                    .iter()
                    .enumerate()
                    .map(|(i, s)| s.build().map_err(|e| e.context(&format!("state {i}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                let sched: ScheduleJson = load_json(schedule)?;
                (
                    "composite",
                    build_correlated(weights, &rho_b)?,
                    sched.build()?,
                )
            }
        };
        let path = propagate(&schedule, samples)?;
        let check = theorem_check_with(&tol, &state, &path)?;
        let report = composite_report(name, &state, &check);
        write_out(out, &to_json(&report, true))?;
        if check.agreement > COMPOSITE_AGREEMENT_TOL {
            return Err(CliError {
                code: 4,
                message: format!(
                    "composite and reduced geometric phases differ by {:e}",
                    check.agreement
                ),
            });
        }
        Ok(())
    }
}

/// Parse arguments and run; returns the process exit code.
///
/// Argument errors exit with 1 (not clap's default 2, which is reserved for
/// non-cyclic input).
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match cli.execute(&mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}
