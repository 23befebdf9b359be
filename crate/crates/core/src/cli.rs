// Copyright 2026 The povm-concurrence Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Command-line front end.
//!
//! `compute` evaluates a state file, `verify` replays the worked examples and
//! invariant checks, `sweep` prints a parameter table. Exit codes: 0 success,
//! 1 failed verification, 2 malformed input, 3 contract violation.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::concurrence::{
    self, ConcurrenceReport, NormalizationPolicy, OptimizerConfig, OverallConcurrence,
};
use crate::error::{Error, Result};
use crate::io::{self, StateFile};
use crate::linalg::{self, ComplexMatrix, C64};
use crate::povm::{self, ClassTag};
use crate::states::{self, densify, DensityMatrix, PureState};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_CONTRACT: i32 = 3;

/// Environment variable supplying the default `--seed`.
pub const SEED_ENV: &str = "CONCURRENCE_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "concurrence",
    version,
    about = "Concurrence-type entanglement measures for qubit registers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Evaluate the requested classes for a state file.
    Compute {
        /// State file (JSON, `kind` = pure | ensemble).
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Re-run the worked examples and invariant checks.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print a (parameter, value) table.
    Sweep {
        name: SweepName,
        /// Grid points for ghz-mix-q.
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long, default_value_t = 2)]
        m_min: usize,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Comma-separated subset of w, ghz, ghzsub, overall, wootters, eof.
    #[arg(long, value_delimiter = ',')]
    pub classes: Vec<ClassChoice>,
    /// Maximize GHZ values over local unitaries.
    #[arg(long)]
    pub optimize: bool,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200)]
    pub iters: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    pub format: OutputFormat,
    #[arg(long)]
    pub norm_w: Option<f64>,
    #[arg(long)]
    pub norm_ghz: Option<f64>,
    #[arg(long)]
    pub norm_ghzsub: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
pub enum ClassChoice {
    W,
    Ghz,
    Ghzsub,
    Overall,
    Wootters,
    Eof,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Aligned text with one-based kets.
    Human,
    /// One JSON object.
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepName {
    /// GHZ mixture q |GHZ+><GHZ+| + (1-q) |GHZ-><GHZ-| over q in [0, 1].
    GhzMixQ,
    /// W-class value of the W state versus qubit count.
    #[value(name = "w-m")]
    #[serde(rename = "w-m")]
    WM,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Compute,
    Verify,
    Sweep {
        name: SweepName,
        points: usize,
        m_min: usize,
        m_max: usize,
    },
}

/// Fully resolved invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    /// Empty means every class that applies to the input.
    pub classes: Vec<ClassChoice>,
    pub optimize: bool,
    pub seed: u64,
    pub restarts: usize,
    pub iterations: usize,
    pub format: OutputFormat,
    pub policy: NormalizationPolicy,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input_path: None,
            classes: Vec::new(),
            optimize: false,
            seed: 0,
            restarts: 32,
            iterations: 200,
            format: OutputFormat::Human,
            policy: NormalizationPolicy::default(),
        }
    }

    pub fn from_cli(cli: Cli) -> Result<Self> {
        let (command, input_path, common) = match cli.command {
            CliCommand::Compute { input, common } => (Command::Compute, Some(input), common),
            CliCommand::Verify { common } => (Command::Verify, None, common),
            CliCommand::Sweep {
                name,
                points,
                m_min,
                m_max,
                common,
            } => (
                Command::Sweep {
                    name,
                    points,
                    m_min,
                    m_max,
                },
                None,
                common,
            ),
        };
        let mut policy = NormalizationPolicy::default();
        if let Some(v) = common.norm_w {
            policy = policy.with_w(v)?;
        }
        if let Some(v) = common.norm_ghz {
            policy = policy.with_ghz(v)?;
        }
        if let Some(v) = common.norm_ghzsub {
            policy = policy.with_ghz_sub(v)?;
        }
        let mut classes = common.classes;
        classes.sort();
        classes.dedup();
        Ok(RunConfig {
            command,
            input_path,
            classes,
            optimize: common.optimize,
            seed: common.seed,
            restarts: common.restarts,
            iterations: common.iters,
            format: common.format,
            policy,
        })
    }

    fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            iterations: self.iterations,
            seed: self.seed,
            ..OptimizerConfig::default()
        }
    }
}

/// Exit status plus the text to write to stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn from_error(e: &Error) -> Self {
        let code = if e.is_malformed_input() {
            EXIT_MALFORMED
        } else {
            EXIT_CONTRACT
        };
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

pub fn run(cfg: &RunConfig) -> Outcome {
    let result = match &cfg.command {
        Command::Compute => cmd_compute(cfg),
        Command::Verify => return cmd_verify(cfg),
        Command::Sweep { .. } => cmd_sweep(cfg),
    };
    match result {
        Ok(text) => Outcome::ok(text),
        Err(e) => Outcome::from_error(&e),
    }
}

#[derive(Serialize)]
struct ComputeReport<'a> {
    command: &'static str,
    input: String,
    kind: &'static str,
    qubits: usize,
    classes: Vec<ConcurrenceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wootters: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    entanglement_of_formation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    overall: Option<OverallConcurrence>,
    #[serde(skip)]
    state: &'a StateFile,
}

fn default_classes(m: usize, pure: bool) -> Vec<ClassChoice> {
    let mut out = vec![ClassChoice::W];
    if m >= 3 {
        out.push(ClassChoice::Ghz);
    }
    if m >= 4 {
        out.push(ClassChoice::Ghzsub);
    }
    if pure && m >= 3 {
        out.push(ClassChoice::Overall);
    }
    if m == 2 {
        out.extend([ClassChoice::Wootters, ClassChoice::Eof]);
    }
    out
}

fn class_tag(choice: ClassChoice) -> Option<ClassTag> {
    match choice {
        ClassChoice::W => Some(ClassTag::EprPair),
        ClassChoice::Ghz => Some(ClassTag::GhzFull),
        ClassChoice::Ghzsub => Some(ClassTag::GhzSub),
        _ => None,
    }
}

pub fn cmd_compute(cfg: &RunConfig) -> Result<String> {
    let path = cfg
        .input_path
        .as_ref()
        .ok_or_else(|| Error::Malformed("compute requires --in <PATH>".into()))?;
    // Any defect in the file itself is reported as malformed input.
    let state = io::load_state(path).map_err(|e| match e {
        Error::Malformed(_) | Error::Io(_) => e,
        other => Error::Malformed(format!("{}: {other}", path.display())),
    })?;
    let m = state.qubit_count();
    let (pure, rho): (Option<&PureState>, DensityMatrix) = match &state {
        StateFile::Pure(p) => (Some(p), p.projector()),
        StateFile::Ensemble(e) => (None, densify(e)),
    };
    let classes = if cfg.classes.is_empty() {
        default_classes(m, pure.is_some())
    } else {
        cfg.classes.clone()
    };

    let mut report = ComputeReport {
        command: "compute",
        input: path.display().to_string(),
        kind: if pure.is_some() { "pure" } else { "ensemble" },
        qubits: m,
        classes: Vec::new(),
        wootters: None,
        entanglement_of_formation: None,
        overall: None,
        state: &state,
    };
    for choice in classes {
        match (choice, class_tag(choice), pure) {
            (ClassChoice::Ghz, _, Some(psi)) if cfg.optimize => {
                let (r, _) =
                    concurrence::optimize_ghz_local_unitaries(psi, &cfg.policy, &cfg.optimizer())?;
                report.classes.push(r);
            }
            (_, Some(tag), Some(psi)) => {
                report
                    .classes
                    .push(concurrence::class_pure(psi, tag, &cfg.policy)?)
            }
            (_, Some(tag), None) => report.classes.push(concurrence::class_mixed(&rho, tag)?),
            (ClassChoice::Overall, _, Some(psi)) => {
                report.overall = Some(concurrence::overall_concurrence(psi, &cfg.policy)?)
            }
            (ClassChoice::Overall, _, None) => {
                return Err(Error::QubitCount {
                    found: m,
                    reason: "overall concurrence is defined for pure states only",
                })
            }
            (ClassChoice::Wootters, ..) => {
                report.wootters = Some(concurrence::wootters_concurrence_2q(&rho)?)
            }
            (ClassChoice::Eof, ..) => {
                report.entanglement_of_formation =
                    Some(concurrence::entanglement_of_formation_2q(&rho)?)
            }
            (_, None, _) => unreachable!("every remaining choice maps to a class tag"),
        }
    }

    Ok(match cfg.format {
        OutputFormat::Machine => io::to_compact_json(&report) + "\n",
        OutputFormat::Human => render_compute(&report),
    })
}

fn render_kets(out: &mut String, amps: &[C64], m: usize) {
    const LIMIT: usize = 32;
    let support: Vec<usize> = (0..amps.len())
        .filter(|&b| amps[b].norm() > 1e-12)
        .collect();
    for &b in support.iter().take(LIMIT) {
        let z = amps[b];
        let _ = writeln!(
            out,
            "    {:<width$} {:+.10} {:+.10}i",
            states::ket_label(b, m),
            z.re,
            z.im,
            width = 2 * m + 3
        );
    }
    if support.len() > LIMIT {
        let _ = writeln!(out, "    ... {} more basis kets", support.len() - LIMIT);
    }
}

fn render_report(out: &mut String, r: &ConcurrenceReport) {
    let rule = match r.rule {
        concurrence::AggregationRule::RootSumSquares => "root-sum-squares",
        concurrence::AggregationRule::MaxOverOperators => "max over operators",
    };
    let norm = r
        .normalization
        .map(|n| format!(", N = {n:.10}"))
        .unwrap_or_default();
    let _ = writeln!(out, "class {} ({rule}{norm})", r.class);
    for o in &r.per_operator {
        let _ = writeln!(out, "  {:<12} {:.10}", o.label, o.value);
    }
    let _ = writeln!(out, "  {:<12} {:.10}", "aggregate", r.aggregate);
    if let Some(info) = &r.optimization {
        let _ = writeln!(
            out,
            "  optimized over local unitaries: seed {}, {} restarts x {} iterations, unrotated value {:.10}",
            info.seed, info.restarts, info.iterations, info.unoptimized
        );
    }
}

fn render_compute(r: &ComputeReport<'_>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "state: {} ({}, {} qubits)", r.input, r.kind, r.qubits);
    match r.state {
        StateFile::Pure(p) => render_kets(&mut out, p.amplitudes(), r.qubits),
        StateFile::Ensemble(e) => {
            for (k, (w, s)) in e.members().iter().enumerate() {
                let _ = writeln!(out, "  member {k}: weight {w:.10}");
                render_kets(&mut out, s.amplitudes(), r.qubits);
            }
        }
    }
    for c in &r.classes {
        render_report(&mut out, c);
    }
    if let Some(v) = r.wootters {
        let _ = writeln!(out, "wootters concurrence      {v:.10}");
    }
    if let Some(v) = r.entanglement_of_formation {
        let _ = writeln!(out, "entanglement of formation {v:.10}");
    }
    if let Some(o) = &r.overall {
        let _ = writeln!(out, "overall (heuristic)       {:.10}", o.value);
    }
    out
}

/// GHZ mixture `q |GHZ+><GHZ+| + (1-q) |GHZ-><GHZ-|` on `m` qubits.
pub fn ghz_mixture(m: usize, q: f64) -> Result<DensityMatrix> {
    let plus = states::ghz_state(m, true)?.projector();
    let minus = states::ghz_state(m, false)?.projector();
    if q <= 0.0 {
        return Ok(minus);
    }
    if q >= 1.0 {
        return Ok(plus);
    }
    DensityMatrix::mixture(&[(q, &plus), (1.0 - q, &minus)])
}

#[derive(Serialize)]
struct SweepReport {
    command: &'static str,
    sweep: SweepName,
    parameter: &'static str,
    rows: Vec<(f64, f64)>,
}

pub fn sweep_rows(cfg: &RunConfig) -> Result<(SweepName, Vec<(f64, f64)>)> {
    let Command::Sweep {
        name,
        points,
        m_min,
        m_max,
    } = cfg.command
    else {
        return Err(Error::Malformed("not a sweep command".into()));
    };
    let rows = match name {
        SweepName::GhzMixQ => {
            if points < 2 {
                return Err(Error::Malformed("ghz-mix-q needs at least 2 points".into()));
            }
            let ops = povm::ghz_full_operator_set(3)?;
            (0..points)
                .map(|k| {
                    let q = k as f64 / (points - 1) as f64;
                    let rho = ghz_mixture(3, q)?;
                    Ok((
                        q,
                        concurrence::mixed_class_concurrence(&rho, &ops)?.aggregate,
                    ))
                })
                .collect::<Result<Vec<_>>>()?
        }
        SweepName::WM => {
            if m_min < 2 || m_max < m_min {
                return Err(Error::Malformed("w-m needs 2 <= m-min <= m-max".into()));
            }
            (m_min..=m_max)
                .map(|m| {
                    let r = concurrence::w_class_pure(&states::w_state(m)?, &cfg.policy)?;
                    Ok((m as f64, r.aggregate))
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok((name, rows))
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<String> {
    let (name, rows) = sweep_rows(cfg)?;
    let parameter = match name {
        SweepName::GhzMixQ => "q",
        SweepName::WM => "m",
    };
    Ok(match cfg.format {
        OutputFormat::Machine => {
            io::to_compact_json(&SweepReport {
                command: "sweep",
                sweep: name,
                parameter,
                rows,
            }) + "\n"
        }
        OutputFormat::Human => {
            let mut out = format!("# {parameter}\tconcurrence\n");
            for (p, v) in rows {
                match name {
                    SweepName::GhzMixQ => writeln!(out, "{p:.6}\t{v:.12}"),
                    SweepName::WM => writeln!(out, "{p}\t{v:.12}"),
                }
                .expect("writing to a String");
            }
            out
        }
    })
}

/// One verification line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn close(name: impl Into<String>, expected: f64, actual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            expected,
            actual,
            tolerance,
            passed: (expected - actual).abs() <= tolerance,
        }
    }

    /// Passes when `actual <= tolerance`; used for worst-case deviations.
    fn bounded(name: impl Into<String>, actual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            expected: 0.0,
            actual,
            tolerance,
            passed: actual <= tolerance,
        }
    }

    /// Passes when `actual >= expected`.
    fn at_least(name: impl Into<String>, expected: f64, actual: f64) -> Self {
        Check {
            name: name.into(),
            expected,
            actual,
            tolerance: 0.0,
            passed: actual >= expected,
        }
    }
}

fn worst<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

/// The verification suite run by `verify`.
pub fn verification_checks(cfg: &RunConfig) -> Result<Vec<Check>> {
    let policy = &cfg.policy;
    let mut checks = Vec::new();

    let w3 = states::w_state(3)?;
    checks.push(Check::close(
        "W3 worked example: C_W(W3) = 1",
        1.0,
        concurrence::w_class_pure(&w3, policy)?.aggregate,
        1e-9,
    ));
    checks.push(Check::close(
        "GHZ3 class vanishes on W3",
        0.0,
        concurrence::ghz_class_pure(&w3, policy)?.aggregate,
        1e-12,
    ));
    let w4 = states::w_state(4)?;
    checks.push(Check::close(
        "GHZ4 class vanishes on W4",
        0.0,
        concurrence::ghz_class_pure(&w4, policy)?.aggregate,
        1e-12,
    ));
    checks.push(Check::close(
        "GHZ3-of-four class vanishes on W4",
        0.0,
        concurrence::ghz_sub_class_pure(&w4, policy)?.aggregate,
        1e-12,
    ));
    checks.push(Check::close(
        "W4 worked example: (3/2 N_W4)^(1/2)",
        (1.5 * policy.w_constant(4)).sqrt(),
        concurrence::w_class_pure(&w4, policy)?.aggregate,
        1e-9,
    ));
    for m in 2..=8 {
        checks.push(Check::close(
            format!("W{m} value (2(m-1)/m N_W)^(1/2)"),
            (2.0 * (m as f64 - 1.0) / m as f64 * policy.w_constant(m)).sqrt(),
            concurrence::w_class_pure(&states::w_state(m)?, policy)?.aggregate,
            1e-9,
        ));
    }
    for m in 3..=8 {
        let pairs = (m * (m - 1) / 2) as f64;
        checks.push(Check::close(
            format!("GHZ{m} canonical value (C(m,2) N_GHZ)^(1/2)"),
            (pairs * policy.ghz_constant(m)).sqrt(),
            concurrence::ghz_class_pure(&states::ghz_state(m, true)?, policy)?.aggregate,
            1e-9,
        ));
    }
    let ghz3_one = states::ghz_state(3, true)?.tensor(&PureState::basis(1, 0)?)?;
    checks.push(Check::close(
        "GHZ3 (x) |1> GHZ3-of-four value (N_sub)^(1/2)",
        policy.ghz_sub_constant(4).sqrt(),
        concurrence::ghz_sub_class_pure(&ghz3_one, policy)?.aggregate,
        1e-9,
    ));

    // GHZ mixture: spectrum {q, 1-q, 0, ...}; the closed form max(0, 2q-1)
    // assumes lambda_1 = q, which is the descending order for q >= 1/2.
    let ops = povm::ghz_full_operator_set(3)?;
    let mut spectrum_dev: f64 = 0.0;
    let mut closed_form_dev: f64 = 0.0;
    let mut symmetric_dev: f64 = 0.0;
    for k in 0..=100 {
        let q = k as f64 / 100.0;
        let rho = ghz_mixture(3, q)?;
        let mut want = [q, 1.0 - q];
        want.sort_by(|a, b| b.total_cmp(a));
        for op in &ops {
            let l = concurrence::mixed_lambda_spectrum(&rho, op)?;
            spectrum_dev = spectrum_dev
                .max((l[0] - want[0]).abs())
                .max((l[1] - want[1]).abs())
                .max(worst(l[2..].iter().map(|v| v.abs())));
        }
        let c = concurrence::mixed_class_concurrence(&rho, &ops)?.aggregate;
        symmetric_dev = symmetric_dev.max((c - (2.0 * q - 1.0).abs()).abs());
        if q >= 0.5 {
            closed_form_dev = closed_form_dev.max((c - (2.0 * q - 1.0).max(0.0)).abs());
        }
    }
    checks.push(Check::bounded(
        "GHZ mixture spectrum {q, 1-q, 0, ...}",
        spectrum_dev,
        1e-9,
    ));
    checks.push(Check::bounded(
        "GHZ mixture closed form max(0, 2q-1) for q >= 1/2",
        closed_form_dev,
        1e-9,
    ));
    checks.push(Check::bounded(
        "GHZ mixture value |2q-1| over q in [0, 1]",
        symmetric_dev,
        1e-9,
    ));

    // operator algebra
    let mut involution: f64 = 0.0;
    let mut hermitian: f64 = 0.0;
    let mut count_errors = 0.0;
    for m in 2..=8 {
        let mut ops = povm::w_class_operator_set(m)?;
        count_errors += (ops.len() as f64 - (m * (m - 1) / 2) as f64).abs();
        if m >= 3 {
            ops.extend(povm::ghz_full_operator_set(m)?);
        }
        if m >= 4 {
            let sub = povm::ghz_sub_operator_set(m)?;
            count_errors += (sub.len() as f64 - m as f64).abs();
            ops.extend(sub);
        }
        for op in ops {
            let x = op.matrix()?;
            hermitian = hermitian.max(x.hermitian_deviation());
            let sq = linalg::matmul(&x, &x)?;
            involution = involution.max(sq.max_abs_diff(&ComplexMatrix::identity(x.dim())));
        }
    }
    checks.push(Check::bounded(
        "class operators square to identity (m <= 8)",
        involution,
        1e-12,
    ));
    checks.push(Check::bounded(
        "class operators are exactly Hermitian",
        hermitian,
        0.0,
    ));
    checks.push(Check::bounded(
        "operator counts C(m,2) and C(m,m-1)",
        count_errors,
        0.0,
    ));
    checks.push(Check::bounded(
        "POVM quadrature normalization (360 samples)",
        povm::povm_normalization_check(360),
        1e-12,
    ));

    // random sweeps, seeded by --seed
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut consistency: f64 = 0.0;
    for m in 2..=4 {
        for _ in 0..20 {
            let psi = states::random_pure_with(m, &mut rng)?;
            let rho = psi.projector();
            for tag in [ClassTag::EprPair, ClassTag::GhzFull, ClassTag::GhzSub] {
                let Ok(ops) = povm::operator_set(tag, m) else {
                    continue;
                };
                for op in ops {
                    let pure = concurrence::overlap(&psi, &op)?.norm();
                    let mixed = concurrence::mixed_class_concurrence(&rho, &[op])?.aggregate;
                    consistency = consistency.max((pure - mixed).abs());
                }
            }
        }
    }
    checks.push(Check::bounded(
        "pure/mixed consistency on projectors",
        consistency,
        1e-8,
    ));

    let mut closed_form: f64 = 0.0;
    for _ in 0..50 {
        let psi = states::random_pure_with(2, &mut rng)?;
        let a = psi.amplitudes();
        let want = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
        closed_form =
            closed_form.max((concurrence::wootters_concurrence_2q(&psi.projector())? - want).abs());
    }
    checks.push(Check::bounded(
        "two-qubit concurrence 2|a11 a22 - a12 a21| on projectors",
        closed_form,
        1e-8,
    ));

    let sy = povm::PhaseChoice::HalfPi.matrix();
    let mut det_dev: f64 = 0.0;
    for _ in 0..100 {
        let a = random_matrix2(&mut rng);
        let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
        let lhs = &(&a * &sy) * &a.transpose();
        det_dev = det_dev.max(lhs.max_abs_diff(&sy.scale(det)));
    }
    checks.push(Check::bounded(
        "A sigma_y A^T = det(A) sigma_y",
        det_dev,
        1e-9,
    ));

    let mut perm_dev: f64 = 0.0;
    for m in [3, 4] {
        for _ in 0..10 {
            let psi = states::random_pure_with(m, &mut rng)?;
            let perm = random_permutation(m, &mut rng);
            let moved = psi.permute_qubits(&perm)?;
            for tag in [ClassTag::EprPair, ClassTag::GhzFull] {
                let a = concurrence::class_pure(&psi, tag, policy)?.aggregate;
                let b = concurrence::class_pure(&moved, tag, policy)?.aggregate;
                perm_dev = perm_dev.max((a - b).abs());
            }
        }
    }
    checks.push(Check::bounded(
        "W and GHZ values are permutation invariant",
        perm_dev,
        1e-10,
    ));

    let ghz = states::ghz_state(3, true)?;
    let h = ComplexMatrix::from_rows([
        [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)],
        [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(-FRAC_1_SQRT_2, 0.0)],
    ]);
    let rotated = ghz.apply_single(0, &h)?;
    let (best, _) = concurrence::optimize_ghz_local_unitaries(&rotated, policy, &cfg.optimizer())?;
    checks.push(Check::at_least(
        "optimizer recovers Hadamard-rotated GHZ3",
        0.99 * (3.0 * policy.ghz_constant(3)).sqrt(),
        best.aggregate,
    ));

    Ok(checks)
}

fn random_matrix2(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    use rand::Rng;
    let mut z = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    ComplexMatrix::from_rows([[z(), z()], [z(), z()]])
}

fn random_permutation(m: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    perm
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    command: &'static str,
    seed: u64,
    passed: bool,
    checks: &'a [Check],
}

pub fn cmd_verify(cfg: &RunConfig) -> Outcome {
    let checks = match verification_checks(cfg) {
        Ok(c) => c,
        Err(e) => return Outcome::from_error(&e),
    };
    let passed = checks.iter().all(|c| c.passed);
    let stdout = match cfg.format {
        OutputFormat::Machine => {
            io::to_compact_json(&VerifyReport {
                command: "verify",
                seed: cfg.seed,
                passed,
                checks: &checks,
            }) + "\n"
        }
        OutputFormat::Human => {
            let mut out = String::new();
            for c in &checks {
                let _ = writeln!(
                    out,
                    "{}  {:<58} expected {:<+.12e} actual {:<+.12e} tol {:.1e}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.expected,
                    c.actual,
                    c.tolerance
                );
            }
            let _ = writeln!(
                out,
                "{} of {} checks passed (seed {})",
                checks.iter().filter(|c| c.passed).count(),
                checks.len(),
                cfg.seed
            );
            out
        }
    };
    match checks.iter().find(|c| !c.passed) {
        None => Outcome::ok(stdout),
        Some(first) => Outcome {
            code: EXIT_CHECK_FAILED,
            stdout,
            stderr: format!(
                "verification failed: {} (expected {}, actual {})\n",
                first.name, first.expected, first.actual
            ),
        },
    }
}
