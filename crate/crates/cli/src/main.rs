//! `dbr`: batch front end for the weighted composition operator toolkit.
//!
//! Exit codes: 0 conclusive, 1 selftest failure, 2 invalid input,
//! 3 inconclusive verdict, 64 usage error, 74 i/o error.

mod job;
mod output;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dbr::selftest::{self, Settings};
use dbr::wco::{
    build_weight, classify, compactness_sweep, criterion_sweep, hilbert_schmidt_test, operator_norm_estimate,
    symbol_profile, CompactVerdict, CriterionVerdict, MatrixTrend, Verdict, Weight,
};
use dbr::{Expr64, HbSpace64};
use serde::Serialize;

use job::{JobConfig, Overrides};
use report::{HbSection, HsSection, MateReport, ReportFile, SweepSummary, SCHEMA_VERSION};

/// Environment variable that scales every selftest tolerance.
const TOL_SCALE_VAR: &str = "DBR_SELFTEST_TOL_SCALE";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invalid(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 74,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "dbr", version, about = "Weighted composition operators on de Branges-Rovnyak spaces H(b)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct JobArgs {
    /// Job file (JSON).
    #[arg(long)]
    job: PathBuf,
    /// Radius levels k of the sweeps, overriding the job file.
    #[arg(long)]
    levels: Option<u32>,
    /// Angles per sweep level, overriding the job file.
    #[arg(long)]
    angles: Option<usize>,
    /// Initial boundary quadrature points, overriding the job file.
    #[arg(long)]
    quad: Option<usize>,
    /// Seed recorded in the report, overriding the job file.
    #[arg(long)]
    seed: Option<u64>,
}

impl JobArgs {
    fn load(&self) -> Result<JobConfig, CliError> {
        let mut job = JobConfig::load(&self.job)?;
        job.apply(Overrides { levels: self.levels, angles: self.angles, quad: self.quad, seed: self.seed });
        job.validate()?;
        Ok(job)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the Pythagorean mate and the boundary zeros of b.
    Mate {
        #[command(flatten)]
        job: JobArgs,
    },
    /// Run the full analysis and write report.json and the evidence CSVs.
    Analyze {
        #[command(flatten)]
        job: JobArgs,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
    /// Boundedness criterion sweep only.
    Criterion {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compactness sweep only.
    Compact {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hilbert-Schmidt test only.
    Hs {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncated operator matrices and their largest singular values.
    Matrix {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the embedded acceptance fixtures.
    Selftest {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("dbr: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cmd: Command) -> Result<u8, CliError> {
    match cmd {
        Command::Mate { job } => cmd_mate(&job.load()?),
        Command::Analyze { job, out } => cmd_analyze(&job.load()?, &out),
        Command::Criterion { job, out } => cmd_criterion(&job.load()?, out.as_deref(), false),
        Command::Compact { job, out } => cmd_criterion(&job.load()?, out.as_deref(), true),
        Command::Hs { job, out } => cmd_hs(&job.load()?, out.as_deref()),
        Command::Matrix { job, out } => cmd_matrix(&job.load()?, out.as_deref()),
        Command::Selftest { only, seed } => cmd_selftest(&only, seed),
    }
}

fn exit_for(conclusive: bool) -> u8 {
    if conclusive {
        0
    } else {
        3
    }
}

fn print_json<S: Serialize>(value: &S) -> Result<(), CliError> {
    print!("{}", output::to_json(value)?);
    Ok(())
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

fn cmd_mate(job: &JobConfig) -> Result<u8, CliError> {
    let space = job.space()?;
    eprintln!("a~ = {}", dbr::funcexpr::Expr::from_rational(&space.mate));
    for z in &space.zeros {
        eprintln!("zero {} multiplicity {}", z.zeta, z.mult);
    }
    print_json(&MateReport { schema_version: SCHEMA_VERSION, hb: HbSection::new(&space) })?;
    Ok(0)
}

fn cmd_analyze(job: &JobConfig, out: &Path) -> Result<u8, CliError> {
    let space = job.space()?;
    let (u, phi) = job.pair()?;
    let rep = classify(&space, &u, &phi, &job.analysis_options());
    let file = ReportFile::new(job, &space, &rep);
    let json = output::to_json(&file)?;
    create_dir(out)?;
    let sweep_header = ["k", "r", "theta_index", "integral"];
    match &rep.criterion {
        Some(t) => {
            output::write_sweep_csv(&out.join("criterion_sweep.csv"), t)?;
            output::write_sweep_csv(&out.join("compactness_sweep.csv"), t)?;
        }
        None => {
            output::write_empty_csv(&out.join("criterion_sweep.csv"), &sweep_header)?;
            output::write_empty_csv(&out.join("compactness_sweep.csv"), &sweep_header)?;
        }
    }
    match &rep.hs {
        Some(hs) => output::write_hs_csv(&out.join("hs.csv"), hs)?,
        None => output::write_empty_csv(&out.join("hs.csv"), &["method", "parameter", "value"])?,
    }
    match &rep.matrix {
        Some(m) => output::write_matrix_csv(&out.join("matrix_sv.csv"), m)?,
        None => output::write_empty_csv(&out.join("matrix_sv.csv"), &["n", "sigma_max"])?,
    }
    let path = out.join("report.json");
    std::fs::write(&path, json).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    eprintln!("bounded: {:?}, compact: {:?}, hilbert-schmidt: {:?}", rep.bounded, rep.compact, rep.hilbert_schmidt);
    for note in &rep.notes {
        eprintln!("note: {note}");
    }
    Ok(exit_for(rep.is_conclusive()))
}

/// Space, symbols and transferred weight of a job.
fn prepare(job: &JobConfig) -> Result<(HbSpace64, Expr64, Expr64, Weight<f64>), CliError> {
    let space = job.space()?;
    let (u, phi) = job.pair()?;
    let profile = symbol_profile(&space, &u, &phi).map_err(|e| CliError::Invalid(e.to_string()))?;
    let weight = build_weight(&space, &u, &phi, &profile);
    Ok((space, u, phi, weight))
}

fn cmd_criterion(job: &JobConfig, out: Option<&Path>, compact: bool) -> Result<u8, CliError> {
    let (_, _, phi, weight) = prepare(job)?;
    let opts = job.analysis_options().sweep;
    let (name, table, conclusive) = if compact {
        let (t, v) = compactness_sweep(&weight.w, &phi, &opts);
        print_json(&SweepSummary::new(&t, Some(v)))?;
        ("compactness_sweep.csv", t, v != CompactVerdict::Inconclusive)
    } else {
        let (t, v) = criterion_sweep(&weight.w, &phi, &opts);
        print_json(&SweepSummary::new(&t, Some(v)))?;
        ("criterion_sweep.csv", t, v != CriterionVerdict::Inconclusive)
    };
    if let Some(dir) = out {
        create_dir(dir)?;
        output::write_sweep_csv(&dir.join(name), &table)?;
    }
    Ok(exit_for(conclusive))
}

fn cmd_hs(job: &JobConfig, out: Option<&Path>) -> Result<u8, CliError> {
    let (_, _, phi, weight) = prepare(job)?;
    let hs = hilbert_schmidt_test(&weight.w, &phi);
    print_json(&HsSection::new(&hs))?;
    if let Some(dir) = out {
        create_dir(dir)?;
        output::write_hs_csv(&dir.join("hs.csv"), &hs)?;
    }
    Ok(exit_for(hs.verdict != Verdict::Inconclusive))
}

fn cmd_matrix(job: &JobConfig, out: Option<&Path>) -> Result<u8, CliError> {
    let space = job.space()?;
    let (u, phi) = job.pair()?;
    let est = operator_norm_estimate(&space, &u, &phi, &job.options.matrix_sizes);
    print_json(&est)?;
    if let Some(dir) = out {
        create_dir(dir)?;
        output::write_matrix_csv(&dir.join("matrix_sv.csv"), &est)?;
    }
    Ok(exit_for(est.trend != MatrixTrend::Inconclusive))
}

fn cmd_selftest(only: &[usize], seed: Option<u64>) -> Result<u8, CliError> {
    let mut settings = Settings::default();
    if let Some(seed) = seed {
        settings.seed = seed;
    }
    if let Ok(v) = std::env::var(TOL_SCALE_VAR) {
        settings.scale = v
            .parse()
            .ok()
            .filter(|s: &f64| *s >= 0.0)
            .ok_or_else(|| CliError::Usage(format!("{TOL_SCALE_VAR} must be a nonnegative number, got {v:?}")))?;
    }
    let ids: Vec<usize> = if only.is_empty() { selftest::CRITERIA.iter().map(|c| c.0).collect() } else { only.to_vec() };
    let mut first_failure = None;
    for id in ids {
        let outcome = selftest::run_one(id, &settings).ok_or_else(|| CliError::Usage(format!("no criterion {id}")))?;
        println!("{outcome}");
        if !outcome.passed && first_failure.is_none() {
            first_failure = Some(format!("{} ({})", outcome.id, outcome.name));
        }
    }
    match first_failure {
        Some(name) => {
            eprintln!("selftest failed: first failing criterion {name}");
            Ok(1)
        }
        None => Ok(0),
    }
}
