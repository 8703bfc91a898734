//! Command line and JSON configuration, resolved into a [`RunConfig`].

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::{CliError, EXIT_ENV, EXIT_USAGE};

pub const THREADS_ENV: &str = "SPECENC_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "specenc",
    version,
    about = "Eigenvalue enclosures for Schrödinger operators with complex potentials"
)]
pub struct Cli {
    /// JSON file with defaults for the numeric knobs (strict: unknown keys are errors).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads, or "auto" for the number of logical cores.
    #[arg(long, global = true)]
    pub threads: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Omit timings from outputs so that reruns are byte-identical (always on for verify).
    #[arg(long, global = true)]
    pub deterministic: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// KS, Kato, Rollnik, Morrey-Campanato or Lp norm of a potential.
    Norm(NormArgs),
    /// Kernel decay regression on a radius ladder.
    Kernel(KernelArgs),
    /// Operator norm of the Birman-Schwinger operator over a rectangle of spectral parameters.
    #[command(name = "bs-scan")]
    BsScan(ScanArgs),
    /// Eigenvalue enclosure report for a potential.
    Enclosure(EnclosureArgs),
    /// Run an invariant suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum KindArg {
    #[value(name = "KS", alias = "ks")]
    Ks,
    #[value(name = "Kato", alias = "kato")]
    Kato,
    #[value(name = "Rollnik", alias = "rollnik")]
    Rollnik,
    #[value(name = "MC", alias = "mc")]
    Mc,
    #[value(name = "Lp", alias = "lp")]
    Lp,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NormArgs {
    #[arg(long)]
    pub potential: PathBuf,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Exponent for MC and Lp.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k_min: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    pub k_max: Option<i32>,
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long)]
    pub radii_per_octave: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum RegimeArg {
    Small,
    Large,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KernelArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub zeta: f64,
    /// `re,im` with |lambda| = 1.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub lambda: [f64; 2],
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    #[arg(long)]
    pub r_lo: Option<f64>,
    #[arg(long)]
    pub r_hi: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// CSV of the sampled kernel (r, re, im, modulus).
    #[arg(long)]
    pub samples: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long)]
    pub potential: PathBuf,
    /// `re0,re1,im0,im1`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rect)]
    pub lambda_rect: [f64; 4],
    /// `NxM` points along the real and imaginary directions.
    #[arg(long, value_parser = parse_res, default_value = "21x21")]
    pub res: (usize, usize),
    /// Cells per axis of the operator grid.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    /// Add a sigma_min(A + I) column.
    #[arg(long)]
    pub sigma_min: bool,
    /// Evaluate points independently in parallel (no warm starts).
    #[arg(long)]
    pub parallel: bool,
    /// JSON summary with the non-rigour banner.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnclosureArgs {
    #[arg(long)]
    pub potential: PathBuf,
    /// Ignored in one dimension.
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// A positive number, or "empirical" to read it from the ledger.
    #[arg(long, default_value = "1")]
    pub constant: String,
    /// Known eigenvalue `re,im`; repeatable.
    #[arg(long = "eigenvalue", allow_hyphen_values = true, value_parser = parse_complex)]
    pub eigenvalues: Vec<[f64; 2]>,
    /// Locate an eigenvalue from this start `re,im` and add it to the list.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub search: Option<[f64; 2]>,
    /// Empirical-constant ledger.
    #[arg(long, default_value = "empirical_C.json")]
    pub ledger: PathBuf,
    /// Raise the ledger with this potential's ratio.
    #[arg(long)]
    pub record: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Branch,
    Norms,
    Kernel,
    Bs,
    Enclosure,
    All,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Report JSON (default: stdout table only).
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// JUnit-style JSON (default: next to the report).
    #[arg(long)]
    pub junit: Option<PathBuf>,
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}

fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got `{s}`"));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| format!("`{p}` is not a number"))?;
    }
    Ok(out)
}

fn parse_complex(s: &str) -> Result<[f64; 2], String> {
    parse_floats::<2>(s)
}

fn parse_rect(s: &str) -> Result<[f64; 4], String> {
    parse_floats::<4>(s)
}

fn parse_res(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NxM, got `{s}`"))?;
    let n = a
        .trim()
        .parse()
        .map_err(|_| format!("`{a}` is not a count"))?;
    let m = b
        .trim()
        .parse()
        .map_err(|_| format!("`{b}` is not a count"))?;
    Ok((n, m))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThreadsSetting {
    Count(usize),
    Word(String),
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub schema_version: Option<u32>,
    pub threads: Option<ThreadsSetting>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub grid: Option<usize>,
    pub k_min: Option<i32>,
    pub k_max: Option<i32>,
    pub level: Option<u32>,
    pub deterministic: Option<bool>,
}

impl FileConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let key = e.path().to_string();
            let inner = e.into_inner();
            let msg = if key == "." || key.is_empty() {
                format!("config: {inner}")
            } else {
                format!("config key `{key}`: {inner}")
            };
            CliError::new(EXIT_USAGE, msg)
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::new(
                EXIT_ENV,
                format!("cannot read config {}: {e}", path.display()),
            )
        })?;
        let cfg = Self::from_json(&text)?;
        if let Some(v) = cfg.schema_version {
            if v != 1 {
                return Err(CliError::new(
                    EXIT_USAGE,
                    format!("config key `schema_version`: unsupported version {v}"),
                ));
            }
        }
        Ok(cfg)
    }
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub threads: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub grid: Option<usize>,
    pub k_min: Option<i32>,
    pub k_max: Option<i32>,
    pub level: Option<u32>,
    pub deterministic: bool,
}

fn logical_cores() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn resolve_threads(setting: &ThreadsSetting, key: &str) -> Result<usize, CliError> {
    match setting {
        ThreadsSetting::Count(0) => Err(CliError::new(
            EXIT_USAGE,
            format!("{key}: thread count must be positive"),
        )),
        ThreadsSetting::Count(n) => Ok(*n),
        ThreadsSetting::Word(w) if w == "auto" => Ok(logical_cores()),
        ThreadsSetting::Word(w) => match w.parse::<usize>() {
            Ok(n) => resolve_threads(&ThreadsSetting::Count(n), key),
            Err(_) => Err(CliError::new(
                EXIT_USAGE,
                format!("{key}: expected a count or \"auto\", got `{w}`"),
            )),
        },
    }
}

fn require_file(path: &Path, what: &str) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::new(
            EXIT_ENV,
            format!("{what} file {} does not exist", path.display()),
        ))
    }
}

/// Parses `argv` (including the program name). `env_threads` is the value
/// of `SPECENC_THREADS`, which overrides the config file but not `--threads`.
pub fn parse_config<I, S>(argv: I, env_threads: Option<String>) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(CliError::from_clap)?;
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let threads = if let Some(t) = &cli.threads {
        resolve_threads(&ThreadsSetting::Word(t.clone()), "--threads")?
    } else if let Some(t) = env_threads.filter(|t| !t.is_empty()) {
        resolve_threads(&ThreadsSetting::Word(t), THREADS_ENV)?
    } else if let Some(t) = &file.threads {
        resolve_threads(t, "config key `threads`")?
    } else {
        logical_cores()
    };
    let tolerance = cli.tolerance.or(file.tolerance).unwrap_or(1e-10);
    if !(tolerance > 0.0) {
        return Err(CliError::new(
            EXIT_USAGE,
            format!("tolerance must be positive, got {tolerance}"),
        ));
    }
    if let Some(0) = file.grid {
        return Err(CliError::new(
            EXIT_USAGE,
            "config key `grid`: must be positive".into(),
        ));
    }
    match &cli.command {
        Command::Norm(a) => require_file(&a.potential, "potential")?,
        Command::BsScan(a) => require_file(&a.potential, "potential")?,
        Command::Enclosure(a) => require_file(&a.potential, "potential")?,
        _ => {}
    }
    let deterministic = cli.deterministic
        || file.deterministic.unwrap_or(false)
        || matches!(cli.command, Command::Verify(_));
    Ok(RunConfig {
        command: cli.command,
        threads,
        seed: cli
            .seed
            .or(file.seed)
            .unwrap_or(specenc_core::linalg::DEFAULT_SEED),
        tolerance,
        grid: file.grid,
        k_min: file.k_min,
        k_max: file.k_max,
        level: file.level,
        deterministic,
    })
}
