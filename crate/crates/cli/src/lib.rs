//! Command-line frontend for frequency-moment experiments: heuristic scans,
//! Sturm certifications, table reproduction, identity checks and series
//! dumps.
//!
//! Exit codes: 0 all pass, 1 mathematical failure or mismatch, 2 usage,
//! 3 resource limits.

mod commands;
mod configfile;
pub mod golden;
pub mod report;
pub mod weightspec;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use freqmom_core::arith::{BoundMode, LevelModel};
use freqmom_core::congruence::DEFAULT_MAX_COEFFICIENTS;

pub use report::Format;

/// Environment variable overriding the default coefficient cap.
pub const MAX_COEFFS_ENV: &str = "FREQMOM_MAX_COEFFS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "freqmom",
    version,
    about = "Frequency moments of partition ensembles and their congruences"
)]
pub struct Cli {
    /// Flat `key = value` file of default flags; explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    /// Largest series (in coefficients) any task may build.
    #[arg(long = "max-coeffs", global = true, value_name = "N")]
    pub max_coeffs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for progressions `ℓn + r` on which `M_m` vanishes mod `ℓ`.
    #[command(args_override_self = true)]
    Scan(ScanArgs),
    /// Prove or refute congruences by checking up to the Sturm bound.
    #[command(args_override_self = true)]
    Certify(CertifyArgs),
    /// Reproduce the embedded certification tables.
    #[command(args_override_self = true)]
    Tables(TablesArgs),
    /// Run identity checks on the moment engine.
    #[command(args_override_self = true)]
    Identities(IdentitiesArgs),
    /// Print companion or moment coefficients.
    #[command(name = "dump-series", args_override_self = true)]
    DumpSeries(DumpArgs),
    /// Scan, then certify every hit.
    #[command(args_override_self = true)]
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ScanSelection {
    #[arg(long, default_value = "ordinary")]
    pub ensemble: String,

    /// Weight family, e.g. `twist=kronecker(5)`; the exponent comes from the m list.
    #[arg(long)]
    pub weight: Option<String>,

    /// Odd moment exponents.
    #[arg(long, value_delimiter = ',', conflicts_with = "m_odd_max")]
    pub m: Option<Vec<u32>>,

    /// Use every odd m up to this value.
    #[arg(long = "m-odd-max")]
    pub m_odd_max: Option<u32>,

    /// Primes to scan.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["ell_max", "ell_min"])]
    pub ell: Option<Vec<u64>>,

    #[arg(long = "ell-max", default_value_t = 31)]
    pub ell_max: u64,

    #[arg(long = "ell-min", default_value_t = 5)]
    pub ell_min: u64,

    #[arg(long, default_value_t = 2000)]
    pub nscan: usize,

    /// Skip the zero class `r = 0`.
    #[arg(long = "nonzero-only")]
    pub nonzero_only: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub selection: ScanSelection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Sharp24,
    Conservative12,
}

impl From<ModeArg> for BoundMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Sharp24 => BoundMode::Sharp24,
            ModeArg::Conservative12 => BoundMode::Conservative12,
        }
    }
}

/// `natural`, `safe` or `custom:L`.
fn parse_level(s: &str) -> Result<LevelModel, String> {
    match s {
        "natural" => Ok(LevelModel::Natural),
        "safe" => Ok(LevelModel::Safe),
        _ => {
            let l = s
                .strip_prefix("custom:")
                .ok_or_else(|| format!("expected natural, safe or custom:L, got {s:?}"))?;
            match l.parse::<u64>() {
                Ok(l) if l >= 1 => Ok(LevelModel::Custom(l)),
                _ => Err(format!("bad custom level {l:?}")),
            }
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    #[arg(long, default_value = "ordinary")]
    pub ensemble: String,

    /// Weight spec such as `m=3,twist=kronecker(5)`.
    #[arg(long)]
    pub weight: Option<String>,

    #[arg(long, conflicts_with = "task")]
    pub m: Option<u32>,

    #[arg(long, conflicts_with = "task")]
    pub ell: Option<u64>,

    #[arg(long, conflicts_with = "task")]
    pub r: Option<u64>,

    /// `m:ell:r`, repeatable or comma separated.
    #[arg(long, value_delimiter = ',')]
    pub task: Vec<String>,

    /// Modulus of the congruence (defaults to ell).
    #[arg(long)]
    pub prime: Option<u64>,

    #[arg(long, value_enum, default_value_t = ModeArg::Conservative12)]
    pub mode: ModeArg,

    #[arg(long, value_parser = parse_level, default_value = "safe")]
    pub level: LevelModel,

    /// Certify at both the natural and the safe level.
    #[arg(long = "both-levels")]
    pub both_levels: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableChoice {
    Ordinary,
    Overpartition,
    Filtered,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct TablesArgs {
    #[arg(long, value_enum, default_value_t = TableChoice::All)]
    pub which: TableChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum CheckChoice {
    Ford,
    Moebius,
    M1,
    Fermat,
    Tau691,
    J,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct IdentitiesArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub check: Vec<CheckChoice>,

    /// Depth for every selected check (each has its own default).
    #[arg(long)]
    pub n: Option<usize>,

    /// Ensemble for m1 and fermat (default: ordinary and overpartition).
    #[arg(long)]
    pub ensemble: Option<String>,

    /// Seed for the fermat samples.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 60)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesChoice {
    Companion,
    Moments,
}

#[derive(Debug, Clone, Args)]
pub struct DumpArgs {
    #[arg(long, default_value = "ordinary")]
    pub ensemble: String,

    #[arg(long, value_enum, default_value_t = SeriesChoice::Companion)]
    pub series: SeriesChoice,

    /// Weight spec for moments; must carry `m=`.
    #[arg(long)]
    pub weight: Option<String>,

    #[arg(long)]
    pub n: usize,

    /// `zz` or `mod:p`.
    #[arg(long, default_value = "zz")]
    pub ring: String,
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub selection: ScanSelection,

    #[arg(long, value_enum, default_value_t = ModeArg::Conservative12)]
    pub mode: ModeArg,

    #[arg(long, value_parser = parse_level, default_value = "safe")]
    pub level: LevelModel,
}

/// Raised by commands; each kind maps to one exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Resource(_) => EXIT_RESOURCE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Resource(s) => write!(f, "resource limit: {s}"),
        }
    }
}

impl From<freqmom_core::Error> for CliError {
    fn from(e: freqmom_core::Error) -> Self {
        use freqmom_core::Error;
        match e {
            Error::ResourceCap { .. } | Error::GenerationLimit { .. } => CliError::Resource(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct Globals {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub max_coeffs: usize,
}

/// Insert config-file flags right after the subcommand token, so that flags
/// given on the command line (which come later) override them.
fn inject_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = configfile::config_path(&args) else {
        return Ok(args);
    };
    let entries = configfile::read_entries(path.as_ref()).map_err(CliError::Usage)?;
    let root = Cli::command();
    let Some(pos) = args
        .iter()
        .skip(1)
        .position(|a| root.find_subcommand(a).is_some())
        .map(|p| p + 1)
    else {
        return Ok(args);
    };
    let sub = root.find_subcommand(&args[pos]).expect("found above").clone();
    let lookup = |key: &str| {
        sub.get_arguments()
            .chain(root.get_arguments())
            .find(|a| a.get_long() == Some(key))
            .cloned()
    };
    let known = |key: &str| lookup(key).is_some();
    let is_switch = |key: &str| lookup(key).is_some_and(|a| !a.get_action().takes_values());
    for (key, _) in &entries {
        if !known(key)
            && root
                .get_subcommands()
                .all(|s| !s.get_arguments().any(|a| a.get_long() == Some(key)))
        {
            return Err(CliError::Usage(format!("unknown config key {key:?}")));
        }
    }
    let injected = configfile::entries_to_args(&entries, known, is_switch).map_err(CliError::Usage)?;
    let mut out = args[..=pos].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}

fn max_coeffs(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var(MAX_COEFFS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{MAX_COEFFS_ENV}={v:?} is not a count"))),
        Err(_) => Ok(DEFAULT_MAX_COEFFICIENTS),
    }
}

fn write_output(globals: &Globals, payload: &str) -> Result<(), CliError> {
    match &globals.out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(payload.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
        }
    }
}

/// Parse `args` (including the program name), run the command and return
/// the exit code.
pub fn run(args: Vec<OsString>) -> i32 {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let args = match inject_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    if cli.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let globals = Globals {
        format: cli.format,
        out: cli.out,
        jobs: cli.jobs,
        max_coeffs: max_coeffs(cli.max_coeffs)?,
    };
    let (payload, code) = match &cli.command {
        Command::Scan(a) => commands::scan(&globals, a)?,
        Command::Certify(a) => commands::certify(&globals, a)?,
        Command::Tables(a) => commands::tables(&globals, a)?,
        Command::Identities(a) => commands::identities(&globals, a)?,
        Command::DumpSeries(a) => commands::dump_series(&globals, a)?,
        Command::Pipeline(a) => commands::pipeline(&globals, a)?,
    };
    write_output(&globals, &payload)?;
    Ok(code)
}
