//! Batch CLI for the extended correlation toolkit.
//!
//! Exit status contract: 0 success, 1 data or numeric failure, 2 usage
//! error. Results go to standard output (or `--out`); diagnostics go to
//! standard error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use excorr::format::{g12, g12_value};
use excorr::{
    gen_fc, gen_fu, lambda_trace, noise_report, rank_subsets, read_csv, rho_extended,
    DegenerateRule, Error, PrefixPolicy, RhoMode, SignPattern,
};

#[derive(Parser)]
#[command(
    name = "excorr",
    version,
    about = "Extended (multivariable) Pearson correlation via correlation-matrix spectra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset and write it as CSV
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Extended correlation coefficient of a CSV dataset
    Corr(CorrArgs),
    /// Maximal-eigenvalue trace over growing row prefixes
    EigenTrace(TraceArgs),
    /// Split dataset noise into predictor and labeling noise
    Noise(NoiseArgs),
    /// Rank predictor subsets by extended correlation with a target
    Rank(RankArgs),
}

#[derive(Subcommand)]
enum GenKind {
    /// Fully correlated dataset: every pairwise correlation is +1 or -1
    Fc(GenFcArgs),
    /// Fully uncorrelated dataset: every pairwise correlation is 0
    Fu(GenFuArgs),
}

#[derive(Args)]
struct GenFcArgs {
    /// Sign pattern over {+,-} starting with '+', e.g. ++-
    #[arg(long)]
    pattern: String,
    /// Number of variables; must match the pattern length when given
    #[arg(long)]
    vars: Option<usize>,
    /// Number of sample rows
    #[arg(long)]
    rows: usize,
    /// PRNG seed
    #[arg(long)]
    seed: u64,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenFuArgs {
    /// Number of variables
    #[arg(long)]
    vars: usize,
    /// Number of sample rows (at least vars + 1)
    #[arg(long)]
    rows: usize,
    /// PRNG seed
    #[arg(long)]
    seed: u64,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CorrArgs {
    /// Input CSV file
    #[arg(long)]
    input: PathBuf,
    /// Aggregation mode
    #[arg(long, value_enum, default_value_t = ModeArg::Instant)]
    mode: ModeArg,
    /// First prefix length for rolling computations (default: variables + 1)
    #[arg(long)]
    min_prefix: Option<usize>,
    /// Treatment of zero-variance prefixes in rolling mode
    #[arg(long, value_enum, default_value_t = DegenerateArg::Skip)]
    degenerate: DegenerateArg,
    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    /// Input CSV file
    #[arg(long)]
    input: PathBuf,
    /// First prefix length (default: variables + 1)
    #[arg(long)]
    min_prefix: Option<usize>,
    /// Treatment of zero-variance prefixes
    #[arg(long, value_enum, default_value_t = DegenerateArg::Skip)]
    degenerate: DegenerateArg,
    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NoiseArgs {
    /// Input CSV file
    #[arg(long)]
    input: PathBuf,
    /// Target (supervising) column
    #[arg(long)]
    target: String,
    /// Aggregation mode
    #[arg(long, value_enum, default_value_t = ModeArg::Instant)]
    mode: ModeArg,
    /// First prefix length for rolling computations (default: variables + 1)
    #[arg(long)]
    min_prefix: Option<usize>,
    /// Treatment of zero-variance prefixes in rolling mode
    #[arg(long, value_enum, default_value_t = DegenerateArg::Skip)]
    degenerate: DegenerateArg,
    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RankArgs {
    /// Input CSV file
    #[arg(long)]
    input: PathBuf,
    /// Target (supervising) column
    #[arg(long)]
    target: String,
    /// Subset size
    #[arg(long)]
    k: usize,
    /// Aggregation mode
    #[arg(long, value_enum, default_value_t = ModeArg::Instant)]
    mode: ModeArg,
    /// First prefix length for rolling computations (default: variables + 1)
    #[arg(long)]
    min_prefix: Option<usize>,
    /// Treatment of zero-variance prefixes in rolling mode
    #[arg(long, value_enum, default_value_t = DegenerateArg::Skip)]
    degenerate: DegenerateArg,
    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Instant,
    RollingMean,
}

impl From<ModeArg> for RhoMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Instant => RhoMode::Instant,
            ModeArg::RollingMean => RhoMode::RollingMean,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DegenerateArg {
    Skip,
    Fail,
}

impl From<DegenerateArg> for DegenerateRule {
    fn from(rule: DegenerateArg) -> Self {
        match rule {
            DegenerateArg::Skip => DegenerateRule::Skip,
            DegenerateArg::Fail => DegenerateRule::Fail,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

enum CliError {
    Usage(String),
    Data(Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(err) => classify(err),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Data(err) => write!(f, "{err}"),
        }
    }
}

/// 1 for data/numeric failures, 2 for errors the caller made.
fn classify(err: &Error) -> u8 {
    match err {
        Error::UnknownColumn { .. }
        | Error::SubsetSizeOutOfRange { .. }
        | Error::TooManyColumns { .. }
        | Error::MinPrefixTooSmall { .. }
        | Error::NotEnoughPredictors { .. }
        | Error::EmptySignPattern
        | Error::InvalidSignChar { .. }
        | Error::InvalidSignValue { .. }
        | Error::SignPatternLead => 2,
        _ => 1,
    }
}

fn data_err(err: Error) -> CliError {
    CliError::Data(err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen { kind } => match kind {
            GenKind::Fc(args) => cmd_gen_fc(args),
            GenKind::Fu(args) => cmd_gen_fu(args),
        },
        Command::Corr(args) => cmd_corr(args),
        Command::EigenTrace(args) => cmd_eigen_trace(args),
        Command::Noise(args) => cmd_noise(args),
        Command::Rank(args) => cmd_rank(args),
    }
}

/// Generator failures are bad arguments, not data failures.
fn gen_usage(err: Error) -> CliError {
    match err {
        Error::Io { .. } => CliError::Data(err),
        other => CliError::Usage(other.to_string()),
    }
}

fn cmd_gen_fc(args: GenFcArgs) -> Result<(), CliError> {
    let pattern = SignPattern::parse(&args.pattern).map_err(gen_usage)?;
    if let Some(vars) = args.vars {
        if vars != pattern.len() {
            return Err(CliError::Usage(format!(
                "--vars {vars} does not match the pattern length {}",
                pattern.len()
            )));
        }
    }
    let data = gen_fc(&pattern, args.rows, args.seed).map_err(gen_usage)?;
    write_output(&args.out, &data.to_csv_string())
}

fn cmd_gen_fu(args: GenFuArgs) -> Result<(), CliError> {
    let data = gen_fu(args.vars, args.rows, args.seed).map_err(gen_usage)?;
    write_output(&args.out, &data.to_csv_string())
}

fn build_policy(
    n_vars: usize,
    min_prefix: Option<usize>,
    degenerate: DegenerateArg,
) -> Result<PrefixPolicy, CliError> {
    let base = PrefixPolicy::for_vars(n_vars).with_degenerate_rule(degenerate.into());
    match min_prefix {
        None => Ok(base),
        Some(k) => base
            .with_min_prefix(k)
            .map_err(|err| CliError::Usage(err.to_string())),
    }
}

fn cmd_corr(args: CorrArgs) -> Result<(), CliError> {
    let data = read_csv(&args.input).map_err(data_err)?;
    let policy = build_policy(data.n_cols(), args.min_prefix, args.degenerate)?;
    let rho = rho_extended(&data, args.mode.into(), &policy).map_err(data_err)?;
    let text = match args.format {
        FormatArg::Csv => format!(
            "rho_eig,rho_frob,n_vars,mode,trace_length\n{},{},{},{},{}\n",
            g12(rho.rho_eig),
            g12(rho.rho_frob),
            rho.n_vars,
            rho.mode,
            rho.trace_length
        ),
        FormatArg::Json => {
            let value = json!({
                "schema_version": "1",
                "rho_eig": g12_value(rho.rho_eig),
                "rho_frob": g12_value(rho.rho_frob),
                "n_vars": rho.n_vars,
                "mode": rho.mode.to_string(),
                "trace_length": rho.trace_length,
            });
            format!("{value}\n")
        }
    };
    write_output(&args.out, &text)
}

fn cmd_eigen_trace(args: TraceArgs) -> Result<(), CliError> {
    let data = read_csv(&args.input).map_err(data_err)?;
    let policy = build_policy(data.n_cols(), args.min_prefix, args.degenerate)?;
    let trace = lambda_trace(&data, &policy).map_err(data_err)?;
    let mean = trace.mean_lambda_max();
    let text = match args.format {
        FormatArg::Csv => {
            let mut out = String::from("prefix_length,lambda_max,degenerate\n");
            for entry in trace.entries() {
                let lambda = entry.lambda_max.map(g12).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{}\n",
                    entry.prefix_len,
                    lambda,
                    entry.is_degenerate()
                ));
            }
            let mean_text = mean.map(g12).unwrap_or_default();
            out.push_str(&format!(
                "# mean={},count={}\n",
                mean_text,
                trace.valid_count()
            ));
            out
        }
        FormatArg::Json => {
            let entries: Vec<serde_json::Value> = trace
                .entries()
                .iter()
                .map(|entry| {
                    json!({
                        "prefix_length": entry.prefix_len,
                        "lambda_max": entry.lambda_max.map(g12_value),
                        "degenerate": entry.is_degenerate(),
                    })
                })
                .collect();
            let value = json!({
                "schema_version": "1",
                "n_vars": data.n_cols(),
                "min_prefix": policy.min_prefix(),
                "entries": entries,
                "mean_lambda_max": mean.map(g12_value),
                "count": trace.valid_count(),
            });
            format!("{value}\n")
        }
    };
    write_output(&args.out, &text)
}

fn cmd_noise(args: NoiseArgs) -> Result<(), CliError> {
    let data = read_csv(&args.input).map_err(data_err)?;
    let policy = build_policy(data.n_cols(), args.min_prefix, args.degenerate)?;
    let report = noise_report(&data, &args.target, args.mode.into(), &policy).map_err(data_err)?;
    let text = match args.format {
        FormatArg::Csv => format!(
            "total_noise,predictor_noise,labeling_noise\n{},{},{}\n",
            g12(report.total_noise),
            g12(report.predictor_noise),
            g12(report.labeling_noise)
        ),
        FormatArg::Json => {
            let value = json!({
                "schema_version": "1",
                "total_noise": g12_value(report.total_noise),
                "predictor_noise": g12_value(report.predictor_noise),
                "labeling_noise": g12_value(report.labeling_noise),
            });
            format!("{value}\n")
        }
    };
    write_output(&args.out, &text)
}

fn cmd_rank(args: RankArgs) -> Result<(), CliError> {
    let data = read_csv(&args.input).map_err(data_err)?;
    let policy = build_policy(data.n_cols(), args.min_prefix, args.degenerate)?;
    let ranked =
        rank_subsets(&data, &args.target, args.k, args.mode.into(), &policy).map_err(data_err)?;
    let text = match args.format {
        FormatArg::Csv => {
            let mut out = String::from("subset,rho,predictor_noise\n");
            for entry in &ranked {
                let noise = entry.predictor_noise.map(g12).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{}\n",
                    entry.columns.join("+"),
                    g12(entry.rho),
                    noise
                ));
            }
            out
        }
        FormatArg::Json => {
            let entries: Vec<serde_json::Value> = ranked
                .iter()
                .map(|entry| {
                    json!({
                        "subset": entry.columns,
                        "rho": g12_value(entry.rho),
                        "predictor_noise": entry.predictor_noise.map(g12_value),
                    })
                })
                .collect();
            let value = json!({
                "schema_version": "1",
                "entries": entries,
            });
            format!("{value}\n")
        }
    };
    write_output(&args.out, &text)
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| {
            CliError::Data(Error::Io {
                path: path.clone(),
                source,
            })
        }),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
                .and_then(|()| lock.flush())
                .map_err(|source| {
                    CliError::Data(Error::Io {
                        path: PathBuf::from("<stdout>"),
                        source,
                    })
                })
        }
    }
}
