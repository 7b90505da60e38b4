//! Command-line front end.
//!
//! One binary, seven subcommands, machine-readable output:
//!
//! * `params` — exact exponents for one `(s, t)` pair, with optional
//!   log-constant validation and the three-inequality planning check.
//! * `table` — alpha rounded to three decimals for a list of pairs.
//! * `schemes` — every scheme class at `(s, t)` with its exact value.
//! * `verify` — one of the finite lemma checks, as a JSON report.
//! * `build` — one seeded pipeline run; graph and trace files via `--out`.
//! * `experiment` — the pipeline across many seeds with aggregate metrics.
//! * `replay` — reconstruct a final graph from a G0 file plus its trace.
//!
//! Exit status contract: `0` = success (and, for checks, verified); `1` = a
//! check failed or a pipeline/file contract was violated, with the witness
//! in the JSON on stdout; `2` = usage error, explained on stderr.
//!
//! Every run that involves randomness requires an explicit `--seed` (or
//! `--seeds`); there is no implicit time-based seeding. Results are
//! independent of `--threads`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::analyze::{full_experiment, ExperimentOptions, ExperimentReport};
use crate::construct::{apply_trace, run_pipeline, verify_ktfree, DeletionTrace, PipelineRun};
use crate::error::Error;
use crate::exponents::{
    check_intro_system, classify_pair, exponent_table, exponents, validate_log_constants,
    ConstructionParams, IntroSystemReport, LogConstants, LogConstantsReport, PairClass,
    DEFAULT_TABLE_PAIRS,
};
use crate::graph::ColouredGraph;
use crate::ratio::{format_ratio, parse_ratio};
use crate::schemes::{enumerate_schemes_with_cap, scheme_value, Scheme, DEFAULT_ENUMERATION_CAP};
use crate::verify::{
    localneg_report, verify_app1, verify_app2, verify_claim2_large_t, verify_extremal,
    verify_negscheme, LemmaReport, MarginMode,
};

/// Top-level argument structure.
#[derive(Debug, Parser)]
#[command(
    name = "erdos-rogers",
    version,
    about = "Exact exponent arithmetic, colour-scheme checks, and a seeded Monte Carlo \
             pipeline for a Ramsey-type graph construction",
    max_term_width = 100
)]
pub struct Cli {
    /// Cap internal parallelism at this many threads (default: all cores).
    /// Outputs never depend on the thread count.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    /// Output format. `json` works everywhere; `csv` for table, schemes and
    /// experiment; `text` for table.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

/// Output format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

/// The available subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact exponents (alpha, delta, eta) for one parameter pair.
    Params(ParamsArgs),
    /// Alpha rounded to three decimals for a list of pairs.
    Table(TableArgs),
    /// Enumerate all scheme classes at (s, t) with exact values.
    Schemes(SchemesArgs),
    /// Run one of the finite lemma checks and report witnesses.
    Verify(VerifyArgs),
    /// Run the seeded sample -> filter -> filter pipeline once.
    Build(BuildArgs),
    /// Run the pipeline for many seeds and aggregate the metrics.
    Experiment(ExperimentArgs),
    /// Reconstruct the final graph from a G0 file and a deletion trace.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    /// Clique parameter s (forbidden clique is K_t, probes look for K_s).
    #[arg(long)]
    s: i64,
    /// Forbidden clique size t; valid pairs need s >= 3, s+2 <= t <= 2s-1.
    #[arg(long)]
    t: i64,
    /// Log-correction constant c1 ("p/q", integer, or decimal). Supplying
    /// c1/c2/c3 validates the three constraints on them; a failed
    /// validation exits 1.
    #[arg(long, requires = "c2", requires = "c3", value_name = "RATIONAL")]
    c1: Option<String>,
    /// Log-correction constant c2.
    #[arg(long, requires = "c1", requires = "c3", value_name = "RATIONAL")]
    c2: Option<String>,
    /// Log-correction constant c3.
    #[arg(long, requires = "c1", requires = "c2", value_name = "RATIONAL")]
    c3: Option<String>,
    /// Evaluate the three planning inequalities at "delta,beta,alpha"
    /// (each a rational). Informational: does not affect the exit status.
    #[arg(long, value_name = "D,B,A")]
    check_system: Option<String>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// A pair as "s,t"; repeat for several. Defaults to the six built-ins.
    #[arg(long = "pair", value_name = "S,T")]
    pairs: Vec<String>,
}

#[derive(Debug, Args)]
pub struct SchemesArgs {
    #[arg(long)]
    s: u32,
    #[arg(long)]
    t: u32,
    /// Raise the enumeration cap on t (default 9). Enumeration cost grows
    /// steeply with t; raising the cap is an explicit opt-in.
    #[arg(long, value_name = "T_MAX")]
    cap: Option<u32>,
}

/// Which lemma check to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "lowercase")]
pub enum LemmaKind {
    /// Extremal scheme values: the regime's distinguished scheme has value
    /// exactly 0, the other extremal scheme value <= 0.
    Extremal,
    /// All scheme classes at one (s, t) have value <= 0 (exhaustive).
    Negscheme,
    /// The pair-blocks inequality is equivalent to k*eta < delta.
    App1,
    /// The six-part exponent inequality sweep.
    App2,
    /// The small-t two-family case sweep with an explicit margin.
    Localneg,
    /// The large-t block-size tuple check.
    Claim2,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// The check to run.
    #[arg(long, value_enum)]
    lemma: LemmaKind,
    /// Pair parameter s (negscheme only).
    #[arg(long)]
    s: Option<u32>,
    /// Pair parameter t (negscheme only).
    #[arg(long)]
    t: Option<u32>,
    /// Largest s to sweep (extremal, app1, app2).
    #[arg(long, default_value_t = 40)]
    s_max: u32,
    /// Largest block count k to sweep (app1).
    #[arg(long, default_value_t = 100)]
    k_max: u32,
    /// Smallest t for claim2 (must be >= 14).
    #[arg(long, default_value_t = 14)]
    t_min: u32,
    /// Largest t for claim2.
    #[arg(long, default_value_t = 20)]
    t_max: u32,
    /// Localneg only: rerun the sweep in IEEE double precision with margin
    /// 1e-3, reproducing the original program's arithmetic bit for bit.
    #[arg(long)]
    float: bool,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, default_value_t = 3)]
    s: i64,
    #[arg(long, default_value_t = 5)]
    t: i64,
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Number of colour classes (direct mode).
    #[arg(long, conflicts_with = "from_asymptotics")]
    m: Option<usize>,
    /// Per-vertex class membership probability in [0, 1], as "p/q" or a
    /// decimal (direct mode).
    #[arg(long, conflicts_with = "from_asymptotics", value_name = "RATIONAL")]
    gamma: Option<String>,
    /// Probe subset size (direct mode; defaults to n).
    #[arg(long, conflicts_with = "from_asymptotics")]
    a: Option<usize>,
    /// Derive m, gamma, a from n and the c1/c2/c3 recipe instead of taking
    /// them directly.
    #[arg(long, requires = "c1", requires = "c2", requires = "c3")]
    from_asymptotics: bool,
    #[arg(long, value_name = "RATIONAL")]
    c1: Option<String>,
    #[arg(long, value_name = "RATIONAL")]
    c2: Option<String>,
    #[arg(long, value_name = "RATIONAL")]
    c3: Option<String>,
    /// Master seed. Required: every random choice derives from it.
    #[arg(long)]
    seed: u64,
    /// Path prefix for the artifacts: writes PREFIX.g0.json, PREFIX.g1.json,
    /// PREFIX.g.json and PREFIX.trace.jsonl. Without it the final graph is
    /// embedded in the summary instead.
    #[arg(long, value_name = "PREFIX")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, default_value_t = 3)]
    s: i64,
    #[arg(long, default_value_t = 5)]
    t: i64,
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Number of colour classes (direct mode).
    #[arg(long, conflicts_with = "from_asymptotics")]
    m: Option<usize>,
    /// Per-vertex class membership probability (direct mode).
    #[arg(long, conflicts_with = "from_asymptotics", value_name = "RATIONAL")]
    gamma: Option<String>,
    /// Probe subset size (direct mode; defaults to n).
    #[arg(long, conflicts_with = "from_asymptotics")]
    a: Option<usize>,
    /// Derive m, gamma, a from n and the c1/c2/c3 recipe.
    #[arg(long, requires = "c1", requires = "c2", requires = "c3")]
    from_asymptotics: bool,
    #[arg(long, value_name = "RATIONAL")]
    c1: Option<String>,
    #[arg(long, value_name = "RATIONAL")]
    c2: Option<String>,
    #[arg(long, value_name = "RATIONAL")]
    c3: Option<String>,
    /// Comma-separated master seeds; one full pipeline run per seed.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    seeds: Vec<u64>,
    /// Subset-probe trials per seed.
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Path prefix: writes the report as PREFIX.json and PREFIX.csv.
    #[arg(long, value_name = "PREFIX")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Stage-G0 graph file from a build run.
    #[arg(long)]
    g0: PathBuf,
    /// Deletion trace (JSON lines) from the same run.
    #[arg(long)]
    trace: PathBuf,
    /// Write the reconstructed stage-G graph here.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A subcommand's produced stdout text plus its exit code.
struct Outcome {
    stdout: String,
    exit: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, exit: 0 }
    }
}

/// Failures that abort a subcommand.
enum CliError {
    /// Bad flag values; message for stderr, exit 2.
    Usage(String),
    /// Runtime failure (file, hash, or pipeline contract); reported as JSON
    /// on stdout, exit 1.
    Run(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Stable machine-readable tag for each runtime error variant.
fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::OutOfRange { .. } => "out_of_range",
        Error::MismatchedParameters { .. } => "mismatched_parameters",
        Error::NodeOutOfRange { .. } => "node_out_of_range",
        Error::TooLarge { .. } => "too_large",
        Error::BadSubset { .. } => "bad_subset",
        Error::InvalidScheme(_) => "invalid_scheme",
        Error::InvalidParams(_) => "invalid_params",
        Error::WrongStage { .. } => "wrong_stage",
        Error::IncompleteKtList { .. } => "incomplete_kt_list",
        Error::BadSize { .. } => "bad_size",
        Error::EmptySubset { .. } => "empty_subset",
        Error::HashMismatch { .. } => "hash_mismatch",
        Error::Format(_) => "format",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}

/// Parses arguments, runs the selected subcommand, prints its output, and
/// returns the process exit code. The binary `main` is a one-line wrapper
/// around this, and tests call it directly.
pub fn run_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests arrive as "errors" with exit 0.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return 2;
        }
        // The global pool can only be installed once per process; a second
        // initialization (e.g. in tests) keeps the first pool, which only
        // affects scheduling, never results.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match dispatch(cli.format, cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            outcome.exit
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Run(e)) => {
            print!("{}", runtime_error_json(&e));
            1
        }
    }
}

fn runtime_error_json(e: &Error) -> String {
    #[derive(Serialize)]
    struct ErrorOutput<'a> {
        status: &'a str,
        kind: &'a str,
        message: String,
    }
    pretty(&ErrorOutput {
        status: "error",
        kind: error_kind(e),
        message: e.to_string(),
    })
}

fn dispatch(format: Format, command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Params(args) => cmd_params(format, args),
        Command::Table(args) => cmd_table(format, args),
        Command::Schemes(args) => cmd_schemes(format, args),
        Command::Verify(args) => cmd_verify(format, args),
        Command::Build(args) => cmd_build(format, args),
        Command::Experiment(args) => cmd_experiment(format, args),
        Command::Replay(args) => cmd_replay(format, args),
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output serialization cannot fail");
    text.push('\n');
    text
}

fn require_json(format: Format, subcommand: &str) -> Result<(), CliError> {
    if format == Format::Json {
        Ok(())
    } else {
        Err(usage(format!(
            "--format {} is not available for `{subcommand}`; it emits JSON",
            format.name()
        )))
    }
}

/// Maps a parameter-construction failure (bad pair, bad rational, bad
/// ranges) to a usage error carrying the library's explanation.
fn usage_from(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn parse_pair_arg(s: i64, t: i64) -> Result<PairClass, CliError> {
    classify_pair(s, t).map_err(usage_from)
}

fn parse_rational_flag(flag: &str, text: &str) -> Result<num::BigRational, CliError> {
    parse_ratio(text).map_err(|e| usage(format!("--{flag}: {e}")))
}

// ---------------------------------------------------------------------------
// params

#[derive(Serialize)]
struct ParamsOutput {
    s: u32,
    t: u32,
    regular: bool,
    alpha: String,
    delta: String,
    eta: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    log_constants: Option<LogConstantsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    intro_system: Option<IntroSystemReport>,
}

fn cmd_params(format: Format, args: ParamsArgs) -> Result<Outcome, CliError> {
    require_json(format, "params")?;
    let pair = parse_pair_arg(args.s, args.t)?;
    let e = exponents(pair);

    let log_constants = match (&args.c1, &args.c2, &args.c3) {
        (Some(c1), Some(c2), Some(c3)) => {
            let constants = LogConstants {
                c1: parse_rational_flag("c1", c1)?,
                c2: parse_rational_flag("c2", c2)?,
                c3: parse_rational_flag("c3", c3)?,
            };
            Some(validate_log_constants(pair, &constants))
        }
        _ => None,
    };

    let intro_system = match &args.check_system {
        Some(spec) => {
            let parts: Vec<&str> = spec.split(',').collect();
            if parts.len() != 3 {
                return Err(usage(format!(
                    "--check-system needs exactly three comma-separated rationals, got {spec:?}"
                )));
            }
            let delta = parse_rational_flag("check-system", parts[0])?;
            let beta = parse_rational_flag("check-system", parts[1])?;
            let alpha = parse_rational_flag("check-system", parts[2])?;
            Some(check_intro_system(&delta, &beta, &alpha))
        }
        None => None,
    };

    let constants_pass = log_constants.as_ref().is_none_or(|r| r.all_pass());
    let output = ParamsOutput {
        s: pair.s(),
        t: pair.t(),
        regular: pair.is_regular(),
        alpha: format_ratio(e.alpha()),
        delta: format_ratio(e.delta()),
        eta: format_ratio(e.eta()),
        log_constants,
        intro_system,
    };
    Ok(Outcome {
        stdout: pretty(&output),
        exit: if constants_pass { 0 } else { 1 },
    })
}

// ---------------------------------------------------------------------------
// table

fn cmd_table(format: Format, args: TableArgs) -> Result<Outcome, CliError> {
    let pairs: Vec<(i64, i64)> = if args.pairs.is_empty() {
        DEFAULT_TABLE_PAIRS.to_vec()
    } else {
        args.pairs
            .iter()
            .map(|text| {
                let (s, t) = text
                    .split_once(',')
                    .ok_or_else(|| usage(format!("--pair must look like \"s,t\", got {text:?}")))?;
                let parse = |part: &str| {
                    part.trim()
                        .parse::<i64>()
                        .map_err(|e| usage(format!("--pair {text:?}: {e}")))
                };
                Ok((parse(s)?, parse(t)?))
            })
            .collect::<Result<_, CliError>>()?
    };
    let rows = exponent_table(&pairs).map_err(usage_from)?;
    let stdout = match format {
        Format::Json => pretty(&rows),
        Format::Csv => {
            let mut out = String::from("s,t,alpha\n");
            for row in &rows {
                let _ = writeln!(out, "{},{},{}", row.s, row.t, row.alpha_3dp);
            }
            out
        }
        Format::Text => {
            let mut out = String::from(" s   t  alpha\n");
            for row in &rows {
                let _ = writeln!(out, "{:>2}  {:>2}  {}", row.s, row.t, row.alpha_3dp);
            }
            out
        }
    };
    Ok(Outcome::ok(stdout))
}

// ---------------------------------------------------------------------------
// schemes

#[derive(Serialize)]
struct SchemeClassRow {
    class: usize,
    b: usize,
    l: usize,
    value: String,
    scheme: Scheme,
}

#[derive(Serialize)]
struct SchemesOutput {
    s: u32,
    t: u32,
    count: usize,
    classes: Vec<SchemeClassRow>,
}

fn cmd_schemes(format: Format, args: SchemesArgs) -> Result<Outcome, CliError> {
    let pair = parse_pair_arg(args.s as i64, args.t as i64)?;
    let cap = args.cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    let e = exponents(pair);
    let classes = enumerate_schemes_with_cap(args.s, args.t, cap).map_err(usage_from)?;
    let rows: Vec<SchemeClassRow> = classes
        .into_iter()
        .enumerate()
        .map(|(class, q)| {
            let value = scheme_value(&q, &e).expect("enumerated at the requested pair");
            SchemeClassRow {
                class,
                b: q.b(),
                l: q.l(),
                value: format_ratio(&value),
                scheme: q,
            }
        })
        .collect();
    let stdout = match format {
        Format::Json => pretty(&SchemesOutput {
            s: pair.s(),
            t: pair.t(),
            count: rows.len(),
            classes: rows,
        }),
        Format::Csv => {
            let mut out = String::from("class,b,l,value\n");
            for row in &rows {
                let _ = writeln!(out, "{},{},{},{}", row.class, row.b, row.l, row.value);
            }
            out
        }
        Format::Text => return Err(usage("--format text is not available for `schemes`")),
    };
    Ok(Outcome::ok(stdout))
}

// ---------------------------------------------------------------------------
// verify

fn cmd_verify(format: Format, args: VerifyArgs) -> Result<Outcome, CliError> {
    require_json(format, "verify")?;
    if args.float && args.lemma != LemmaKind::Localneg {
        return Err(usage("--float only applies to --lemma localneg"));
    }
    let report: LemmaReport = match args.lemma {
        LemmaKind::Extremal => {
            if args.s_max < 3 {
                return Err(usage("--s-max must be at least 3"));
            }
            verify_extremal(args.s_max)
        }
        LemmaKind::Negscheme => {
            let (s, t) = match (args.s, args.t) {
                (Some(s), Some(t)) => (s, t),
                _ => return Err(usage("--lemma negscheme needs both --s and --t")),
            };
            verify_negscheme(s, t).map_err(usage_from)?
        }
        LemmaKind::App1 => {
            if args.s_max < 3 {
                return Err(usage("--s-max must be at least 3"));
            }
            if args.k_max < 2 {
                return Err(usage("--k-max must be at least 2"));
            }
            verify_app1(args.s_max, args.k_max)
        }
        LemmaKind::App2 => {
            if args.s_max < 3 {
                return Err(usage("--s-max must be at least 3"));
            }
            verify_app2(args.s_max)
        }
        LemmaKind::Localneg => localneg_report(if args.float {
            MarginMode::Float
        } else {
            MarginMode::Exact
        }),
        LemmaKind::Claim2 => {
            if args.t_min < 14 {
                return Err(usage("--t-min must be at least 14 for claim2"));
            }
            if args.t_min > args.t_max {
                return Err(usage("--t-min must not exceed --t-max"));
            }
            verify_claim2_large_t(args.t_min, args.t_max)
        }
    };
    let exit = if report.verified() { 0 } else { 1 };
    Ok(Outcome {
        stdout: pretty(&report),
        exit,
    })
}

// ---------------------------------------------------------------------------
// build / experiment parameter plumbing

struct RunSpec {
    pair: PairClass,
    params: ConstructionParams,
}

#[allow(clippy::too_many_arguments)]
fn resolve_run_spec(
    s: i64,
    t: i64,
    n: usize,
    m: Option<usize>,
    gamma: Option<&String>,
    a: Option<usize>,
    from_asymptotics: bool,
    c1: Option<&String>,
    c2: Option<&String>,
    c3: Option<&String>,
) -> Result<RunSpec, CliError> {
    let pair = parse_pair_arg(s, t)?;
    let params = if from_asymptotics {
        let (c1, c2, c3) = match (c1, c2, c3) {
            (Some(c1), Some(c2), Some(c3)) => (c1, c2, c3),
            _ => return Err(usage("--from-asymptotics needs --c1, --c2 and --c3")),
        };
        let constants = LogConstants {
            c1: parse_rational_flag("c1", c1)?,
            c2: parse_rational_flag("c2", c2)?,
            c3: parse_rational_flag("c3", c3)?,
        };
        ConstructionParams::from_asymptotics(pair, n, constants).map_err(usage_from)?
    } else {
        let m = m.ok_or_else(|| usage("direct mode needs --m (or use --from-asymptotics)"))?;
        let gamma =
            gamma.ok_or_else(|| usage("direct mode needs --gamma (or use --from-asymptotics)"))?;
        let gamma = parse_rational_flag("gamma", gamma)?;
        ConstructionParams::direct(n, m, gamma, a.unwrap_or(n)).map_err(usage_from)?
    };
    Ok(RunSpec { pair, params })
}

// ---------------------------------------------------------------------------
// build

#[derive(Serialize)]
struct BuildFiles {
    g0: String,
    g1: String,
    g: String,
    trace: String,
}

#[derive(Serialize)]
struct BuildSummary<'a> {
    s: u32,
    t: u32,
    params: &'a ConstructionParams,
    seed: u64,
    g0_edges: usize,
    g1_edges: usize,
    g_edges: usize,
    type1_removed: usize,
    type2_removed: usize,
    kt_count: usize,
    ktfree_verified: bool,
    g0_sha256: &'a str,
    g1_edges_sha256: &'a str,
    g_edges_sha256: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    files: Option<BuildFiles>,
    /// The final stage-G graph, byte-identical to what `--out` would write
    /// (present only when no `--out` was given).
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<Box<RawValue>>,
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    prefix.with_file_name(name)
}

fn cmd_build(format: Format, args: BuildArgs) -> Result<Outcome, CliError> {
    require_json(format, "build")?;
    let spec = resolve_run_spec(
        args.s,
        args.t,
        args.n,
        args.m,
        args.gamma.as_ref(),
        args.a,
        args.from_asymptotics,
        args.c1.as_ref(),
        args.c2.as_ref(),
        args.c3.as_ref(),
    )?;
    let run: PipelineRun = run_pipeline(spec.pair, &spec.params, args.seed)?;

    let files = match &args.out {
        Some(prefix) => {
            let paths = BuildFiles {
                g0: suffixed(prefix, ".g0.json").display().to_string(),
                g1: suffixed(prefix, ".g1.json").display().to_string(),
                g: suffixed(prefix, ".g.json").display().to_string(),
                trace: suffixed(prefix, ".trace.jsonl").display().to_string(),
            };
            run.g0.write_json(Path::new(&paths.g0))?;
            run.g1.write_json(Path::new(&paths.g1))?;
            run.g.write_json(Path::new(&paths.g))?;
            run.trace.write_jsonl(Path::new(&paths.trace))?;
            Some(paths)
        }
        None => None,
    };
    let graph = if files.is_some() {
        None
    } else {
        Some(
            RawValue::from_string(run.g.to_json_string().trim_end().to_string())
                .expect("graph serialization is valid JSON"),
        )
    };

    let summary = BuildSummary {
        s: spec.pair.s(),
        t: spec.pair.t(),
        params: &spec.params,
        seed: args.seed,
        g0_edges: run.g0.edge_count(),
        g1_edges: run.g1.edge_count(),
        g_edges: run.g.edge_count(),
        type1_removed: run.trace.type1_removed.len(),
        type2_removed: run.trace.type2_removed.len(),
        kt_count: run.kts.len(),
        ktfree_verified: verify_ktfree(&run.g, spec.pair.t()),
        g0_sha256: &run.trace.meta.g0_sha256,
        g1_edges_sha256: &run.trace.meta.g1_edges_sha256,
        g_edges_sha256: &run.trace.meta.g_edges_sha256,
        files,
        graph,
    };
    let exit = if summary.ktfree_verified { 0 } else { 1 };
    Ok(Outcome {
        stdout: pretty(&summary),
        exit,
    })
}

// ---------------------------------------------------------------------------
// experiment

fn cmd_experiment(format: Format, args: ExperimentArgs) -> Result<Outcome, CliError> {
    if format == Format::Text {
        return Err(usage("--format text is not available for `experiment`"));
    }
    let spec = resolve_run_spec(
        args.s,
        args.t,
        args.n,
        args.m,
        args.gamma.as_ref(),
        args.a,
        args.from_asymptotics,
        args.c1.as_ref(),
        args.c2.as_ref(),
        args.c3.as_ref(),
    )?;
    let options = ExperimentOptions {
        probe_trials: args.trials,
    };
    let report: ExperimentReport = full_experiment(spec.pair, &spec.params, &args.seeds, options)?;

    if let Some(prefix) = &args.out {
        fs::write(suffixed(prefix, ".json"), report.to_json_string()).map_err(Error::from)?;
        fs::write(suffixed(prefix, ".csv"), report.to_csv_string()).map_err(Error::from)?;
    }
    let stdout = match format {
        Format::Json => report.to_json_string(),
        Format::Csv => report.to_csv_string(),
        Format::Text => unreachable!("rejected above"),
    };
    let exit = if report.rows.iter().all(|r| r.ktfree_verified) {
        0
    } else {
        1
    };
    Ok(Outcome { stdout, exit })
}

// ---------------------------------------------------------------------------
// replay

#[derive(Serialize)]
struct ReplaySummary {
    n: usize,
    s: u32,
    t: u32,
    stage: String,
    g_edges: usize,
    g_edges_sha256: String,
    type1_removed: usize,
    type2_removed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<String>,
}

fn cmd_replay(format: Format, args: ReplayArgs) -> Result<Outcome, CliError> {
    require_json(format, "replay")?;
    let g0 = ColouredGraph::read_json(&args.g0)?;
    let trace = DeletionTrace::read_jsonl(&args.trace)?;
    let g = apply_trace(&g0, &trace)?;
    let out = match &args.out {
        Some(path) => {
            g.write_json(path)?;
            Some(path.display().to_string())
        }
        None => None,
    };
    let summary = ReplaySummary {
        n: g.n(),
        s: g.s(),
        t: g.t(),
        stage: g.stage().to_string(),
        g_edges: g.edge_count(),
        g_edges_sha256: trace.meta.g_edges_sha256.clone(),
        type1_removed: trace.type1_removed.len(),
        type2_removed: trace.type2_removed.len(),
        out,
    };
    Ok(Outcome::ok(pretty(&summary)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Parses and dispatches without printing; returns (exit, stdout).
    /// Usage errors come back as exit 2 with empty stdout, runtime errors as
    /// exit 1 with the JSON error payload.
    fn run(args: &[&str]) -> (i32, String) {
        let mut full = vec!["erdos-rogers"];
        full.extend_from_slice(args);
        let cli = match Cli::try_parse_from(&full) {
            Ok(cli) => cli,
            Err(e) => return (if e.use_stderr() { 2 } else { 0 }, String::new()),
        };
        match dispatch(cli.format, cli.command) {
            Ok(outcome) => (outcome.exit, outcome.stdout),
            Err(CliError::Usage(_)) => (2, String::new()),
            Err(CliError::Run(e)) => (1, runtime_error_json(&e)),
        }
    }

    #[test]
    fn params_reports_exact_exponents() {
        let (exit, out) = run(&["params", "--s", "3", "--t", "5"]);
        assert_eq!(exit, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["s"], 3);
        assert_eq!(v["t"], 5);
        assert_eq!(v["regular"], false);
        assert_eq!(v["alpha"], "6/13");
        assert_eq!(v["delta"], "9/13");
        assert_eq!(v["eta"], "5/13");
        assert!(v.get("log_constants").is_none());
    }

    #[test]
    fn params_validates_log_constants_and_exits_one_on_failure() {
        let t4x11 = 11 * 625; // 11 t^4 at t = 5
        let c2 = t4x11.to_string();
        let (exit, out) = run(&[
            "params", "--s", "3", "--t", "5", "--c1", "1", "--c2", &c2, "--c3", "100000",
        ]);
        assert_eq!(exit, 0, "{out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["log_constants"]["constraints"][1]["holds"], true);

        let (exit, _) = run(&[
            "params", "--s", "3", "--t", "5", "--c1", "1", "--c2", "1", "--c3", "1",
        ]);
        assert_eq!(exit, 1);
    }

    #[test]
    fn params_rejects_partial_constants_and_bad_pairs() {
        let (exit, _) = run(&["params", "--s", "3", "--t", "5", "--c1", "1"]);
        assert_eq!(exit, 2);
        let (exit, _) = run(&["params", "--s", "3", "--t", "9"]);
        assert_eq!(exit, 2);
        let (exit, _) = run(&["params", "--s", "3"]);
        assert_eq!(exit, 2);
    }

    #[test]
    fn params_checks_planning_system() {
        let (exit, out) = run(&[
            "params",
            "--s",
            "3",
            "--t",
            "5",
            "--check-system",
            "1,0,1/2",
        ]);
        assert_eq!(exit, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let sys = &v["intro_system"];
        assert_eq!(sys["triangle_supply"]["holds"], false);
        assert_eq!(sys["part_size"]["holds"], true);
        assert_eq!(sys["clique_budget"]["holds"], true);
    }

    #[test]
    fn table_defaults_to_six_pairs() {
        let (exit, out) = run(&["table", "--format", "csv"]);
        assert_eq!(exit, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], "s,t,alpha");
        assert_eq!(lines[1], "3,5,0.462");
    }

    #[test]
    fn table_accepts_explicit_pairs_and_rejects_garbage() {
        let (exit, out) = run(&["table", "--pair", "5,9", "--format", "csv"]);
        assert_eq!(exit, 0);
        assert!(out.contains("5,9,0.460"));
        let (exit, _) = run(&["table", "--pair", "five"]);
        assert_eq!(exit, 2);
        let (exit, _) = run(&["table", "--pair", "3,9"]);
        assert_eq!(exit, 2);
    }

    #[test]
    fn schemes_csv_lists_all_classes_with_values() {
        let (exit, out) = run(&["schemes", "--s", "3", "--t", "5", "--format", "csv"]);
        assert_eq!(exit, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "class,b,l,value");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "0,10,20,-6/13");
        assert_eq!(lines[2], "1,8,17,-3/13");
        assert_eq!(lines[3], "2,6,14,0/1");
    }

    #[test]
    fn schemes_json_embeds_block_lists() {
        let (exit, out) = run(&["schemes", "--s", "3", "--t", "5"]);
        assert_eq!(exit, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["count"], 3);
        assert_eq!(
            v["classes"][0]["scheme"]["blocks"]
                .as_array()
                .unwrap()
                .len(),
            10
        );
    }

    #[test]
    fn schemes_enforces_cap_as_usage_error() {
        let (exit, _) = run(&["schemes", "--s", "6", "--t", "10"]);
        assert_eq!(exit, 2);
    }

    #[test]
    fn verify_negscheme_reports_maximizer() {
        let (exit, out) = run(&["verify", "--lemma", "negscheme", "--s", "3", "--t", "5"]);
        assert_eq!(exit, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["status"], "verified");
        assert_eq!(v["maximizers"][0]["value"], "0/1");
    }

    #[test]
    fn verify_needs_pair_for_negscheme() {
        let (exit, _) = run(&["verify", "--lemma", "negscheme"]);
        assert_eq!(exit, 2);
    }

    #[test]
    fn verify_localneg_float_mode() {
        let (exit, out) = run(&["verify", "--lemma", "localneg", "--float"]);
        assert_eq!(exit, 0);
        assert!(out.contains("1e-3 (float)"));
        let (exit, _) = run(&["verify", "--lemma", "extremal", "--float"]);
        assert_eq!(exit, 2);
    }

    #[test]
    fn verify_claim2_range_guards() {
        let (exit, _) = run(&["verify", "--lemma", "claim2", "--t-min", "13"]);
        assert_eq!(exit, 2);
        let (exit, out) = run(&[
            "verify", "--lemma", "claim2", "--t-min", "14", "--t-max", "14",
        ]);
        assert_eq!(exit, 0);
        assert!(out.contains("\"status\": \"verified\""));
    }

    #[test]
    fn build_requires_seed_and_parameters() {
        let (exit, _) = run(&["build", "--n", "50", "--m", "0", "--gamma", "0"]);
        assert_eq!(exit, 2, "--seed is mandatory");
        let (exit, _) = run(&["build", "--n", "50", "--seed", "1"]);
        assert_eq!(exit, 2, "direct mode needs --m and --gamma");
        let (exit, _) = run(&[
            "build", "--n", "50", "--m", "1", "--gamma", "3/2", "--seed", "1",
        ]);
        assert_eq!(exit, 2, "gamma outside [0,1]");
    }

    #[test]
    fn build_embeds_graph_without_out() {
        let (exit, out) = run(&[
            "build", "--n", "40", "--m", "0", "--gamma", "0", "--seed", "1",
        ]);
        assert_eq!(exit, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["g0_edges"], 0);
        assert_eq!(v["g_edges"], 0);
        assert_eq!(v["kt_count"], 0);
        assert_eq!(v["ktfree_verified"], true);
        assert_eq!(v["graph"]["n"], 40);
        assert_eq!(v["graph"]["stage"], "G");
        assert!(v.get("files").is_none());
    }

    #[test]
    fn build_writes_artifacts_and_replay_reconstructs() {
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("run");
        let prefix_str = prefix.display().to_string();
        let (exit, out) = run(&[
            "build",
            "--n",
            "60",
            "--m",
            "12",
            "--gamma",
            "2/5",
            "--seed",
            "7",
            "--out",
            &prefix_str,
        ]);
        assert_eq!(exit, 0, "{out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v.get("graph").is_none());
        let g_path = v["files"]["g"].as_str().unwrap().to_string();

        let reconstructed = dir.path().join("replayed.json");
        let (exit, out) = run(&[
            "replay",
            "--g0",
            v["files"]["g0"].as_str().unwrap(),
            "--trace",
            v["files"]["trace"].as_str().unwrap(),
            "--out",
            &reconstructed.display().to_string(),
        ]);
        assert_eq!(exit, 0, "{out}");
        let stored = fs::read_to_string(&g_path).unwrap();
        let replayed = fs::read_to_string(&reconstructed).unwrap();
        assert_eq!(
            stored, replayed,
            "replay reproduces the stored graph byte for byte"
        );
    }

    #[test]
    fn replay_detects_tampering_with_exit_one() {
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("run");
        let (exit, out) = run(&[
            "build",
            "--n",
            "60",
            "--m",
            "12",
            "--gamma",
            "2/5",
            "--seed",
            "7",
            "--out",
            &prefix.display().to_string(),
        ]);
        assert_eq!(exit, 0, "{out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let trace_path = v["files"]["trace"].as_str().unwrap();
        let tampered =
            fs::read_to_string(trace_path)
                .unwrap()
                .replacen("\"seed\":7", "\"seed\":8", 1);
        fs::write(trace_path, tampered).unwrap();

        let (exit, out) = run(&[
            "replay",
            "--g0",
            v["files"]["g0"].as_str().unwrap(),
            "--trace",
            trace_path,
        ]);
        // Changing the recorded seed leaves the hashes intact, so replay
        // still succeeds mechanically; corrupt an actual removal instead.
        assert_eq!(exit, 0, "{out}");

        let original = fs::read_to_string(trace_path).unwrap();
        let broken = original.replacen("{\"birth\":[", "{\"birth\":[999,", 1);
        if broken != original {
            fs::write(trace_path, broken).unwrap();
        } else {
            // No births recorded (unlikely here); corrupt the G hash field.
            let broken = original.replacen("\"g_edges_sha256\":\"", "\"g_edges_sha256\":\"00", 1);
            fs::write(trace_path, broken).unwrap();
        }
        let (exit, out) = run(&[
            "replay",
            "--g0",
            v["files"]["g0"].as_str().unwrap(),
            "--trace",
            trace_path,
        ]);
        assert_eq!(exit, 1, "{out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["status"], "error");
    }

    #[test]
    fn experiment_csv_has_one_row_per_seed() {
        let (exit, out) = run(&[
            "experiment",
            "--n",
            "30",
            "--m",
            "4",
            "--gamma",
            "1/4",
            "--a",
            "10",
            "--seeds",
            "1,2,3",
            "--trials",
            "5",
            "--format",
            "csv",
        ]);
        assert_eq!(exit, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("seed,g0_edges,"));
        assert!(lines[1].starts_with("1,"));
    }

    #[test]
    fn experiment_requires_seeds() {
        let (exit, _) = run(&["experiment", "--n", "30", "--m", "4", "--gamma", "1/4"]);
        assert_eq!(exit, 2);
    }

    #[test]
    fn format_guards_reject_unsupported_combinations() {
        let (exit, _) = run(&["params", "--s", "3", "--t", "5", "--format", "csv"]);
        assert_eq!(exit, 2);
        let (exit, _) = run(&["verify", "--lemma", "extremal", "--format", "text"]);
        assert_eq!(exit, 2);
        let (exit, _) = run(&["schemes", "--s", "3", "--t", "5", "--format", "text"]);
        assert_eq!(exit, 2);
    }

    #[test]
    fn help_exits_zero() {
        let code = run(&["--help"]).0;
        assert_eq!(code, 0);
    }
}
