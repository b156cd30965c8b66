//! `subsetsum` command-line surface.
//!
//! Exit codes: 0 success, 1 domain error (JSON object on stderr), 2 usage
//! error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{bounds_csv_row, bounds_report, diagnostics, BOUNDS_CSV_HEADER};
use crate::quadrature::{
    integrate_far, integrate_full, integrate_near, region_integrals, QuadratureConfig,
};
use crate::search::{search_with_threads, write_improvements_csv, SearchConfig, Strategy};
use crate::sets::io::{format_set, parse_inline, parse_integer_set, parse_real_set};
use crate::sets::{check_distinct, conway_guy, separation, IntegerSet, RealSet};
use crate::smoothing::{gaussian_l2_distance, GaussianModel, SmoothedDensity};
use crate::spectrum::{
    build_spectrum, collision_probability, histogram, write_histogram_csv, write_spectrum_csv,
};
use crate::Error;

pub const THREADS_ENV: &str = "SUBSETSUM_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "subsetsum",
    version,
    about = "Distinct subset sums: exact walk laws, collision integrals, Gaussian diagnostics"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Region {
    Near,
    Far,
    Full,
}

#[derive(Args, Debug)]
struct SetArgs {
    /// Set file: one value per line, or {"elements":[...]}.
    #[arg(long, value_name = "FILE", conflicts_with = "elements")]
    set: Option<PathBuf>,
    /// Inline comma-separated elements, e.g. 1,2,4.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    elements: Option<String>,
}

#[derive(Args, Debug)]
struct QuadArgs {
    /// Relative tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    max_subdivisions: Option<usize>,
    /// Initial panels per period of the fastest cosine.
    #[arg(long)]
    oversampling: Option<usize>,
    /// Real sets: truncate the full-line integral at this |x|.
    #[arg(long)]
    tail_cutoff: Option<f64>,
}

impl QuadArgs {
    fn config(&self) -> QuadratureConfig {
        let d = QuadratureConfig::default();
        QuadratureConfig {
            rel_tol: self.tol.unwrap_or(d.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            max_subdivisions: self.max_subdivisions.unwrap_or(d.max_subdivisions),
            oscillation_oversampling: self.oversampling.unwrap_or(d.oscillation_oversampling),
            tail_cutoff: self.tail_cutoff.or(d.tail_cutoff),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Whether all subset sums are distinct.
    Check(SetArgs),
    /// Minimum gap between subset sums (real sets allowed).
    Separation(SetArgs),
    /// Print the n-element Conway–Guy set.
    ConwayGuy {
        #[arg(short = 'n')]
        n: usize,
    },
    /// Exact multiplicities of the signed walk.
    Spectrum(SetArgs),
    /// Binned walk law.
    Histogram {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = 200)]
        bins: usize,
    },
    /// Exact collision probability Σr²/4ⁿ.
    Collision(SetArgs),
    /// Near/far/full integrals of sinc²·∏cos².
    Integral {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        quad: QuadArgs,
        #[arg(long, value_enum)]
        region: Option<Region>,
    },
    /// L² distance between the smoothed walk law and the matched Gaussian.
    GaussDist(SetArgs),
    /// Inequality ledger.
    Bounds(SetArgs),
    /// Full diagnostic report.
    Diagnostics {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Search for near-distinct sets under a budget on the largest element.
    Search {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        max_a_n: u64,
        #[arg(long, default_value_t = 10_000)]
        iterations: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "random")]
        strategy: String,
        /// CSV log of improvements.
        #[arg(long, value_name = "FILE")]
        log: Option<PathBuf>,
        /// Worker threads (overrides SUBSETSUM_THREADS; 0 = auto).
        #[arg(long)]
        threads: Option<usize>,
    },
}

enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Domain(Error::Io(e))
    }
}

type CliResult = std::result::Result<(), CliError>;

/// Parse `args` (including the program name) and run, writing to the given
/// streams. Returns the process exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    let outcome = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => {
            let mut buffer = Vec::new();
            let r = pool.install(|| execute(&cli, threads, &mut buffer));
            match stdout.write_all(&buffer).and_then(|_| stdout.flush()) {
                Ok(()) => r,
                Err(e) => r.and(Err(e.into())),
            }
        }
        Err(e) => Err(CliError::Domain(Error::InvalidArgument(format!(
            "thread pool: {e}"
        )))),
    };
    match outcome {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(CliError::Domain(e)) => {
            let _ = writeln!(
                stderr,
                "{}",
                json!({"error": e.kind(), "message": e.to_string()})
            );
            1
        }
    }
}

/// Entry point for the binary.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    run_with(args, &mut out, &mut err)
}

fn read_text(args: &SetArgs) -> std::result::Result<(String, bool), CliError> {
    match (&args.set, &args.elements) {
        (Some(path), _) => Ok((std::fs::read_to_string(path)?, false)),
        (None, Some(list)) => Ok((list.clone(), true)),
        (None, None) => Err(CliError::Usage(
            "one of --set FILE or --elements LIST is required".into(),
        )),
    }
}

fn integer_set(args: &SetArgs) -> std::result::Result<IntegerSet, CliError> {
    let (text, inline) = read_text(args)?;
    Ok(if inline {
        IntegerSet::new(parse_inline(&text)?)?
    } else {
        parse_integer_set(&text)?
    })
}

fn real_set(args: &SetArgs) -> std::result::Result<RealSet, CliError> {
    let (text, inline) = read_text(args)?;
    Ok(if inline {
        RealSet::new(parse_inline(&text)?)?
    } else {
        parse_real_set(&text)?
    })
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult {
    serde_json::to_writer(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

/// `key,value` lines for a nested JSON value, keys joined with '.'.
fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, rows);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object()) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, rows);
            }
        }
        Value::Array(items) => {
            let joined: Vec<String> = items.iter().map(scalar).collect();
            rows.push((prefix.to_string(), joined.join(";")));
        }
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn emit_key_value_csv<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult {
    let value = serde_json::to_value(value).map_err(io::Error::from)?;
    let mut rows = Vec::new();
    flatten("", &value, &mut rows);
    writeln!(out, "key,value")?;
    for (k, v) in rows {
        writeln!(out, "{k},{v}")?;
    }
    Ok(())
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn execute(cli: &Cli, env_threads: usize, stdout: &mut Vec<u8>) -> CliResult {
    match &cli.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            dispatch(cli, env_threads, &mut file)?;
            file.flush()?;
            Ok(())
        }
        None => dispatch(cli, env_threads, stdout),
    }
}

fn dispatch(cli: &Cli, env_threads: usize, out: &mut dyn Write) -> CliResult {
    let csv = cli.format == Format::Csv;
    match &cli.command {
        Command::Check(args) => {
            let set = integer_set(args)?;
            let verdict = check_distinct(&set)?;
            let witness = verdict.witness_values(&set);
            if csv {
                writeln!(out, "is_distinct,witness_left,witness_right")?;
                let (l, r) = witness
                    .map(|(l, r)| (join(&l), join(&r)))
                    .unwrap_or_default();
                writeln!(out, "{},{l},{r}", verdict.is_distinct)?;
            } else {
                let mut obj = json!({"is_distinct": verdict.is_distinct});
                if let Some((l, r)) = witness {
                    obj["witness"] = json!([l, r]);
                }
                emit_json(out, &obj)?;
            }
        }
        Command::Separation(args) => {
            let set = real_set(args)?;
            let sep = separation(&set)?;
            if csv {
                writeln!(out, "separation,one_separated\n{sep},{}", sep >= 1.0)?;
            } else {
                emit_json(
                    out,
                    &json!({"separation": sep, "one_separated": sep >= 1.0}),
                )?;
            }
        }
        Command::ConwayGuy { n } => {
            let set = conway_guy(*n)?;
            if csv {
                write!(out, "{}", format_set(&set))?;
            } else {
                emit_json(out, &json!({"elements": set.elements()}))?;
            }
        }
        Command::Spectrum(args) => {
            let spec = build_spectrum(&integer_set(args)?)?;
            if csv {
                write_spectrum_csv(&spec, &mut *out)?;
            } else {
                write!(
                    out,
                    "{{\"n\":{},\"offset\":{},\"entries\":[",
                    spec.n(),
                    spec.offset()
                )?;
                for (i, (v, c)) in spec.nonzero().enumerate() {
                    let sep = if i == 0 { "" } else { "," };
                    write!(out, "{sep}[{v},{c}]")?;
                }
                writeln!(out, "]}}")?;
            }
        }
        Command::Histogram { set, bins } => {
            let spec = build_spectrum(&integer_set(set)?)?;
            let h = histogram(&spec, *bins)?;
            if csv {
                write_histogram_csv(&h, &mut *out)?;
            } else {
                let rows: Vec<Value> = h
                    .iter()
                    .map(|b| json!({"bin_center": b.center, "mass": b.mass}))
                    .collect();
                emit_json(out, &rows)?;
            }
        }
        Command::Collision(args) => {
            let spec = build_spectrum(&integer_set(args)?)?;
            let c = collision_probability(&spec)?;
            if csv {
                writeln!(
                    out,
                    "numerator,denominator_log2,value\n{},{},{}",
                    c.numerator, c.denominator_log2, c.value
                )?;
            } else {
                emit_json(
                    out,
                    &json!({"numerator": c.numerator.to_string(), "value": c.value}),
                )?;
            }
        }
        Command::Integral { set, quad, region } => {
            let cfg = quad.config();
            let set = steps_for_integral(set)?;
            let floor = crate::numeric::pow2(-(set.len() as i64) - 1);
            let (name, value, error) = match region {
                None => {
                    let r = match &set {
                        EitherSet::Int(s) => region_integrals(s, &cfg)?,
                        EitherSet::Real(s) => region_integrals(s, &cfg)?,
                    };
                    return if csv {
                        emit_key_value_csv(out, &r)
                    } else {
                        emit_json(out, &r)
                    };
                }
                Some(Region::Near) => {
                    let e = set.with(|s| integrate_near(s, &cfg), |s| integrate_near(s, &cfg))?;
                    ("near", e.value, e.error)
                }
                Some(Region::Far) => {
                    let e = set.with(|s| integrate_far(s, &cfg), |s| integrate_far(s, &cfg))?;
                    ("far", e.value, e.error)
                }
                Some(Region::Full) => {
                    let e = set.with(|s| integrate_full(s, &cfg), |s| integrate_full(s, &cfg))?;
                    ("full", e.value, e.error)
                }
            };
            if csv {
                writeln!(
                    out,
                    "region,value,error,theorem1_floor\n{name},{value},{error},{floor}"
                )?;
            } else {
                emit_json(
                    out,
                    &json!({"region": name, "value": value, "error": error, "theorem1_floor": floor}),
                )?;
            }
        }
        Command::GaussDist(args) => {
            let spec = build_spectrum(&integer_set(args)?)?;
            let d =
                gaussian_l2_distance(&SmoothedDensity::new(&spec), &GaussianModel::matched(&spec))?;
            if csv {
                writeln!(
                    out,
                    "l2_smoothed,l2_gaussian,cross,distance,distance_times_2n"
                )?;
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    d.l2_smoothed, d.l2_gaussian, d.cross, d.distance, d.distance_times_2n
                )?;
            } else {
                emit_json(out, &d)?;
            }
        }
        Command::Bounds(args) => {
            let r = bounds_report(&integer_set(args)?);
            if csv {
                writeln!(out, "{BOUNDS_CSV_HEADER}\n{}", bounds_csv_row(&r))?;
            } else {
                let mut v = serde_json::to_value(&r).map_err(io::Error::from)?;
                v["schema_version"] = json!(crate::bounds::SCHEMA_VERSION);
                emit_json(out, &v)?;
            }
        }
        Command::Diagnostics { set, quad } => {
            let d = diagnostics(&integer_set(set)?, &quad.config())?;
            if csv {
                emit_key_value_csv(out, &d)?;
            } else {
                emit_json(out, &d)?;
            }
        }
        Command::Search {
            n,
            max_a_n,
            iterations,
            seed,
            strategy,
            log,
            threads,
        } => {
            let cfg = SearchConfig {
                n: *n,
                max_a_n: *max_a_n,
                iterations: *iterations,
                seed: *seed,
                strategy: strategy.parse::<Strategy>()?,
            };
            let result = search_with_threads(&cfg, threads.unwrap_or(env_threads))?;
            if let Some(path) = log {
                let mut f = BufWriter::new(File::create(path)?);
                write_improvements_csv(&result, *n, &mut f)?;
                f.flush()?;
            }
            if csv {
                write_improvements_csv(&result, *n, &mut *out)?;
            } else {
                emit_json(out, &json!({"config": cfg, "result": result}))?;
            }
        }
    }
    Ok(())
}

enum EitherSet {
    Int(IntegerSet),
    Real(RealSet),
}

impl EitherSet {
    fn len(&self) -> usize {
        match self {
            EitherSet::Int(s) => s.len(),
            EitherSet::Real(s) => s.len(),
        }
    }

    fn with<R>(
        &self,
        int: impl FnOnce(&IntegerSet) -> crate::Result<R>,
        real: impl FnOnce(&RealSet) -> crate::Result<R>,
    ) -> crate::Result<R> {
        match self {
            EitherSet::Int(s) => int(s),
            EitherSet::Real(s) => real(s),
        }
    }
}

/// Integer parse first so integer inputs get the periodized and exact routes.
fn steps_for_integral(args: &SetArgs) -> std::result::Result<EitherSet, CliError> {
    match integer_set(args) {
        Ok(s) => Ok(EitherSet::Int(s)),
        Err(CliError::Domain(Error::Parse { .. })) => Ok(EitherSet::Real(real_set(args)?)),
        Err(e) => Err(e),
    }
}
