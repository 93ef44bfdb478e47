//! `fschar` computes tri-graded characters of Feigin-Stoyanovsky-type
//! subspaces for affine sl(3) by several independent methods and checks
//! the methods against each other.
//!
//! Exit codes: 0 on success (and agreement for `verify`), 1 on a runtime
//! failure or a verification discrepancy, 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fschar_core::cache::{cache_load, cache_store};
use fschar_core::error::Error;
use fschar_core::fermionic::{binom_matrix_det, matrix_bundle};
use fschar_core::verify::verify_with;
use fschar_core::{enumerate_admissible, Method, TriGradedSeries, Weight};

const CACHE_DIR_ENV: &str = "FSCHAR_CACHE_DIR";

#[derive(Parser)]
#[command(
    name = "fschar",
    version,
    about = "Exact tri-graded characters of Feigin-Stoyanovsky-type subspaces for affine sl(3)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for enumeration and summation (default: all cores).
    /// Output bytes do not depend on this.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Directory for cached series; FSCHAR_CACHE_DIR is honored when the
    /// flag is absent. No caching when neither is set.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SeriesArgs {
    /// Weight as comma-separated components, e.g. 2,0,0.
    #[arg(long)]
    weight: String,

    /// Inclusive maximal q-degree.
    #[arg(long)]
    cutoff: u32,

    /// Output format for the series payload on stdout.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FermionicForm {
    M,
    N,
    Georgiev,
}

#[derive(Subcommand)]
enum Command {
    /// Character by admissible-configuration enumeration (or, with --list,
    /// the configurations themselves for any ell).
    Configs {
        #[command(flatten)]
        series: SeriesArgs,

        /// Number of colors; the weight needs ell + 1 components. Values
        /// other than 2 require --list (characters are two-color only).
        #[arg(long, default_value_t = 2)]
        ell: usize,

        /// Emit the enumerated configurations as JSON lines instead of the
        /// character series.
        #[arg(long)]
        list: bool,
    },
    /// Character by quasi-particle basis enumeration.
    Qp {
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Character by the fermionic sum, in one of its three forms.
    Fermionic {
        #[command(flatten)]
        series: SeriesArgs,

        #[arg(long, value_enum)]
        form: FermionicForm,
    },
    /// The Q, L, and R matrices for a weight, as JSON.
    Matrices {
        /// Weight as comma-separated components, e.g. 2,0,0.
        #[arg(long)]
        weight: String,
    },
    /// Run every supported method and compare them coefficient-wise.
    Verify {
        /// Weight as comma-separated components, e.g. 2,0,0.
        #[arg(long)]
        weight: String,

        #[arg(long)]
        cutoff: u32,

        /// Corrupt one coefficient of this method's series before the
        /// comparison; exercises the discrepancy path.
        #[arg(long, hide = true)]
        corrupt: Option<String>,
    },
    /// Check that every binomial-matrix determinant in the range equals 1.
    DetCheck {
        #[arg(long, default_value_t = -20, allow_negative_numbers = true)]
        p_min: i64,

        #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
        p_max: i64,

        #[arg(long, default_value_t = 10)]
        r_max: u32,
    },
}

/// Anything that stops a run: a bad invocation (exit 2) or a failure while
/// doing the work (exit 1). Errors coming out of the core library that mean
/// "you asked for something the math does not define" count as usage errors.
enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::DimensionMismatch { .. }
            | Error::UnsupportedWeight(_)
            | Error::ChargeOutOfRange { .. }
            | Error::QueryBeyondCutoff { .. } => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let threads = jobs.max(1);
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("fschar: could not configure {threads} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let cache_dir = cli
        .cache_dir
        .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from));

    match run(cli.command, cache_dir.as_deref()) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("fschar: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("fschar: {msg}");
            ExitCode::from(1)
        }
    }
}

fn parse_weight(text: &str) -> Result<Weight, CliError> {
    let components: Result<Vec<u32>, _> = text.split(',').map(|p| p.trim().parse()).collect();
    match components {
        Ok(c) if !c.is_empty() => Ok(Weight::new(c)),
        _ => Err(CliError::Usage(format!(
            "could not parse weight `{text}`: expected comma-separated nonnegative integers"
        ))),
    }
}

fn run(command: Command, cache_dir: Option<&std::path::Path>) -> Result<ExitCode, CliError> {
    match command {
        Command::Configs { series, ell, list } => {
            let w = parse_weight(&series.weight)?;
            if list {
                for c in enumerate_admissible(&w, ell, series.cutoff)? {
                    println!("{}", serde_json::to_string(&c).expect("configuration JSON"));
                }
                return Ok(ExitCode::SUCCESS);
            }
            if ell != 2 {
                eprintln!(
                    "fschar: characters are defined for ell = 2 only; use --list for other ell"
                );
                return Ok(ExitCode::from(2));
            }
            emit_series(&w, Method::Configs, &series, cache_dir)
        }
        Command::Qp { series } => {
            let w = parse_weight(&series.weight)?;
            emit_series(&w, Method::Qp, &series, cache_dir)
        }
        Command::Fermionic { series, form } => {
            let w = parse_weight(&series.weight)?;
            let method = match form {
                FermionicForm::M => Method::FermionicM,
                FermionicForm::N => Method::FermionicN,
                FermionicForm::Georgiev => Method::Georgiev,
            };
            emit_series(&w, method, &series, cache_dir)
        }
        Command::Matrices { weight } => {
            let w = parse_weight(&weight)?;
            let bundle = matrix_bundle(&w)?;
            println!("{}", serde_json::to_string(&bundle).expect("matrix JSON"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            weight,
            cutoff,
            corrupt,
        } => {
            let w = parse_weight(&weight)?;
            let sabotage = match corrupt {
                Some(name) => Some(Method::from_str(&name).map_err(CliError::Usage)?),
                None => None,
            };
            let report = verify_with(&w, cutoff, &Method::ALL, sabotage)?;
            for method in &report.methods {
                let timing = report
                    .timings
                    .get(method)
                    .map(|d| format!("{:.1} ms", d.as_secs_f64() * 1e3))
                    .unwrap_or_default();
                let count = report.counts.get(method).copied().unwrap_or(0);
                eprintln!("fschar: {method}: {count} objects, {timing}");
            }
            println!("{}", serde_json::to_string(&report).expect("report JSON"));
            match report.agree {
                Some(true) => Ok(ExitCode::SUCCESS),
                Some(false) => Ok(ExitCode::from(1)),
                None => {
                    eprintln!(
                        "fschar: fewer than two methods support weight ({w}); nothing to verify"
                    );
                    Ok(ExitCode::from(2))
                }
            }
        }
        Command::DetCheck {
            p_min,
            p_max,
            r_max,
        } => {
            let start = Instant::now();
            let mut failures = Vec::new();
            for p in p_min..=p_max {
                for r in 0..=r_max {
                    let det = binom_matrix_det(p, r);
                    if det != 1.into() {
                        failures.push(serde_json::json!({
                            "p": p, "r": r, "det": det.to_string(),
                        }));
                    }
                }
            }
            eprintln!(
                "fschar: checked {} determinants in {:.1} ms",
                (p_max - p_min + 1) * (r_max as i64 + 1),
                start.elapsed().as_secs_f64() * 1e3
            );
            let all_one = failures.is_empty();
            println!(
                "{}",
                serde_json::json!({
                    "p_min": p_min, "p_max": p_max, "r_max": r_max,
                    "all_one": all_one, "failures": failures,
                })
            );
            Ok(if all_one {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

/// Computes (or loads) the series for one method and prints it on stdout.
fn emit_series(
    w: &Weight,
    method: Method,
    args: &SeriesArgs,
    cache_dir: Option<&std::path::Path>,
) -> Result<ExitCode, CliError> {
    let start = Instant::now();
    let series = compute_cached(w, method, args.cutoff, cache_dir)?;
    eprintln!(
        "fschar: {method} for ({w}) up to q^{}: {} terms, {:.1} ms",
        args.cutoff,
        series.num_terms(),
        start.elapsed().as_secs_f64() * 1e3
    );
    match args.format {
        Format::Json => println!("{}", series.to_json()),
        Format::Csv => print!("{}", series.to_csv()),
    }
    Ok(ExitCode::SUCCESS)
}

fn compute_cached(
    w: &Weight,
    method: Method,
    cutoff: u32,
    cache_dir: Option<&std::path::Path>,
) -> Result<TriGradedSeries, Error> {
    if let Some(dir) = cache_dir {
        match cache_load(dir, w, method, cutoff) {
            Ok(series) => {
                eprintln!("fschar: cache hit for {method} ({w}) D={cutoff}");
                return Ok(series);
            }
            Err(Error::CacheMiss(_)) => {}
            Err(e) => return Err(e), // corrupt entries are never reused silently
        }
        let series = method.compute(w, cutoff)?;
        cache_store(dir, w, method, &series)?;
        return Ok(series);
    }
    method.compute(w, cutoff)
}
