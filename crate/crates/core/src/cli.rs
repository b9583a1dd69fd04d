//! Command-line front end.
//!
//! Exit codes: 0 when every check holds, 1 when a violation or an equality
//! residual beyond tolerance was found, 2 on usage or configuration errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::entropy::{qubit_entropy_from_variance, qubit_variance_from_entropy, RenyiIndex};
use crate::error::{Error, Result};
use crate::explorer::{map_region, minimize_spin_variance_sum, reconstruction_errors, scan_violations, DEFAULT_RESTARTS};
use crate::observables::{axis_at_angle, qubit_observable};
use crate::relations::RelationId;
use crate::report::{format_number, write_region_csv, RunSummary};
use crate::states::{derive_seed, random_mixed};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker-thread count (0 = automatic).
pub const THREADS_ENV: &str = "UR_EQUIV_THREADS";

/// Largest reconstruction error accepted by `reconstruct`.
pub const RECONSTRUCTION_TOL: f64 = 1e-7;

#[derive(Parser, Debug)]
#[command(name = "ur-equiv", version, about = "Check variance and entropy uncertainty relations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; data goes to stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample random contexts and evaluate relations.
    Check {
        /// Comma-separated relation ids, or `all`.
        #[arg(long, default_value = "all")]
        relations: String,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
    },
    /// Entropy pairs of Haar pure qubit states for σ_z and an axis at `theta`.
    Region {
        /// Angle between the two measurement axes, degrees.
        #[arg(long, default_value_t = 90.0)]
        theta: f64,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
    /// Minimize V(J_x) + V(J_z) over pure states of spin (dim−1)/2.
    Minimize {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
    },
    /// Map a normalized qubit variance to a Rényi entropy or back.
    Convert {
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        value: f64,
    },
    /// Recover Born probabilities of random (state, observable) pairs from
    /// variances and from covariances.
    Reconstruct {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
    /// Check the three-Pauli equality at given Rényi indices.
    Pauli {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// variance → entropy
    V2h,
    /// entropy → variance
    H2v,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("{THREADS_ENV} must be a non-negative integer, got {raw:?}")))?;
    // A second call in the same process finds the pool already built; that is fine.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn renyi(alpha: f64) -> Result<RenyiIndex> {
    RenyiIndex::new(alpha)
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    let seed = cli.common.seed;
    let mut summary;
    let mut code = EXIT_OK;
    let mut region = None;

    match &cli.command {
        Command::Check { relations, n } => {
            let ids = RelationId::parse_list(relations)?;
            summary = RunSummary::new("check", seed);
            summary.config.insert("relations".into(), ids.iter().map(|i| i.as_str()).collect::<Vec<_>>().join(","));
            summary.config.insert("n".into(), n.to_string());
            let scan = scan_violations(&ids, *n, seed)?;
            if scan.total_violations() > 0 {
                code = EXIT_VIOLATION;
            }
            summary.relations = scan.entries;
        }
        Command::Region { theta, n, alpha } => {
            if *n == 0 {
                return Err(Error::InvalidArgument("--n must be >= 1".into()));
            }
            let a = qubit_observable(axis_at_angle(0.0))?;
            let b = qubit_observable(axis_at_angle(*theta))?;
            let sample = map_region(&a, &b, *n, seed, renyi(*alpha)?)?;
            summary = RunSummary::new("region", seed);
            summary.config.insert("theta".into(), format_number(*theta));
            summary.config.insert("alpha".into(), format_number(*alpha));
            summary.config.insert("n".into(), n.to_string());
            summary.values.insert("violations".into(), sample.violations as f64);
            summary.values.insert("worst_slack".into(), sample.worst_slack);
            if sample.violations > 0 {
                code = EXIT_VIOLATION;
            }
            region = Some(sample.points);
        }
        Command::Minimize { dim, restarts } => {
            let r = minimize_spin_variance_sum(*dim, *restarts, seed)?;
            summary = RunSummary::new("minimize", seed);
            summary.config.insert("dim".into(), dim.to_string());
            summary.config.insert("restarts".into(), restarts.to_string());
            summary.values.insert("best_value".into(), r.best_value);
            summary.values.insert("evaluations".into(), r.evaluations as f64);
            summary.values.insert("converged".into(), if r.converged { 1.0 } else { 0.0 });
        }
        Command::Convert { direction, alpha, value } => {
            let idx = renyi(*alpha)?;
            let out = match direction {
                Direction::V2h => qubit_entropy_from_variance(*value, idx)?,
                Direction::H2v => qubit_variance_from_entropy(*value, idx)?,
            };
            if cli.common.format.is_none() && cli.common.out.is_none() {
                writeln!(stdout, "{}", format_number(out))?;
                return Ok(EXIT_OK);
            }
            summary = RunSummary::new("convert", seed);
            let dir = match direction {
                Direction::V2h => "v2h",
                Direction::H2v => "h2v",
            };
            summary.config.insert("direction".into(), dir.into());
            summary.config.insert("alpha".into(), format_number(*alpha));
            summary.values.insert("input".into(), *value);
            summary.values.insert("output".into(), out);
        }
        Command::Reconstruct { dim, n } => {
            summary = RunSummary::new("reconstruct", seed);
            summary.config.insert("dim".into(), dim.to_string());
            summary.config.insert("n".into(), n.to_string());
            let (var_err, cov_err, flagged) = reconstruction_errors(*dim, *n, seed)?;
            summary.values.insert("max_error_variances".into(), var_err);
            summary.values.insert("max_error_covariances".into(), cov_err);
            summary.values.insert("flagged".into(), flagged as f64);
            if var_err > RECONSTRUCTION_TOL || cov_err > RECONSTRUCTION_TOL {
                code = EXIT_VIOLATION;
            }
        }
        Command::Pauli { alpha, beta, gamma, n } => {
            summary = RunSummary::new("pauli", seed);
            summary.config.insert("alpha".into(), format_number(*alpha));
            summary.config.insert("beta".into(), format_number(*beta));
            summary.config.insert("gamma".into(), format_number(*gamma));
            let idx = [renyi(*alpha)?, renyi(*beta)?, renyi(*gamma)?];
            let mut worst: f64 = 0.0;
            for i in 0..*n as u64 {
                let rho = random_mixed(2, derive_seed(seed, i))?;
                let lhs = crate::relations::pauli_triple_sum(&rho, idx)?;
                worst = worst.max((lhs - (4.0 - 2.0 * rho.purity())).abs());
            }
            summary.values.insert("max_residual".into(), worst);
            if worst > crate::relations::SATISFIED_TOL {
                code = EXIT_VIOLATION;
            }
        }
    }
    summary.wall_ms = start.elapsed().as_millis() as u64;

    let format = cli.common.format.unwrap_or(if region.is_some() { Format::Csv } else { Format::Json });
    let mut sink: Box<dyn Write + '_> = match &cli.common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(&mut *stdout),
    };
    match (format, region) {
        (Format::Csv, Some(points)) => write_region_csv(&points, &mut sink)?,
        (Format::Csv, None) => summary.write_csv(&mut sink)?,
        (Format::Json, _) => writeln!(sink, "{}", summary.to_json()?)?,
    }
    sink.flush()?;
    Ok(code)
}
