//! Command-line front end: UPO export, sequence generation, breakpoint and
//! interval reports, oracle metrics, BLER simulation and the β study.

pub mod config;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use betapolar::beta_expansion::{breakpoints, refine_interval};
use betapolar::formats::{self, SequenceSource};
use betapolar::oracles::{bec_reliability, ga_reliability, Reliability};
use betapolar::partial_order::cover_edges;
use betapolar::simulation::{convergence_study, run_bler, ConflictPolicy, StudyConfig};
use betapolar::{BetaInterval, Decision, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{Construction, SimulationFile};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute(Error::Domain(_)) => EXIT_USAGE,
            CliError::Compute(
                Error::IllConditionedBeta { .. }
                | Error::AmbiguousInterval { .. }
                | Error::Infeasible { .. }
                | Error::UndecidablePair { .. },
            ) => EXIT_COMPUTE,
            CliError::Compute(_) | CliError::Io { .. } => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "betapolar", version, about = "Polar code construction from partial orders and polarization weights")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cover edges of the partial order at width n.
    Upo {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=10))]
        n: u32,
        #[arg(long, value_enum, default_value_t = UpoFormat::Edges)]
        format: UpoFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reliability sequence from a β, a β interval or an oracle.
    Seq {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=16))]
        n: u32,
        #[command(flatten)]
        source: SeqSource,
        #[command(flatten)]
        oracle: OracleParams,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Interior breakpoints with their polynomials.
    Breakpoints {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=12))]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Narrows an interval by pair decisions such as `24<11`.
    Refine {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=12))]
        n: u32,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        interval: Vec<f64>,
        #[arg(long = "decide", value_parser = parse_decision)]
        decisions: Vec<Decision>,
    },
    /// Per-index oracle metrics as CSV.
    Oracle {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=16))]
        n: u32,
        #[arg(long, value_enum)]
        kind: OracleKind,
        #[command(flatten)]
        params: OracleParams,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// BLER simulation described by a config file.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence of the β interval, one row per doubling step.
    Study {
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(2..=10))]
        n_max: u32,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = betapolar::oracles::SNR_GRID_DB)]
        snr_grid: Vec<f64>,
        /// Re-orient GA decisions that exclude the target β instead of failing.
        #[arg(long)]
        prefer_beta: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UpoFormat {
    Edges,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Ga,
    Bec,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SeqSource {
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    interval: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    oracle: Option<OracleKind>,
}

#[derive(Debug, Args)]
pub struct OracleParams {
    /// GA design SNR in dB.
    #[arg(long, default_value_t = betapolar::oracles::DEFAULT_DESIGN_SNR_DB, allow_negative_numbers = true)]
    snr: f64,
    /// BEC erasure probability.
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
}

fn parse_decision(text: &str) -> Result<Decision, String> {
    let (a, b) = text
        .split_once('<')
        .ok_or_else(|| format!("decision {text:?} is not of the form a<b"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| format!("{s:?} in {text:?} is not an index"))
    };
    Ok(Decision::new(parse(a)?, parse(b)?))
}

fn interval(values: &[f64]) -> Result<BetaInterval, CliError> {
    match values {
        [] => Ok(BetaInterval::FULL),
        [lo, hi] => BetaInterval::new(*lo, *hi).map_err(|e| CliError::Usage(e.to_string())),
        _ => Err(CliError::Usage("--interval takes LO and HI".into())),
    }
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn sequence(n: u32, source: &SeqSource, params: &OracleParams) -> Result<String, CliError> {
    let (seq, label) = if let Some(beta) = source.beta {
        (betapolar::beta_expansion::rank_by_pw(n, beta)?, SequenceSource::Beta(beta))
    } else if let Some(values) = &source.interval {
        let iv = interval(values)?;
        (betapolar::beta_expansion::order_for_interval(n, iv)?, SequenceSource::Interval(iv))
    } else {
        let (construction, spec) = match source.oracle {
            Some(OracleKind::Ga) => (Construction::Ga(params.snr), format!("ga:{}", formats::real(params.snr))),
            _ => (Construction::Bec(params.eps), format!("bec:{}", formats::real(params.eps))),
        };
        (construction.sequence(n)?, SequenceSource::Oracle(spec))
    };
    Ok(formats::sequence_file(&seq, &label))
}

/// Runs one command, writing its report to `out` or `stdout`.
pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Upo { n, format, out } => {
            let set = cover_edges(n)?;
            let text = match format {
                UpoFormat::Edges => formats::edge_list(&set),
                UpoFormat::Dot => formats::dot(&set),
            };
            emit(&text, out.as_deref(), stdout)
        }
        Command::Seq { n, source, oracle, out } => {
            if let Some(values) = &source.interval {
                interval(values)?;
            }
            let text = single_threaded(|| sequence(n, &source, &oracle))?;
            emit(&text, out.as_deref(), stdout)
        }
        Command::Breakpoints { n, out } => {
            let set = single_threaded(|| breakpoints(n))?;
            emit(&formats::breakpoint_report(&set), out.as_deref(), stdout)
        }
        Command::Refine { n, interval: values, decisions } => {
            let start = interval(&values)?;
            let refined = single_threaded(|| refine_interval(n, start, &decisions))?;
            emit(&format!("{refined}\n"), None, stdout)
        }
        Command::Oracle { n, kind, params, out } => {
            let rel: Box<dyn Reliability> = match kind {
                OracleKind::Ga => Box::new(ga_reliability(n, params.snr)?),
                OracleKind::Bec => Box::new(bec_reliability(n, params.eps)?),
            };
            emit(&formats::oracle_csv(rel.as_ref()), out.as_deref(), stdout)
        }
        Command::Simulate { config, out } => {
            let text = fs::read_to_string(&config).map_err(|source| CliError::Io {
                path: config.clone(),
                source,
            })?;
            let sim = SimulationFile::parse(&text)?.to_sim()?;
            let points = run_bler(&sim)?;
            emit(&formats::bler_csv(&points), out.as_deref(), stdout)
        }
        Command::Study {
            n_max,
            snr_grid,
            prefer_beta,
            out,
        } => {
            if snr_grid.iter().any(|s| !s.is_finite()) {
                return Err(CliError::Usage("--snr-grid values must be finite".into()));
            }
            let config = StudyConfig {
                n_max,
                snr_grid_db: snr_grid,
                conflict: if prefer_beta {
                    ConflictPolicy::PreferBeta
                } else {
                    ConflictPolicy::Fail
                },
                ..StudyConfig::default()
            };
            let study = single_threaded(|| convergence_study(&config))?;
            emit(&formats::study_tsv(&study.rows), out.as_deref(), stdout)?;
            match study.failure {
                Some((_, e)) => Err(e.into()),
                None => Ok(()),
            }
        }
    }
}

/// Runs `f` on a one-thread pool so that only simulation uses several cores.
fn single_threaded<T: Send, E: Into<CliError> + Send>(f: impl FnOnce() -> Result<T, E> + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(f).map_err(Into::into)
}

/// Parses `args` and runs the command. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
