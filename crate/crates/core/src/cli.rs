//! Command-line front end. Exit codes: 0 ok, 1 usage, 2 configuration or
//! evaluation error, 3 check failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algorithms;
use crate::config::{check_points, ConfigError, Resolved, RunConfig};
use crate::cost::{int, parse_rational, Rational};
use crate::hardware::RoutingRatio;
use crate::report::{self, Format, ReportError, TableInputs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qfly-pbc",
    version,
    about = "Logical-cycle estimates for QAOA and DQI on a distributed Q-Fly machine"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output format; overrides the config file.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Comma-separated T_Bell evaluation points, e.g. `2,5,10` or `5/2`.
    #[arg(long = "t-bell", global = true, value_name = "LIST", value_parser = parse_list)]
    pub t_bell: Option<RationalList>,
}

#[derive(Debug, Clone)]
pub struct RationalList(pub Vec<Rational>);

fn parse_list(text: &str) -> Result<RationalList, String> {
    text.split(',')
        .map(|s| parse_rational(s.trim()).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()
        .map(RationalList)
}

fn parse_one(text: &str) -> Result<Rational, String> {
    parse_rational(text.trim()).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Qaoa,
    Dqi,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stage-by-stage breakdown of one algorithm.
    Estimate {
        #[arg(value_enum)]
        algorithm: AlgorithmArg,
    },
    /// Full results table with baseline columns.
    #[command(visible_alias = "compare")]
    Table {
        /// Compare against the embedded expected values; exit 3 on mismatch.
        #[arg(long)]
        check: bool,
    },
    /// Every stage and total over a range of T_Bell.
    Sweep {
        #[arg(long, value_enum, default_value = "qaoa")]
        algorithm: AlgorithmArg,
        /// Range start; defaults to the domain minimum.
        #[arg(long, value_parser = parse_one)]
        from: Option<Rational>,
        /// Range end; defaults to the domain maximum.
        #[arg(long, value_parser = parse_one)]
        to: Option<Rational>,
        #[arg(long, value_parser = parse_one, default_value = "1")]
        step: Rational,
    },
    /// Smallest precision where phase-gradient phasing beats gridsynth.
    Crossover {
        /// Routing ratio r in [0, 1].
        #[arg(long, value_parser = parse_one, default_value = "1")]
        ratio: Rational,
        /// T_Bell at which to compare.
        #[arg(long = "at", value_parser = parse_one, default_value = "10")]
        at: Rational,
    },
    /// Diameter, switch ports and broadcast schedules.
    Topology,
    /// Hardware profile checks and the clause-pipeline simulation.
    Validate,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(Box<ConfigError>),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    CheckFailed(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(Box::new(e))
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) => EXIT_CHECK,
            _ => EXIT_CONFIG,
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load(global: &GlobalArgs) -> Result<(Resolved, Format, Vec<Rational>), CliError> {
    let mut config = match &global.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(list) = &global.t_bell {
        config.t_bell = list.0.clone();
    }
    let resolved = config.resolve()?;
    let format = global.format.unwrap_or(resolved.config.format);
    let points = resolved.config.t_bell.clone();
    Ok((resolved, format, points))
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let (resolved, format, points) = load(&cli.global)?;
    let cfg = &resolved.config;
    let hw = &cfg.hardware;
    let topo = &resolved.topology;
    let text = match &cli.command {
        Command::Estimate { algorithm } => {
            let report = match algorithm {
                AlgorithmArg::Qaoa => algorithms::qaoa_iteration(&cfg.qaoa, topo, hw).map_err(ReportError::from)?,
                AlgorithmArg::Dqi => algorithms::dqi_total(&cfg.dqi, hw).map_err(ReportError::from)?,
            };
            report::render_table(&report::estimate_table(&report, &points)?, format)?
        }
        Command::Table { check } => {
            let table = report::build_table(&TableInputs {
                hardware: hw,
                topology: topo,
                qaoa: &cfg.qaoa,
                dqi: &cfg.dqi,
                subroutines: &cfg.subroutines,
                scenarios: &resolved.scenarios,
                t_points: &points,
            })?;
            let text = report::render_table(&table, format)?;
            if *check {
                out.write_all(text.as_bytes())?;
                let result = report::check_table(&table);
                if !result.passed() {
                    for m in &result.mismatches {
                        let actual = m.actual.map(|v| v.to_string()).unwrap_or_else(|| "missing".into());
                        writeln!(
                            err,
                            "mismatch: {} [{}] expected {} got {actual}",
                            m.row, m.column, m.expected
                        )?;
                    }
                    return Err(CliError::CheckFailed(format!(
                        "{} of {} checked cells differ from the expected values",
                        result.mismatches.len(),
                        result.checked
                    )));
                }
                writeln!(err, "check: {} cells match", result.checked)?;
                return Ok(());
            }
            text
        }
        Command::Sweep {
            algorithm,
            from,
            to,
            step,
        } => {
            let domain = hw.domain();
            let from = from.clone().unwrap_or_else(|| domain.lo().clone());
            let to = to.clone().unwrap_or_else(|| domain.hi().clone());
            let points = report::sweep_points(&from, &to, step, domain)?;
            let report = match algorithm {
                AlgorithmArg::Qaoa => algorithms::qaoa_iteration(&cfg.qaoa, topo, hw).map_err(ReportError::from)?,
                AlgorithmArg::Dqi => algorithms::dqi_total(&cfg.dqi, hw).map_err(ReportError::from)?,
            };
            report::render_sweep(&report::sweep(&report, &points)?, format)?
        }
        Command::Crossover { ratio, at } => {
            let r = RoutingRatio::new(ratio.clone()).map_err(|e| CliError::Invalid(e.to_string()))?;
            if *at < int(0) {
                return Err(CliError::Invalid("T_Bell must be non-negative".into()));
            }
            report::render_crossover(&report::crossover(&r, at, hw)?, format)?
        }
        Command::Topology => report::render_topology(&report::topology_report(topo, hw.domain())?, format)?,
        Command::Validate => {
            check_points(&points, hw)?;
            let summary = report::validate_summary(hw, topo, &cfg.qaoa, &points)?;
            let text = report::render_validate(&summary, format)?;
            out.write_all(text.as_bytes())?;
            let inexact = summary.pipeline.rows.iter().filter(|r| r.slack != 0).count();
            if inexact > 0 {
                writeln!(err, "note: {inexact} point(s) finish below the analytic bound")?;
            }
            return Ok(());
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

/// Entry point for the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}
