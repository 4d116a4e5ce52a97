//! Experiment CLI: seeded spectral simulations and exact limit tables,
//! emitted as CSV or JSON. Exit codes: 0 success, 1 config error, 2
//! numerical/io failure, 3 failed mathematical assertion.

use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use disco::ensembles::EnsembleSpec;
use disco::error::{Error, Result};
use disco::experiments::{self, ExperimentConfig};
use disco::limits::MomentTable;
use disco::report::{self, OutputFormat, Sink};

#[derive(Parser)]
#[command(
    name = "disco",
    version,
    about = "Spectral experiments on block-structured random matrix ensembles"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Pooled eigenvalue histogram of a seeded ensemble (or its disco).
    Esd(EsdArgs),
    /// Empirical moments with exact limits and deviations, trace route only.
    Moments(MomentsArgs),
    /// Moment comparison across a list of construction depths.
    Dsweep(DsweepArgs),
    /// Normalized nearest-neighbour eigenvalue spacings of a single draw.
    Gaps(GapsArgs),
    /// Two-ensemble moment sandwich check on the depth-1 construction.
    Conjecture(ConjectureArgs),
    /// Exact integer report on the 20x20 sandwich counterexample.
    Counterexample(OutputArgs),
    /// Exact limiting moment tables from pairing enumeration.
    #[command(name = "limit-moments")]
    LimitMoments(LimitMomentsArgs),
}

#[derive(Args)]
struct EnsembleArgs {
    /// Ensemble token: pst | wigner | blockcirc:<m> | counterexample.
    #[arg(long, default_value = "pst")]
    ensemble: String,
    /// Base matrix order N.
    #[arg(long, default_value_t = 512)]
    size: usize,
    /// Root seed; every trial derives its own sub-streams from it.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct OutputArgs {
    /// Output path, or - for stdout.
    #[arg(long, default_value = "-")]
    out: String,
    /// csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct EsdArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    /// Construction depth d; 0 measures the bare ensemble.
    #[arg(long, default_value_t = 0)]
    depth: usize,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// Moment orders to estimate alongside the histogram.
    #[arg(long, value_delimiter = ',', default_value = "2,4,6,8")]
    moments: Vec<usize>,
    /// Histogram bin count; automatic width selection when omitted.
    #[arg(long)]
    bins: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct MomentsArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 0)]
    depth: usize,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, value_delimiter = ',', default_value = "2,4,6,8")]
    moments: Vec<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DsweepArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    /// Depths to sweep, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    depths: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, value_delimiter = ',', default_value = "2,4,6,8")]
    moments: Vec<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GapsArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 0)]
    depth: usize,
    #[arg(long)]
    bins: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ConjectureArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    /// Second ensemble token (the B side of the pair).
    #[arg(long = "ensemble-b")]
    ensemble_b: String,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
    moments: Vec<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct LimitMomentsArgs {
    /// Construction depth for the disco column.
    #[arg(long, default_value_t = 1)]
    depth: usize,
    /// Even orders 2k to tabulate.
    #[arg(long, value_delimiter = ',', default_value = "2,4,6,8")]
    moments: Vec<usize>,
    /// Which limit law to tabulate: disco | semicircular | gaussian.
    #[arg(long, default_value = "disco")]
    column: String,
    #[command(flatten)]
    output: OutputArgs,
}

fn base_config(e: &EnsembleArgs) -> Result<ExperimentConfig> {
    let spec = EnsembleSpec::parse(&e.ensemble, e.size, e.seed)?;
    Ok(ExperimentConfig::new(spec))
}

fn emit(output: &OutputArgs, csv: String, json: Result<String>) -> Result<()> {
    let format = OutputFormat::from_str(&output.format)?;
    let content = match format {
        OutputFormat::Csv => csv,
        OutputFormat::Json => json?,
    };
    Sink::parse(&output.out).write(&content)
}

fn run(cli: Cli) -> Result<()> {
    let started = Instant::now();
    match cli.cmd {
        Cmd::Esd(a) => {
            let mut cfg = base_config(&a.ensemble)?;
            cfg.depth = a.depth;
            cfg.trials = a.trials;
            cfg.moment_orders = a.moments;
            cfg.bins = a.bins;
            let summary = experiments::run_esd(&cfg)?;
            eprintln!(
                "esd: {} eigenvalues in {} bins, {:.1?}",
                summary.eigenvalues.len(),
                summary.histogram.counts.len(),
                started.elapsed()
            );
            emit(&a.output, report::esd_csv(&summary), report::esd_json(&summary))
        }
        Cmd::Moments(a) => {
            let mut cfg = base_config(&a.ensemble)?;
            cfg.depth = a.depth;
            cfg.trials = a.trials;
            cfg.moment_orders = a.moments;
            let rows = experiments::run_moments(&cfg)?;
            eprintln!("moments: {} orders, {:.1?}", rows.len(), started.elapsed());
            emit(&a.output, report::moments_csv(&rows), report::moments_json(&rows))
        }
        Cmd::Dsweep(a) => {
            let mut cfg = base_config(&a.ensemble)?;
            cfg.trials = a.trials;
            cfg.moment_orders = a.moments;
            let rows = experiments::run_dsweep(&cfg, &a.depths)?;
            eprintln!("dsweep: {} rows, {:.1?}", rows.len(), started.elapsed());
            emit(&a.output, report::dsweep_csv(&rows), report::dsweep_json(&rows))
        }
        Cmd::Gaps(a) => {
            let mut cfg = base_config(&a.ensemble)?;
            cfg.depth = a.depth;
            cfg.bins = a.bins;
            let r = experiments::run_gaps(&cfg)?;
            eprintln!("gaps: {} spacings, {:.1?}", r.spacings.len(), started.elapsed());
            emit(&a.output, report::gaps_csv(&r), report::gaps_json(&r))
        }
        Cmd::Conjecture(a) => {
            let mut cfg = base_config(&a.ensemble)?;
            cfg.ensemble_b = Some(EnsembleSpec::parse(
                &a.ensemble_b,
                a.ensemble.size,
                a.ensemble.seed,
            )?);
            cfg.trials = a.trials;
            cfg.moment_orders = a.moments;
            let rows = experiments::run_conjecture(&cfg)?;
            eprintln!("conjecture: {} rows, {:.1?}", rows.len(), started.elapsed());
            emit(
                &a.output,
                report::conjecture_csv(&rows),
                report::conjecture_json(&rows),
            )
        }
        Cmd::Counterexample(output) => {
            let r = experiments::run_counterexample()?;
            for note in r.mismatches() {
                eprintln!("note: {note}");
            }
            emit(
                &output,
                report::counterexample_csv(&r),
                report::counterexample_json(&r),
            )
        }
        Cmd::LimitMoments(a) => {
            let table = match a.column.as_str() {
                "disco" => MomentTable::disco_limits(a.depth, &a.moments)?,
                "semicircular" => MomentTable::semicircular(&a.moments),
                "gaussian" => MomentTable::gaussian(&a.moments),
                other => {
                    return Err(Error::Config(format!(
                        "unknown column {other:?}, expected disco, semicircular or gaussian"
                    )))
                }
            };
            emit(
                &a.output,
                report::moment_table_csv(&table),
                report::moment_table_json(&table),
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
