use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use mentionfit::fitting::{truncate, TruncationPolicy};
use mentionfit::gof::{DEFAULT_ROUNDS, DEFAULT_SAMPLE_SIZE, DEFAULT_SIGNIFICANCE};
use mentionfit::histogram::{build_histogram, ingest, Ingested, Platform};
use mentionfit::models::{DistributionModel, Family};
use mentionfit::pipeline::{run_fit, run_gof, run_plot};
use mentionfit::report::{error_record, AnalysisReport, RunConfig, DEFAULT_SAMPLE_NAME};

/// Fit heavy-tailed distributions to per-paper mention counts.
#[derive(Parser)]
#[command(name = "mentionfit", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Master RNG seed for sampling and bootstrap rounds.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Verdict threshold: a fit is plausible when p > significance.
    #[arg(long, global = true, default_value_t = DEFAULT_SIGNIFICANCE)]
    significance: f64,
    /// Bootstrap rounds.
    #[arg(long, global = true, default_value_t = DEFAULT_ROUNDS)]
    rounds: usize,
    /// Observations drawn per platform for maximum-likelihood fits.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLE_SIZE)]
    sample_size: usize,
    /// Tail truncation: min_bin_count[=c], max_k=K, quantile=q or none.
    /// A bare flag means min_bin_count=2.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "min_bin_count=2")]
    truncate: Option<TruncationPolicy>,
    /// Regress on log-binned densities with this many bins per decade.
    #[arg(long, global = true)]
    log_bins: Option<u32>,
    /// Draw the analysis sample with replacement.
    #[arg(long, global = true)]
    with_replacement: bool,
}

impl GlobalArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            seed: self.seed,
            truncation: self.truncate,
            rounds: self.rounds,
            significance: self.significance,
            sample_size: self.sample_size,
            log_bins_per_decade: self.log_bins,
            with_replacement: self.with_replacement,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Log-log least-squares fits per platform.
    Fit {
        #[arg(long)]
        input: PathBuf,
        /// Repeatable; defaults to every platform with data.
        #[arg(long)]
        platform: Vec<Platform>,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write <platform>.svg and <platform>.csv into this directory.
        #[arg(long)]
        plot_dir: Option<PathBuf>,
    },
    /// Maximum-likelihood fits scored by a bootstrap KS test.
    Gof {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        platform: Vec<Platform>,
        /// Repeatable; defaults to hooked and dlognormal.
        #[arg(long)]
        family: Vec<Family>,
        /// Label for this analysis sample in the report.
        #[arg(long, default_value = DEFAULT_SAMPLE_NAME)]
        sample_name: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the truncated histogram as `k,count` lines.
    Truncate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        platform: Platform,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Log-log plot with the fitted line, plus an `ln_k,ln_N` sidecar.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        platform: Platform,
        #[arg(long)]
        output: PathBuf,
        /// Defaults to the output path with a .csv extension.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Merge report fragments of the same input.
    Report {
        #[arg(required = true)]
        fragments: Vec<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate a synthetic record file from a model.
    Simulate {
        /// e.g. "family=hooked; alpha=2.2; B=6.7".
        #[arg(long)]
        model: DistributionModel,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "twitter")]
        platform: Platform,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            eprint!("{e}");
            let message = e.kind().to_string().replace([';', '\n'], ",");
            eprintln!("record=error; kind=usage; message={message}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let record = match err.downcast_ref::<mentionfit::Error>() {
                Some(e) => error_record(e),
                None => {
                    let message = format!("{err:#}").replace([';', '\n'], ",");
                    format!("record=error; kind=io; message={message}")
                }
            };
            eprintln!("{record}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = cli.global.config();
    match cli.command {
        Command::Fit {
            input,
            platform,
            output,
            plot_dir,
        } => {
            let data = load(&input)?;
            let report = run_fit(&data, &platform, &cfg)?;
            if let Some(dir) = plot_dir {
                fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                for entry in &report.lsq {
                    let plot = run_plot(&data, entry.platform, &cfg)?;
                    write(&dir.join(format!("{}.svg", entry.platform)), &plot.svg)?;
                    write(&dir.join(format!("{}.csv", entry.platform)), &plot.sidecar)?;
                }
            }
            emit(output.as_deref(), &report.render())
        }
        Command::Gof {
            input,
            platform,
            family,
            sample_name,
            output,
        } => {
            let data = load(&input)?;
            let families = if family.is_empty() {
                vec![Family::Hooked, Family::DLognormal]
            } else {
                family
            };
            let report = run_gof(&data, &platform, &families, &sample_name, &cfg)?;
            emit(output.as_deref(), &report.render())
        }
        Command::Truncate {
            input,
            platform,
            output,
        } => {
            let data = load(&input)?;
            let hist = build_histogram(&data.records, platform);
            let cut = truncate(&hist, cfg.truncation.unwrap_or_default())?;
            emit(output.as_deref(), &cut.to_export())
        }
        Command::Plot {
            input,
            platform,
            output,
            sidecar,
        } => {
            let data = load(&input)?;
            let plot = run_plot(&data, platform, &cfg)?;
            write(&output, &plot.svg)?;
            write(
                &sidecar.unwrap_or_else(|| output.with_extension("csv")),
                &plot.sidecar,
            )
        }
        Command::Report { fragments, output } => {
            let parsed = fragments
                .iter()
                .map(|p| {
                    let text = fs::read_to_string(p)
                        .with_context(|| format!("reading {}", p.display()))?;
                    Ok(AnalysisReport::parse(&text)?)
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            emit(output.as_deref(), &AnalysisReport::merge(parsed)?.render())
        }
        Command::Simulate {
            model,
            n,
            platform,
            output,
        } => {
            let mut csv = format!("doi,{platform}\n");
            for (i, v) in model.sample(n, cfg.seed).into_iter().enumerate() {
                let _ = writeln!(csv, "10.0000/sim.{i},{v}");
            }
            emit(output.as_deref(), &csv)
        }
    }
}

fn load(path: &Path) -> anyhow::Result<Ingested> {
    let data = ingest(path)?;
    for e in data.row_errors.iter().take(10) {
        eprintln!(
            "warning: {}: line {}: {}",
            path.display(),
            e.line,
            e.message
        );
    }
    if data.row_errors.len() > 10 {
        eprintln!(
            "warning: {} more malformed rows",
            data.row_errors.len() - 10
        );
    }
    Ok(data)
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
