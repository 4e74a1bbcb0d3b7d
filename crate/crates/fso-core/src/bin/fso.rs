//! Command-line front end. Every subcommand is deterministic given its
//! config and rng seed, validates before writing, and exits with 0 on
//! success, 1 when a verification check fails, 2 on invalid input, and 3
//! when the lattice node budget is exceeded.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use fso_core::canon::ScenarioConfig;
use fso_core::error::Error;
use fso_core::jobs::{
    run_canon, run_channel, run_develop, run_modularity, run_sort, run_walk, render_develop_svg,
    ChannelRequest, DevelopRequest, ModularityRequest, SortRequest, WalkRequest,
};
use fso_core::svg::SvgStyle;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fso",
    version,
    about = "Fractal social organization toolkit",
    long_about = "Develops role seeds into SON lattices, verifies conservation of \
modularity, runs random walks over the SON space, simulates the organization \
canon, benchmarks redundancy strategies on lossy channels, and performs \
QoE-based selection.\n\nAll JSON artifacts carry schema version 1; the formats \
are documented in docs/formats.md."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (subcommands accept a subset). Schema version 1.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Develop a seed into its SON lattice (JSON dump, optional SVG figure).
    Develop {
        /// Seed string: compact digits ("011123334") or comma-separated ids.
        seed: String,
        /// Also write the embedding as an SVG document to this path.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Self-similarity ratio of the embedding, in (0, 1).
        #[arg(long)]
        scale_ratio: Option<f64>,
        /// Highlight the lifted image of this subseed in the SVG.
        #[arg(long)]
        highlight: Option<String>,
        /// Attach a box-counting dimension estimate to the dump.
        #[arg(long)]
        dimension: bool,
        /// Omit Hasse edges from the SVG.
        #[arg(long)]
        no_edges: bool,
        /// Maximum number of lattice nodes to materialize.
        #[arg(long, env = "FSO_SIM_BUDGET")]
        budget: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check that a subseed's development embeds into a superseed's.
    ///
    /// Exit code 0 iff the refinement holds (injective + order-embedding +
    /// edge-preserving), 1 otherwise.
    Modularity {
        sub_seed: String,
        super_seed: String,
        #[arg(long, env = "FSO_SIM_BUDGET")]
        budget: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Random walk over a seed's SON lattice (config file driven).
    ///
    /// --format json writes an occupancy/stationary summary; jsonl writes the
    /// trajectory as one count-vector per line.
    Walk {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's rng_seed.
        #[arg(long)]
        rng_seed: Option<u64>,
        /// Override the config's burn-in (trajectory samples to discard).
        #[arg(long)]
        burn_in: Option<u64>,
        /// Override the config's thinning stride.
        #[arg(long)]
        thinning: Option<u64>,
        #[arg(long, env = "FSO_SIM_BUDGET")]
        budget: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Simulate the organization canon over a scenario file.
    ///
    /// --format jsonl writes one record per event plus a final aggregate
    /// line; json writes the whole trace as one document.
    Canon {
        #[arg(long)]
        config: PathBuf,
        /// Recorded in the trace for reproducibility.
        #[arg(long)]
        rng_seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Replication strategies over lossy channels (single runs or sweeps).
    ///
    /// --format json writes full reports; csv writes the strategy x channel
    /// summary table.
    Channel {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's rng_seed.
        #[arg(long)]
        rng_seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// QoE-based capacity/compossibility-constrained selection.
    Sort {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

/// Budget errors exit 3, everything else invalid-input 2.
fn classify(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
        _ => EXIT_INVALID_INPUT,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Develop {
            seed,
            svg,
            scale_ratio,
            highlight,
            dimension,
            no_edges,
            budget,
            output,
        } => {
            let request = DevelopRequest {
                seed,
                budget,
                scale_ratio,
                angle_rule: None,
                highlight,
                dimension,
            };
            let developed = run_develop(&request)?;
            if developed.embedding.degenerate_scale {
                eprintln!(
                    "warning: scale ratio {} may collide positions (max multiplicity {})",
                    developed.embedding.scale_ratio,
                    developed.lattice.mults().iter().max().unwrap_or(&0)
                );
            }
            let json = to_json(&developed.output)?;
            let svg_bytes = svg.as_ref().map(|_| {
                let style = SvgStyle {
                    draw_edges: !no_edges,
                    ..SvgStyle::default()
                };
                render_develop_svg(&developed, &style)
            });
            emit(output.out.as_deref(), json.as_bytes())?;
            if let (Some(path), Some(doc)) = (svg.as_deref(), svg_bytes) {
                write_file(path, doc.as_bytes())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Modularity {
            sub_seed,
            super_seed,
            budget,
            output,
        } => {
            let request = ModularityRequest {
                sub_seed,
                super_seed,
                budget,
            };
            match run_modularity(&request) {
                Ok(report) => {
                    emit(output.out.as_deref(), to_json(&report)?.as_bytes())?;
                    Ok(if report.pass() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(EXIT_CHECK_FAILED)
                    })
                }
                // not a refinement at all: the check failed, not the input
                Err(err @ Error::NotSubseed { .. }) => {
                    eprintln!("check failed: {err}");
                    Ok(ExitCode::from(EXIT_CHECK_FAILED))
                }
                Err(err) => Err(err.into()),
            }
        }
        Command::Walk {
            config,
            rng_seed,
            burn_in,
            thinning,
            budget,
            output,
        } => {
            let mut request: WalkRequest = read_config(&config)?;
            merge(&mut request.rng_seed, rng_seed);
            merge(&mut request.burn_in, burn_in);
            merge(&mut request.thinning, thinning);
            merge(&mut request.budget, budget);
            let result = run_walk(&request)?;
            let bytes = match output.format.as_deref().unwrap_or("json") {
                "json" => to_json(&result.summary)?.into_bytes(),
                "jsonl" => {
                    let mut lines = String::new();
                    for &index in &result.trajectory {
                        lines.push_str(&serde_json::to_string(
                            result.lattice.node(index as usize).counts(),
                        )?);
                        lines.push('\n');
                    }
                    lines.into_bytes()
                }
                other => anyhow::bail!("unsupported walk format {other:?} (json|jsonl)"),
            };
            emit(output.out.as_deref(), &bytes)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Canon {
            config,
            rng_seed,
            output,
        } => {
            let mut scenario: ScenarioConfig = read_config(&config)?;
            merge(&mut scenario.rng_seed, rng_seed);
            let trace = run_canon(&scenario)?;
            let bytes = match output.format.as_deref().unwrap_or("jsonl") {
                "json" => to_json(&trace)?.into_bytes(),
                "jsonl" => {
                    let mut lines = String::new();
                    for record in &trace.records {
                        lines.push_str(&serde_json::to_string(record)?);
                        lines.push('\n');
                    }
                    lines.push_str(&serde_json::to_string(&trace.aggregate)?);
                    lines.push('\n');
                    lines.into_bytes()
                }
                other => anyhow::bail!("unsupported canon format {other:?} (json|jsonl)"),
            };
            emit(output.out.as_deref(), &bytes)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Channel {
            config,
            rng_seed,
            output,
        } => {
            let mut request: ChannelRequest = read_config(&config)?;
            merge(&mut request.rng_seed, rng_seed);
            let result = run_channel(&request)?;
            let bytes = match output.format.as_deref().unwrap_or("json") {
                "json" => to_json(&result)?.into_bytes(),
                "csv" => result.to_csv().into_bytes(),
                other => anyhow::bail!("unsupported channel format {other:?} (json|csv)"),
            };
            emit(output.out.as_deref(), &bytes)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sort { config, output } => {
            let request: SortRequest = read_config(&config)?;
            let result = run_sort(&request)?;
            emit(output.out.as_deref(), to_json(&result)?.as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn merge<T: Copy>(slot: &mut Option<T>, flag: Option<T>) {
    if flag.is_some() {
        *slot = flag;
    }
}

fn read_config<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
}

fn to_json<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Full artifacts are built in memory first, so nothing is written on a
/// validation failure; this only runs on success paths.
fn emit(out: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(path) => write_file(path, bytes),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}
