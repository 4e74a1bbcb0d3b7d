//! Config-file driven entry points shared by the CLI and the C API.
//!
//! Each run_* function takes a deserialized request, validates it, and
//! returns a serializable output; callers decide where the bytes go. The
//! JSON schemas are documented in docs/formats.md.

use serde::{Deserialize, Serialize};

use crate::boxcount::{box_counting_dimension, default_scales, DimensionEstimate};
use crate::canon::{run_scenario, ScenarioConfig, ScenarioTrace};
use crate::embed::{embed, AngleRule, Embedding, DEFAULT_SCALE_RATIO};
use crate::error::{Error, Result};
use crate::lattice::{build_lattice, LatticeDump, SonLattice, DEFAULT_NODE_BUDGET};
use crate::modularity::{lift_counts, verify_modularity, ModularityReport};
use crate::resilience::{simulate, ChannelModel, StrategyConfig, TransmissionReport};
use crate::seed::RoleSeed;
use crate::sort::{
    exact_sort_oracle, ultimate_sort, Environment, Monad, OracleResult, QoeWeights, Selection,
};
use crate::svg::{render_svg, SvgStyle};
use crate::walk::{occupancy, stationary_exact, total_variation, walk, Distribution, WalkConfig};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DevelopRequest {
    pub seed: String,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub scale_ratio: Option<f64>,
    #[serde(default)]
    pub angle_rule: Option<AngleRule>,
    /// Subseed whose lifted image is highlighted in the SVG.
    #[serde(default)]
    pub highlight: Option<String>,
    /// Attach a box-counting estimate of the embedding.
    #[serde(default)]
    pub dimension: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DevelopOutput {
    #[serde(flatten)]
    pub dump: LatticeDump,
    pub embedding_degenerate_scale: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<DimensionEstimate>,
}

pub struct Developed {
    pub lattice: SonLattice,
    pub embedding: Embedding,
    pub highlight: Vec<u32>,
    pub output: DevelopOutput,
}

pub fn run_develop(request: &DevelopRequest) -> Result<Developed> {
    let seed = RoleSeed::parse(&request.seed)?;
    let budget = request.budget.unwrap_or(DEFAULT_NODE_BUDGET);
    let lattice = build_lattice(&seed, budget)?;
    let scale = request.scale_ratio.unwrap_or(DEFAULT_SCALE_RATIO);
    let angle_rule = request.angle_rule.clone().unwrap_or_default();
    let embedding = embed(&lattice, scale, &angle_rule)?;

    let highlight = match &request.highlight {
        Some(text) => {
            let sub_seed = RoleSeed::parse(text)?;
            if !sub_seed.is_subseed_of(&seed) {
                return Err(Error::NotSubseed {
                    a: sub_seed.canonical_text().to_string(),
                    b: seed.canonical_text().to_string(),
                });
            }
            let sub = build_lattice(&sub_seed, budget)?;
            sub.nodes()
                .iter()
                .map(|node| {
                    lattice
                        .index_of(&lift_counts(&sub, &lattice, node.counts()))
                        .expect("lifted node within bounds") as u32
                })
                .collect()
        }
        None => Vec::new(),
    };

    let dimension = if request.dimension {
        let scales = default_scales(&embedding.positions, 6);
        Some(box_counting_dimension(&embedding.positions, &scales)?)
    } else {
        None
    };

    let output = DevelopOutput {
        dump: LatticeDump::from_lattice(&lattice),
        embedding_degenerate_scale: embedding.degenerate_scale,
        dimension,
    };
    Ok(Developed {
        lattice,
        embedding,
        highlight,
        output,
    })
}

pub fn render_develop_svg(developed: &Developed, style: &SvgStyle) -> String {
    render_svg(
        &developed.lattice,
        &developed.embedding,
        style,
        &developed.highlight,
    )
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModularityRequest {
    pub sub_seed: String,
    pub super_seed: String,
    #[serde(default)]
    pub budget: Option<u64>,
}

pub fn run_modularity(request: &ModularityRequest) -> Result<ModularityReport> {
    let a = RoleSeed::parse(&request.sub_seed)?;
    let b = RoleSeed::parse(&request.super_seed)?;
    verify_modularity(&a, &b, request.budget.unwrap_or(DEFAULT_NODE_BUDGET))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WalkRequest {
    pub seed: String,
    pub steps: u64,
    #[serde(default = "crate::walk::default_laziness")]
    pub laziness: f64,
    #[serde(default)]
    pub start: Option<Vec<u32>>,
    /// Samples discarded from the front of the trajectory; defaults to 10%.
    #[serde(default)]
    pub burn_in: Option<u64>,
    #[serde(default)]
    pub thinning: Option<u64>,
    #[serde(default)]
    pub rng_seed: Option<u64>,
    #[serde(default)]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WalkSummary {
    pub schema_version: u32,
    pub seed: String,
    pub node_count: usize,
    pub steps: u64,
    pub laziness: f64,
    pub burn_in: u64,
    pub thinning: u64,
    pub rng_seed: u64,
    pub occupancy: Distribution,
    pub exact: Distribution,
    pub tv_occupancy_vs_exact: f64,
}

pub struct WalkOutput {
    pub summary: WalkSummary,
    pub trajectory: Vec<u32>,
    pub lattice: SonLattice,
}

pub fn run_walk(request: &WalkRequest) -> Result<WalkOutput> {
    let rng_seed = request
        .rng_seed
        .ok_or_else(|| Error::InvalidConfig("walk requires rng_seed".into()))?;
    let seed = RoleSeed::parse(&request.seed)?;
    let lattice = build_lattice(&seed, request.budget.unwrap_or(DEFAULT_NODE_BUDGET))?;
    let config = WalkConfig {
        steps: request.steps,
        start: request.start.clone(),
        laziness: request.laziness,
        rng_seed,
    };
    let trajectory = walk(&lattice, &config)?;
    let burn_in = request.burn_in.unwrap_or(request.steps / 10);
    if burn_in as usize >= trajectory.len() {
        return Err(Error::InvalidConfig(format!(
            "burn_in {burn_in} consumes the whole trajectory"
        )));
    }
    let thinning = request.thinning.unwrap_or(1).max(1);
    let occ = occupancy(&lattice, &trajectory, burn_in as usize, thinning as usize)?;
    let exact = stationary_exact(&lattice, request.laziness)?;
    let tv = total_variation(&occ, &exact)?;
    Ok(WalkOutput {
        summary: WalkSummary {
            schema_version: crate::SCHEMA_VERSION,
            seed: seed.canonical_text().to_string(),
            node_count: lattice.node_count(),
            steps: request.steps,
            laziness: request.laziness,
            burn_in,
            thinning,
            rng_seed,
            occupancy: occ,
            exact,
            tv_occupancy_vs_exact: tv,
        },
        trajectory,
        lattice,
    })
}

pub fn run_canon(config: &ScenarioConfig) -> Result<ScenarioTrace> {
    run_scenario(config)
}

/// Channel spec as written in config files; `trace_csv` loads per-tick loss
/// probabilities from a CSV file (values separated by commas or newlines).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelSpec {
    Constant { p: f64 },
    Piecewise { segments: Vec<crate::resilience::Segment> },
    Sinusoid {
        mean: f64,
        amplitude: f64,
        period: f64,
        #[serde(default)]
        phase: f64,
    },
    Trace { values: Vec<f64> },
    TraceCsv { path: String },
}

impl ChannelSpec {
    pub fn resolve(&self) -> Result<ChannelModel> {
        let model = match self {
            ChannelSpec::Constant { p } => ChannelModel::Constant { p: *p },
            ChannelSpec::Piecewise { segments } => ChannelModel::Piecewise {
                segments: segments.clone(),
            },
            ChannelSpec::Sinusoid {
                mean,
                amplitude,
                period,
                phase,
            } => ChannelModel::Sinusoid {
                mean: *mean,
                amplitude: *amplitude,
                period: *period,
                phase: *phase,
            },
            ChannelSpec::Trace { values } => ChannelModel::Trace {
                values: values.clone(),
            },
            ChannelSpec::TraceCsv { path } => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::InvalidConfig(format!("cannot read trace {path}: {e}"))
                })?;
                let values = text
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<f64>().map_err(|_| {
                            Error::InvalidConfig(format!("bad trace value {s:?} in {path}"))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                ChannelModel::Trace { values }
            }
        };
        model.validate()?;
        Ok(model)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedChannel {
    pub name: String,
    #[serde(flatten)]
    pub spec: ChannelSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedStrategy {
    pub name: String,
    #[serde(flatten)]
    pub config: StrategyConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelRequest {
    pub messages: u64,
    #[serde(default)]
    pub rng_seed: Option<u64>,
    pub channels: Vec<NamedChannel>,
    pub strategies: Vec<NamedStrategy>,
    /// Keep the per-tick log in the JSON output (large).
    #[serde(default)]
    pub log_ticks: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub strategy: String,
    pub channel: String,
    pub report: TransmissionReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChannelOutput {
    pub schema_version: u32,
    pub messages: u64,
    pub rng_seed: u64,
    pub rows: Vec<SweepRow>,
}

impl ChannelOutput {
    /// strategy x channel summary table.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "strategy,channel,messages,delivered,failed,delivery_rate,total_replicas,mean_replicas\n",
        );
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{:.6},{},{:.6}\n",
                row.strategy,
                row.channel,
                row.report.messages,
                row.report.delivered,
                row.report.failed,
                row.report.delivery_rate,
                row.report.total_replicas,
                row.report.mean_replicas,
            ));
        }
        out
    }
}

pub fn run_channel(request: &ChannelRequest) -> Result<ChannelOutput> {
    let rng_seed = request
        .rng_seed
        .ok_or_else(|| Error::InvalidConfig("channel simulation requires rng_seed".into()))?;
    if request.channels.is_empty() || request.strategies.is_empty() {
        return Err(Error::InvalidConfig(
            "need at least one channel and one strategy".into(),
        ));
    }
    let mut rows = Vec::new();
    for channel in &request.channels {
        let model = channel.spec.resolve()?;
        for strategy in &request.strategies {
            let mut report = simulate(&model, &strategy.config, request.messages, rng_seed)?;
            if !request.log_ticks {
                report.per_tick.clear();
            }
            rows.push(SweepRow {
                strategy: strategy.name.clone(),
                channel: channel.name.clone(),
                report,
            });
        }
    }
    Ok(ChannelOutput {
        schema_version: crate::SCHEMA_VERSION,
        messages: request.messages,
        rng_seed,
        rows,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SortRequest {
    pub monads: Vec<Monad>,
    pub environment: Environment,
    #[serde(default)]
    pub qoe_weights: Option<QoeWeights>,
    /// Also run the exhaustive oracle (populations of 20 or fewer).
    #[serde(default)]
    pub include_oracle: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SortOutput {
    #[serde(flatten)]
    pub selection: Selection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleResult>,
}

pub fn run_sort(request: &SortRequest) -> Result<SortOutput> {
    let weights = request.qoe_weights.unwrap_or_default();
    let selection = ultimate_sort(&request.monads, &request.environment, weights)?;
    let oracle = if request.include_oracle {
        Some(exact_sort_oracle(
            &request.monads,
            &request.environment,
            weights,
        )?)
    } else {
        None
    };
    Ok(SortOutput { selection, oracle })
}
