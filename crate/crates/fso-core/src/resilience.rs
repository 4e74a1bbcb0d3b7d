//! Message replication over an unreliable channel.
//!
//! Three strategies are compared. Elastic freezes a worst-case replica count
//! from a past observation window and never interacts with the environment
//! again. Entelechic monitors the channel, extrapolates the next-tick loss
//! probability, and sizes each transmission to match. Antifragile runs a
//! multiplicative-weights learner over a set of candidate configurations and
//! lets the best one take over.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-tick loss probability model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelModel {
    Constant { p: f64 },
    /// Consecutive segments; the last one holds forever.
    Piecewise { segments: Vec<Segment> },
    Sinusoid {
        mean: f64,
        amplitude: f64,
        period: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Explicit per-tick series; the last value holds forever.
    Trace { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub ticks: u64,
    pub p: f64,
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        let ok = |p: f64| (0.0..=1.0).contains(&p);
        match self {
            ChannelModel::Constant { p } => {
                if !ok(*p) {
                    return Err(Error::InvalidConfig(format!("loss probability {p}")));
                }
            }
            ChannelModel::Piecewise { segments } => {
                if segments.is_empty() {
                    return Err(Error::InvalidConfig("piecewise channel has no segments".into()));
                }
                for s in segments {
                    if !ok(s.p) || s.ticks == 0 {
                        return Err(Error::InvalidConfig(format!(
                            "bad segment: {} ticks at p={}",
                            s.ticks, s.p
                        )));
                    }
                }
            }
            ChannelModel::Sinusoid {
                mean,
                amplitude,
                period,
                ..
            } => {
                if *period <= 0.0 || !ok(mean - amplitude.abs()) || !ok(mean + amplitude.abs()) {
                    return Err(Error::InvalidConfig(
                        "sinusoid leaves the [0,1] probability range".into(),
                    ));
                }
            }
            ChannelModel::Trace { values } => {
                if values.is_empty() {
                    return Err(Error::InvalidConfig("trace channel has no values".into()));
                }
                if values.iter().any(|&v| !ok(v)) {
                    return Err(Error::InvalidConfig("trace value outside [0,1]".into()));
                }
            }
        }
        Ok(())
    }

    pub fn loss_at(&self, tick: u64) -> f64 {
        match self {
            ChannelModel::Constant { p } => *p,
            ChannelModel::Piecewise { segments } => {
                let mut t = tick;
                for s in segments {
                    if t < s.ticks {
                        return s.p;
                    }
                    t -= s.ticks;
                }
                segments.last().map(|s| s.p).unwrap_or(0.0)
            }
            ChannelModel::Sinusoid {
                mean,
                amplitude,
                period,
                phase,
            } => mean + amplitude * (2.0 * std::f64::consts::PI * (tick as f64 + phase) / period).sin(),
            ChannelModel::Trace { values } => {
                let i = (tick as usize).min(values.len() - 1);
                values[i]
            }
        }
    }
}

/// Smallest k >= 1 with p^k <= epsilon.
pub fn min_replicas(p: f64, epsilon: f64) -> Result<u32> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidConfig(format!("loss probability {p}")));
    }
    if p >= 1.0 {
        return Err(Error::Unreliable);
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidConfig(format!("epsilon {epsilon}")));
    }
    if p == 0.0 || p <= epsilon {
        return Ok(1);
    }
    // closed form, then fix up float rounding at the boundary
    let mut k = (epsilon.ln() / p.ln()).ceil().max(1.0) as u32;
    while p.powi(k as i32) > epsilon {
        k += 1;
    }
    while k > 1 && p.powi(k as i32 - 1) <= epsilon {
        k -= 1;
    }
    Ok(k)
}

/// Exponential smoothing of loss samples, optionally with a linear trend
/// term (Holt's method) for the one-step-ahead forecast.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimatorConfig {
    pub alpha: f64,
    pub trend: bool,
    pub prior: f64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            alpha: 0.1,
            trend: false,
            prior: 0.5,
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidConfig(format!("alpha {}", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.prior) {
            return Err(Error::InvalidConfig(format!("prior {}", self.prior)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Estimator {
    config: EstimatorConfig,
    level: f64,
    slope: f64,
}

impl Estimator {
    pub fn new(config: EstimatorConfig) -> Self {
        Estimator {
            config,
            level: config.prior,
            slope: 0.0,
        }
    }

    pub fn observe(&mut self, sample: f64) {
        let alpha = self.config.alpha;
        let previous = self.level;
        self.level = alpha * sample + (1.0 - alpha) * (self.level + self.slope);
        if self.config.trend {
            self.slope = alpha * (self.level - previous) + (1.0 - alpha) * self.slope;
        }
    }

    /// One-step-ahead forecast, clamped into [0, 0.999].
    pub fn forecast(&self) -> f64 {
        let raw = if self.config.trend {
            self.level + self.slope
        } else {
            self.level
        };
        raw.clamp(0.0, 0.999)
    }
}

/// Worst case over the observation window, frozen for the whole run.
pub fn elastic_plan(observed: &[f64], epsilon: f64) -> Result<u32> {
    let worst = observed
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if !worst.is_finite() {
        return Err(Error::InvalidConfig("empty observation window".into()));
    }
    min_replicas(worst, epsilon)
}

/// Replica count for the next message after folding `history` through the
/// estimator.
pub fn entelechic_plan(history: &[f64], config: EstimatorConfig, epsilon: f64) -> Result<u32> {
    config.validate()?;
    let mut estimator = Estimator::new(config);
    for &sample in history {
        estimator.observe(sample);
    }
    min_replicas(estimator.forecast(), epsilon)
}

/// A learner candidate: either a frozen replica count or an adaptive
/// estimator+margin configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CandidateConfig {
    Fixed { name: String, k: u32 },
    Adaptive {
        name: String,
        epsilon: f64,
        #[serde(default)]
        estimator: EstimatorConfig,
    },
}

impl CandidateConfig {
    pub fn name(&self) -> &str {
        match self {
            CandidateConfig::Fixed { name, .. } => name,
            CandidateConfig::Adaptive { name, .. } => name,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            CandidateConfig::Fixed { k, .. } => {
                if *k == 0 {
                    return Err(Error::InvalidConfig("fixed candidate with k = 0".into()));
                }
            }
            CandidateConfig::Adaptive {
                epsilon, estimator, ..
            } => {
                if !(*epsilon > 0.0 && *epsilon < 1.0) {
                    return Err(Error::InvalidConfig(format!("epsilon {epsilon}")));
                }
                estimator.validate()?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrategyConfig {
    Elastic {
        epsilon: f64,
        /// Number of past ticks observed before the run.
        window: u64,
    },
    Entelechic {
        epsilon: f64,
        #[serde(default)]
        estimator: EstimatorConfig,
    },
    Antifragile {
        candidates: Vec<CandidateConfig>,
        /// Cost weight in the reward: delivered - lambda * replicas / k_max.
        #[serde(default = "default_lambda")]
        lambda: f64,
        /// Hedge learning rate; defaults to sqrt(8 ln N / T).
        #[serde(default)]
        learning_rate: Option<f64>,
    },
}

pub fn default_lambda() -> f64 {
    0.1
}

impl StrategyConfig {
    pub fn validate(&self) -> Result<()> {
        match self {
            StrategyConfig::Elastic { epsilon, window } => {
                if !(*epsilon > 0.0 && *epsilon < 1.0) {
                    return Err(Error::InvalidConfig(format!("epsilon {epsilon}")));
                }
                if *window == 0 {
                    return Err(Error::InvalidConfig("elastic window must be >= 1".into()));
                }
            }
            StrategyConfig::Entelechic { epsilon, estimator } => {
                if !(*epsilon > 0.0 && *epsilon < 1.0) {
                    return Err(Error::InvalidConfig(format!("epsilon {epsilon}")));
                }
                estimator.validate()?;
            }
            StrategyConfig::Antifragile {
                candidates, lambda, ..
            } => {
                if candidates.is_empty() {
                    return Err(Error::InvalidConfig("learner needs at least one candidate".into()));
                }
                if *lambda < 0.0 {
                    return Err(Error::InvalidConfig(format!("lambda {lambda}")));
                }
                for c in candidates {
                    c.validate()?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TickRecord {
    pub tick: u64,
    pub loss_probability: f64,
    pub replicas: u32,
    pub delivered: bool,
    /// Fraction of this message's replicas that were lost.
    pub observed_loss: f64,
}

/// Multiplicative-weights bookkeeping for the antifragile strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerReport {
    pub candidates: Vec<String>,
    pub final_weights: Vec<f64>,
    pub learning_rate: f64,
    /// Sum over messages of the weight-mixture expected reward.
    pub cumulative_reward_mixture: f64,
    /// Sum of the sampled (actually played) candidate's rewards.
    pub cumulative_reward_sampled: f64,
    pub per_candidate_cumulative: Vec<f64>,
    pub average_regret: f64,
    /// 2 sqrt(ln N / T): the bound the average regret is checked against.
    pub regret_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransmissionReport {
    pub schema_version: u32,
    pub messages: u64,
    pub delivered: u64,
    pub failed: u64,
    pub total_replicas: u64,
    pub delivery_rate: f64,
    pub mean_replicas: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_tick: Vec<TickRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learner: Option<LearnerReport>,
}

/// Sends `messages` messages, one per tick; each replica is lost
/// independently with the channel's per-tick probability.
pub fn simulate(
    channel: &ChannelModel,
    strategy: &StrategyConfig,
    messages: u64,
    rng_seed: u64,
) -> Result<TransmissionReport> {
    channel.validate()?;
    strategy.validate()?;
    if messages == 0 {
        return Err(Error::InvalidConfig("messages must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);

    match strategy {
        StrategyConfig::Elastic { epsilon, window } => {
            let observed: Vec<f64> = (0..*window).map(|t| channel.loss_at(t)).collect();
            let k = elastic_plan(&observed, *epsilon)?;
            let mut report = Reporter::new(messages);
            for tick in 0..messages {
                let p = channel.loss_at(tick);
                let survivors = send(&mut rng, p, k);
                report.record(tick, p, k, survivors);
            }
            Ok(report.finish(None))
        }
        StrategyConfig::Entelechic { epsilon, estimator } => {
            let mut est = Estimator::new(*estimator);
            let mut report = Reporter::new(messages);
            for tick in 0..messages {
                let p = channel.loss_at(tick);
                let k = min_replicas(est.forecast(), *epsilon)?;
                let survivors = send(&mut rng, p, k);
                est.observe((k - survivors) as f64 / k as f64);
                report.record(tick, p, k, survivors);
            }
            Ok(report.finish(None))
        }
        StrategyConfig::Antifragile {
            candidates,
            lambda,
            learning_rate,
        } => simulate_antifragile(
            channel,
            candidates,
            *lambda,
            *learning_rate,
            messages,
            &mut rng,
        ),
    }
}

/// Bernoulli replica survival; returns the number of survivors.
fn send(rng: &mut ChaCha8Rng, p: f64, k: u32) -> u32 {
    (0..k).filter(|_| rng.gen::<f64>() >= p).count() as u32
}

struct Reporter {
    messages: u64,
    delivered: u64,
    total_replicas: u64,
    per_tick: Vec<TickRecord>,
}

impl Reporter {
    fn new(messages: u64) -> Self {
        Reporter {
            messages,
            delivered: 0,
            total_replicas: 0,
            per_tick: Vec::with_capacity(messages as usize),
        }
    }

    fn record(&mut self, tick: u64, p: f64, k: u32, survivors: u32) {
        let delivered = survivors > 0;
        if delivered {
            self.delivered += 1;
        }
        self.total_replicas += k as u64;
        self.per_tick.push(TickRecord {
            tick,
            loss_probability: p,
            replicas: k,
            delivered,
            observed_loss: (k - survivors) as f64 / k as f64,
        });
    }

    fn finish(self, learner: Option<LearnerReport>) -> TransmissionReport {
        TransmissionReport {
            schema_version: crate::SCHEMA_VERSION,
            messages: self.messages,
            delivered: self.delivered,
            failed: self.messages - self.delivered,
            total_replicas: self.total_replicas,
            delivery_rate: self.delivered as f64 / self.messages as f64,
            mean_replicas: self.total_replicas as f64 / self.messages as f64,
            per_tick: self.per_tick,
            learner,
        }
    }
}

enum CandidateState {
    Fixed(u32),
    Adaptive { epsilon: f64, estimator: Estimator },
}

impl CandidateState {
    fn plan(&self) -> Result<u32> {
        match self {
            CandidateState::Fixed(k) => Ok(*k),
            CandidateState::Adaptive { epsilon, estimator } => {
                min_replicas(estimator.forecast(), *epsilon)
            }
        }
    }

    fn observe(&mut self, sample: f64) {
        if let CandidateState::Adaptive { estimator, .. } = self {
            estimator.observe(sample);
        }
    }
}

fn simulate_antifragile(
    channel: &ChannelModel,
    candidates: &[CandidateConfig],
    lambda: f64,
    learning_rate: Option<f64>,
    messages: u64,
    rng: &mut ChaCha8Rng,
) -> Result<TransmissionReport> {
    let n = candidates.len();
    let eta =
        learning_rate.unwrap_or_else(|| (8.0 * (n as f64).ln() / messages as f64).sqrt());
    let mut states: Vec<CandidateState> = candidates
        .iter()
        .map(|c| match c {
            CandidateConfig::Fixed { k, .. } => CandidateState::Fixed(*k),
            CandidateConfig::Adaptive {
                epsilon, estimator, ..
            } => CandidateState::Adaptive {
                epsilon: *epsilon,
                estimator: Estimator::new(*estimator),
            },
        })
        .collect();

    let mut weights = vec![1.0 / n as f64; n];
    let mut cum_mixture = 0.0f64;
    let mut cum_sampled = 0.0f64;
    let mut cum_candidate = vec![0.0f64; n];
    let mut report = Reporter::new(messages);
    let mut plans = vec![0u32; n];
    let mut survivors_by_candidate = vec![0u32; n];

    for tick in 0..messages {
        let p = channel.loss_at(tick);
        for (plan, state) in plans.iter_mut().zip(&states) {
            *plan = state.plan()?;
        }
        let k_max = *plans.iter().max().expect("at least one candidate");

        // sample the played candidate from the current weights
        let draw: f64 = rng.gen();
        let mut acc = 0.0;
        let mut chosen = n - 1;
        for (i, w) in weights.iter().enumerate() {
            acc += w;
            if draw < acc {
                chosen = i;
                break;
            }
        }

        // common random numbers: one replica outcome stream shared by all
        // candidates, so their hypothetical deliveries are comparable
        let outcomes: Vec<bool> = (0..k_max).map(|_| rng.gen::<f64>() >= p).collect();
        for (i, &k) in plans.iter().enumerate() {
            survivors_by_candidate[i] =
                outcomes[..k as usize].iter().filter(|&&s| s).count() as u32;
        }

        // rewards on the raw scale, Hedge update on [0,1]-normalized scale
        let mut mixture = 0.0;
        for i in 0..n {
            let delivered = f64::from(survivors_by_candidate[i] > 0);
            let reward = delivered - lambda * plans[i] as f64 / k_max as f64;
            cum_candidate[i] += reward;
            mixture += weights[i] * reward;
            if i == chosen {
                cum_sampled += reward;
            }
            let normalized = (reward + lambda) / (1.0 + lambda);
            weights[i] *= (eta * normalized).exp();
        }
        cum_mixture += mixture;
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }

        // every candidate observes its own hypothetical loss fraction
        for (i, state) in states.iter_mut().enumerate() {
            let k = plans[i];
            state.observe((k - survivors_by_candidate[i]) as f64 / k as f64);
        }

        report.record(tick, p, plans[chosen], survivors_by_candidate[chosen]);
    }

    let best = cum_candidate.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let average_regret = (best - cum_mixture) / messages as f64;
    let learner = LearnerReport {
        candidates: candidates.iter().map(|c| c.name().to_string()).collect(),
        final_weights: weights,
        learning_rate: eta,
        cumulative_reward_mixture: cum_mixture,
        cumulative_reward_sampled: cum_sampled,
        per_candidate_cumulative: cum_candidate,
        average_regret,
        regret_bound: 2.0 * ((n as f64).ln() / messages as f64).sqrt(),
    };
    Ok(report.finish(Some(learner)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_replicas_matches_worked_examples() {
        assert_eq!(min_replicas(0.0, 0.05).unwrap(), 1);
        assert_eq!(min_replicas(0.5, 0.05).unwrap(), 5);
        assert_eq!(min_replicas(0.9, 0.01).unwrap(), 44);
        assert!(matches!(min_replicas(1.0, 0.05), Err(Error::Unreliable)));
    }

    #[test]
    fn min_replicas_agrees_with_incremental_search() {
        for &p in &[0.01f64, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
            for &eps in &[0.2f64, 0.1, 0.05, 0.01, 0.001] {
                let mut k = 1u32;
                while p.powi(k as i32) > eps {
                    k += 1;
                }
                assert_eq!(min_replicas(p, eps).unwrap(), k, "p={p} eps={eps}");
            }
        }
    }

    #[test]
    fn min_replicas_is_monotone() {
        let ps = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
        let epsilons = [0.3, 0.2, 0.1, 0.05, 0.02, 0.01];
        for w in ps.windows(2) {
            for &eps in &epsilons {
                assert!(min_replicas(w[0], eps).unwrap() <= min_replicas(w[1], eps).unwrap());
            }
        }
        for &p in &ps {
            for w in epsilons.windows(2) {
                // nonincreasing in epsilon: larger epsilon first
                assert!(min_replicas(p, w[1]).unwrap() >= min_replicas(p, w[0]).unwrap());
            }
        }
    }

    #[test]
    fn elastic_uses_the_worst_observation() {
        assert_eq!(elastic_plan(&[0.1, 0.5, 0.2], 0.05).unwrap(), 5);
        assert_eq!(elastic_plan(&[0.0, 0.0], 0.05).unwrap(), 1);
        assert!(elastic_plan(&[], 0.05).is_err());
    }

    #[test]
    fn elastic_goes_stale_by_design() {
        // frozen k=5 against a channel that later degrades to 0.9
        let k = elastic_plan(&[0.1, 0.5, 0.2], 0.05).unwrap();
        assert_eq!(k, 5);
        let failure = 0.9f64.powi(k as i32);
        assert!((failure - 0.59049).abs() < 1e-9);
    }

    #[test]
    fn entelechic_converges_on_constant_channel() {
        let history = vec![0.5; 200];
        let k = entelechic_plan(&history, EstimatorConfig::default(), 0.05).unwrap();
        assert_eq!(k, 5);
    }

    #[test]
    fn entelechic_decays_after_step_change() {
        let config = EstimatorConfig::default();
        let mut history = vec![0.5; 200];
        let mut reached = None;
        for extra in 1..=30 {
            history.push(0.1);
            let k = entelechic_plan(&history, config, 0.05).unwrap();
            if k == 2 {
                reached = Some(extra);
                break;
            }
        }
        // ~3/alpha ticks to respond; well within 30 for alpha 0.1
        assert!(reached.is_some(), "k never reached 2");
    }

    #[test]
    fn entelechic_with_empty_history_uses_the_prior() {
        let k = entelechic_plan(&[], EstimatorConfig::default(), 0.05).unwrap();
        assert_eq!(k, 5); // prior 0.5 => same as the constant case
        let optimistic = EstimatorConfig {
            prior: 0.0,
            ..Default::default()
        };
        assert_eq!(entelechic_plan(&[], optimistic, 0.05).unwrap(), 1);
    }

    #[test]
    fn perfect_channel_delivers_everything_with_one_replica() {
        let channel = ChannelModel::Constant { p: 0.0 };
        let strategy = StrategyConfig::Entelechic {
            epsilon: 0.05,
            estimator: EstimatorConfig::default(),
        };
        let report = simulate(&channel, &strategy, 2_000, 1).unwrap();
        assert_eq!(report.delivered, 2_000);
        assert_eq!(report.delivery_rate, 1.0);
        // after burn-in the estimator has learned p = 0
        let tail = &report.per_tick[1_000..];
        assert!(tail.iter().all(|t| t.replicas == 1));
    }

    #[test]
    fn elastic_never_changes_k_mid_run() {
        let channel = ChannelModel::Piecewise {
            segments: vec![
                Segment { ticks: 50, p: 0.5 },
                Segment { ticks: 50, p: 0.9 },
            ],
        };
        let strategy = StrategyConfig::Elastic {
            epsilon: 0.05,
            window: 50,
        };
        let report = simulate(&channel, &strategy, 100, 7).unwrap();
        assert!(report.per_tick.iter().all(|t| t.replicas == 5));
    }

    #[test]
    fn constant_channel_failure_stays_within_three_sigma() {
        let epsilon = 0.05;
        let messages = 20_000u64;
        for &p in &[0.3f64, 0.5, 0.7] {
            let k = min_replicas(p, epsilon).unwrap();
            let channel = ChannelModel::Constant { p };
            let strategy = StrategyConfig::Elastic {
                epsilon,
                window: 5,
            };
            let report = simulate(&channel, &strategy, messages, 9).unwrap();
            assert!(report.per_tick.iter().all(|t| t.replicas == k));
            let fail_p = p.powi(k as i32);
            let sigma = (fail_p * (1.0 - fail_p) / messages as f64).sqrt();
            let failure_rate = report.failed as f64 / messages as f64;
            assert!(
                failure_rate <= epsilon + 3.0 * sigma,
                "p={p}: failure {failure_rate} vs {} + 3*{sigma}",
                epsilon
            );
        }
    }

    #[test]
    fn replica_accounting_is_exact() {
        let channel = ChannelModel::Sinusoid {
            mean: 0.3,
            amplitude: 0.2,
            period: 40.0,
            phase: 0.0,
        };
        let strategy = StrategyConfig::Entelechic {
            epsilon: 0.05,
            estimator: EstimatorConfig::default(),
        };
        let report = simulate(&channel, &strategy, 500, 3).unwrap();
        let sum: u64 = report.per_tick.iter().map(|t| t.replicas as u64).sum();
        assert_eq!(report.total_replicas, sum);
        assert_eq!(report.delivered + report.failed, report.messages);
    }

    #[test]
    fn single_candidate_learner_follows_that_candidates_plan() {
        let channel = ChannelModel::Constant { p: 0.3 };
        let candidate = CandidateConfig::Adaptive {
            name: "only".into(),
            epsilon: 0.05,
            estimator: EstimatorConfig::default(),
        };
        let learner = StrategyConfig::Antifragile {
            candidates: vec![candidate],
            lambda: 0.1,
            learning_rate: None,
        };
        let report = simulate(&channel, &learner, 400, 11).unwrap();
        // replay the candidate's estimator on the emitted observations: the
        // learner's k sequence must be exactly the candidate's plan
        let mut est = Estimator::new(EstimatorConfig::default());
        for record in &report.per_tick {
            let expected = min_replicas(est.forecast(), 0.05).unwrap();
            assert_eq!(record.replicas, expected, "tick {}", record.tick);
            est.observe(record.observed_loss);
        }
        let learner_report = report.learner.unwrap();
        assert_eq!(learner_report.final_weights, vec![1.0]);
        assert_eq!(learner_report.regret_bound, 0.0);
    }

    #[test]
    fn dominant_candidate_takes_over() {
        let channel = ChannelModel::Constant { p: 0.5 };
        let strategy = StrategyConfig::Antifragile {
            candidates: vec![
                CandidateConfig::Adaptive {
                    name: "tuned".into(),
                    epsilon: 0.05,
                    estimator: EstimatorConfig::default(),
                },
                CandidateConfig::Fixed {
                    name: "single-shot".into(),
                    k: 1,
                },
            ],
            lambda: 0.1,
            learning_rate: None,
        };
        let report = simulate(&channel, &strategy, 10_000, 5).unwrap();
        let learner = report.learner.unwrap();
        assert!(
            learner.final_weights[0] > 0.95,
            "weights {:?}",
            learner.final_weights
        );
        assert!(learner.average_regret <= learner.regret_bound);
    }

    #[test]
    fn channel_shapes_evaluate_as_declared() {
        let piecewise = ChannelModel::Piecewise {
            segments: vec![
                Segment { ticks: 2, p: 0.1 },
                Segment { ticks: 3, p: 0.7 },
            ],
        };
        let expected = [0.1, 0.1, 0.7, 0.7, 0.7, 0.7];
        for (t, want) in expected.iter().enumerate() {
            assert_eq!(piecewise.loss_at(t as u64), *want);
        }
        let trace = ChannelModel::Trace {
            values: vec![0.2, 0.4],
        };
        assert_eq!(trace.loss_at(0), 0.2);
        assert_eq!(trace.loss_at(5), 0.4);
        let sine = ChannelModel::Sinusoid {
            mean: 0.3,
            amplitude: 0.2,
            period: 100.0,
            phase: 0.0,
        };
        for t in 0..200 {
            let p = sine.loss_at(t);
            assert!(p > 0.1 - 1e-9 && p < 0.5 + 1e-9, "tick {t}: {p}");
        }
        assert!(ChannelModel::Constant { p: 1.5 }.validate().is_err());
        assert!(ChannelModel::Trace { values: vec![] }.validate().is_err());
    }
}
