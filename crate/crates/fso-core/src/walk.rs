//! Random-walk evolution over the SON lattice.
//!
//! The kernel is the lazy uniform-neighbor walk on the Hasse graph: with
//! probability `laziness` stay put, otherwise move to a uniformly chosen
//! neighbor (up or down). Its stationary law is degree-proportional and does
//! not depend on the laziness, which makes an exact oracle cheap.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SonLattice;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WalkConfig {
    pub steps: u64,
    /// Count vector of the start node; defaults to the empty SON.
    #[serde(default)]
    pub start: Option<Vec<u32>>,
    /// Probability of staying put each step; keeps the bipartite Hasse graph
    /// aperiodic. Must lie in [0, 1).
    #[serde(default = "default_laziness")]
    pub laziness: f64,
    pub rng_seed: u64,
}

pub fn default_laziness() -> f64 {
    0.5
}

/// Probability weights aligned with lattice node indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub weights: Vec<f64>,
}

impl Distribution {
    pub fn validate(&self) -> Result<()> {
        if self.weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidConfig("negative probability".into()));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "distribution sums to {sum}, not 1"
            )));
        }
        Ok(())
    }
}

/// One lazy-walk transition from the node at `index`.
pub fn step(
    lattice: &SonLattice,
    index: usize,
    laziness: f64,
    rng: &mut ChaCha8Rng,
) -> Result<usize> {
    let neighbors = lattice.neighbors(index);
    if neighbors.is_empty() {
        return Err(Error::IsolatedNode);
    }
    if laziness > 0.0 && rng.gen::<f64>() < laziness {
        return Ok(index);
    }
    let pick = rng.gen_range(0..neighbors.len());
    Ok(neighbors[pick] as usize)
}

/// Runs the walk; the trajectory has `steps + 1` entries including the start.
pub fn walk(lattice: &SonLattice, config: &WalkConfig) -> Result<Vec<u32>> {
    if !(0.0..1.0).contains(&config.laziness) {
        return Err(Error::InvalidConfig(format!(
            "laziness {} outside [0, 1)",
            config.laziness
        )));
    }
    let start = match &config.start {
        Some(counts) => lattice
            .index_of(counts)
            .ok_or_else(|| Error::NodeNotInLattice(counts.clone()))?,
        None => 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut trajectory = Vec::with_capacity(config.steps as usize + 1);
    trajectory.push(start as u32);
    let mut current = start;
    for _ in 0..config.steps {
        current = step(lattice, current, config.laziness, &mut rng)?;
        trajectory.push(current as u32);
    }
    Ok(trajectory)
}

/// Degree-proportional stationary law of the uniform-neighbor walk.
pub fn stationary_exact(lattice: &SonLattice, laziness: f64) -> Result<Distribution> {
    if !(0.0..1.0).contains(&laziness) {
        return Err(Error::InvalidConfig(format!(
            "laziness {laziness} outside [0, 1)"
        )));
    }
    let total: f64 = 2.0 * lattice.edges().len() as f64;
    let weights = (0..lattice.node_count())
        .map(|i| lattice.degree(i) as f64 / total)
        .collect();
    let dist = Distribution { weights };
    dist.validate()?;
    Ok(dist)
}

/// Power iteration on the explicit lazy transition operator; the independent
/// route used to cross-validate `stationary_exact`.
pub fn stationary_power_iteration(
    lattice: &SonLattice,
    laziness: f64,
    tolerance: f64,
    max_iterations: usize,
) -> Result<Distribution> {
    if !(0.0..1.0).contains(&laziness) {
        return Err(Error::InvalidConfig(format!(
            "laziness {laziness} outside [0, 1)"
        )));
    }
    let n = lattice.node_count();
    let mut current = vec![1.0 / n as f64; n];
    let mut next = vec![0.0f64; n];
    for _ in 0..max_iterations {
        for x in next.iter_mut() {
            *x = 0.0;
        }
        for u in 0..n {
            let mass = current[u];
            next[u] += laziness * mass;
            let share = (1.0 - laziness) * mass / lattice.degree(u) as f64;
            for &v in lattice.neighbors(u) {
                next[v as usize] += share;
            }
        }
        let residual: f64 = current
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .sum();
        std::mem::swap(&mut current, &mut next);
        if residual < tolerance {
            return Ok(Distribution { weights: current });
        }
    }
    Err(Error::InvalidConfig(format!(
        "power iteration did not reach residual {tolerance} in {max_iterations} iterations"
    )))
}

/// Empirical occupancy over trajectory entries at index >= `burn_in`,
/// keeping every `thinning`-th sample.
pub fn occupancy(
    lattice: &SonLattice,
    trajectory: &[u32],
    burn_in: usize,
    thinning: usize,
) -> Result<Distribution> {
    let thinning = thinning.max(1);
    let mut counts = vec![0u64; lattice.node_count()];
    let mut total = 0u64;
    for (i, &node) in trajectory.iter().enumerate().skip(burn_in) {
        if !(i - burn_in).is_multiple_of(thinning) {
            continue;
        }
        counts[node as usize] += 1;
        total += 1;
    }
    if total == 0 {
        return Err(Error::InvalidConfig(
            "no samples left after burn-in/thinning".into(),
        ));
    }
    Ok(Distribution {
        weights: counts.iter().map(|&c| c as f64 / total as f64).collect(),
    })
}

/// Total variation distance between two distributions on the same support.
pub fn total_variation(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.weights.len() != q.weights.len() {
        return Err(Error::SupportMismatch);
    }
    Ok(p.weights
        .iter()
        .zip(&q.weights)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        / 2.0)
}
