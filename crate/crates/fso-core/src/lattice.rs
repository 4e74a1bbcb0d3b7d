//! Development of a seed into the space of all possible SONs.
//!
//! The space is the sub-multiset lattice of the seed: every count vector
//! bounded componentwise by the seed multiplicities, with Hasse covering
//! edges between vectors that differ by one unit in exactly one role.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::RoleSeed;

/// Default cap on the number of lattice nodes that may be materialized.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// One possible SON: a count per distinct role, bounded by the seed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SonNode(pub Vec<u32>);

impl SonNode {
    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// The lattice of all sub-multisets of a seed.
///
/// Nodes are stored in mixed-radix order (last role is the fastest digit), so
/// a count vector maps to its index arithmetically and enumeration order is
/// deterministic. Edges are oriented from lower to higher rank.
#[derive(Debug, Clone)]
pub struct SonLattice {
    seed: RoleSeed,
    roles: Vec<u32>,
    mults: Vec<u32>,
    strides: Vec<u64>,
    nodes: Vec<SonNode>,
    edges: Vec<(u32, u32)>,
    neighbors: Vec<Vec<u32>>,
}

/// Closed-form node count: the product of (multiplicity + 1) over roles.
pub fn lattice_size(seed: &RoleSeed) -> Result<u128> {
    let mut size: u128 = 1;
    for &m in seed.multiplicities().values() {
        size = size
            .checked_mul(m as u128 + 1)
            .ok_or(Error::BudgetExceeded {
                size: u128::MAX,
                budget: u128::MAX,
            })?;
    }
    Ok(size)
}

/// Materializes the lattice, refusing to exceed `budget` nodes.
pub fn build_lattice(seed: &RoleSeed, budget: u64) -> Result<SonLattice> {
    let size = lattice_size(seed)?;
    // node indices are u32, so the budget is capped there regardless
    let effective_budget = (budget as u128).min(u32::MAX as u128);
    if size > effective_budget {
        return Err(Error::BudgetExceeded {
            size,
            budget: effective_budget,
        });
    }
    let size = size as usize;

    let roles: Vec<u32> = seed.distinct_roles().collect();
    let mults: Vec<u32> = roles.iter().map(|&r| seed.multiplicity(r)).collect();
    let k = roles.len();

    let mut strides = vec![1u64; k];
    for i in (0..k.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * (mults[i + 1] as u64 + 1);
    }

    let mut nodes = Vec::with_capacity(size);
    let mut counts = vec![0u32; k];
    loop {
        nodes.push(SonNode(counts.clone()));
        if !increment(&mut counts, &mults) {
            break;
        }
    }
    debug_assert_eq!(nodes.len(), size);
    Ok(finish(seed.clone(), roles, mults, strides, nodes))
}

// Mixed-radix increment, last digit fastest; false once the counter wraps.
fn increment(counts: &mut [u32], mults: &[u32]) -> bool {
    for i in (0..counts.len()).rev() {
        if counts[i] < mults[i] {
            counts[i] += 1;
            return true;
        }
        counts[i] = 0;
    }
    false
}

fn finish(
    seed: RoleSeed,
    roles: Vec<u32>,
    mults: Vec<u32>,
    strides: Vec<u64>,
    nodes: Vec<SonNode>,
) -> SonLattice {
    let mut edges = Vec::new();
    for (idx, node) in nodes.iter().enumerate() {
        for (i, &c) in node.counts().iter().enumerate() {
            if c < mults[i] {
                edges.push((idx as u32, idx as u32 + strides[i] as u32));
            }
        }
    }
    let mut neighbors = vec![Vec::new(); nodes.len()];
    for &(u, v) in &edges {
        neighbors[u as usize].push(v);
        neighbors[v as usize].push(u);
    }
    for list in &mut neighbors {
        list.sort_unstable();
    }
    SonLattice {
        seed,
        roles,
        mults,
        strides,
        nodes,
        edges,
        neighbors,
    }
}

impl SonLattice {
    pub fn seed(&self) -> &RoleSeed {
        &self.seed
    }

    /// Distinct role ids, ascending; count vectors are indexed in this order.
    pub fn roles(&self) -> &[u32] {
        &self.roles
    }

    /// Seed multiplicity per role, aligned with `roles()`.
    pub fn mults(&self) -> &[u32] {
        &self.mults
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[SonNode] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> &SonNode {
        &self.nodes[index]
    }

    /// Hasse covering edges as (lower, upper) index pairs.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, index: usize) -> &[u32] {
        &self.neighbors[index]
    }

    pub fn degree(&self, index: usize) -> usize {
        self.neighbors[index].len()
    }

    /// Index of a count vector, if it belongs to the lattice.
    pub fn index_of(&self, counts: &[u32]) -> Option<usize> {
        if counts.len() != self.mults.len() {
            return None;
        }
        let mut idx = 0u64;
        for (i, &c) in counts.iter().enumerate() {
            if c > self.mults[i] {
                return None;
            }
            idx += c as u64 * self.strides[i];
        }
        Some(idx as usize)
    }

    pub fn contains_edge(&self, u: u32, v: u32) -> bool {
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        self.neighbors[lo as usize].binary_search(&hi).is_ok()
    }
}

/// Serializable dump matching the documented lattice JSON schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeDump {
    pub schema_version: u32,
    pub seed: String,
    pub roles: Vec<u32>,
    pub multiplicities: Vec<u32>,
    pub node_count: usize,
    pub nodes: Vec<Vec<u32>>,
    pub edges: Vec<(u32, u32)>,
}

impl LatticeDump {
    pub fn from_lattice(lattice: &SonLattice) -> Self {
        LatticeDump {
            schema_version: crate::SCHEMA_VERSION,
            seed: lattice.seed().canonical_text().to_string(),
            roles: lattice.roles().to_vec(),
            multiplicities: lattice.mults().to_vec(),
            node_count: lattice.node_count(),
            nodes: lattice.nodes().iter().map(|n| n.0.clone()).collect(),
            edges: lattice.edges().to_vec(),
        }
    }
}
