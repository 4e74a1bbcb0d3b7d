//! Conservation of modularity: a subseed's development embeds into the
//! superseed's development as an order-refinement.
//!
//! The embedding maps a count vector over the subseed's roles to the same
//! counts on the identical role ids of the superseed, zero everywhere else.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{build_lattice, SonLattice};
use crate::seed::{is_subseed, RoleSeed};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularityReport {
    pub schema_version: u32,
    pub sub_seed: String,
    pub super_seed: String,
    pub injective: bool,
    pub order_embedding: bool,
    pub edge_preserving: bool,
    pub nodes_covered: usize,
    pub nodes_total: usize,
}

impl ModularityReport {
    pub fn pass(&self) -> bool {
        self.injective && self.order_embedding && self.edge_preserving
    }
}

/// Maps a count vector over `sub`'s roles into `sup`'s role axes (zero-padded).
pub fn lift_counts(sub: &SonLattice, sup: &SonLattice, counts: &[u32]) -> Vec<u32> {
    let mut lifted = vec![0u32; sup.roles().len()];
    for (i, &role) in sub.roles().iter().enumerate() {
        // role identity, not positional index
        let j = sup
            .roles()
            .binary_search(&role)
            .expect("subseed role missing from superseed");
        lifted[j] = counts[i];
    }
    lifted
}

/// Builds both lattices and checks the three embedding properties.
pub fn verify_modularity(a: &RoleSeed, b: &RoleSeed, budget: u64) -> Result<ModularityReport> {
    if !is_subseed(a, b) {
        return Err(Error::NotSubseed {
            a: a.canonical_text().to_string(),
            b: b.canonical_text().to_string(),
        });
    }
    let sub = build_lattice(a, budget)?;
    let sup = build_lattice(b, budget)?;
    Ok(verify_on_lattices(&sub, &sup))
}

fn verify_on_lattices(sub: &SonLattice, sup: &SonLattice) -> ModularityReport {
    let image: Vec<usize> = sub
        .nodes()
        .iter()
        .map(|node| {
            sup.index_of(&lift_counts(sub, sup, node.counts()))
                .expect("lifted counts stay within superseed bounds")
        })
        .collect();

    let mut seen = vec![false; sup.node_count()];
    let mut injective = true;
    for &idx in &image {
        if seen[idx] {
            injective = false;
        }
        seen[idx] = true;
    }

    let leq = |x: &[u32], y: &[u32]| x.iter().zip(y).all(|(a, b)| a <= b);
    let mut order_embedding = true;
    'outer: for (i, u) in sub.nodes().iter().enumerate() {
        for (j, v) in sub.nodes().iter().enumerate() {
            let lhs = leq(u.counts(), v.counts());
            let rhs = leq(
                sup.node(image[i]).counts(),
                sup.node(image[j]).counts(),
            );
            if lhs != rhs {
                order_embedding = false;
                break 'outer;
            }
        }
    }

    let edge_preserving = sub
        .edges()
        .iter()
        .all(|&(u, v)| sup.contains_edge(image[u as usize] as u32, image[v as usize] as u32));

    ModularityReport {
        schema_version: crate::SCHEMA_VERSION,
        sub_seed: sub.seed().canonical_text().to_string(),
        super_seed: sup.seed().canonical_text().to_string(),
        injective,
        order_embedding,
        edge_preserving,
        nodes_covered: sub.node_count(),
        nodes_total: sup.node_count(),
    }
}
