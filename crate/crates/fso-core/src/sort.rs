//! Capacity- and compossibility-constrained selection of monads by quality
//! of emergence, plus replicator-fidelity checking over lineages.
//!
//! Selection is greedy by total score; an exact brute-force oracle is kept
//! alongside for small instances, which also documents where the greedy rule
//! falls short of the optimum.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::RoleSeed;

/// Oracle population limit: subsets are enumerated exhaustively.
pub const ORACLE_LIMIT: usize = 20;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Monad {
    pub id: String,
    pub genotype: RoleSeed,
    /// The static quality component; must be >= 0.
    pub intrinsic_quality: f64,
    /// Ids this monad cannot coexist with. Must be symmetric population-wide.
    #[serde(default)]
    pub conflicts: BTreeSet<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Environment {
    /// Maximum number of coexisting monads.
    pub capacity: usize,
    /// Per-role weight for the contingent quality component.
    #[serde(default)]
    pub contingency_weights: BTreeMap<u32, f64>,
}

/// Weighting of the two quality components in the total score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QoeWeights {
    pub intrinsic: f64,
    pub contingent: f64,
}

impl Default for QoeWeights {
    fn default() -> Self {
        QoeWeights {
            intrinsic: 1.0,
            contingent: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QoeScore {
    pub intrinsic: f64,
    pub contingent: f64,
    pub total: f64,
}

/// Scores one monad in an environment.
pub fn qoe(monad: &Monad, env: &Environment, weights: QoeWeights) -> Result<QoeScore> {
    if weights.intrinsic < 0.0 || weights.contingent < 0.0 {
        return Err(Error::InvalidConfig("negative QoE weight".into()));
    }
    let contingent: f64 = monad
        .genotype
        .multiplicities()
        .iter()
        .map(|(role, &mult)| {
            mult as f64 * env.contingency_weights.get(role).copied().unwrap_or(0.0)
        })
        .sum();
    Ok(QoeScore {
        intrinsic: monad.intrinsic_quality,
        contingent,
        total: weights.intrinsic * monad.intrinsic_quality + weights.contingent * contingent,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
pub enum Decision {
    Admitted,
    RejectedCapacity,
    RejectedConflict { with: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredMonad {
    pub id: String,
    pub score: QoeScore,
    #[serde(flatten)]
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub schema_version: u32,
    /// Admitted ids, sorted.
    pub selected: Vec<String>,
    pub total_value: f64,
    /// Per-monad scores and admit/reject reasons, in scan order.
    pub decisions: Vec<ScoredMonad>,
}

fn check_conflicts(population: &[Monad]) -> Result<()> {
    let by_id: HashMap<&str, &Monad> = population.iter().map(|m| (m.id.as_str(), m)).collect();
    for monad in population {
        if monad.conflicts.contains(&monad.id) {
            return Err(Error::InvalidConfig(format!(
                "monad {} conflicts with itself",
                monad.id
            )));
        }
        for other in &monad.conflicts {
            match by_id.get(other.as_str()) {
                Some(o) if o.conflicts.contains(&monad.id) => {}
                Some(_) => {
                    return Err(Error::AsymmetricConflicts(
                        monad.id.clone(),
                        other.clone(),
                    ))
                }
                // conflicts with ids outside the population are inert
                None => {}
            }
        }
    }
    Ok(())
}

/// Greedy selection: best total score first (ties by id), admit while
/// capacity remains and no admitted monad conflicts.
pub fn ultimate_sort(
    population: &[Monad],
    env: &Environment,
    weights: QoeWeights,
) -> Result<Selection> {
    check_conflicts(population)?;
    let mut scored: Vec<(usize, QoeScore)> = population
        .iter()
        .enumerate()
        .map(|(i, m)| Ok((i, qoe(m, env, weights)?)))
        .collect::<Result<_>>()?;
    scored.sort_by(|(i, a), (j, b)| {
        b.total
            .total_cmp(&a.total)
            .then_with(|| population[*i].id.cmp(&population[*j].id))
    });

    let mut admitted: Vec<usize> = Vec::new();
    let mut decisions = Vec::with_capacity(population.len());
    for (idx, score) in scored {
        let monad = &population[idx];
        let decision = if admitted.len() >= env.capacity {
            Decision::RejectedCapacity
        } else if let Some(&other) = admitted
            .iter()
            .find(|&&a| monad.conflicts.contains(&population[a].id))
        {
            Decision::RejectedConflict {
                with: population[other].id.clone(),
            }
        } else {
            admitted.push(idx);
            Decision::Admitted
        };
        decisions.push(ScoredMonad {
            id: monad.id.clone(),
            score,
            decision,
        });
    }

    let mut selected: Vec<String> = admitted
        .iter()
        .map(|&i| population[i].id.clone())
        .collect();
    let total_value = decisions
        .iter()
        .filter(|d| d.decision == Decision::Admitted)
        .map(|d| d.score.total)
        .sum();
    selected.sort();
    Ok(Selection {
        schema_version: crate::SCHEMA_VERSION,
        selected,
        total_value,
        decisions,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Optimal ids, sorted.
    pub selected: Vec<String>,
    pub total_value: f64,
}

/// Exhaustive optimum over all subsets within capacity and compossibility.
/// Ties break toward the lexicographically smallest sorted id set.
pub fn exact_sort_oracle(
    population: &[Monad],
    env: &Environment,
    weights: QoeWeights,
) -> Result<OracleResult> {
    if population.len() > ORACLE_LIMIT {
        return Err(Error::TooLarge(population.len(), ORACLE_LIMIT));
    }
    check_conflicts(population)?;
    let scores: Vec<f64> = population
        .iter()
        .map(|m| Ok(qoe(m, env, weights)?.total))
        .collect::<Result<_>>()?;

    let n = population.len();
    let conflict_masks: Vec<u32> = population
        .iter()
        .map(|m| {
            population
                .iter()
                .enumerate()
                .filter(|(_, o)| m.conflicts.contains(&o.id))
                .fold(0u32, |mask, (j, _)| mask | (1 << j))
        })
        .collect();

    let mut best_value = f64::NEG_INFINITY;
    let mut best_ids: Vec<String> = Vec::new();
    for subset in 0u32..(1 << n) {
        if subset.count_ones() as usize > env.capacity {
            continue;
        }
        let feasible = conflict_masks
            .iter()
            .enumerate()
            .all(|(i, &mask)| subset & (1 << i) == 0 || subset & mask == 0);
        if !feasible {
            continue;
        }
        let value: f64 = (0..n)
            .filter(|i| subset & (1 << i) != 0)
            .map(|i| scores[i])
            .sum();
        let mut ids: Vec<String> = (0..n)
            .filter(|i| subset & (1 << i) != 0)
            .map(|i| population[i].id.clone())
            .collect();
        ids.sort();
        if value > best_value || (value == best_value && ids < best_ids) {
            best_value = value;
            best_ids = ids;
        }
    }
    Ok(OracleResult {
        selected: best_ids,
        total_value: best_value.max(0.0),
    })
}

/// Equivalence relation on genotypes used for fidelity checking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenotypeRelation {
    /// Identical canonical multiset.
    #[default]
    CanonicalEquality,
}

impl GenotypeRelation {
    pub fn equivalent(&self, a: &RoleSeed, b: &RoleSeed) -> bool {
        match self {
            GenotypeRelation::CanonicalEquality => a == b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub ok: bool,
    /// Index of the first generation that is not equivalent to its parent.
    pub first_violation: Option<usize>,
}

/// True iff every consecutive pair of generations is equivalent; transitivity
/// then carries the first genotype to the last.
pub fn fidelity_check(lineage: &[RoleSeed], relation: GenotypeRelation) -> Result<FidelityReport> {
    if lineage.is_empty() {
        return Err(Error::InvalidConfig("empty lineage".into()));
    }
    for (i, pair) in lineage.windows(2).enumerate() {
        if !relation.equivalent(&pair[0], &pair[1]) {
            return Ok(FidelityReport {
                ok: false,
                first_violation: Some(i + 1),
            });
        }
    }
    Ok(FidelityReport {
        ok: true,
        first_violation: None,
    })
}
