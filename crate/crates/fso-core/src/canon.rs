//! The organization canon: events at a focal level, capability matching,
//! missing-roles exceptions, upward causation, and SON team formation.
//!
//! Matching is deliberately simple: roles are capability tags, and an entity
//! can fill a role instance iff it holds the tag. Richer semantic scoring can
//! plug in behind the same interface later.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A member of the hierarchy. `level` is fixed for a scenario; 0 is the top.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Entity {
    pub id: String,
    pub capabilities: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "EntityState::is_available")]
    pub state: EntityState,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityState {
    #[default]
    Available,
    Enrolled {
        event: u64,
        until: u64,
    },
    Cooldown {
        until: u64,
    },
}

impl EntityState {
    pub fn is_available(&self) -> bool {
        matches!(self, EntityState::Available)
    }

    /// Availability at a given tick; enrollment and cooldown both expire.
    pub fn available_at(&self, tick: u64) -> bool {
        match self {
            EntityState::Available => true,
            EntityState::Enrolled { until, .. } | EntityState::Cooldown { until } => {
                *until <= tick
            }
        }
    }
}

/// Levels ordered top (index 0) to bottom.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Hierarchy {
    pub levels: Vec<Vec<Entity>>,
}

impl Hierarchy {
    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::InvalidConfig("hierarchy has no levels".into()));
        }
        let mut ids = HashSet::new();
        for level in &self.levels {
            for entity in level {
                if !ids.insert(entity.id.clone()) {
                    return Err(Error::InvalidConfig(format!(
                        "entity id {} appears more than once",
                        entity.id
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The roles an event demands, as a capability-tag multiset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResponseProtocol {
    pub required_roles: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EventRecord {
    pub id: u64,
    pub focal_level: usize,
    #[serde(flatten)]
    pub protocol: ResponseProtocol,
    pub arrival_tick: u64,
    pub service_ticks: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub role: String,
    pub entity: String,
    /// Level the entity was drafted from.
    pub level: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Complete,
    Partial { missing: Vec<String> },
}

/// The temporary cross-level team enrolled for one event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SonTeam {
    pub event_id: u64,
    pub assignments: Vec<Assignment>,
    /// Levels in visit order: focal first, then strictly upward.
    pub levels_visited: Vec<usize>,
    pub outcome: Outcome,
}

impl SonTeam {
    pub fn is_complete(&self) -> bool {
        matches!(self.outcome, Outcome::Complete)
    }

    pub fn levels_climbed(&self) -> usize {
        self.levels_visited.len().saturating_sub(1)
    }
}

/// Greedy maximum assignment of role instances to available entities.
///
/// Role instances are processed in canonical (sorted) tag order. For each
/// instance the candidate with the fewest total capabilities wins, ties by
/// lowest id, so generalists are kept for later instances. Returns the
/// assignments plus the multiset of tags left unfilled.
pub fn match_roles<'a>(
    required: &[String],
    pool: &[&'a Entity],
) -> (Vec<(String, &'a Entity)>, Vec<String>) {
    let mut instances: Vec<String> = required.to_vec();
    instances.sort();

    let mut used: HashSet<&str> = HashSet::new();
    let mut assignments = Vec::new();
    let mut missing = Vec::new();

    for role in instances {
        let candidate = pool
            .iter()
            .filter(|e| !used.contains(e.id.as_str()) && e.capabilities.contains(&role))
            .min_by(|a, b| {
                a.capabilities
                    .len()
                    .cmp(&b.capabilities.len())
                    .then_with(|| a.id.cmp(&b.id))
            });
        match candidate {
            Some(entity) => {
                used.insert(entity.id.as_str());
                assignments.push((role, *entity));
            }
            None => missing.push(role),
        }
    }
    (assignments, missing)
}

/// Resolves one event: match at the focal level, escalate missing roles one
/// level up at a time, and enroll the drafted entities.
pub fn raise_event(hierarchy: &mut Hierarchy, event: &EventRecord) -> Result<SonTeam> {
    if event.focal_level >= hierarchy.levels.len() {
        return Err(Error::InvalidFocalLevel {
            level: event.focal_level,
            levels: hierarchy.levels.len(),
        });
    }

    let tick = event.arrival_tick;
    let mut remaining: Vec<String> = event.protocol.required_roles.to_vec();
    remaining.sort();
    let mut levels_visited = Vec::new();
    let mut drafted: Vec<Assignment> = Vec::new();
    let mut level = event.focal_level;

    loop {
        levels_visited.push(level);
        if !remaining.is_empty() {
            let pool: Vec<&Entity> = hierarchy.levels[level]
                .iter()
                .filter(|e| e.state.available_at(tick))
                .collect();
            let (assigned, missing) = match_roles(&remaining, &pool);
            for (role, entity) in &assigned {
                drafted.push(Assignment {
                    role: role.clone(),
                    entity: entity.id.clone(),
                    level,
                });
            }
            remaining = missing;
        }
        if remaining.is_empty() || level == 0 {
            break;
        }
        // missing roles: the exception moves focality to the level above
        level -= 1;
    }

    let enrolled: HashSet<&str> = drafted.iter().map(|a| a.entity.as_str()).collect();
    let until = tick + event.service_ticks;
    for level_entities in &mut hierarchy.levels {
        for entity in level_entities {
            if enrolled.contains(entity.id.as_str()) {
                entity.state = EntityState::Enrolled {
                    event: event.id,
                    until,
                };
            }
        }
    }

    let outcome = if remaining.is_empty() {
        Outcome::Complete
    } else {
        Outcome::Partial { missing: remaining }
    };
    Ok(SonTeam {
        event_id: event.id,
        assignments: drafted,
        levels_visited,
        outcome,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub levels: Vec<Vec<Entity>>,
    pub events: Vec<EventRecord>,
    #[serde(default)]
    pub rng_seed: Option<u64>,
}

/// One trace line per event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub tick: u64,
    pub team: SonTeam,
    pub levels_climbed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub events: usize,
    pub completed: usize,
    pub completion_rate: f64,
    pub mean_levels_climbed: f64,
    /// Busy entity-ticks over available entity-ticks, per level, across the
    /// horizon from tick 0 to the last service completion.
    pub per_level_utilization: Vec<f64>,
    pub horizon_ticks: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioTrace {
    pub schema_version: u32,
    pub rng_seed: u64,
    pub records: Vec<TraceRecord>,
    pub aggregate: AggregateStats,
}

/// Deterministic discrete-event loop: per tick, release completed services,
/// then process arrivals in event-id order.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioTrace> {
    let mut hierarchy = Hierarchy {
        levels: config.levels.clone(),
    };
    hierarchy.validate()?;

    let mut seen = HashSet::new();
    for event in &config.events {
        if !seen.insert(event.id) {
            return Err(Error::DuplicateEventId(event.id));
        }
        if event.focal_level >= hierarchy.levels.len() {
            return Err(Error::InvalidFocalLevel {
                level: event.focal_level,
                levels: hierarchy.levels.len(),
            });
        }
        if event.protocol.required_roles.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "event {} has an empty response protocol",
                event.id
            )));
        }
    }
    if config
        .events
        .windows(2)
        .any(|w| w[0].arrival_tick > w[1].arrival_tick)
    {
        return Err(Error::InvalidConfig(
            "events must be sorted by arrival_tick".into(),
        ));
    }

    // arrivals per tick, id order within a tick
    let mut by_tick: BTreeMap<u64, Vec<&EventRecord>> = BTreeMap::new();
    for event in &config.events {
        by_tick.entry(event.arrival_tick).or_default().push(event);
    }
    for arrivals in by_tick.values_mut() {
        arrivals.sort_by_key(|e| e.id);
    }

    let mut records = Vec::with_capacity(config.events.len());
    let mut busy_ticks_per_level = vec![0u64; hierarchy.levels.len()];
    let mut horizon = 0u64;

    for (&tick, arrivals) in &by_tick {
        // release pass: expired enrollments and cooldowns become available
        for level in &mut hierarchy.levels {
            for entity in level {
                if !entity.state.is_available() && entity.state.available_at(tick) {
                    entity.state = EntityState::Available;
                }
            }
        }
        for event in arrivals {
            let team = raise_event(&mut hierarchy, event)?;
            for assignment in &team.assignments {
                busy_ticks_per_level[assignment.level] += event.service_ticks;
            }
            horizon = horizon.max(event.arrival_tick + event.service_ticks);
            records.push(TraceRecord {
                tick,
                levels_climbed: team.levels_climbed(),
                team,
            });
        }
    }

    let events = records.len();
    let completed = records.iter().filter(|r| r.team.is_complete()).count();
    let mean_levels_climbed = if events == 0 {
        0.0
    } else {
        records.iter().map(|r| r.levels_climbed as f64).sum::<f64>() / events as f64
    };
    let per_level_utilization = busy_ticks_per_level
        .iter()
        .zip(&hierarchy.levels)
        .map(|(&busy, level)| {
            let capacity = level.len() as u64 * horizon;
            if capacity == 0 {
                0.0
            } else {
                busy as f64 / capacity as f64
            }
        })
        .collect();

    Ok(ScenarioTrace {
        schema_version: crate::SCHEMA_VERSION,
        rng_seed: config.rng_seed.unwrap_or(0),
        records,
        aggregate: AggregateStats {
            events,
            completed,
            completion_rate: if events == 0 {
                0.0
            } else {
                completed as f64 / events as f64
            },
            mean_levels_climbed,
            per_level_utilization,
            horizon_ticks: horizon,
        },
    })
}
