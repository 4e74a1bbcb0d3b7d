//! Geometric development of a lattice into the plane.
//!
//! Each role contributes a direction scaled by `scale_ratio^role`, so a node's
//! position is the weighted sum of its counts. Sub-developments of a subseed
//! then appear as translated, scaled copies inside the full development, which
//! is what gives the figures their self-similar look.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SonLattice;

pub const DEFAULT_SCALE_RATIO: f64 = 0.35;

/// How role directions are assigned.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum AngleRule {
    /// theta_r = 2*pi*r / R for role id r, with R the number of distinct roles.
    #[default]
    UniformByRole,
    /// Explicit radians per role, aligned with the lattice role order.
    Explicit { angles: Vec<f64> },
}

/// Planar positions for every lattice node, in node-index order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Embedding {
    pub seed: String,
    pub scale_ratio: f64,
    /// Radians per role, aligned with the lattice role order.
    pub angles: Vec<f64>,
    pub positions: Vec<[f64; 2]>,
    /// Set when scale_ratio >= 1/(max_multiplicity + 1): positions are no
    /// longer guaranteed distinct by the radix argument. A warning, not an
    /// error; overlap must be checked explicitly where it matters.
    pub degenerate_scale: bool,
}

/// Embeds the lattice with the stated position formula.
pub fn embed(lattice: &SonLattice, scale_ratio: f64, angle_rule: &AngleRule) -> Result<Embedding> {
    if !(scale_ratio > 0.0 && scale_ratio < 1.0) {
        return Err(Error::InvalidScale(scale_ratio));
    }
    let roles = lattice.roles();
    let angles: Vec<f64> = match angle_rule {
        AngleRule::UniformByRole => {
            let r_count = roles.len() as f64;
            roles
                .iter()
                .map(|&r| 2.0 * std::f64::consts::PI * r as f64 / r_count)
                .collect()
        }
        AngleRule::Explicit { angles } => {
            if angles.len() != roles.len() {
                return Err(Error::InvalidConfig(format!(
                    "angle rule provides {} angles for {} roles",
                    angles.len(),
                    roles.len()
                )));
            }
            angles.clone()
        }
    };

    // per-role axis vector: scale^role * (cos theta, sin theta)
    let axes: Vec<[f64; 2]> = roles
        .iter()
        .zip(&angles)
        .map(|(&r, &theta)| {
            let len = scale_ratio.powi(r as i32);
            [len * theta.cos(), len * theta.sin()]
        })
        .collect();

    let positions = lattice
        .nodes()
        .iter()
        .map(|node| {
            let mut p = [0.0f64, 0.0];
            for (c, axis) in node.counts().iter().zip(&axes) {
                p[0] += *c as f64 * axis[0];
                p[1] += *c as f64 * axis[1];
            }
            p
        })
        .collect();

    let max_mult = lattice.mults().iter().copied().max().unwrap_or(0);
    let degenerate_scale = scale_ratio >= 1.0 / (max_mult as f64 + 1.0);

    Ok(Embedding {
        seed: lattice.seed().canonical_text().to_string(),
        scale_ratio,
        angles,
        positions,
        degenerate_scale,
    })
}
