//! Fractal social organization toolkit.
//!
//! A seed string (a multiset of role identifiers) develops into the lattice
//! of all possible social overlay networks (SONs). This crate builds and
//! embeds those lattices, verifies that sub-seed developments embed into
//! super-seed developments, estimates box-counting dimension, simulates the
//! organization canon (event, role matching, missing-roles exception, upward
//! causation, SON team), runs random walks over the SON space, benchmarks
//! elastic / entelechic / antifragile replication over lossy channels, and
//! performs capacity- and compossibility-constrained selection by quality of
//! emergence.
//!
//! The `fso` binary exposes all of it behind deterministic, scriptable
//! subcommands; see the repository README and docs/formats.md.

pub mod boxcount;
pub mod canon;
pub mod embed;
pub mod error;
pub mod jobs;
pub mod lattice;
pub mod modularity;
pub mod resilience;
pub mod seed;
pub mod sort;
pub mod svg;
pub mod walk;

pub use error::{Error, Result};
pub use seed::{is_subseed, RoleSeed};

/// Version tag embedded in every JSON/SVG artifact this crate writes.
pub const SCHEMA_VERSION: u32 = 1;
