use thiserror::Error;

/// Crate-wide error type. Variants map 1:1 onto the failure modes of the
/// public operations; the CLI maps them onto exit codes (budget errors are
/// distinguished from plain invalid input).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("seed string is empty")]
    EmptySeed,

    #[error("invalid character {found:?} at position {position} in seed string")]
    InvalidCharacter { found: char, position: usize },

    #[error("mixed compact/extended seed form (extended parts must be plain decimal integers)")]
    MixedForm,

    #[error("lattice size {size} exceeds budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("seed {a} is not a subseed of {b}")]
    NotSubseed { a: String, b: String },

    #[error("scale ratio {0} outside (0, 1)")]
    InvalidScale(f64),

    #[error("box counting requires at least 3 strictly decreasing scales")]
    InvalidScales,

    #[error("degenerate geometry: fewer than two distinct points")]
    DegenerateGeometry,

    #[error("focal level {level} out of range for a hierarchy of {levels} levels")]
    InvalidFocalLevel { level: usize, levels: usize },

    #[error("duplicate event id {0}")]
    DuplicateEventId(u64),

    #[error("walk node has no neighbors")]
    IsolatedNode,

    #[error("node {0:?} is not a member of the lattice")]
    NodeNotInLattice(Vec<u32>),

    #[error("distributions have different supports")]
    SupportMismatch,

    #[error("channel is fully unreliable (loss probability 1)")]
    Unreliable,

    #[error("conflicts are not symmetric: {0} lists {1}, but not vice versa")]
    AsymmetricConflicts(String, String),

    #[error("population of {0} monads exceeds the exact-oracle limit of {1}")]
    TooLarge(usize, usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
