use thiserror::Error;

/// Errors raised by the lattice, root-system and fan machinery.
///
/// Indices carried by variants are 0-based; the `Display` impls print them
/// 1-based to match the user-facing convention.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("configuration has no vectors")]
    EmptyConfiguration,

    #[error("vector {} is zero", .index + 1)]
    ZeroVector { index: usize },

    #[error("vectors span a subgroup of rank {rank}, expected full rank {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("search box too large for brute force: {candidates} candidates (limit {limit})")]
    ScaleError { candidates: u128, limit: u128 },

    #[error("{alpha:?} is not a root: pairing {pairing:?}")]
    NotARoot { alpha: Vec<i64>, pairing: Vec<i64> },

    #[error("not a subsystem: {0}")]
    NotASubsystem(String),

    #[error("component does not match a classical type: {0}")]
    UnexpectedType(String),

    #[error("ray {} is not primitive: {ray:?}", .index + 1)]
    NonPrimitive { index: usize, ray: Vec<i64> },

    #[error("cone {} is singular: det = {det}", one_based(.cone))]
    SingularCone { cone: Vec<usize>, det: String },

    #[error("fan is not complete at wall {}: {reason}", one_based(.wall))]
    NotComplete { wall: Vec<usize>, reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

pub(crate) fn one_based(indices: &[usize]) -> String {
    let parts: Vec<String> = indices.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

pub type Result<T> = std::result::Result<T, Error>;
