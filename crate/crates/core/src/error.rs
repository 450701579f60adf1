use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid cyclic order {0}: orders must be positive")]
    InvalidOrder(i64),

    #[error("element {coords:?} does not belong to a group with orders {orders:?}")]
    ElementMismatch { coords: Vec<u64>, orders: Vec<u64> },

    #[error("groups do not match: {left:?} vs {right:?}")]
    GroupMismatch { left: Vec<u64>, right: Vec<u64> },

    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded { what: &'static str, size: u64, cap: u64 },

    #[error("matrix entry ({row}, {col}) = {value} does not define a map Z({from}) -> Z({to})")]
    IllDefinedHomomorphism { row: usize, col: usize, value: i64, from: u64, to: u64 },

    #[error("matrix shape {rows}x{cols} does not match {expected_rows}x{expected_cols}")]
    ShapeMismatch { rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },

    #[error("homomorphism is not an automorphism")]
    NotAutomorphism,

    #[error("subgroup is not invariant: {0}")]
    NotInvariant(&'static str),

    #[error("not a probability distribution: {0}")]
    NotDistribution(String),

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is not positive semidefinite")]
    NotPositiveSemidefinite,

    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(i128),

    #[error("layer {level}: {source}")]
    Layer {
        level: u32,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
