use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not a permutation: {0:?}")]
    NotPermutation(Vec<usize>),
    #[error("length cap {cap} exceeded")]
    LengthCapExceeded { cap: u32 },
    #[error("not a simplex: {0}")]
    NotSimplex(String),
    #[error("configuration is not convex; missing {0:?}")]
    NotConvex(Vec<Vec<i64>>),
    #[error("representatives of a simplex do not form a lattice chain: {0}")]
    ChainOrder(String),
    #[error("configuration is not locally weakly independent at vertex {vertex}")]
    NotWeaklyIndependent { vertex: usize },
    #[error("enumeration budget {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("unsupported field characteristic {0}")]
    BadPrime(u32),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}
