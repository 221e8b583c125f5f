use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a permutation of 1..{len}: {detail}")]
    NotAPermutation { len: usize, detail: String },
    #[error("permutation is not a single cycle (cycle through 1 has length {cycle_len}, period {period})")]
    NotCyclic { cycle_len: usize, period: usize },
    #[error("expected an odd integer >= 3, got {0}")]
    NotOddOrTooSmall(usize),
    #[error("point {x} lies outside [1, {n}]")]
    OutOfDomain { x: String, n: usize },
    #[error("no signed arrow from basic interval {from} to {to}")]
    BrokenChain { from: usize, to: usize },
    #[error("basic interval index {index} out of range 1..={max}")]
    BadVertex { index: usize, max: usize },
    #[error("pattern of period one has an empty Markov graph")]
    PeriodOne,
    #[error("paths have no divergence index")]
    NoDivergence,
    #[error("bands are not permuted by the map: {0}")]
    NotPermuted(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
