use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("structural error: {0}")]
    Structure(String),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("{0:?} is not a terminal")]
    NotTerminal(String),
    #[error("invalid terminal subset: {0}")]
    InvalidSubset(String),
    #[error("invalid expansion: {0}")]
    InvalidExpansion(String),
    #[error("invalid flow request: {0}")]
    InvalidFlow(String),
    #[error("invalid multiflow: {0}")]
    InvalidMultiflow(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("operation precondition violated: {0}")]
    Precondition(String),
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("clutter is not flat: {0}")]
    NotFlat(String),
    #[error("clutter is not simple: {0}")]
    NotSimple(String),
    #[error("half-integral multiplicity for pair {pair}: {value}")]
    NonIntegralMultiplicity { pair: String, value: String },
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("generator retry budget exhausted after {0} attempts")]
    RetryBudget(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
