use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, CakeError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CakeError {
    #[error("interval [{lo}, {hi}] is not a sub-interval of [0, 1]")]
    InvalidInterval { lo: Rational, hi: Rational },

    #[error("valuation has zero total mass")]
    ZeroMass,

    #[error("density pieces overlap around {at}")]
    OverlappingPieces { at: Rational },

    #[error("density is negative on [{lo}, {hi}]")]
    NegativeDensity { lo: Rational, hi: Rational },

    #[error("cut target {target} exceeds the remaining mass {available}")]
    TargetUnreachable { target: Rational, available: Rational },

    #[error("invalid cut query: {0}")]
    InvalidQuery(String),

    #[error("expected {expected} agents, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("portions {first} and {second} overlap on a set of positive length")]
    OverlappingPortions { first: usize, second: usize },

    #[error("{mechanism} needs {expected} agents, got {found}")]
    ArityMismatch {
        mechanism: &'static str,
        expected: String,
        found: usize,
    },

    #[error("agent subset is empty")]
    EmptySubset,

    #[error("agent {0} does not value any cake")]
    EmptyPreference(usize),

    #[error("not a permutation of the agents: {0:?}")]
    InvalidOrder(Vec<usize>),

    #[error("no exact allocation exists: {0}")]
    Infeasible(String),

    #[error("strategy of agent {0} claims cake the agent does not value")]
    NotWellBehaved(usize),

    #[error("profile is not reduced")]
    NotReduced,

    #[error("unsupported valuation class: {0}")]
    UnsupportedValuationClass(String),

    #[error("linear program is {0}")]
    Lp(String),

    #[error("agent index {0} out of range")]
    AgentOutOfRange(usize),

    #[error("{0} is not a query protocol")]
    NotAProtocol(&'static str),
}
