use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("qubit count {0} outside supported range 1..=64")]
    QubitCount(usize),

    #[error("invalid Pauli character {ch:?} at position {position} (expected one of I, X, Y, Z)")]
    InvalidPauliChar { ch: char, position: usize },

    #[error("Pauli string has length {found}, expected {expected}")]
    PauliLength { expected: usize, found: usize },

    #[error("identity Pauli string is not a valid {0}")]
    Identity(&'static str),

    #[error("subsample of {requested} exceeds pool size {available}")]
    SubsampleTooLarge { requested: usize, available: usize },

    #[error("infeasible budget {budget} for {available} candidates")]
    InfeasibleBudget { budget: usize, available: usize },

    #[error("no mutually anticommuting set of size {size} found")]
    NoClique { size: usize },

    #[error("population size {0} is too small (need at least 2)")]
    Population(usize),

    #[error("duplicate candidate {0}")]
    DuplicateCandidate(String),

    #[error("parameter vector has length {found}, expected {expected}")]
    ParameterLength { expected: usize, found: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("Casimir action on {element} gives {found}, expected {expected}")]
    InconsistentCasimir {
        element: String,
        expected: f64,
        found: f64,
    },

    #[error("Casimir action on {0} is not proportional to the element")]
    NotProportional(String),

    #[error("theory violation: {0}")]
    TheoryViolation(String),

    #[error("generator set is not orthonormal: {0}")]
    NotOrthonormal(String),

    #[error("sample needs at least {needed} values, got {found}")]
    InsufficientSamples { needed: usize, found: usize },

    #[error("unknown selection method {0:?}")]
    UnknownMethod(String),
}
