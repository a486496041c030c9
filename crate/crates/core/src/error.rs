use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomials live over different variable registries")]
    RegistryMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("image of invertible variable `{0}` is not a unit monomial")]
    NonUnitImage(String),
    #[error("negative exponent on non-invertible variable `{0}`")]
    NegativeExponent(String),
    #[error("zero assigned to invertible variable `{0}`")]
    ZeroOnInvertible(String),
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("mutation direction {k} outside 1..={n}")]
    DirectionOutOfRange { k: usize, n: usize },
    #[error("matrix is not skew-symmetrizable")]
    NotSkewSymmetrizable,
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("seed is not acyclic")]
    NotAcyclic,
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("invalid coefficient point: {0}")]
    InvalidPoint(String),
    #[error("point budget exceeded: {needed} evaluations requested, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("Hessian rank test is not valid in characteristic 2")]
    CharacteristicTwo,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
