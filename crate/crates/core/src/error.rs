use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable sets overlap on `{0}`")]
    OverlappingSets(String),

    #[error("negative variance {value} for source `{name}`")]
    NegativeVariance { name: String, value: f64 },

    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("coefficient vector has length {got}, expected {expected}")]
    CoefficientLength { got: usize, expected: usize },

    #[error("power budget exceeded: used {used} > P = {budget}")]
    PowerViolation { used: f64, budget: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{table}: {detail}")]
    InvalidTable { table: String, detail: String },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("size cap exceeded: {dimension} = {size} > {cap}")]
    CapExceeded {
        dimension: String,
        size: f64,
        cap: f64,
    },

    #[error("inconsistent mutual-information values: {0}")]
    InconsistentInformation(String),

    #[error("{source_name}: {detail}")]
    InvalidFile { source_name: String, detail: String },

    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
