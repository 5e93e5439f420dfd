use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rewriting did not terminate within {0} steps")]
    NonTerminating(usize),
    #[error("dimension profile depends on the values of the parameters")]
    ParamDependent,
    #[error("relations are not confluent for any sampled parameter values")]
    NonConfluent,
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),
    #[error("dimension {dim} is not of the form {k}n+{d} for d={d}", k = .d + 1)]
    BadDimension { d: u32, dim: u32 },
    #[error("choice is infeasible: total cohomology is nonzero in degree {degree} above {bound}")]
    InfeasibleChoice { degree: u32, bound: u32 },
    #[error("fixture error: {0}")]
    Fixture(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
