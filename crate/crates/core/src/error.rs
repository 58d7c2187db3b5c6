use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown identifier '{name}' at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("non-integer exponent '{exponent}' at position {pos}")]
    NonIntegerExponent { pos: usize, exponent: String },
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
    #[error("singular point: {0}")]
    Singular(String),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("invalid valence: {0}")]
    Valence(String),
    #[error("expression size {size} exceeds node budget {budget}")]
    Resource { size: usize, budget: usize },
    #[error("could not place {requested} samples outside the singular loci (placed {placed})")]
    SamplingExhausted { requested: usize, placed: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
}

pub type Result<T> = std::result::Result<T, Error>;
