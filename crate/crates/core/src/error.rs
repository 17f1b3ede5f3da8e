use thiserror::Error;

/// Errors produced anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generator count {0} out of range (0..=16)")]
    GeneratorCount(usize),
    #[error("generator index {index} out of range for {m} generators")]
    GeneratorIndex { index: usize, m: usize },
    #[error("Weil algebra mismatch: {left} vs {right} generators")]
    AlgebraMismatch { left: usize, right: usize },
    #[error("{0} cannot be lifted on the exact rational backend")]
    TranscendentalOnExact(&'static str),
    #[error("float literal {0} is not allowed on the exact rational backend")]
    FloatLiteralOnExact(String),
    #[error("{func} undefined at real part {value}")]
    Domain { func: &'static str, value: String },
    #[error("division by a non-unit (zero real part)")]
    NonUnit,
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown identifier `{name}` at {line}:{col}")]
    UnknownIdentifier { name: String, line: usize, col: usize },
    #[error("variable index {index} exceeds dimension {dim} at {line}:{col}")]
    VariableOutOfRange { index: usize, dim: usize, line: usize, col: usize },
    #[error("mixed degrees {first} and {second} in one form")]
    MixedDegrees { first: usize, second: usize },
    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    #[error("degree {degree} is invalid for dimension {dim}")]
    DegreeOutOfRange { degree: usize, dim: usize },
    #[error("exterior derivative of a top-degree form on R^{0} is undefined")]
    TopDegree(usize),
    #[error("mark generator e{0} collides with the base point or another mark")]
    MarkCollision(usize),
    #[error("lower-order boundary coefficient {value} on monomial {monomial} exceeds tolerance")]
    LowerOrder { monomial: String, value: String },
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
