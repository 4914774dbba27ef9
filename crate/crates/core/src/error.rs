use thiserror::Error;

/// Errors raised by polynomial arithmetic and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands live in different variable spaces")]
    SpaceMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid variable space: {0}")]
    InvalidSpace(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("substituted value for `{0}` involves `{0}` itself")]
    SelfReferentialSubstitution(String),
    #[error("negative exponent in `{0}` where a polynomial was required")]
    NegativeExponent(String),
    #[error("negative power of a non-invertible value for `{0}`")]
    NotInvertible(String),
    #[error("missing value for variable `{0}`")]
    MissingValue(String),
    #[error("zero value for `{0}` which occurs with a negative exponent")]
    ZeroDenominator(String),
    #[error("expression has {0} terms, above the configured limit of {1}")]
    SizeLimit(usize, usize),
    #[error("zero polynomial where a nonzero one was required")]
    ZeroPolynomial,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A syntax error in a polynomial expression, with its byte offset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}
