use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero: z bound to 0 with negative z-powers present")]
    DivisionByZero,
    #[error("copy index {index} out of range for a {copies}-copy algebra")]
    IndexOutOfRange { index: usize, copies: usize },
    #[error("copy count mismatch: {0} vs {1}")]
    CopyMismatch(usize, usize),
    #[error("uncancelled pole z^{0} in series expansion")]
    NegativeOrderResidual(i32),
    #[error("exponential token on {0}, which is not the primitive generator of the model")]
    UnresolvableToken(String),
    #[error("[E, {generator}] - Λ·E differs from the expected remainder; residual: {residual}")]
    FactorizationMismatch { generator: String, residual: String },
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("illegal exponent {exponent} on `{atom}` at offset {offset}")]
    IllegalExponent { atom: String, exponent: String, offset: usize },
    #[error("field is not a solution: relative residual {0:e}")]
    NotASolution(f64),
    #[error("unsupported operator: {0}")]
    UnsupportedOperator(String),
    #[error("invalid step: {0}")]
    InvalidStep(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
