use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("inversion of zero")]
    InversionOfZero,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible modulo the given modulus")]
    NotInvertible,
    #[error("alpha is not square-free")]
    NotSquareFree,
    #[error("alpha is neither of odd degree nor has a non-square leading coefficient")]
    NotImaginary,
    #[error("operation requires a nonzero element")]
    ZeroElement,
    #[error("modulus must be nonzero")]
    ZeroModulus,
    #[error("X = {x} is below deg(alpha) = {ell}")]
    XBelowEll { x: i64, ell: i64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("lattice sum does not converge")]
    NonConvergent,
}

pub type Result<T> = std::result::Result<T, Error>;
