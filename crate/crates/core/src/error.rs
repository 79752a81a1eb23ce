//! Error types shared across the crate.

use thiserror::Error;

use crate::poly::Rational;

pub use crate::poly::{ParseError, ParseErrorKind};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum PsiError {
    #[error("section is identically zero")]
    IdenticallyZero,
    #[error("empty interval: lo must be < hi")]
    EmptyInterval,
    #[error("∂xφ vanishes identically; there are no sections to trace")]
    DegenerateDerivative,
    #[error("{count} sign changes from - to + in the section at y = {y}")]
    MultipleSignChanges { y: Rational, count: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum QuantityError {
    #[error("bracket A({p},{q}) disagrees with the closed form")]
    ClosedFormMismatch { p: u32, q: u32 },
    #[error("normalizing quantity vanishes")]
    ZeroScale,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SpectralError {
    #[error("eigensolver did not converge in {max_iter} iterations (residual {residual:e})")]
    NoConvergence { max_iter: usize, residual: f64, mu: f64 },
    #[error("section has a sign change from - to +; the inequality is not claimed")]
    PreconditionViolated,
    #[error("not enough data points for a fit ({got} < {need})")]
    InsufficientData { got: usize, need: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Psi(#[from] PsiError),
    #[error(transparent)]
    Quantity(#[from] QuantityError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}
