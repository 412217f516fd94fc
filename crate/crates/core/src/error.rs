use thiserror::Error;

use crate::coeff::CoeffError;
use crate::lr3::{LrError, Weight};
use crate::ratverify::VerificationReport;
use crate::tensorpoly::PolyError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Lr(#[from] LrError),
    #[error("{dst} does not occur in {src1} ⊗ {src2}")]
    NotOccurring { src1: Weight, src2: Weight, dst: Weight },
    #[error("kernel of the contraction on {weight} has dimension {found}, expected {expected}")]
    KernelDimension { weight: Weight, found: usize, expected: u64 },
    #[error("vector is not in the span of the given basis")]
    NotInSpan,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("basis maps are linearly dependent: {0}")]
    IndependenceFailure(String),
    #[error("rank deficient: {}", .0.summary())]
    RankDeficient(Box<VerificationReport>),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("internal consistency violation: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable name used in JSON error objects and FFI status codes.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Coeff(CoeffError::DenominatorDivisibleByP { .. }) => "DenominatorDivisibleByP",
            Error::Coeff(CoeffError::NotPrime(_)) => "NotPrime",
            Error::Coeff(_) => "Coefficient",
            Error::Poly(_) => "Polynomial",
            Error::Lr(_) => "Weight",
            Error::NotOccurring { .. } => "NotOccurring",
            Error::KernelDimension { .. } => "KernelDimension",
            Error::NotInSpan => "NotInSpan",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::IndependenceFailure(_) => "IndependenceFailure",
            Error::RankDeficient(_) => "RankDeficient",
            Error::InvalidInstance(_) => "InvalidInstance",
            Error::Internal(_) => "Internal",
        }
    }
}
