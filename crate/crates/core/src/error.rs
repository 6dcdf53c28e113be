use thiserror::Error;

/// Every failure the library can report.
///
/// [`Error::kind`] groups variants into invalid input, mathematical rejection and
/// internal failure; the CLI maps these groups to exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("numeric overflow in {0}")]
    NumericOverflow(&'static str),
    #[error("isometry is the identity")]
    IsIdentity,
    #[error("isometry is not hyperbolic")]
    NotHyperbolic,
    #[error("isometries share a fixed point")]
    SharedFixedPoint,
    #[error("twist {0} lies within tolerance of a region boundary")]
    AmbiguousNearBoundary(f64),
    #[error("character lies in V")]
    InV,
    #[error("kappa {0} is not greater than 2")]
    KappaTooSmall(f64),
    #[error("normalization exceeded {0} iterations")]
    IterationCap(usize),
    #[error("pentagon is not simple")]
    NotSimple,
    #[error("twist and angle sum disagree by {0}")]
    TwistAngleMismatch(f64),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("depth {0} exceeds the maximum of 8")]
    DepthTooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    InvalidInput,
    Rejection,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidMatrix(_) | Error::InvalidPoint(_) | Error::DepthTooLarge(_) => {
                ErrorKind::InvalidInput
            }
            Error::InV
            | Error::KappaTooSmall(_)
            | Error::IsIdentity
            | Error::NotHyperbolic
            | Error::SharedFixedPoint
            | Error::NotSimple => ErrorKind::Rejection,
            Error::NumericOverflow(_)
            | Error::AmbiguousNearBoundary(_)
            | Error::IterationCap(_)
            | Error::TwistAngleMismatch(_)
            | Error::ConstructionFailed(_) => ErrorKind::Internal,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
