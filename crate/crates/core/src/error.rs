use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("valuation of zero undefined")]
    ValuationOfZero,
    #[error("invalid parameter t = {0}: must avoid 0 and 1")]
    InvalidParameter(String),
    #[error("invalid projective point (0, 0)")]
    InvalidProjectivePoint,
    #[error("identical curves: intersection is all torsion images")]
    IdenticalCurves,
    #[error("compute failure: {0}")]
    Compute(String),
    #[error("missing calibration: {0}")]
    MissingCalibration(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Compute(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
