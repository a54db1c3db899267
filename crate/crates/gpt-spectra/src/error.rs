//! Error taxonomy shared across the crate.

use thiserror::Error;

/// All failure modes of the library.
///
/// `code` returns a stable machine-readable string for each variant; the CLI
/// prints it on stderr and maps variants onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("pairing value {value} outside the valid band")]
    OutOfRange { value: f64 },
    #[error("state is not normalized: (u|rho) = {norm}")]
    NotNormalized { norm: f64 },
    #[error("state is not pure: {0}")]
    NotPure(String),
    #[error("no unique pure effect attains 1 on this state")]
    DaggerNotUnique,
    #[error("set cannot be extended to a maximal distinguishable set: {0}")]
    NotExtendable(String),
    #[error("states are not perfectly distinguishable: {0}")]
    NotDistinguishable(String),
    #[error("peeling residual left the state cone: {0}")]
    ResidualOutsideCone(String),
    #[error("state is not diagonalizable: {0}")]
    NotDiagonalizable(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("eigensolver did not converge within the sweep limit")]
    NoConvergence,
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("spectrum entries are not sorted in non-increasing order")]
    NotSorted,
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("no perfect matching on the positive support; input is not doubly stochastic within tolerance")]
    NoPerfectMatching,
    #[error("target spectrum is not majorized by the source spectrum")]
    NotMajorized,
    #[error("not a maximal distinguishable set: {0}")]
    NotMaximal(String),
    #[error("component state is not contained in the marginal with the given weight")]
    NotContained,
    #[error("synthesized channel failed verification, error {0:e}")]
    SynthesisVerificationFailed(f64),
    #[error("matrix is not doubly stochastic: {0}")]
    NotDoublyStochastic(String),
    #[error("{operation} is not available for the {theory} model")]
    UnsupportedTheory { operation: String, theory: String },
    #[error("strong symmetry check failed for this model; synthesis refused")]
    StrongSymmetryFailed,
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid effect: {0}")]
    InvalidEffect(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable error-code string, one per variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::NotPure(_) => "NotPure",
            Error::DaggerNotUnique => "DaggerNotUnique",
            Error::NotExtendable(_) => "NotExtendable",
            Error::NotDistinguishable(_) => "NotDistinguishable",
            Error::ResidualOutsideCone(_) => "ResidualOutsideCone",
            Error::NotDiagonalizable(_) => "NotDiagonalizable",
            Error::NotSymmetric => "NotSymmetric",
            Error::NoConvergence => "NoConvergence",
            Error::LengthMismatch(_, _) => "LengthMismatch",
            Error::NotSorted => "NotSorted",
            Error::NotSquare { .. } => "NotSquare",
            Error::NoPerfectMatching => "NoPerfectMatching",
            Error::NotMajorized => "NotMajorized",
            Error::NotMaximal(_) => "NotMaximal",
            Error::NotContained => "NotContained",
            Error::SynthesisVerificationFailed(_) => "SynthesisVerificationFailed",
            Error::NotDoublyStochastic(_) => "NotDoublyStochastic",
            Error::UnsupportedTheory { .. } => "UnsupportedTheory",
            Error::StrongSymmetryFailed => "StrongSymmetryFailed",
            Error::InvalidState(_) => "InvalidState",
            Error::InvalidEffect(_) => "InvalidEffect",
            Error::Parse(_) => "Parse",
        }
    }

    /// True for errors caused by malformed or invalid input rather than a
    /// numerical procedure giving up.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch(_)
                | Error::OutOfRange { .. }
                | Error::NotNormalized { .. }
                | Error::NotPure(_)
                | Error::NotSymmetric
                | Error::LengthMismatch(_, _)
                | Error::NotSorted
                | Error::NotSquare { .. }
                | Error::NotDoublyStochastic(_)
                | Error::UnsupportedTheory { .. }
                | Error::InvalidState(_)
                | Error::InvalidEffect(_)
                | Error::Parse(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_stable() {
        assert_eq!(Error::NotDiagonalizable("x".into()).code(), "NotDiagonalizable");
        assert_eq!(Error::NoConvergence.code(), "NoConvergence");
        assert_eq!(Error::Parse("x".into()).code(), "Parse");
    }

    #[test]
    fn classification_splits_input_from_numerical() {
        assert!(Error::Parse("bad".into()).is_input_error());
        assert!(Error::NotSorted.is_input_error());
        assert!(!Error::NotDiagonalizable("x".into()).is_input_error());
        assert!(!Error::NoConvergence.is_input_error());
    }
}
