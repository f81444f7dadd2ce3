use alloc::string::String;

/// Errors raised by the exact and numeric routines of this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("not invertible")]
    NotInvertible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-commuting pair ({0},{1})")]
    NonCommuting(usize, usize),
    #[error("not quasi-unipotent: eigenvalue of T_s is not a root of unity")]
    NotQuasiUnipotent,
    #[error("not unipotent")]
    NotUnipotent,
    #[error("not nilpotent")]
    NotNilpotent,
    #[error("not semisimple")]
    NotSemisimple,
    #[error("eigenvalue {0} is not a root of the minimal polynomial")]
    NotAnEigenvalue(String),
    #[error("repeated eigenvalue {0}")]
    RepeatedEigenvalue(String),
    #[error("eigenvalue list does not exhaust the spectrum")]
    IncompleteSpectrum,
    #[error("frame not adapted: {0}")]
    FrameNotAdapted(String),
    #[error("section references a different frame")]
    FrameMismatch,
    #[error("invalid VHS data: {0}")]
    InvalidVhs(String),
    #[error("not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("numeric overflow: {0}")]
    Overflow(String),
    #[error("point outside the upper half-space")]
    OutsideUpperHalfSpace,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;
