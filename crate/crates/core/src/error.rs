use thiserror::Error;

/// Errors raised by the exact-arithmetic kernels and the verification checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exponential needs a nilpotent argument, got nonzero constant term")]
    NonZeroConstantTerm,
    #[error("logarithm needs constant term 1")]
    LogConstantTerm,
    #[error("specialization pole: {0}")]
    SpecializationPole(String),
    #[error("insertion pole: {0}")]
    InsertionPole(String),
    #[error("series pole: {0}")]
    SeriesPole(String),
    #[error("requested degree {requested} beyond trusted cutoff {cutoff}")]
    BeyondCutoff { requested: i64, cutoff: i64 },
    #[error("cutoff exceeded: {0}")]
    CutoffExceeded(String),
    #[error("J_0 is not a valid current mode here")]
    ZeroModeRequest,
    #[error("charge mismatch: bra {bra}, ket {ket}")]
    ChargeMismatch { bra: i64, ket: i64 },
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
