use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("trace is not one (|tr - 1| = {0:.3e})")]
    NotUnitTrace(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("state is not pure (purity {0:.12})")]
    NotPure(f64),
    #[error("channel is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),
    #[error("observable spectrum outside [0, 1]: [{0:.3e}, {1:.3e}]")]
    ObservableOutOfRange(f64, f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("optimization infeasible: {0}")]
    Infeasible(String),
    #[error("solver failure: {0}")]
    Solver(String),
}
