use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("level m must be at least 1, got {0}")]
    InvalidLevel(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("derivative of order {requested} requested but only {available} are available")]
    DerivativeOrder { requested: usize, available: usize },

    #[error("derivative of order {order} disagrees with a finite difference at x = {at}")]
    InconsistentDerivatives { order: usize, at: String },

    #[error("function stack does not provide {0}")]
    Missing(&'static str),

    #[error("tail not certifiable: {0}")]
    TailNotCertifiable(String),

    #[error("internal identity violated: {0}")]
    Inconsistent(String),

    #[error("cannot parse {0:?}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_level(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidLevel(m))
    } else {
        Ok(())
    }
}
