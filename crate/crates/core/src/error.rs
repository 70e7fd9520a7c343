use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// Every variant carries a stable machine-readable code (see [`Error::code`])
/// and maps onto one of the CLI exit codes (see [`Error::exit_code`]).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("matrix is not Hermitian (relative defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:.3e})")]
    Convergence { sweeps: usize, residual: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },

    #[error("map is not completely positive (Choi eigenvalue {eigenvalue:.3e})")]
    NotCp { eigenvalue: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("state is not pure: {0}")]
    NotPure(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("value {value} outside allowed range {range}")]
    Range { value: f64, range: &'static str },

    #[error("impossible request: {0}")]
    Impossible(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "E_DIMENSION",
            Error::NonFinite { .. } => "E_NON_FINITE",
            Error::NotHermitian { .. } => "E_NOT_HERMITIAN",
            Error::Convergence { .. } => "E_CONVERGENCE",
            Error::NotPsd { .. } => "E_NOT_PSD",
            Error::NotCp { .. } => "E_NOT_CP",
            Error::InvalidState(_) => "E_STATE",
            Error::NotPure(_) => "E_PURITY",
            Error::Domain(_) => "E_DOMAIN",
            Error::Range { .. } => "E_RANGE",
            Error::Impossible(_) => "E_IMPOSSIBLE",
            Error::Parse { .. } => "E_PARSE",
            Error::Io { .. } => "E_IO",
        }
    }

    /// Exit code used by the command-line front end.
    ///
    /// 1 = computation or suite failure, 3 = malformed or inconsistent input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Convergence { .. } => 1,
            _ => 3,
        }
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
