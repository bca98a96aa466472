use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter file parse error: {0}")]
    Parse(String),

    #[error("invalid value for `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("unbounded adiabatic surface: G = {g:.6} meV >= homega/2 = {half_homega:.6} meV (a bounded surface needs delta_jt < e_jt)")]
    UnboundedSurface { g: f64, half_homega: f64 },

    #[error("eigensolver did not converge for a {dim}x{dim} matrix")]
    NoConvergence { dim: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(field: &str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.to_owned(),
            reason: reason.into(),
        }
    }
}
