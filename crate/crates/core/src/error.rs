use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain an operation supports.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A series or connection formula lost too many digits to be trusted.
    #[error("loss of precision in {op}: estimated relative error {estimate:.3e}")]
    Precision { op: &'static str, estimate: f64 },

    /// A bracketed root search did not converge.
    #[error("no convergence in {op} on [{lo}, {hi}]")]
    Convergence { op: &'static str, lo: f64, hi: f64 },

    /// The requested quantity only exists at an eigenvalue and the input is not one.
    #[error("{op}: not an eigenvalue (residual {residual:.3e})")]
    NotEigenvalue { op: &'static str, residual: f64 },
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    /// True for failures of an iterative solver rather than bad input.
    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::Convergence { .. } | Error::Precision { .. })
    }
}
