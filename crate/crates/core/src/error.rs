use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An integrand or kernel produced a non-finite value.
    #[error("non-finite value {value} at node {node}")]
    NonFinite { node: f64, value: f64 },

    /// The quadrature rule is too coarse for the requested integrand.
    #[error("quadrature rule has {have} panels, need at least {need}")]
    UnderResolved { have: usize, need: usize },

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("matrix is not symmetric: max |A - A^T| = {0:e}")]
    Asymmetric(f64),

    #[error("Funk-Hecke cluster mismatch at degrees {0:?}")]
    ClusterMismatch(Vec<usize>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
