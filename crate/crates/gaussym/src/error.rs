//! Error type shared by the whole crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not symplectic (residual {residual:.3e})")]
    NotSymplectic { residual: f64 },

    #[error("matrix is not symmetric positive-definite: {0}")]
    NotPositiveDefinite(String),

    #[error("eigenvalue {value} outside the domain of {function}")]
    Domain { function: &'static str, value: f64 },

    #[error("covariance matrix violates the uncertainty relation (min symplectic eigenvalue {min_nu})")]
    Uncertainty { min_nu: f64 },

    #[error("state is not invariant under the representation (residual {residual:.3e})")]
    NotInvariant { residual: f64 },

    #[error("channel is not covariant under the representations (residual {residual:.3e})")]
    NotCovariant { residual: f64 },

    #[error("infeasible: {reason} (residual {residual:.3e})")]
    Infeasible { reason: String, residual: f64 },

    #[error("unsupported representation kind for this operation: {0}")]
    UnsupportedRep(String),

    #[error("Fock cutoff {cutoff} too small (estimated tail mass {tail:.3e}); suggest {suggested}")]
    CutoffTooSmall {
        cutoff: usize,
        tail: f64,
        suggested: usize,
    },

    #[error("series did not converge: {0}")]
    NonConvergence(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
