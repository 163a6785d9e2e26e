//! Numerical tolerances used throughout the crate.
//!
//! Defaults follow three scales: `sympl` for algebraic identities that hold
//! to rounding error (symplectic relations, group laws, reconstruction
//! residuals), `phys` for positivity checks where eigenvalue solvers set the
//! floor (uncertainty relations, CP conditions), and `inv` for invariance
//! and covariance residuals built from sampled group elements.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative Frobenius tolerance for symplectic identities.
    pub sympl: f64,
    /// Tolerance for positivity / uncertainty eigenvalue checks.
    pub phys: f64,
    /// Tolerance for invariance and covariance residuals.
    pub inv: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            sympl: 1e-9,
            phys: 1e-8,
            inv: 1e-8,
        }
    }
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        sympl: 1e-9,
        phys: 1e-8,
        inv: 1e-8,
    };
}
