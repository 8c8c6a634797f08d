//! Dense real linear algebra and subspace calculus.
//!
//! Everything here is small-dimensional and deterministic: Gram–Schmidt with
//! column pivoting for spans, cyclic Jacobi for symmetric spectra, power
//! iteration for operator norms.

mod eigen;
mod matrix;
mod subspace;

pub use eigen::{
    min_norm_solve, operator_norm, psd_pseudo_inverse, spd_inv_sqrt, spd_inverse, symmetric_eigen, SymmetricEigen,
};
pub use matrix::{Matrix, Vector};
pub use subspace::{orthonormal_basis, orthonormal_sequence, Subspace};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every decision the crate makes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Relative threshold below which a direction is considered absent.
    pub rank_eps: f64,
    /// Absolute threshold on residuals (duality, containment, idempotency).
    pub residual_eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rank_eps: 1e-9,
            residual_eps: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(rank_eps: f64, residual_eps: f64) -> Result<Self> {
        if !(rank_eps > 0.0 && residual_eps > 0.0) {
            return Err(Error::InvalidInput("tolerances must be strictly positive".into()));
        }
        Ok(Tolerance { rank_eps, residual_eps })
    }

    /// Same threshold for both rank and residual decisions.
    pub fn uniform(eps: f64) -> Result<Self> {
        Tolerance::new(eps, eps)
    }
}

/// Frobenius norm, as a free function for symmetry with [`operator_norm`].
pub fn frobenius_norm(a: &Matrix) -> f64 {
    a.frobenius_norm()
}

/// Orthogonal projector onto `s`.
pub fn projector(s: &Subspace) -> Matrix {
    s.projector()
}
