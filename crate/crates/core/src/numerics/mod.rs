//! Dense linear-algebra kernels.
//!
//! Everything here is self-contained: a cyclic Jacobi eigensolver for
//! Hermitian matrices, a one-sided Jacobi SVD, a Takagi factorization for
//! complex symmetric matrices, and tolerance-driven rank and nullspace
//! helpers built on the SVD.

mod eig;
mod matrix;
mod svd;
mod takagi;

pub use eig::{hermitian_eig, EigenPairs};
pub use matrix::{add_vec, axpy, basis_vector, c, conj_vec, dot, norm, outer, scale_vec, sub_vec, Matrix, C64};
pub use svd::{
    nullspace_basis, nullspace_basis_scaled, numerical_rank, numerical_rank_scaled, orthonormal_complement,
    singular_values, svd, Svd,
};
pub use takagi::{takagi_symmetric, Takagi};

use crate::error::{Error, Result};

/// Maximum number of Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Numerical thresholds used by every decision in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative threshold for rank decisions: singular values at or below
    /// `rank_tol * σ_max` count as zero.
    pub rank_tol: f64,
    /// Threshold for verification residuals.
    pub residual_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rank_tol: 1e-10, residual_tol: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(rank_tol: f64, residual_tol: f64) -> Result<Self> {
        let t = Tolerance { rank_tol, residual_tol };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rank_tol > 0.0 && self.rank_tol < 1.0) {
            return Err(Error::InvalidTolerance(format!("rank_tol must lie in (0, 1), got {}", self.rank_tol)));
        }
        if !(self.residual_tol > 0.0 && self.residual_tol.is_finite()) {
            return Err(Error::InvalidTolerance(format!("residual_tol must be positive, got {}", self.residual_tol)));
        }
        Ok(())
    }
}

/// Rotation `J = [[c, s], [-s·ph, c·ph]]` that diagonalizes the Hermitian
/// 2×2 matrix `[[app, apq], [conj(apq), aqq]]` via `Jᴴ · M · J`.
///
/// Returns `(c, s, ph, t)` where `t = s / c`; the new diagonal is
/// `(app − t|apq|, aqq + t|apq|)`.
fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (f64, f64, C64, f64) {
    let r = apq.norm();
    let ph = apq.conj() / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, ph, t)
}
