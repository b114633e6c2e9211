//! The self-commutator `A*A − AA*`: rank condition, eigen-data, inertia
//! bound and unitary defect.

use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{dot, hermitian_eig, norm, outer, singular_values, svd, Matrix, Tolerance, C64};

/// Counts of positive, negative and zero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn rank(&self) -> usize {
        self.plus + self.minus
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(+{}, -{}, 0:{})", self.plus, self.minus, self.zero)
    }
}

/// Eigen-data of the self-commutator of a matrix satisfying the rank
/// condition, or a sentinel for normal input.
#[derive(Debug, Clone)]
pub struct CommutatorProfile {
    /// The positive eigenvalue `d`; zero for the normal sentinel.
    pub d: f64,
    /// Unit eigenvector for `+d`.
    pub u1: Vec<C64>,
    /// Unit eigenvector for `−d`.
    pub u2: Vec<C64>,
    /// Orthogonal projection onto the null space of the commutator.
    pub projection: Matrix,
    /// Orthonormal basis of the null space of the commutator (`n×(n−2)`).
    pub null_basis: Matrix,
    pub inertia: Inertia,
    pub rank_ok: bool,
    /// The self-commutator itself.
    pub commutator: Matrix,
}

impl CommutatorProfile {
    pub fn n(&self) -> usize {
        self.commutator.rows()
    }

    pub fn is_normal(&self) -> bool {
        !self.rank_ok && self.inertia.rank() == 0
    }

    /// The scalars `u₁*Au₁`, `u₁*Au₂`, `u₂*Au₁`.
    pub fn a_scalars(&self, a: &Matrix) -> (C64, C64, C64) {
        let au1 = a.mul_vec(&self.u1);
        let au2 = a.mul_vec(&self.u2);
        (dot(&self.u1, &au1), dot(&self.u1, &au2), dot(&self.u2, &au1))
    }

    /// Same profile with `u₁, u₂` multiplied by `e^{iα₁}, e^{iα₂}`.
    pub fn rephased(&self, alpha1: f64, alpha2: f64) -> CommutatorProfile {
        let p1 = C64::from_polar(1.0, alpha1);
        let p2 = C64::from_polar(1.0, alpha2);
        let mut out = self.clone();
        out.u1 = self.u1.iter().map(|z| z * p1).collect();
        out.u2 = self.u2.iter().map(|z| z * p2).collect();
        out
    }

    /// Same profile with caller-supplied eigenvectors, after checking that
    /// they are unit eigenvectors of the commutator for `+d` and `−d`.
    pub fn with_eigenvectors(&self, u1: Vec<C64>, u2: Vec<C64>, tol: &Tolerance) -> Result<CommutatorProfile> {
        if !self.rank_ok {
            return Err(Error::RankConditionFailed(self.inertia));
        }
        let n = self.n();
        if u1.len() != n || u2.len() != n {
            return Err(Error::DimensionMismatch("eigenvector length".into()));
        }
        let scale = self.commutator.frobenius_norm();
        for (u, lam) in [(&u1, self.d), (&u2, -self.d)] {
            let cu = self.commutator.mul_vec(u);
            let res: f64 = cu.iter().zip(u.iter()).map(|(a, b)| (a - b * lam).norm_sqr()).sum::<f64>().sqrt();
            if (norm(u) - 1.0).abs() > tol.residual_tol || res > tol.residual_tol * scale {
                return Err(Error::FactorizationMismatch(res));
            }
        }
        let mut out = self.clone();
        out.u1 = u1;
        out.u2 = u2;
        Ok(out)
    }
}

/// `A*A − AA*`.
pub fn self_commutator(a: &Matrix) -> Result<Matrix> {
    a.require_square()?;
    let ah = a.adjoint();
    Ok(&(&ah * a) - &(a * &ah))
}

fn is_numerically_normal(a: &Matrix, comm: &Matrix, tol: &Tolerance) -> bool {
    let nrm = a.frobenius_norm();
    comm.frobenius_norm() <= tol.rank_tol * nrm * nrm
}

fn inertia_of(values: &[f64], tol: &Tolerance) -> Inertia {
    let cmax = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let thr = tol.rank_tol * cmax;
    let plus = values.iter().filter(|&&v| v > thr).count();
    let minus = values.iter().filter(|&&v| v < -thr).count();
    Inertia { plus, minus, zero: values.len() - plus - minus }
}

/// Inertia of the self-commutator; `(0, 0, n)` for normal input.
pub fn commutator_inertia(a: &Matrix, tol: &Tolerance) -> Result<Inertia> {
    let n = a.require_square()?;
    let comm = self_commutator(a)?;
    if is_numerically_normal(a, &comm, tol) {
        return Ok(Inertia { plus: 0, minus: 0, zero: n });
    }
    Ok(inertia_of(&hermitian_eig(&comm, tol)?.values, tol))
}

/// Computes `d`, `u₁`, `u₂` and `P` for the self-commutator of `a`.
///
/// Normal input (commutator norm at most `rank_tol·‖A‖²_F`) yields the
/// sentinel profile with `d = 0` and `rank_ok = false`. Input whose
/// commutator does not have exactly one positive and one negative
/// eigenvalue of equal magnitude is rejected with its inertia.
pub fn profile(a: &Matrix, tol: &Tolerance) -> Result<CommutatorProfile> {
    let comm = self_commutator(a)?;
    profile_of_commutator(a, comm, tol)
}

pub(crate) fn profile_of_commutator(a: &Matrix, comm: Matrix, tol: &Tolerance) -> Result<CommutatorProfile> {
    let n = a.require_square()?;
    if is_numerically_normal(a, &comm, tol) {
        return Ok(CommutatorProfile {
            d: 0.0,
            u1: vec![],
            u2: vec![],
            projection: Matrix::identity(n),
            null_basis: Matrix::identity(n),
            inertia: Inertia { plus: 0, minus: 0, zero: n },
            rank_ok: false,
            commutator: comm,
        });
    }
    let eig = hermitian_eig(&comm, tol)?;
    let inertia = inertia_of(&eig.values, tol);
    if inertia.plus != 1 || inertia.minus != 1 {
        return Err(Error::RankConditionFailed(inertia));
    }
    let l1 = eig.values[0];
    let ln = eig.values[n - 1];
    if (l1 + ln).abs() > tol.residual_tol * comm.frobenius_norm() {
        return Err(Error::RankConditionFailed(inertia));
    }
    let d = 0.5 * (l1 - ln);
    let u1 = eig.vector(0);
    let u2 = eig.vector(n - 1);
    let null_basis = eig.vectors.select_columns(&(1..n - 1).collect::<Vec<_>>());
    let projection = &(&Matrix::identity(n) - &outer(&u1, &u1)) - &outer(&u2, &u2);
    Ok(CommutatorProfile { d, u1, u2, projection, null_basis, inertia, rank_ok: true, commutator: comm })
}

/// `max(i₊, i₋)` of the self-commutator, a lower bound for the normal defect.
pub fn nd_lower_bound(a: &Matrix, tol: &Tolerance) -> Result<usize> {
    let i = commutator_inertia(a, tol)?;
    Ok(i.plus.max(i.minus))
}

/// Number of singular values strictly below `‖A‖` (up to `rank_tol`).
pub fn unitary_defect(a: &Matrix, tol: &Tolerance) -> Result<usize> {
    a.require_square()?;
    let s = singular_values(a)?;
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(s.iter().filter(|&&x| x < smax * (1.0 - tol.rank_tol)).count())
}

/// A completion of `a` of size `n + ud(a)` that is `‖A‖` times a unitary.
///
/// With `A = UΣV*` and `s_k = (σ_max² − σ_k²)^{1/2}` for each deficient
/// singular value, the completion is
/// `[[A, U_d·S], [S·V_d*, −Σ_d]]`, a direct sum of 2×2 reflections
/// `[[σ_k, s_k], [s_k, −σ_k]]` in the singular bases.
pub fn minimal_unitary_completion(a: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let n = a.require_square()?;
    let dec = svd(a, tol)?;
    let smax = dec.singulars.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let deficient: Vec<usize> = (0..n).filter(|&k| dec.singulars[k] < smax * (1.0 - tol.rank_tol)).collect();
    let p = deficient.len();
    let mut b = Matrix::zeros(n + p, n + p);
    b.embed(0, 0, a);
    for (j, &k) in deficient.iter().enumerate() {
        let sk = dec.singulars[k];
        let s = ((smax - sk) * (smax + sk)).sqrt();
        for i in 0..n {
            b[(i, n + j)] = dec.u[(i, k)] * s;
            b[(n + j, i)] = dec.v[(i, k)].conj() * s;
        }
        b[(n + j, n + j)] = C64::new(-sk, 0.0);
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn shift_profile() {
        let p = profile(&catalog::shift(4), &Tolerance::default()).unwrap();
        assert_eq!(p.d, 1.0);
        assert_eq!(p.u1, crate::numerics::basis_vector(4, 3));
        assert_eq!(p.u2, crate::numerics::basis_vector(4, 0));
        assert_eq!(p.projection, Matrix::diag_real(&[0.0, 1.0, 1.0, 0.0]));
    }

    #[test]
    fn normal_input_gives_sentinel() {
        let p = profile(&Matrix::diag_real(&[1.0, 2.0, 3.0]), &Tolerance::default()).unwrap();
        assert!(p.is_normal());
        assert_eq!(p.d, 0.0);
    }

    #[test]
    fn rank_four_commutator_is_rejected() {
        let s = catalog::shift(2);
        let mut a = Matrix::zeros(5, 5);
        a.embed(0, 0, &s);
        a.embed(2, 2, &s.scale_re(3.0));
        let err = profile(&a, &Tolerance::default()).unwrap_err();
        assert_eq!(err, Error::RankConditionFailed(Inertia { plus: 2, minus: 2, zero: 1 }));
    }

    #[test]
    fn shift_unitary_completion_pattern() {
        let b = minimal_unitary_completion(&catalog::shift(4), &Tolerance::default()).unwrap();
        assert_eq!(b.shape(), (5, 5));
        let zeta = b[(3, 4)];
        let rho = b[(4, 0)];
        assert!((zeta.norm() - 1.0).abs() < 1e-14 && (rho.norm() - 1.0).abs() < 1e-14);
        let bb = &b.adjoint() * &b;
        assert!((&bb - &Matrix::identity(5)).frobenius_norm() < 1e-14);
    }
}
