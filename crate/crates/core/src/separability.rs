//! Separability of `2×n` states with rank-one Schur complements.
//!
//! A state `M = [[A, B*], [B, C]] ⪰ 0` is `2×n` separable when it is a
//! convex combination of product states `ψψ* ⊗ φφ*` with `ψ ∈ ℂ²`. Its
//! partial transpose `M̃ = [[A, B], [B*, C]]` must then be positive too
//! (the Peres test).
//!
//! After normalizing `A = I`, suppose `rank M = rank M̃ = n + 1`, so that
//! `C − BB* = xx*` and `C − B*B = yy*`. Then `M` is separable iff
//! `x, y, B*x, By` are linearly dependent, and in that case a normal
//! matrix `[[B, νx], [y*, z]]` with `|ν| = 1` exists and certifies the
//! separable decomposition with `n + 1` states.

use crate::commutator::profile;
use crate::complex::{build_completion, dependency_test, verify_normal, SolutionPair};
use crate::error::{Error, Result};
use crate::numerics::{dot, hermitian_eig, numerical_rank, outer, EigenPairs, Matrix, Tolerance, C64};

/// Why the rank-one criterion could not be applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InconclusiveReason {
    /// `rank M` or `rank M̃` differs from `n + 1`.
    RankMismatch { rank_m: usize, rank_mt: usize },
}

/// Outcome of [`sep_check`].
#[derive(Debug, Clone, PartialEq)]
pub enum Separability {
    /// Separable. `witness` is a normal `[[B, νx], [y*, z]]` when one was
    /// constructed; `min_states` is `n + 1` in the rank-one regime.
    Separable {
        witness: Option<Matrix>,
        nu: Option<C64>,
        min_states: Option<usize>,
    },
    Entangled,
    Inconclusive(InconclusiveReason),
}

impl Separability {
    pub fn label(&self) -> &'static str {
        match self {
            Separability::Separable { .. } => "separable",
            Separability::Entangled => "entangled",
            Separability::Inconclusive(_) => "inconclusive",
        }
    }
}

/// Full report of [`sep_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct SepVerdict {
    /// Whether the partial transpose is positive semidefinite.
    pub peres_ok: bool,
    /// `(rank M, rank M̃)`.
    pub ranks: (usize, usize),
    /// `x` with `C − BB* = xx*` (zero if that complement vanishes).
    pub x: Vec<C64>,
    /// `y` with `C − B*B = yy*`.
    pub y: Vec<C64>,
    /// Whether `x, y, B*x, By` are linearly dependent.
    pub dependent: bool,
    pub verdict: Separability,
}

fn require_psd(h: &Matrix, tol: &Tolerance) -> Result<EigenPairs> {
    let eig = hermitian_eig(h, tol)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min < -tol.residual_tol * h.frobenius_norm().max(1.0) {
        return Err(Error::NotPsd(min));
    }
    Ok(eig)
}

fn is_psd(h: &Matrix, tol: &Tolerance) -> Result<bool> {
    match require_psd(h, tol) {
        Ok(_) => Ok(true),
        Err(Error::NotPsd(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `M̃ = [[A, B], [B*, C]]` from `M = [[A, B*], [B, C]]`; an involution.
pub fn partial_transpose(m: &Matrix) -> Result<Matrix> {
    let size = m.require_square()?;
    if size % 2 == 1 {
        return Err(Error::OddSize(size));
    }
    let n = size / 2;
    let mut out = m.clone();
    out.embed(0, n, &m.submatrix(n, 0, n, n));
    out.embed(n, 0, &m.submatrix(0, n, n, n));
    Ok(out)
}

/// The Peres test: whether `M̃` is positive semidefinite, together with `M̃`.
pub fn peres_test(m: &Matrix, tol: &Tolerance) -> Result<(bool, Matrix)> {
    let mt = partial_transpose(m)?;
    require_psd(m, tol)?;
    Ok((is_psd(&mt, tol)?, mt))
}

/// `[[I, B*], [B, C]]`.
pub fn assemble_state(b: &Matrix, c: &Matrix) -> Matrix {
    let n = b.rows();
    let mut m = Matrix::zeros(2 * n, 2 * n);
    m.embed(0, 0, &Matrix::identity(n));
    m.embed(0, n, &b.adjoint());
    m.embed(n, 0, b);
    m.embed(n, n, c);
    m
}

/// Rank and top factor `√λ·v` of a positive semidefinite Schur complement.
fn rank_one_factor(s: &Matrix, scale: f64, tol: &Tolerance) -> Result<(usize, Vec<C64>)> {
    let eig = hermitian_eig(s, tol)?;
    let top = eig.values[0].max(0.0);
    let thr = tol.rank_tol * (top + scale).max(f64::MIN_POSITIVE);
    let rank = eig.values.iter().filter(|&&v| v.abs() > thr).count();
    let v = eig.vector(0);
    Ok((rank, v.iter().map(|z| z * top.sqrt()).collect()))
}

/// Normal `[[B, νx], [y*, z]]` for dependent `x, y, B*x, By`.
fn witness(b: &Matrix, x: &[C64], y: &[C64], tol: &Tolerance) -> Result<Option<(Matrix, C64)>> {
    let n = b.rows();
    let prof = match profile(b, tol) {
        Ok(p) => p,
        Err(Error::RankConditionFailed(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if !prof.rank_ok {
        return Ok(None);
    }
    let (u1, u2) = (&prof.u1, &prof.u2);
    let a1 = dot(u2, y).conj();
    let a2 = dot(u1, y).conj();
    let col: Vec<C64> = (0..n).map(|i| a1 * u1[i] + a2 * u2[i]).collect();
    let row: Vec<C64> = (0..n).map(|i| a2.conj() * u1[i] + a1.conj() * u2[i]).collect();
    let l = prof.projection.mul_vec(&b.adjoint().mul_vec(&col));
    let r = prof.projection.mul_vec(&b.mul_vec(&row));
    // μ²·L = R with |μ| = 1.
    let lr = dot(&l, &r);
    let size = b.frobenius_norm().powi(2) * dot(&col, &col).re;
    let mu2 = if lr.norm() > tol.rank_tol * size.max(f64::MIN_POSITIVE) { lr / lr.norm() } else { C64::new(1.0, 0.0) };
    let mu = mu2.sqrt();
    let pair = SolutionPair::new(mu * a1, mu * a2);
    let w = match build_completion(b, &prof, &pair, mu, tol) {
        Ok(w) => w,
        Err(Error::SolutionInvalid(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let xn = dot(x, x).re;
    let c: Vec<C64> = (0..n).map(|i| w[(i, n)]).collect();
    let nu = dot(x, &c) / xn;
    Ok(Some((w, nu / nu.norm())))
}

/// Witness for parallel `x ∝ y`, where `B` is normal: the corner is the
/// Rayleigh quotient `y*By/y*y`, valid when `x` is an eigenvector of `B`.
fn parallel_witness(b: &Matrix, x: &[C64], y: &[C64], tol: &Tolerance) -> Result<Option<(Matrix, C64)>> {
    let n = b.rows();
    let yy = dot(y, y).re;
    let z = dot(y, &b.mul_vec(y)) / yy;
    let nu = dot(x, y) / dot(x, x).re;
    let nu = nu / nu.norm();
    let mut w = Matrix::zeros(n + 1, n + 1);
    w.embed(0, 0, b);
    for i in 0..n {
        w[(i, n)] = nu * x[i];
        w[(n, i)] = y[i].conj();
    }
    w[(n, n)] = z;
    Ok(verify_normal(&w, tol)?.normal.then_some((w, nu)))
}

/// Decides separability of `[[I, B*], [B, C]]`.
///
/// Errors with [`Error::NotPsd`] when `M` itself is not positive
/// semidefinite. A failed Peres test gives [`Separability::Entangled`];
/// ranks other than `n + 1` give [`Separability::Inconclusive`], except
/// that `C = BB* = B*B` (normal `B`) is separable.
pub fn sep_check(b: &Matrix, c: &Matrix, tol: &Tolerance) -> Result<SepVerdict> {
    let n = b.require_square()?;
    if c.shape() != (n, n) {
        return Err(Error::DimensionMismatch("B and C must have the same size".into()));
    }
    let m = assemble_state(b, c);
    let (peres_ok, _) = peres_test(&m, tol)?;
    let s1 = c - &(b * &b.adjoint());
    let s2 = c - &(&b.adjoint() * b);
    let scale = c.frobenius_norm();
    let (r1, x) = rank_one_factor(&s1, scale, tol)?;
    let (r2, y) = rank_one_factor(&s2, scale, tol)?;
    let ranks = (n + r1, n + r2);
    let zero = vec![C64::new(0.0, 0.0); n];
    if !peres_ok {
        return Ok(SepVerdict { peres_ok, ranks, x, y, dependent: false, verdict: Separability::Entangled });
    }
    if r1 == 0 && r2 == 0 {
        let mut w = Matrix::zeros(n + 1, n + 1);
        w.embed(0, 0, b);
        let verdict = Separability::Separable { witness: Some(w), nu: Some(C64::new(1.0, 0.0)), min_states: None };
        return Ok(SepVerdict { peres_ok, ranks, x: zero.clone(), y: zero, dependent: true, verdict });
    }
    if r1 != 1 || r2 != 1 {
        let verdict =
            Separability::Inconclusive(InconclusiveReason::RankMismatch { rank_m: ranks.0, rank_mt: ranks.1 });
        return Ok(SepVerdict { peres_ok, ranks, x, y, dependent: false, verdict });
    }
    let (dependent, w) = match dependency_test(b, &x, &y, tol) {
        Ok(true) => (true, witness(b, &x, &y, tol)?),
        Ok(false) => (false, None),
        Err(Error::DependentWitness) => (true, parallel_witness(b, &x, &y, tol)?),
        Err(e) => return Err(e),
    };
    let verdict = if dependent {
        let (witness, nu) = match w {
            Some((w, nu)) => (Some(w), Some(nu)),
            None => (None, None),
        };
        Separability::Separable { witness, nu, min_states: Some(n + 1) }
    } else {
        Separability::Entangled
    };
    Ok(SepVerdict { peres_ok, ranks, x, y, dependent, verdict })
}

/// `(A^{-1/2}BA^{-1/2}, A^{-1/2}CA^{-1/2})` for `M = [[A, B*], [B, C]]`
/// with positive definite `A`; the congruence by `I₂ ⊗ A^{-1/2}` preserves
/// separability.
pub fn reduce_general_a(m: &Matrix, tol: &Tolerance) -> Result<(Matrix, Matrix)> {
    let size = m.require_square()?;
    if size % 2 == 1 {
        return Err(Error::OddSize(size));
    }
    let n = size / 2;
    let a = m.submatrix(0, 0, n, n);
    let eig = hermitian_eig(&a, tol)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min <= tol.rank_tol * eig.values[0].abs().max(f64::MIN_POSITIVE) {
        return Err(Error::SingularA(min));
    }
    let r = eig.apply(|v| 1.0 / v.sqrt());
    let b = &(&r * &m.submatrix(n, 0, n, n)) * &r;
    let c = &(&r * &m.submatrix(n, n, n, n)) * &r;
    let c = Matrix::from_fn(n, n, |i, j| (c[(i, j)] + c[(j, i)].conj()) * 0.5);
    Ok((b, c))
}

/// Reduces a general state with [`reduce_general_a`] and runs [`sep_check`].
pub fn sep_check_state(m: &Matrix, tol: &Tolerance) -> Result<SepVerdict> {
    let (b, c) = reduce_general_a(m, tol)?;
    sep_check(&b, &c, tol)
}

/// Residual of `(νx)(νx)* = C − BB*` for a verdict's witness.
pub fn witness_factor_residual(b: &Matrix, c: &Matrix, v: &SepVerdict) -> Option<f64> {
    let Separability::Separable { witness: Some(w), .. } = &v.verdict else { return None };
    let n = b.rows();
    let col: Vec<C64> = (0..n).map(|i| w[(i, n)]).collect();
    let s1 = c - &(b * &b.adjoint());
    Some((&s1 - &outer(&col, &col)).frobenius_norm())
}

/// Numerical rank of `[x y B*x By]`.
pub fn four_vector_rank(b: &Matrix, x: &[C64], y: &[C64], tol: &Tolerance) -> Result<usize> {
    let n = b.require_square()?;
    let four = Matrix::from_columns(n, &[x.to_vec(), y.to_vec(), b.adjoint().mul_vec(x), b.mul_vec(y)]);
    numerical_rank(&four, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{entangled_state_4, rank_condition_not_sufficient, shift};

    #[test]
    fn partial_transpose_is_an_involution() {
        let m = entangled_state_4();
        assert_eq!(partial_transpose(&partial_transpose(&m).unwrap()).unwrap(), m);
    }

    #[test]
    fn bell_state_fails_peres() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)];
        let m = outer(&psi, &psi);
        let (ok, _) = peres_test(&m, &Tolerance::default()).unwrap();
        assert!(!ok);
    }

    #[test]
    fn engineered_state_is_entangled() {
        let tol = Tolerance::default();
        let b = rank_condition_not_sufficient();
        let m = entangled_state_4();
        let c = m.submatrix(4, 4, 4, 4);
        let v = sep_check(&b, &c, &tol).unwrap();
        assert!(v.peres_ok);
        assert_eq!(v.ranks, (5, 5));
        assert_eq!(v.verdict, Separability::Entangled);
    }

    #[test]
    fn shift_with_eigen_witness_is_separable() {
        // x = √d·u₁, y = √d·u₂ for the 3×3 shift (d = 1, u₁ = e₃, u₂ = e₁).
        let tol = Tolerance::default();
        let b = shift(3);
        let mut c = &b * &b.adjoint();
        c[(2, 2)] += C64::new(1.0, 0.0);
        let v = sep_check(&b, &c, &tol).unwrap();
        let Separability::Separable { witness: Some(w), min_states, .. } = &v.verdict else { panic!("{v:?}") };
        assert_eq!(*min_states, Some(4));
        assert!(verify_normal(w, &tol).unwrap().normal);
        assert!(witness_factor_residual(&b, &c, &v).unwrap() < 1e-12);
    }
}
