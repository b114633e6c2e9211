//! Deciding `nd(A) = 1` over the complex field and parametrizing every
//! minimal normal completion.
//!
//! A matrix has normal defect one exactly when its self-commutator has rank
//! two, `A*A − AA* = d·u₁u₁* − d·u₂u₂*`, and the equation
//! `PA*(x₁u₁ + x₂u₂) = PA(x̄₂u₁ + x̄₁u₂)` has a solution with
//! `|x₁|² − |x₂|² = d`. Every such pair and every phase `μ` gives the
//! completion
//!
//! ```text
//! [[A, μ(x₁u₁ + x₂u₂)], [μ̄(x₂u₁* + x₁u₂*), z]]
//! ```
//!
//! and all minimal normal completions arise this way.

mod refined;
mod tableau;

pub use refined::{assemble_tableau_refined, RefinedBasis};
pub use tableau::{
    assemble_tableau, equation_residual, sample_solutions, solve_feasibility, Feasibility, Gate, ProcedureTableau,
    SolutionPair, SolutionSet,
};

use crate::commutator::{profile, self_commutator, CommutatorProfile};
use crate::error::{Error, Result};
use crate::numerics::{numerical_rank, outer, Matrix, Tolerance, C64};

/// Which linear system to solve for `(x₁, x₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableauMode {
    /// Special-basis system for `n ≥ 3`, falling back to the standard one
    /// when the special basis is ill-conditioned.
    #[default]
    Auto,
    /// Always the `2n×4` system.
    Standard,
    /// Always the `(n−2)×4` system; errors if it cannot be built.
    Refined,
}

/// Outcome of [`nd_status`].
#[derive(Debug, Clone)]
pub enum NdStatus {
    Normal,
    One(Box<CompletionFamily>),
    MoreThanOne(Gate),
}

impl NdStatus {
    pub fn is_one(&self) -> bool {
        matches!(self, NdStatus::One(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            NdStatus::Normal => "normal",
            NdStatus::One(_) => "one",
            NdStatus::MoreThanOne(_) => "more-than-one",
        }
    }
}

/// All minimal normal completions of a matrix with `nd = 1`.
#[derive(Debug, Clone)]
pub struct CompletionFamily {
    pub matrix: Matrix,
    pub profile: CommutatorProfile,
    pub tableau: ProcedureTableau,
    pub solutions: SolutionSet,
    pub basis: Option<RefinedBasis>,
    pub a11: C64,
    pub a12: C64,
    pub a21: C64,
}

impl CompletionFamily {
    pub fn d(&self) -> f64 {
        self.profile.d
    }

    /// `count` solution pairs, reproducible for a fixed `seed`.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<SolutionPair> {
        self.solutions.sample(count, seed)
    }

    pub fn completion(&self, pair: &SolutionPair, mu: C64, tol: &Tolerance) -> Result<Matrix> {
        build_completion(&self.matrix, &self.profile, pair, mu, tol)
    }

    /// The corner entry `z` for a pair.
    pub fn corner(&self, pair: &SolutionPair) -> C64 {
        corner(self.a11, self.a12, self.a21, self.profile.d, pair)
    }
}

fn corner(a11: C64, a12: C64, a21: C64, d: f64, p: &SolutionPair) -> C64 {
    let (x1, x2) = (p.x1, p.x2);
    a11 - (x2 * (a12 * x1.conj() - a21.conj() * x2) + x1 * (a12.conj() * x1 - a21 * x2.conj())) / d
}

/// Builds `[[A, μ(x₁u₁ + x₂u₂)], [μ̄(x₂u₁* + x₁u₂*), z]]`.
///
/// The pair is checked against the completion equation and the level
/// `|x₁|² − |x₂|² = d`; the top-left block is `A` bit-exactly.
pub fn build_completion(
    a: &Matrix,
    profile: &CommutatorProfile,
    pair: &SolutionPair,
    mu: C64,
    tol: &Tolerance,
) -> Result<Matrix> {
    if (mu.norm() - 1.0).abs() > tol.residual_tol {
        return Err(Error::InvalidPhase(mu.norm()));
    }
    if !profile.rank_ok {
        return Err(Error::RankConditionFailed(profile.inertia));
    }
    let n = a.require_square()?;
    let d = profile.d;
    let size = pair.x1.norm() + pair.x2.norm();
    let eq = equation_residual(a, profile, pair);
    let lvl = (pair.level() - d).abs();
    if eq > tol.residual_tol * a.frobenius_norm().max(1.0) * size.max(1.0) || lvl > tol.residual_tol * d {
        return Err(Error::SolutionInvalid(eq.max(lvl / d)));
    }
    let (a11, a12, a21) = profile.a_scalars(a);
    let z = corner(a11, a12, a21, d, pair);
    let mut b = Matrix::zeros(n + 1, n + 1);
    b.embed(0, 0, a);
    for i in 0..n {
        b[(i, n)] = mu * (pair.x1 * profile.u1[i] + pair.x2 * profile.u2[i]);
        b[(n, i)] = mu.conj() * (pair.x2 * profile.u1[i].conj() + pair.x1 * profile.u2[i].conj());
    }
    b[(n, n)] = z;
    Ok(b)
}

/// Result of a normality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalityCheck {
    pub normal: bool,
    /// `‖B*B − BB*‖_F`.
    pub residual: f64,
    /// `‖B*B − BB*‖_F / ‖B‖²_F` (zero for `B = 0`).
    pub relative: f64,
}

/// Normal iff `‖B*B − BB*‖_F ≤ residual_tol · ‖B‖²_F`.
pub fn verify_normal(b: &Matrix, tol: &Tolerance) -> Result<NormalityCheck> {
    let residual = self_commutator(b)?.frobenius_norm();
    let nb = b.frobenius_norm();
    let relative = if nb > 0.0 { residual / (nb * nb) } else { 0.0 };
    Ok(NormalityCheck { normal: residual <= tol.residual_tol * nb * nb, residual, relative })
}

/// Whether `x, y, A*x, Ay` are linearly dependent, for a factorization
/// `A*A − AA* = xx* − yy*` with independent `x, y`.
pub fn dependency_test(a: &Matrix, x: &[C64], y: &[C64], tol: &Tolerance) -> Result<bool> {
    let n = a.require_square()?;
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch("witness vector length".into()));
    }
    let comm = self_commutator(a)?;
    let fac = &outer(x, x) - &outer(y, y);
    let mismatch = (&comm - &fac).frobenius_norm();
    if mismatch > tol.residual_tol * comm.frobenius_norm().max(1.0) {
        return Err(Error::FactorizationMismatch(mismatch));
    }
    if numerical_rank(&Matrix::from_columns(n, &[x, y]), tol)? < 2 {
        return Err(Error::DependentWitness);
    }
    let ahx = a.adjoint().mul_vec(x);
    let ay = a.mul_vec(y);
    let four = Matrix::from_columns(n, &[x.to_vec(), y.to_vec(), ahx, ay]);
    Ok(numerical_rank(&four, tol)? < 4)
}

/// Decides `nd(A) = 1` with the default tableau choice.
pub fn nd_status(a: &Matrix, tol: &Tolerance) -> Result<NdStatus> {
    nd_status_with(a, tol, TableauMode::Auto)
}

/// Decides `nd(A) = 1` with an explicit tableau choice.
pub fn nd_status_with(a: &Matrix, tol: &Tolerance, mode: TableauMode) -> Result<NdStatus> {
    a.require_square()?;
    let prof = match profile(a, tol) {
        Ok(p) => p,
        Err(Error::RankConditionFailed(i)) => return Ok(NdStatus::MoreThanOne(Gate::RankCondition(i))),
        Err(e) => return Err(e),
    };
    status_from_profile(a, prof, tol, mode)
}

pub(crate) fn status_from_profile(
    a: &Matrix,
    prof: CommutatorProfile,
    tol: &Tolerance,
    mode: TableauMode,
) -> Result<NdStatus> {
    if prof.is_normal() {
        return Ok(NdStatus::Normal);
    }
    let n = a.rows();
    let (basis, tableau) = match mode {
        TableauMode::Standard => (None, assemble_tableau(a, &prof, tol)?),
        TableauMode::Refined => {
            let (b, t) = assemble_tableau_refined(a, &prof, tol)?;
            (Some(b), t)
        }
        TableauMode::Auto if n >= 3 => match assemble_tableau_refined(a, &prof, tol) {
            Ok((b, t)) => (Some(b), t),
            Err(Error::DegenerateSpan | Error::NoConvergence(_) | Error::FactorizationMismatch(_)) => {
                (None, assemble_tableau(a, &prof, tol)?)
            }
            Err(e) => return Err(e),
        },
        TableauMode::Auto => (None, assemble_tableau(a, &prof, tol)?),
    };
    match solve_feasibility(&tableau, prof.d, tol)? {
        Feasibility::Infeasible(gate) => Ok(NdStatus::MoreThanOne(gate)),
        Feasibility::Feasible(solutions) => {
            let (a11, a12, a21) = prof.a_scalars(a);
            Ok(NdStatus::One(Box::new(CompletionFamily {
                matrix: a.clone(),
                profile: prof,
                tableau,
                solutions,
                basis,
                a11,
                a12,
                a21,
            })))
        }
    }
}
