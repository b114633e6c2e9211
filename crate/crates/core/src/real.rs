//! Real normal defect one and real minimal normal completions.
//!
//! For real `A` with `AᵀA − AAᵀ = d·u₁u₁ᵀ − d·u₂u₂ᵀ`, put
//! `u = PAᵀu₁, v = PAᵀu₂, w = PAu₁, q = PAu₂`. A real completion exists
//! iff one of
//!
//! ```text
//! Case 1: (u − q)·x₁ + (v − w)·x₂ = 0
//! Case 2: (u + q)·x₁ + (v + w)·x₂ = 0
//! ```
//!
//! has a real solution with `x₁² − x₂² = d`. Each system has two columns,
//! so it is classified by its rank and, in rank one, by which coefficient
//! dominates.

use std::fmt;

use crate::commutator::{profile, CommutatorProfile};
use crate::error::{Error, Result};
use crate::numerics::{svd, Matrix, Tolerance, C64};

/// Classification of one of the two 2-column systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseCode {
    /// Rank zero: every point of the hyperbola solves it.
    A,
    /// Rank one with `|α| ≥ |β|`: no solution on the hyperbola.
    B,
    /// Rank one with `|α| < |β|`: exactly two solutions.
    C,
    /// Rank two: only the zero solution.
    D,
}

impl CaseCode {
    pub fn letter(&self) -> char {
        match self {
            CaseCode::A => 'a',
            CaseCode::B => 'b',
            CaseCode::C => 'c',
            CaseCode::D => 'd',
        }
    }

    pub fn solvable(&self) -> bool {
        matches!(self, CaseCode::A | CaseCode::C)
    }
}

impl fmt::Display for CaseCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Which of the two real completion shapes a solution belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealCase {
    Case1,
    Case2,
}

/// Analysis of one 2-column system `c₁·x₁ + c₂·x₂ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemReport {
    pub rank: usize,
    pub code: CaseCode,
    /// Unit direction `b` with `c₁ = αb`, `c₂ = βb` (rank one only).
    pub direction: Option<Vec<f64>>,
    /// `(α, β)` (rank one only).
    pub coefficients: Option<(f64, f64)>,
}

/// Case analysis of both systems.
#[derive(Debug, Clone, PartialEq)]
pub struct RealCaseReport {
    pub case1: SystemReport,
    pub case2: SystemReport,
}

impl RealCaseReport {
    pub fn m1(&self) -> usize {
        self.case1.rank
    }

    pub fn m2(&self) -> usize {
        self.case2.rank
    }

    /// Real normal defect one iff either system is of type (a) or (c).
    pub fn rnd_one(&self) -> bool {
        self.case1.code.solvable() || self.case2.code.solvable()
    }

    /// Case label such as `"1a/2c"`.
    pub fn label(&self) -> String {
        format!("1{}/2{}", self.case1.code, self.case2.code)
    }
}

/// A real solution `(x₁, x₂)` of one of the two systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealSolution {
    pub case: RealCase,
    pub x1: f64,
    pub x2: f64,
}

fn re_vec(v: &[C64]) -> Vec<f64> {
    v.iter().map(|z| z.re).collect()
}

fn real_mul(a: &Matrix, v: &[f64]) -> Vec<f64> {
    (0..a.rows()).map(|i| (0..a.cols()).map(|j| a[(i, j)].re * v[j]).sum()).collect()
}

/// The real vectors `PAᵀu₁, PAᵀu₂, PAu₁, PAu₂`.
fn real_hat_vectors(a: &Matrix, p: &CommutatorProfile) -> [Vec<f64>; 4] {
    let at = a.transpose();
    let (u1, u2) = (re_vec(&p.u1), re_vec(&p.u2));
    let pm = &p.projection;
    [
        real_mul(pm, &real_mul(&at, &u1)),
        real_mul(pm, &real_mul(&at, &u2)),
        real_mul(pm, &real_mul(a, &u1)),
        real_mul(pm, &real_mul(a, &u2)),
    ]
}

fn classify(c1: &[f64], c2: &[f64], scale: f64, tol: &Tolerance) -> Result<SystemReport> {
    let n = c1.len();
    let m = Matrix::from_fn(n, 2, |i, j| C64::new(if j == 0 { c1[i] } else { c2[i] }, 0.0));
    let dec = svd(&m, tol)?;
    let cutoff = tol.rank_tol * dec.singulars.first().copied().unwrap_or(0.0).max(scale);
    let rank = dec.singulars.iter().filter(|&&s| s > cutoff).count();
    Ok(match rank {
        0 => SystemReport { rank, code: CaseCode::A, direction: None, coefficients: None },
        1 => {
            let mut b = re_vec(&dec.u.column(0));
            if let Some(i) = b.iter().position(|x| x.abs() > tol.rank_tol) {
                if b[i] < 0.0 {
                    b.iter_mut().for_each(|x| *x = -*x);
                }
            }
            let alpha: f64 = b.iter().zip(c1).map(|(x, y)| x * y).sum();
            let beta: f64 = b.iter().zip(c2).map(|(x, y)| x * y).sum();
            let code = if alpha.abs() >= beta.abs() { CaseCode::B } else { CaseCode::C };
            SystemReport { rank, code, direction: Some(b), coefficients: Some((alpha, beta)) }
        }
        _ => SystemReport { rank, code: CaseCode::D, direction: None, coefficients: None },
    })
}

fn require_real(a: &Matrix) -> Result<()> {
    a.require_square()?;
    if a.is_real() {
        Ok(())
    } else {
        Err(Error::NotReal)
    }
}

/// Classifies both real systems for a real matrix satisfying the rank
/// condition.
pub fn real_case_analysis(a: &Matrix, tol: &Tolerance) -> Result<(RealCaseReport, CommutatorProfile)> {
    require_real(a)?;
    let prof = profile(a, tol)?;
    if !prof.rank_ok {
        return Err(Error::RankConditionFailed(prof.inertia));
    }
    let report = case_report(a, &prof, tol)?;
    Ok((report, prof))
}

fn case_report(a: &Matrix, prof: &CommutatorProfile, tol: &Tolerance) -> Result<RealCaseReport> {
    let [u, v, w, q] = real_hat_vectors(a, prof);
    let sub = |x: &[f64], y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(a, b)| a - b).collect() };
    let add = |x: &[f64], y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(a, b)| a + b).collect() };
    let scale = a.frobenius_norm();
    Ok(RealCaseReport {
        case1: classify(&sub(&u, &q), &sub(&v, &w), scale, tol)?,
        case2: classify(&add(&u, &q), &add(&v, &w), scale, tol)?,
    })
}

/// Residual of the real system for `case` at `(x₁, x₂)`.
pub fn real_equation_residual(a: &Matrix, prof: &CommutatorProfile, case: RealCase, x1: f64, x2: f64) -> f64 {
    let [u, v, w, q] = real_hat_vectors(a, prof);
    let sign = match case {
        RealCase::Case1 => -1.0,
        RealCase::Case2 => 1.0,
    };
    (0..u.len()).map(|i| ((u[i] + sign * q[i]) * x1 + (v[i] + sign * w[i]) * x2).powi(2)).sum::<f64>().sqrt()
}

/// All minimal real normal completions of a matrix with `rnd = 1`.
#[derive(Debug, Clone)]
pub struct RealFamily {
    pub matrix: Matrix,
    pub profile: CommutatorProfile,
    pub report: RealCaseReport,
    /// Solutions of the solvable cases; type (a) systems contribute the
    /// hyperbola points over the `x₂` grid.
    pub solutions: Vec<RealSolution>,
}

impl RealFamily {
    pub fn d(&self) -> f64 {
        self.profile.d
    }

    pub fn completion(&self, s: &RealSolution, tol: &Tolerance) -> Result<Matrix> {
        build_real_completion(&self.matrix, &self.profile, s.case, s.x1, s.x2, tol)
    }
}

/// Outcome of [`rnd_status`].
#[derive(Debug, Clone)]
pub enum RndStatus {
    Normal,
    One(Box<RealFamily>),
    /// Rank condition fails (`None`) or both systems are of type (b)/(d).
    MoreThanOne(Option<RealCaseReport>),
}

impl RndStatus {
    pub fn is_one(&self) -> bool {
        matches!(self, RndStatus::One(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            RndStatus::Normal => "normal",
            RndStatus::One(_) => "one",
            RndStatus::MoreThanOne(_) => "more-than-one",
        }
    }
}

/// Default `x₂` grid for sampling type (a) hyperbolas.
pub const DEFAULT_X2_GRID: [f64; 5] = [0.0, 1.0, -1.0, 2.0, -2.0];

/// Decides `rnd(A) = 1` with the default hyperbola grid.
pub fn rnd_status(a: &Matrix, tol: &Tolerance) -> Result<RndStatus> {
    rnd_status_with_grid(a, tol, &DEFAULT_X2_GRID)
}

fn solutions_for(sys: &SystemReport, case: RealCase, d: f64, grid: &[f64]) -> Vec<RealSolution> {
    match (sys.code, sys.coefficients) {
        (CaseCode::A, _) => grid
            .iter()
            .flat_map(|&x2| {
                let x1 = (d + x2 * x2).sqrt();
                [RealSolution { case, x1, x2 }, RealSolution { case, x1: -x1, x2 }]
            })
            .collect(),
        (CaseCode::C, Some((alpha, beta))) => {
            let s = (d / (beta * beta - alpha * alpha)).sqrt();
            vec![
                RealSolution { case, x1: beta * s, x2: -alpha * s },
                RealSolution { case, x1: -beta * s, x2: alpha * s },
            ]
        }
        _ => vec![],
    }
}

/// Decides `rnd(A) = 1`; type (a) systems are sampled at `x₂ ∈ grid`.
pub fn rnd_status_with_grid(a: &Matrix, tol: &Tolerance, grid: &[f64]) -> Result<RndStatus> {
    require_real(a)?;
    let prof = match profile(a, tol) {
        Ok(p) => p,
        Err(Error::RankConditionFailed(_)) => return Ok(RndStatus::MoreThanOne(None)),
        Err(e) => return Err(e),
    };
    if prof.is_normal() {
        return Ok(RndStatus::Normal);
    }
    let report = case_report(a, &prof, tol)?;
    if !report.rnd_one() {
        return Ok(RndStatus::MoreThanOne(Some(report)));
    }
    let d = prof.d;
    let mut solutions = solutions_for(&report.case1, RealCase::Case1, d, grid);
    solutions.extend(solutions_for(&report.case2, RealCase::Case2, d, grid));
    Ok(RndStatus::One(Box::new(RealFamily { matrix: a.clone(), profile: prof, report, solutions })))
}

/// Builds the real completion of the given case:
///
/// ```text
/// Case 1: [[A, x₁u₁ + x₂u₂], [ x₂u₁ᵀ + x₁u₂ᵀ, z]], z = a₁₁ − (x₁ + x₂)(a₁₂x₁ − a₂₁x₂)/d
/// Case 2: [[A, x₁u₁ + x₂u₂], [−x₂u₁ᵀ − x₁u₂ᵀ, z]], z = a₁₁ + (x₁ − x₂)(a₁₂x₁ + a₂₁x₂)/d
/// ```
///
/// The output is real bit-exactly and its top-left block is `A`.
pub fn build_real_completion(
    a: &Matrix,
    prof: &CommutatorProfile,
    case: RealCase,
    x1: f64,
    x2: f64,
    tol: &Tolerance,
) -> Result<Matrix> {
    require_real(a)?;
    if !prof.rank_ok {
        return Err(Error::RankConditionFailed(prof.inertia));
    }
    let n = a.rows();
    let d = prof.d;
    let eq = real_equation_residual(a, prof, case, x1, x2);
    let lvl = (x1 * x1 - x2 * x2 - d).abs();
    let size = (x1.abs() + x2.abs()).max(1.0);
    if eq > tol.residual_tol * a.frobenius_norm().max(1.0) * size || lvl > tol.residual_tol * d {
        return Err(Error::SolutionInvalid(eq.max(lvl / d)));
    }
    let (u1, u2) = (re_vec(&prof.u1), re_vec(&prof.u2));
    let au1 = real_mul(a, &u1);
    let au2 = real_mul(a, &u2);
    let dotr = |x: &[f64], y: &[f64]| -> f64 { x.iter().zip(y).map(|(a, b)| a * b).sum() };
    let a11 = dotr(&u1, &au1);
    let a12 = dotr(&u1, &au2);
    let a21 = dotr(&u2, &au1);
    let (sign, z) = match case {
        RealCase::Case1 => (1.0, a11 - (x1 + x2) * (a12 * x1 - a21 * x2) / d),
        RealCase::Case2 => (-1.0, a11 + (x1 - x2) * (a12 * x1 + a21 * x2) / d),
    };
    let mut b = Matrix::zeros(n + 1, n + 1);
    b.embed(0, 0, a);
    for i in 0..n {
        b[(i, n)] = C64::new(x1 * u1[i] + x2 * u2[i], 0.0);
        b[(n, i)] = C64::new(sign * (x2 * u1[i] + x1 * u2[i]), 0.0);
    }
    b[(n, n)] = C64::new(z, 0.0);
    Ok(b)
}
