use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::commutator::CommutatorProfile;
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, nullspace_basis_scaled, EigenPairs, Matrix, Tolerance, C64};

/// The real linear system `Q·x = 0` in `x = (Re x₁, Im x₁, Re x₂, Im x₂)`
/// together with its nullspace `F` and the form `K = F₁ᵀF₁ − F₂ᵀF₂`.
#[derive(Debug, Clone)]
pub struct ProcedureTableau {
    pub q: Matrix,
    /// Rank of `Q`.
    pub m: usize,
    /// Orthonormal nullspace basis of `Q`, `4×(4−m)`.
    pub f: Matrix,
    pub f1: Matrix,
    pub f2: Matrix,
    /// `F₁ᵀF₁ − F₂ᵀF₂`, so that `hᵀKh = |x₁|² − |x₂|²` for `x = Fh`.
    pub k: Matrix,
    /// Whether `Q` is the `(n−2)×4` system of the special basis.
    pub refined: bool,
}

/// A pair `(x₁, x₂)` parametrizing one minimal normal completion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionPair {
    pub x1: C64,
    pub x2: C64,
}

impl SolutionPair {
    pub fn new(x1: C64, x2: C64) -> Self {
        SolutionPair { x1, x2 }
    }

    /// `|x₁|² − |x₂|²`.
    pub fn level(&self) -> f64 {
        self.x1.norm_sqr() - self.x2.norm_sqr()
    }

    fn from_real(x: &[f64]) -> Self {
        SolutionPair { x1: C64::new(x[0], x[1]), x2: C64::new(x[2], x[3]) }
    }
}

/// Why a matrix was found not to have normal defect one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// The self-commutator does not have rank two.
    RankCondition(crate::commutator::Inertia),
    /// `Q` has full column rank, so `x₁ = x₂ = 0` is the only solution.
    FullRankTableau,
    /// `K` is negative semidefinite on the solution space.
    NoPositiveDirection { max_eigenvalue: f64 },
}

/// The solution set `{F·h : hᵀKh = d}` of a feasible tableau.
#[derive(Debug, Clone)]
pub struct SolutionSet {
    pub f: Matrix,
    pub k_eig: EigenPairs,
    pub d: f64,
    threshold: f64,
}

/// Outcome of the feasibility test on a tableau.
#[derive(Debug, Clone)]
pub enum Feasibility {
    Infeasible(Gate),
    Feasible(SolutionSet),
}

pub(crate) fn tableau_from_q(q: Matrix, refined: bool, scale: f64, tol: &Tolerance) -> Result<ProcedureTableau> {
    let f = if q.rows() == 0 { Matrix::identity(4) } else { nullspace_basis_scaled(&q, tol, scale)? };
    let m = 4 - f.cols();
    let j = f.cols();
    let f1 = f.submatrix(0, 0, 2, j);
    let f2 = f.submatrix(2, 0, 2, j);
    let k = &(&f1.transpose() * &f1) - &(&f2.transpose() * &f2);
    Ok(ProcedureTableau { q, m, f, f1, f2, k, refined })
}

/// The vectors `PA*u₁, PA*u₂, PAu₁, PAu₂`.
pub(crate) fn hat_vectors(a: &Matrix, p: &CommutatorProfile) -> [Vec<C64>; 4] {
    let ah = a.adjoint();
    let pm = &p.projection;
    [
        pm.mul_vec(&ah.mul_vec(&p.u1)),
        pm.mul_vec(&ah.mul_vec(&p.u2)),
        pm.mul_vec(&a.mul_vec(&p.u1)),
        pm.mul_vec(&a.mul_vec(&p.u2)),
    ]
}

/// Builds the `2n×4` real system equivalent to
/// `PA*(x₁u₁ + x₂u₂) = PA(x̄₂u₁ + x̄₁u₂)`.
///
/// Rows `0..n` hold the real part of the equation and rows `n..2n` the
/// imaginary part.
pub fn assemble_tableau(a: &Matrix, profile: &CommutatorProfile, tol: &Tolerance) -> Result<ProcedureTableau> {
    if !profile.rank_ok {
        return Err(Error::RankConditionFailed(profile.inertia));
    }
    let n = a.require_square()?;
    let [cu, cv, cw, cq] = hat_vectors(a, profile);
    let mut q = Matrix::zeros(2 * n, 4);
    for i in 0..n {
        let (u, v, w, qq) = (cu[i], cv[i], cw[i], cq[i]);
        let row_re = [u.re - qq.re, -u.im - qq.im, v.re - w.re, -v.im - w.im];
        let row_im = [u.im - qq.im, u.re + qq.re, v.im - w.im, v.re + w.re];
        for k in 0..4 {
            q[(i, k)] = C64::new(row_re[k], 0.0);
            q[(n + i, k)] = C64::new(row_im[k], 0.0);
        }
    }
    tableau_from_q(q, false, a.frobenius_norm(), tol)
}

/// Residual of `PA*(x₁u₁ + x₂u₂) − PA(x̄₂u₁ + x̄₁u₂)`.
pub fn equation_residual(a: &Matrix, profile: &CommutatorProfile, pair: &SolutionPair) -> f64 {
    let [cu, cv, cw, cq] = hat_vectors(a, profile);
    let (x1, x2) = (pair.x1, pair.x2);
    (0..cu.len())
        .map(|i| (cu[i] * x1 + cv[i] * x2 - cw[i] * x2.conj() - cq[i] * x1.conj()).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Decides whether the tableau admits `x = Fh` with `hᵀKh = d > 0`.
///
/// Infeasible exactly when `m = 4` or `K` has no eigenvalue above
/// `rank_tol`.
pub fn solve_feasibility(t: &ProcedureTableau, d: f64, tol: &Tolerance) -> Result<Feasibility> {
    if t.m == 4 {
        return Ok(Feasibility::Infeasible(Gate::FullRankTableau));
    }
    let k_eig = hermitian_eig(&t.k, tol)?;
    let top = k_eig.values[0];
    if top <= tol.rank_tol {
        return Ok(Feasibility::Infeasible(Gate::NoPositiveDirection { max_eigenvalue: top }));
    }
    Ok(Feasibility::Feasible(SolutionSet { f: t.f.clone(), k_eig, d, threshold: tol.rank_tol }))
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn solutions(&self) -> Option<&SolutionSet> {
        match self {
            Feasibility::Feasible(s) => Some(s),
            Feasibility::Infeasible(_) => None,
        }
    }
}

/// Draws `count` pairs from a feasible descriptor; see [`SolutionSet::sample`].
pub fn sample_solutions(desc: &Feasibility, count: usize, seed: u64) -> Result<Vec<SolutionPair>> {
    match desc {
        Feasibility::Feasible(s) => Ok(s.sample(count, seed)),
        Feasibility::Infeasible(_) => Err(Error::Infeasible),
    }
}

impl SolutionSet {
    /// Dimension of the parameter `h`.
    pub fn dim(&self) -> usize {
        self.f.cols()
    }

    /// The pair `x = F·h`.
    pub fn pair_from_h(&self, h: &[f64]) -> SolutionPair {
        let x: Vec<f64> = (0..4).map(|r| (0..self.dim()).map(|j| self.f[(r, j)].re * h[j]).sum()).collect();
        SolutionPair::from_real(&x)
    }

    /// Maps coordinates in the eigenbasis of `K` back to `h`.
    fn h_from_coords(&self, coords: &[f64]) -> Vec<f64> {
        let e = &self.k_eig.vectors;
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| e[(i, j)].re * coords[j]).sum()).collect()
    }

    /// Deterministic pseudo-random points on the level surface `hᵀKh = d`.
    ///
    /// In the eigenbasis of `K`, all coordinates are standard normal draws
    /// scaled by `√d`; the coordinates along positive eigenvalues are then
    /// rescaled so the quadratic form equals `d` exactly. Doubling `d`
    /// scales every sample by `√2`.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<SolutionPair> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals = &self.k_eig.values;
        let thr = self.threshold;
        let sd = self.d.sqrt();
        (0..count)
            .map(|_| {
                let g: Vec<f64> = (0..self.dim()).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                let pos: f64 = (0..self.dim()).filter(|&i| vals[i] > thr).map(|i| vals[i] * g[i] * g[i]).sum();
                let neg: f64 = (0..self.dim()).filter(|&i| vals[i] < -thr).map(|i| -vals[i] * g[i] * g[i]).sum();
                let stretch = ((1.0 + neg) / pos).sqrt();
                let coords: Vec<f64> =
                    (0..self.dim()).map(|i| if vals[i] > thr { sd * stretch * g[i] } else { sd * g[i] }).collect();
                self.pair_from_h(&self.h_from_coords(&coords))
            })
            .collect()
    }

    /// The pair along the top eigenvector of `K`, scaled onto the surface.
    pub fn principal(&self) -> SolutionPair {
        let mut coords = vec![0.0; self.dim()];
        coords[0] = (self.d / self.k_eig.values[0]).sqrt();
        self.pair_from_h(&self.h_from_coords(&coords))
    }
}
