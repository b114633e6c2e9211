//! Commuting completions of matrix pairs.
//!
//! Hermitian `B₁, B₂` commute iff `B₁ + iB₂` is normal, so a pair of
//! Hermitian matrices admits a commuting Hermitian completion of size
//! `n + 1` iff `A₁ + iA₂` has normal defect one. In the variables
//! `t₁ = x₁ − x̄₂`, `t₂ = x₁ + x̄₂` the completions are
//!
//! ```text
//! B₁ = [[A₁, (μ/2)(t₂u₁ + t̄₂u₂)], [·*, z₁]]
//! B₂ = [[A₂, (μ/2i)(t₁u₁ − t̄₁u₂)], [·*, z₂]]
//! ```
//!
//! For real symmetric pairs one may take `u₂ = ū₁` and `μ = 1`, giving
//! real symmetric completions. Symmetric/antisymmetric pairs reduce to
//! real normal completions of `A₁ + A₂`.

use crate::commutator::{profile_of_commutator, CommutatorProfile};
use crate::complex::{status_from_profile, CompletionFamily, Gate, NdStatus, SolutionPair, TableauMode};
use crate::error::{Error, Result};
use crate::numerics::{dot, Matrix, Tolerance, C64};
use crate::real::{rnd_status, RealCaseReport, RealFamily, RndStatus};

/// Structure class of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// Both Hermitian.
    Hermitian,
    /// Both real symmetric.
    Symmetric,
    /// Real symmetric and real antisymmetric.
    SymAntisym,
}

impl PairKind {
    pub fn label(&self) -> &'static str {
        match self {
            PairKind::Hermitian => "hermitian",
            PairKind::Symmetric => "symmetric",
            PairKind::SymAntisym => "symantisym",
        }
    }
}

/// The change of variables `t₁ = x₁ − x̄₂`, `t₂ = x₁ + x̄₂`.
pub fn t_from_x(pair: &SolutionPair) -> (C64, C64) {
    (pair.x1 - pair.x2.conj(), pair.x1 + pair.x2.conj())
}

/// Inverse of [`t_from_x`]: `x₁ = (t₁ + t₂)/2`, `x₂ = conj(t₂ − t₁)/2`.
pub fn x_from_t(t1: C64, t2: C64) -> SolutionPair {
    SolutionPair::new((t1 + t2) * 0.5, (t2 - t1).conj() * 0.5)
}

/// A commuting completion `(B₁, B₂)` of size `n + 1`.
#[derive(Debug, Clone)]
pub struct PairCompletion {
    pub b1: Matrix,
    pub b2: Matrix,
    pub kind: PairKind,
    pub t1: C64,
    pub t2: C64,
    pub z1: f64,
    pub z2: f64,
}

impl PairCompletion {
    /// `‖B₁B₂ − B₂B₁‖_F`.
    pub fn commutator_residual(&self) -> f64 {
        (&(&self.b1 * &self.b2) - &(&self.b2 * &self.b1)).frobenius_norm()
    }

    /// Largest deviation from the structure of the kind (Hermitian,
    /// symmetric and real, or symmetric/antisymmetric and real).
    pub fn structure_residual(&self) -> f64 {
        let imag = |m: &Matrix| m.entries().iter().fold(0.0f64, |r, z| r.max(z.im.abs()));
        match self.kind {
            PairKind::Hermitian => self.b1.hermitian_residual().max(self.b2.hermitian_residual()),
            PairKind::Symmetric => {
                self.b1.symmetric_residual().max(self.b2.symmetric_residual()).max(imag(&self.b1)).max(imag(&self.b2))
            }
            PairKind::SymAntisym => self
                .b1
                .symmetric_residual()
                .max(self.b2.antisymmetric_residual())
                .max(imag(&self.b1))
                .max(imag(&self.b2)),
        }
    }
}

#[derive(Debug, Clone)]
enum Inner {
    Complex(Box<CompletionFamily>),
    Real(Box<RealFamily>),
}

/// All minimal commuting completions of a pair with defect one.
#[derive(Debug, Clone)]
pub struct CommutingFamily {
    pub kind: PairKind,
    pub a1: Matrix,
    pub a2: Matrix,
    inner: Inner,
}

/// Outcome of the commuting solvers.
#[derive(Debug, Clone)]
pub enum CommuteStatus {
    /// The pair already commutes.
    Zero,
    One(Box<CommutingFamily>),
    /// No completion of size `n + 1`; carries the failed gate (complex
    /// kinds) or the real case report.
    MoreThanOne {
        gate: Option<Gate>,
        report: Option<RealCaseReport>,
    },
}

impl CommuteStatus {
    pub fn is_one(&self) -> bool {
        matches!(self, CommuteStatus::One(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            CommuteStatus::Zero => "zero",
            CommuteStatus::One(_) => "one",
            CommuteStatus::MoreThanOne { .. } => "more-than-one",
        }
    }
}

impl CommutingFamily {
    pub fn d(&self) -> f64 {
        match &self.inner {
            Inner::Complex(f) => f.d(),
            Inner::Real(f) => f.d(),
        }
    }

    /// The complex family of `A₁ + iA₂` (Hermitian and symmetric kinds).
    pub fn complex_family(&self) -> Option<&CompletionFamily> {
        match &self.inner {
            Inner::Complex(f) => Some(f.as_ref()),
            Inner::Real(_) => None,
        }
    }

    /// The real family of `A₁ + A₂` (symmetric/antisymmetric kind).
    pub fn real_family(&self) -> Option<&RealFamily> {
        match &self.inner {
            Inner::Real(f) => Some(f.as_ref()),
            Inner::Complex(_) => None,
        }
    }

    /// Completions with `μ = 1`: `count` sampled pairs for the complex
    /// kinds, every listed real solution for the symmetric/antisymmetric
    /// kind.
    pub fn sample(&self, count: usize, seed: u64, tol: &Tolerance) -> Result<Vec<PairCompletion>> {
        match &self.inner {
            Inner::Complex(f) => f
                .sample(count, seed)
                .iter()
                .map(|p| {
                    let (t1, t2) = t_from_x(p);
                    self.completion_for_t(t1, t2, C64::new(1.0, 0.0), tol)
                })
                .collect(),
            Inner::Real(f) => {
                f.solutions.iter().map(|s| split_real(&self.a1, &self.a2, &f.completion(s, tol)?)).collect()
            }
        }
    }

    /// The completion for given `(t₁, t₂)` and phase `μ`; the symmetric
    /// kind requires `μ = ±1`.
    pub fn completion_for_t(&self, t1: C64, t2: C64, mu: C64, tol: &Tolerance) -> Result<PairCompletion> {
        let f = match &self.inner {
            Inner::Complex(f) => f,
            Inner::Real(_) => return Err(Error::DimensionMismatch("real family has no t parameters".into())),
        };
        if self.kind == PairKind::Symmetric
            && (mu.im.abs() > tol.residual_tol || (mu.re.abs() - 1.0).abs() > tol.residual_tol)
        {
            return Err(Error::InvalidPhase(mu.arg()));
        }
        let pair = x_from_t(t1, t2);
        // Validates the pair and yields the corner z = z₁ + iz₂.
        let b = f.completion(&pair, mu, tol)?;
        let n = self.a1.rows();
        let z = b[(n, n)];
        let prof = &f.profile;
        let half = C64::new(0.5, 0.0);
        let inv2i = C64::new(0.0, -0.5);
        let col1: Vec<C64> = (0..n).map(|i| mu * half * (t2 * prof.u1[i] + t2.conj() * prof.u2[i])).collect();
        let col2: Vec<C64> = (0..n).map(|i| mu * inv2i * (t1 * prof.u1[i] - t1.conj() * prof.u2[i])).collect();
        let real = self.kind == PairKind::Symmetric;
        let b1 = bordered(&self.a1, &col1, z.re, real, 1.0);
        let b2 = bordered(&self.a2, &col2, z.im, real, 1.0);
        Ok(PairCompletion { b1, b2, kind: self.kind, t1, t2, z1: z.re, z2: z.im })
    }

    /// `z₁, z₂` from the closed forms in `t₁, t₂`; these agree with the
    /// real and imaginary parts of the corner of the normal completion.
    pub fn corner_from_t(&self, t1: C64, t2: C64) -> Option<(f64, f64)> {
        let f = self.complex_family()?;
        let p = &f.profile;
        let (a1, a2) = (&self.a1, &self.a2);
        let q = |x: &[C64], m: &Matrix, y: &[C64]| dot(x, &m.mul_vec(y));
        let d = p.d;
        let z1 = q(&p.u1, a1, &p.u1).re - ((t2 * t2 * q(&p.u2, a2, &p.u1)).im + (t1 * t2 * q(&p.u2, a1, &p.u1)).re) / d;
        let z2 = q(&p.u1, a2, &p.u1).re - ((t1 * t1 * q(&p.u2, a1, &p.u1)).im - (t1 * t2 * q(&p.u2, a2, &p.u1)).re) / d;
        Some((z1, z2))
    }
}

/// `[[A, c], [s·c*, z]]`, taking real parts of `c` when `real`.
fn bordered(a: &Matrix, col: &[C64], z: f64, real: bool, s: f64) -> Matrix {
    let n = a.rows();
    let mut b = Matrix::zeros(n + 1, n + 1);
    b.embed(0, 0, a);
    for i in 0..n {
        let c = if real { C64::new(col[i].re, 0.0) } else { col[i] };
        b[(i, n)] = c;
        b[(n, i)] = c.conj() * s;
    }
    b[(n, n)] = C64::new(z, 0.0);
    b
}

/// Splits a real normal completion `[[A₁ + A₂, x], [yᵀ, z]]` into its
/// symmetric and antisymmetric parts.
fn split_real(a1: &Matrix, a2: &Matrix, b: &Matrix) -> Result<PairCompletion> {
    let n = a1.rows();
    let sym: Vec<C64> = (0..n).map(|i| (b[(i, n)] + b[(n, i)]) * 0.5).collect();
    let anti: Vec<C64> = (0..n).map(|i| (b[(i, n)] - b[(n, i)]) * 0.5).collect();
    let z = b[(n, n)].re;
    Ok(PairCompletion {
        b1: bordered(a1, &sym, z, true, 1.0),
        b2: bordered(a2, &anti, 0.0, true, -1.0),
        kind: PairKind::SymAntisym,
        t1: C64::new(0.0, 0.0),
        t2: C64::new(0.0, 0.0),
        z1: z,
        z2: 0.0,
    })
}

fn same_shape(a1: &Matrix, a2: &Matrix) -> Result<usize> {
    let n = a1.require_square()?;
    if a2.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!("pair shapes {:?} and {:?}", a1.shape(), a2.shape())));
    }
    Ok(n)
}

fn check_hermitian(a: &Matrix, tol: &Tolerance) -> Result<()> {
    let r = a.hermitian_residual();
    if r > tol.residual_tol * a.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian(r));
    }
    Ok(())
}

fn check_real_symmetric(a: &Matrix, tol: &Tolerance) -> Result<()> {
    if !a.is_real() {
        return Err(Error::NotReal);
    }
    let r = a.symmetric_residual();
    if r > tol.residual_tol * a.frobenius_norm().max(1.0) {
        return Err(Error::NotSymmetric(r));
    }
    Ok(())
}

/// `A₁ + iA₂` and the commutator `2i(A₁A₂ − A₂A₁)`.
fn combine(a1: &Matrix, a2: &Matrix) -> (Matrix, Matrix) {
    let n = a1.rows();
    let i = C64::new(0.0, 1.0);
    let a = Matrix::from_fn(n, n, |r, c| a1[(r, c)] + i * a2[(r, c)]);
    let comm = (&(a1 * a2) - &(a2 * a1)).scale(C64::new(0.0, 2.0));
    (a, comm)
}

fn from_nd(status: NdStatus, kind: PairKind, a1: &Matrix, a2: &Matrix) -> CommuteStatus {
    match status {
        NdStatus::Normal => CommuteStatus::Zero,
        NdStatus::MoreThanOne(g) => CommuteStatus::MoreThanOne { gate: Some(g), report: None },
        NdStatus::One(f) => CommuteStatus::One(Box::new(CommutingFamily {
            kind,
            a1: a1.clone(),
            a2: a2.clone(),
            inner: Inner::Complex(f),
        })),
    }
}

fn profile_or_gate(a: &Matrix, comm: Matrix, tol: &Tolerance) -> Result<std::result::Result<CommutatorProfile, Gate>> {
    match profile_of_commutator(a, comm, tol) {
        Ok(p) => Ok(Ok(p)),
        Err(Error::RankConditionFailed(i)) => Ok(Err(Gate::RankCondition(i))),
        Err(e) => Err(e),
    }
}

/// Commuting Hermitian completions of size `n + 1`, decided on
/// `A₁ + iA₂`.
pub fn chd_solve(a1: &Matrix, a2: &Matrix, tol: &Tolerance) -> Result<CommuteStatus> {
    same_shape(a1, a2)?;
    check_hermitian(a1, tol)?;
    check_hermitian(a2, tol)?;
    let (a, comm) = combine(a1, a2);
    let prof = match profile_or_gate(&a, comm, tol)? {
        Ok(p) => p,
        Err(g) => return Ok(CommuteStatus::MoreThanOne { gate: Some(g), report: None }),
    };
    let status = status_from_profile(&a, prof, tol, TableauMode::Auto)?;
    Ok(from_nd(status, PairKind::Hermitian, a1, a2))
}

/// Commuting real symmetric completions of size `n + 1`, using
/// `u₂ = ū₁` so that every completion with `μ = 1` is real symmetric.
pub fn csd_solve(a1: &Matrix, a2: &Matrix, tol: &Tolerance) -> Result<CommuteStatus> {
    same_shape(a1, a2)?;
    check_real_symmetric(a1, tol)?;
    check_real_symmetric(a2, tol)?;
    let (a, comm) = combine(a1, a2);
    let prof = match profile_or_gate(&a, comm, tol)? {
        Ok(p) => p,
        Err(g) => return Ok(CommuteStatus::MoreThanOne { gate: Some(g), report: None }),
    };
    let prof = if prof.rank_ok {
        let u2: Vec<C64> = prof.u1.iter().map(|z| z.conj()).collect();
        let u1 = prof.u1.clone();
        prof.with_eigenvectors(u1, u2, tol)?
    } else {
        prof
    };
    let status = status_from_profile(&a, prof, tol, TableauMode::Auto)?;
    Ok(from_nd(status, PairKind::Symmetric, a1, a2))
}

/// Commuting completions with `B₁` symmetric and `B₂` antisymmetric,
/// decided on the real matrix `A₁ + A₂`.
pub fn sym_antisym_solve(a1: &Matrix, a2: &Matrix, tol: &Tolerance) -> Result<CommuteStatus> {
    same_shape(a1, a2)?;
    check_real_symmetric(a1, tol)?;
    if !a2.is_real() {
        return Err(Error::NotReal);
    }
    let r = a2.antisymmetric_residual();
    if r > tol.residual_tol * a2.frobenius_norm().max(1.0) {
        return Err(Error::NotAntisymmetric(r));
    }
    let a = a1 + a2;
    Ok(match rnd_status(&a, tol)? {
        RndStatus::Normal => CommuteStatus::Zero,
        RndStatus::MoreThanOne(report) => CommuteStatus::MoreThanOne { gate: None, report },
        RndStatus::One(f) => CommuteStatus::One(Box::new(CommutingFamily {
            kind: PairKind::SymAntisym,
            a1: a1.clone(),
            a2: a2.clone(),
            inner: Inner::Real(f),
        })),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::jordan_cell_3;

    fn hermitian_parts(a: &Matrix) -> (Matrix, Matrix) {
        let ah = a.adjoint();
        ((a + &ah).scale_re(0.5), (a - &ah).scale(C64::new(0.0, -0.5)))
    }

    #[test]
    fn commuting_pair_is_zero() {
        let tol = Tolerance::default();
        let a1 = Matrix::diag_real(&[1.0, 2.0, 3.0]);
        let a2 = Matrix::diag_real(&[0.0, -1.0, 5.0]);
        assert!(matches!(chd_solve(&a1, &a2, &tol).unwrap(), CommuteStatus::Zero));
        assert!(matches!(csd_solve(&a1, &a2, &tol).unwrap(), CommuteStatus::Zero));
    }

    #[test]
    fn jordan_cell_split_recombines_to_normal_completion() {
        let tol = Tolerance::default();
        let a = jordan_cell_3();
        let (a1, a2) = hermitian_parts(&a);
        let CommuteStatus::One(fam) = chd_solve(&a1, &a2, &tol).unwrap() else { panic!("expected one") };
        for pc in fam.sample(4, 7, &tol).unwrap() {
            assert!(pc.structure_residual() == 0.0);
            assert!(pc.commutator_residual() < 1e-12);
            let (z1, z2) = fam.corner_from_t(pc.t1, pc.t2).unwrap();
            assert!((z1 - pc.z1).abs() < 1e-12 && (z2 - pc.z2).abs() < 1e-12);
        }
    }

    #[test]
    fn x_t_round_trip_on_dyadic_values() {
        let p = SolutionPair::new(C64::new(1.5, -0.25), C64::new(0.75, 2.0));
        let (t1, t2) = t_from_x(&p);
        assert_eq!(x_from_t(t1, t2), p);
    }
}
