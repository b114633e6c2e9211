//! Random matrices with known defect-one status.
//!
//! A non-normal `A` has `nd(A) = 1` iff `V*AV = MNM + μI` for some unitary
//! `V`, normal `N`, `M = diag(1, …, 1, t)` with `0 ≤ t < 1`, and scalar `μ`.
//! The real analogue holds for even `n` with orthogonal `V` and real normal
//! `N`. The samplers draw these ingredients and reject the (measure zero)
//! draws where `MNM` is normal.
//!
//! The `random_rank_condition_*` samplers produce matrices whose
//! self-commutator has rank two but whose defect is not known in advance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numerics::{dot, norm, outer, Matrix, Tolerance, C64};

/// Number of draws tried by the samplers before giving up.
pub const MAX_GUARD_RETRIES: usize = 16;

/// Largest compression factor `t` drawn by the samplers.
pub const T_MAX: f64 = 0.9;

/// Ingredients of `A = V(MNM)V* + μI`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub n: usize,
    pub t: f64,
    pub mu: C64,
    pub normal: Matrix,
    pub v: Matrix,
    pub real: bool,
}

impl GeneratorSpec {
    /// `M = diag(1, …, 1, t)`.
    pub fn compression(&self) -> Matrix {
        let mut d = vec![1.0; self.n];
        d[self.n - 1] = self.t;
        Matrix::diag_real(&d)
    }

    pub fn validate(&self, tol: &Tolerance) -> Result<()> {
        if !(0.0..1.0).contains(&self.t) {
            return Err(Error::DimensionMismatch(format!("t = {} outside [0, 1)", self.t)));
        }
        if self.normal.shape() != (self.n, self.n) || self.v.shape() != (self.n, self.n) {
            return Err(Error::DimensionMismatch("generator blocks must be n×n".into()));
        }
        if self.real && (self.n % 2 == 1) {
            return Err(Error::OddSize(self.n));
        }
        if self.real && !(self.normal.is_real() && self.v.is_real() && self.mu.im == 0.0) {
            return Err(Error::NotReal);
        }
        let nn = self.normal.frobenius_norm();
        let comm =
            (&(&self.normal.adjoint() * &self.normal) - &(&self.normal * &self.normal.adjoint())).frobenius_norm();
        if comm > tol.residual_tol * nn * nn.max(1.0) {
            return Err(Error::NotNormalInput(comm));
        }
        let unit = (&(&self.v.adjoint() * &self.v) - &Matrix::identity(self.n)).frobenius_norm();
        if unit > tol.residual_tol * (self.n as f64) {
            return Err(Error::DimensionMismatch(format!("V is not unitary (residual {unit:e})")));
        }
        Ok(())
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn real_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Gram-Schmidt orthonormalization of the columns of a square Gaussian
/// matrix.
fn orthonormalize(mut cols: Vec<Vec<C64>>) -> Matrix {
    let n = cols.len();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let p = dot(&cols[k], &cols[j]);
                let (head, tail) = cols.split_at_mut(j);
                for (x, y) in tail[0].iter_mut().zip(&head[k]) {
                    *x -= p * y;
                }
            }
        }
        let nj = norm(&cols[j]);
        cols[j].iter_mut().for_each(|x| *x /= nj);
    }
    Matrix::from_columns(n, &cols)
}

/// Haar-distributed unitary matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    orthonormalize((0..n).map(|_| (0..n).map(|_| complex_normal(rng)).collect()).collect())
}

/// Haar-distributed real orthogonal matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let q = orthonormalize((0..n).map(|_| (0..n).map(|_| C64::new(real_normal(rng), 0.0)).collect()).collect());
    q.re()
}

/// Real block-diagonal normal matrix with `ℓ` rotation-scale blocks
/// `[[α, β], [−β, α]]` followed by real scalars.
fn real_normal_core<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let blocks = rng.random_range(0..=n / 2);
    let mut d = Matrix::zeros(n, n);
    for b in 0..blocks {
        let (a, be) = (real_normal(rng), real_normal(rng));
        let i = 2 * b;
        d[(i, i)] = C64::new(a, 0.0);
        d[(i + 1, i + 1)] = C64::new(a, 0.0);
        d[(i, i + 1)] = C64::new(be, 0.0);
        d[(i + 1, i)] = C64::new(-be, 0.0);
    }
    for i in 2 * blocks..n {
        d[(i, i)] = C64::new(real_normal(rng), 0.0);
    }
    d
}

/// Random ingredients for the complex construction.
pub fn random_spec_complex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GeneratorSpec {
    let w = random_unitary(n, rng);
    let lambda: Vec<C64> = (0..n).map(|_| complex_normal(rng)).collect();
    let normal = &(&w * &Matrix::diag(&lambda)) * &w.adjoint();
    let v = random_unitary(n, rng);
    let t = rng.random_range(0.0..=T_MAX);
    let mu = complex_normal(rng);
    GeneratorSpec { n, t, mu, normal, v, real: false }
}

/// Random ingredients for the real construction; `n` must be even.
pub fn random_spec_real_even<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<GeneratorSpec> {
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    let w = random_orthogonal(n, rng);
    let normal = (&(&w * &real_normal_core(n, rng)) * &w.transpose()).re();
    let v = random_orthogonal(n, rng);
    let t = rng.random_range(0.0..=T_MAX);
    let mu = C64::new(real_normal(rng), 0.0);
    Ok(GeneratorSpec { n, t, mu, normal, v, real: true })
}

/// The vectors `a = M·N·eₙ = (g, tα)` and `b = M·N*·eₙ = (h, tᾱ)` where
/// `N = [[N₀, g], [h*, α]]`.
fn guard_vectors(normal: &Matrix, t: f64) -> (Vec<C64>, Vec<C64>) {
    let n = normal.rows();
    let mut a = normal.column(n - 1);
    let mut b: Vec<C64> = normal.row(n - 1).iter().map(|z| z.conj()).collect();
    a[n - 1] *= t;
    b[n - 1] *= t;
    (a, b)
}

/// Whether `MNM` is not normal, for normal `N` and `M = diag(1, …, 1, t)`.
///
/// `MNM` is normal iff `gg* = hh*` and `tαh = tᾱg`, i.e. iff `(g, tα)` is a
/// unimodular multiple of `(h, tᾱ)`. Since the self-commutator of `MNM`
/// equals `(1 − t²)(aa* − bb*)` for the vectors above, the decision is made
/// by comparing `(1 − t²)‖aa* − bb*‖_F` with `rank_tol·‖MNM‖²_F`.
pub fn nonnormality_guard(normal: &Matrix, t: f64, tol: &Tolerance) -> Result<bool> {
    let n = normal.require_square()?;
    if n == 0 {
        return Ok(false);
    }
    let nn = normal.frobenius_norm();
    let comm = (&(&normal.adjoint() * normal) - &(normal * &normal.adjoint())).frobenius_norm();
    if comm > tol.residual_tol * nn * nn.max(1.0) {
        return Err(Error::NotNormalInput(comm));
    }
    let (a, b) = guard_vectors(normal, t);
    let gap = (&outer(&a, &a) - &outer(&b, &b)).frobenius_norm() * (1.0 - t * t);
    let mut m = vec![C64::new(1.0, 0.0); n];
    m[n - 1] = C64::new(t, 0.0);
    let mnm = Matrix::from_fn(n, n, |i, j| m[i] * normal[(i, j)] * m[j]);
    let scale = mnm.frobenius_norm();
    Ok(gap > tol.rank_tol * scale * scale)
}

/// Real form of [`nonnormality_guard`]: `MNM` is not normal iff `g ≠ h` and,
/// when `tα = 0`, also `g ≠ −h`.
pub fn nonnormality_guard_real(normal: &Matrix, t: f64, tol: &Tolerance) -> Result<bool> {
    if !normal.is_real() {
        return Err(Error::NotReal);
    }
    nonnormality_guard(normal, t, tol)
}

fn assemble(spec: &GeneratorSpec) -> Matrix {
    let n = spec.n;
    let m = spec.compression();
    let core = &(&m * &spec.normal) * &m;
    let mut a = &(&spec.v * &core) * &spec.v.adjoint();
    for i in 0..n {
        a[(i, i)] += spec.mu;
    }
    a
}

/// `A = V(MNM)V* + μI`; fails with [`Error::GuardFailed`] when `MNM` is
/// normal.
pub fn synth_nd1_complex(spec: &GeneratorSpec, tol: &Tolerance) -> Result<Matrix> {
    spec.validate(tol)?;
    if !nonnormality_guard(&spec.normal, spec.t, tol)? {
        return Err(Error::GuardFailed(1));
    }
    Ok(assemble(spec))
}

/// Real `A = V(MNM)Vᵀ + μI` for even `n`; the output is real bit-exactly.
pub fn synth_rnd1_real_even(spec: &GeneratorSpec, tol: &Tolerance) -> Result<Matrix> {
    if spec.n % 2 == 1 {
        return Err(Error::OddSize(spec.n));
    }
    if !spec.real {
        return Err(Error::NotReal);
    }
    spec.validate(tol)?;
    if !nonnormality_guard_real(&spec.normal, spec.t, tol)? {
        return Err(Error::GuardFailed(1));
    }
    Ok(assemble(spec).re())
}

/// Draws specs from `seed` until one passes the guard, at most
/// [`MAX_GUARD_RETRIES`] times.
pub fn sample_nd1_complex(n: usize, seed: u64, tol: &Tolerance) -> Result<(GeneratorSpec, Matrix)> {
    if n < 2 {
        return Err(Error::DimensionMismatch("generator needs n ≥ 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_GUARD_RETRIES {
        let spec = random_spec_complex(n, &mut rng);
        match synth_nd1_complex(&spec, tol) {
            Ok(a) => return Ok((spec, a)),
            Err(Error::GuardFailed(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GuardFailed(MAX_GUARD_RETRIES))
}

/// Real counterpart of [`sample_nd1_complex`] for even `n`.
pub fn sample_rnd1_real_even(n: usize, seed: u64, tol: &Tolerance) -> Result<(GeneratorSpec, Matrix)> {
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    if n < 2 {
        return Err(Error::DimensionMismatch("generator needs n ≥ 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_GUARD_RETRIES {
        let spec = random_spec_real_even(n, &mut rng)?;
        match synth_rnd1_real_even(&spec, tol) {
            Ok(a) => return Ok((spec, a)),
            Err(Error::GuardFailed(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GuardFailed(MAX_GUARD_RETRIES))
}

/// Well-separated real spectrum `i + U(−¼, ¼)`.
fn separated_spectrum<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|i| i as f64 + rng.random_range(-0.25..0.25)).collect()
}

/// Random complex matrix whose self-commutator has rank two.
///
/// Writes `A = W(H + iK)W* + μI` with `H` real diagonal, so that
/// `A*A − AA* = 2iW[H, K]W*`. A zero-diagonal rank-two Hermitian
/// `D = xx* − yy*` (with `|xᵢ| = |yᵢ|`) is chosen first and `K` solved
/// entrywise from `2i(hᵢ − hⱼ)Kᵢⱼ = Dᵢⱼ`.
pub fn random_rank_condition_complex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let h = separated_spectrum(n, rng);
    let x: Vec<C64> = (0..n).map(|_| complex_normal(rng)).collect();
    let y: Vec<C64> =
        x.iter().map(|xi| xi * C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))).collect();
    let d = &outer(&x, &x) - &outer(&y, &y);
    let two_i = C64::new(0.0, 2.0);
    let k = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(real_normal(rng), 0.0)
        } else {
            d[(i, j)] / (two_i * (h[i] - h[j]))
        }
    });
    let k = Matrix::from_fn(n, n, |i, j| if i <= j { k[(i, j)] } else { k[(j, i)].conj() });
    let core = Matrix::from_fn(n, n, |i, j| {
        let hij = if i == j { C64::new(h[i], 0.0) } else { C64::new(0.0, 0.0) };
        hij + C64::new(0.0, 1.0) * k[(i, j)]
    });
    let w = random_unitary(n, rng);
    let mut a = &(&w * &core) * &w.adjoint();
    let mu = complex_normal(rng);
    for i in 0..n {
        a[(i, i)] += mu;
    }
    a
}

/// Random real matrix whose self-commutator has rank two.
///
/// Writes `A = O(S + T)Oᵀ + μI` with `S` diagonal and `T` antisymmetric,
/// so that `AᵀA − AAᵀ = 2O[S, T]Oᵀ`; the commutator is the rank-two
/// `xxᵀ − yyᵀ` with `yᵢ = ±xᵢ`.
pub fn random_rank_condition_real<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let s = separated_spectrum(n, rng);
    let p: Vec<f64> = (0..n).map(|_| real_normal(rng)).collect();
    let mut sign: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    if n >= 2 {
        sign[0] = true;
        sign[1] = false;
    }
    let core = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(s[i], 0.0)
        } else if sign[i] != sign[j] {
            C64::new(2.0 * p[i] * p[j] / (2.0 * (s[i] - s[j])), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let o = random_orthogonal(n, rng);
    let mut a = (&(&o * &core) * &o.transpose()).re();
    let mu = real_normal(rng);
    for i in 0..n {
        a[(i, i)] += C64::new(mu, 0.0);
    }
    a
}

/// Random pair of real symmetric matrices with `rank(A₁A₂ − A₂A₁) = 2`.
///
/// `A₁ = O·diag(h)·Oᵀ` and `A₂ = O·K·Oᵀ` with
/// `(hᵢ − hⱼ)Kᵢⱼ = (pqᵀ − qpᵀ)ᵢⱼ`.
pub fn random_symmetric_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Matrix, Matrix) {
    let h = separated_spectrum(n, rng);
    let p: Vec<f64> = (0..n).map(|_| real_normal(rng)).collect();
    let q: Vec<f64> = (0..n).map(|_| real_normal(rng)).collect();
    let diag: Vec<f64> = (0..n).map(|_| real_normal(rng)).collect();
    let k = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(diag[i], 0.0)
        } else {
            C64::new((p[i] * q[j] - q[i] * p[j]) / (h[i] - h[j]), 0.0)
        }
    });
    let o = random_orthogonal(n, rng);
    let conj = |m: &Matrix| {
        let r = (&(&o * m) * &o.transpose()).re();
        Matrix::from_fn(n, n, |i, j| (r[(i, j)] + r[(j, i)]) * 0.5)
    };
    (conj(&Matrix::diag_real(&h)), conj(&k))
}

/// Random `(B, C)` with `C − BB* = xx*` and `C − B*B = yy*`, so that
/// `[[I, B*], [B, C]]` and its partial transpose are positive
/// semidefinite of rank `n + 1`. The state is separable iff
/// `nd(B) = 1`, which the rank condition guarantees only for `n ≤ 3`.
///
/// `B` has a rank-two self-commutator `d(u₁u₁* − u₂u₂*)` for `n ≥ 2`, and
/// `x, y` are a random `U(1, 1)` rotation of `√d·u₁, √d·u₂`. For `n = 1`,
/// `x` and `y` differ by a phase.
pub fn random_rank_one_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<(Matrix, Matrix)> {
    use crate::commutator::profile;
    let tau = std::f64::consts::TAU;
    let (b, x) = if n == 1 {
        (Matrix::from_fn(1, 1, |_, _| complex_normal(rng)), vec![complex_normal(rng)])
    } else {
        let b = random_rank_condition_complex(n, rng);
        let p = profile(&b, &Tolerance::default())?;
        let s: f64 = rng.random_range(-1.0..1.0);
        let (al, be) = (rng.random_range(0.0..tau), rng.random_range(0.0..tau));
        let sd = p.d.sqrt();
        // First column of a U(1,1) matrix; the second (giving y) is fixed by
        // the phase relation and is never needed explicitly.
        let (g0, g1) = (C64::from_polar(sd * s.cosh(), al), C64::from_polar(sd * s.sinh(), be));
        let x: Vec<C64> = (0..n).map(|i| g0 * p.u1[i] + g1 * p.u2[i]).collect();
        (b, x)
    };
    let c = &(&b * &b.adjoint()) + &outer(&x, &x);
    let c = Matrix::from_fn(n, n, |i, j| (c[(i, j)] + c[(j, i)].conj()) * 0.5);
    Ok((b, c))
}
