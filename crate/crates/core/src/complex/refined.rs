use super::tableau::{hat_vectors, tableau_from_q, ProcedureTableau};
use crate::commutator::CommutatorProfile;
use crate::error::{Error, Result};
use crate::numerics::{orthonormal_complement, svd, takagi_symmetric, Matrix, Tolerance, C64};

/// Unitary basis `W = [u₁, u₂, u₃, …, u_n]` in which
/// `W*AW = [[a₁₁, a₁₂, u], [a₂₁, a₁₁, v], [vᵀ, uᵀ, S]]`.
#[derive(Debug, Clone)]
pub struct RefinedBasis {
    pub w: Matrix,
    pub u: Vec<C64>,
    pub v: Vec<C64>,
    pub s: Matrix,
}

impl RefinedBasis {
    /// Largest deviation of `W*AW` from the block pattern.
    pub fn pattern_residual(&self, a: &Matrix) -> f64 {
        pattern_residual(&(&self.w.adjoint() * &(a * &self.w)))
    }
}

fn pattern_residual(at: &Matrix) -> f64 {
    let n = at.rows();
    let mut r = (at[(1, 1)] - at[(0, 0)]).norm();
    for j in 2..n {
        r = r.max((at[(j, 0)] - at[(1, j)]).norm());
        r = r.max((at[(j, 1)] - at[(0, j)]).norm());
    }
    r
}

/// Block matrix of a symmetric unitary extension, in the bases
/// `[H, conj(V), K]` (domain) and `[conj(H), V, conj(K)]` (range).
///
/// `s0` is the compression of the partial map to `H`, with Takagi data
/// `(ut, sigma)`; `deficient` lists the indices with `σ < 1` and their
/// complements `s_i = (1 − σ_i²)^{1/2}`.
fn extension_block(s0: &Matrix, ut: &Matrix, sigma: &[f64], deficient: &[(usize, f64)], k: usize) -> Matrix {
    let r = s0.rows();
    let g = deficient.len();
    let mut mb = Matrix::zeros(k, k);
    mb.embed(0, 0, s0);
    for (jj, &(i, si)) in deficient.iter().enumerate() {
        for l in 0..r {
            let x = ut[(l, i)] * si;
            mb[(l, r + jj)] = x;
            mb[(r + jj, l)] = x;
        }
        mb[(r + jj, r + jj)] = C64::new(-sigma[i], 0.0);
    }
    for j in (r + g)..k {
        mb[(j, j)] = C64::new(1.0, 0.0);
    }
    mb
}

/// Symmetric unitary `M` on `ℂᵏ` with `M·yᵢ = zᵢ` for the given pairs,
/// where `yᵢ ↦ zᵢ` is assumed isometric and symmetric on `span(yᵢ)`.
fn symmetric_unitary_extension(
    ys: &[Vec<C64>; 2],
    zs: &[Vec<C64>; 2],
    k: usize,
    scale: f64,
    tol: &Tolerance,
) -> Result<Matrix> {
    let ymat = Matrix::from_columns(k, ys);
    let zmat = Matrix::from_columns(k, zs);
    let dec = svd(&ymat, tol)?;
    let cutoff = tol.rank_tol * dec.singulars.first().copied().unwrap_or(0.0).max(scale);
    let r = dec.singulars.iter().filter(|&&s| s > cutoff).count();
    let h = dec.u.submatrix(0, 0, k, r);
    // Y·h_j = Z·V_j / σ_j.
    let zv = &zmat * &dec.v;
    let yh = Matrix::from_fn(k, r, |i, j| zv[(i, j)] / dec.singulars[j]);
    let s0raw = &h.transpose() * &yh;
    let s0 = Matrix::from_fn(r, r, |i, j| (s0raw[(i, j)] + s0raw[(j, i)]) * 0.5);
    let tk = takagi_symmetric(&s0, &Tolerance { residual_tol: 1e-6, ..*tol })?;
    let ut = tk.g;
    let sigma: Vec<f64> = tk.values.iter().map(|&x| x.min(1.0)).collect();

    let rem = &yh - &(&h.conj() * &s0);
    let rem_u = &rem * &ut.conj();
    let cut = tol.rank_tol.sqrt();
    let mut deficient = Vec::new();
    let mut vcols: Vec<Vec<C64>> = Vec::new();
    for (i, s) in sigma.iter().enumerate().take(r) {
        let si = (1.0 - s * s).max(0.0).sqrt();
        if si > cut {
            deficient.push((i, si));
            vcols.push(rem_u.column(i).iter().map(|z| z / si).collect());
        }
    }
    let vmat = Matrix::from_columns(k, &vcols);
    let used = h.hstack(&vmat.conj());
    let kc = orthonormal_complement(&used, tol)?;
    if used.cols() + kc.cols() != k {
        return Err(Error::DegenerateSpan);
    }
    let dom = used.hstack(&kc);
    let mb = extension_block(&s0, &ut, &sigma, &deficient, k);
    Ok(&(&dom.conj() * &mb) * &dom.adjoint())
}

/// Builds the special basis and the `(n−2)×4` system
/// `Im(u*x₁ + v*x₂) = 0`.
///
/// The map `conj(PA*u₁) ↦ PAu₂`, `conj(PA*u₂) ↦ PAu₁` is extended to a
/// symmetric unitary `X̃` from `range(P̄)` onto `range(P)`; a Takagi
/// factorization `X̃ = GGᵀ` supplies the basis vectors `u₃, …, u_n`.
/// The result is verified against the block pattern and rejected with
/// [`Error::DegenerateSpan`] when the construction is ill-conditioned.
pub fn assemble_tableau_refined(
    a: &Matrix,
    profile: &CommutatorProfile,
    tol: &Tolerance,
) -> Result<(RefinedBasis, ProcedureTableau)> {
    if !profile.rank_ok {
        return Err(Error::RankConditionFailed(profile.inertia));
    }
    let n = a.require_square()?;
    let k = n - 2;
    let scale = a.frobenius_norm();
    let e = &profile.null_basis;
    let eh = e.adjoint();
    let [cu, cv, cw, cq] = hat_vectors(a, profile);
    let conj_coords = |x: &[C64]| -> Vec<C64> { eh.mul_vec(x).iter().map(|z| z.conj()).collect() };
    let ys = [conj_coords(&cu), conj_coords(&cv)];
    let zs = [eh.mul_vec(&cq), eh.mul_vec(&cw)];

    let m = symmetric_unitary_extension(&ys, &zs, k, scale, tol)?;
    let check = tol.residual_tol.sqrt();
    let unit_res = (&(&m.adjoint() * &m) - &Matrix::identity(k)).frobenius_norm();
    let fit = ys.iter().zip(&zs).map(|(y, z)| {
        let my = m.mul_vec(y);
        my.iter().zip(z).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt()
    });
    let fit_res = fit.fold(0.0, f64::max);
    if unit_res > check || m.symmetric_residual() > check || fit_res > check * scale.max(1.0) {
        return Err(Error::DegenerateSpan);
    }

    let gamma = takagi_symmetric(&m, &Tolerance { residual_tol: check, ..*tol })?.g;
    let gp = e * &gamma;
    let mut w = Matrix::zeros(n, n);
    w.set_column(0, &profile.u1);
    w.set_column(1, &profile.u2);
    w.embed(0, 2, &gp);
    let at = &w.adjoint() * &(a * &w);
    if pattern_residual(&at) > tol.residual_tol * scale.max(1.0) {
        return Err(Error::DegenerateSpan);
    }
    let u: Vec<C64> = (2..n).map(|j| at[(0, j)]).collect();
    let v: Vec<C64> = (2..n).map(|j| at[(1, j)]).collect();
    let s = at.submatrix(2, 2, k, k);
    let mut q = Matrix::zeros(k, 4);
    for j in 0..k {
        q[(j, 0)] = C64::new(-u[j].im, 0.0);
        q[(j, 1)] = C64::new(u[j].re, 0.0);
        q[(j, 2)] = C64::new(-v[j].im, 0.0);
        q[(j, 3)] = C64::new(v[j].re, 0.0);
    }
    let tableau = tableau_from_q(q, true, scale, tol)?;
    Ok((RefinedBasis { w, u, v, s }, tableau))
}
