use super::{dot, jacobi_rotation, Matrix, Tolerance, C64, MAX_SWEEPS};
use crate::error::{Error, Result};

/// Thin singular value decomposition `A = U · diag(singulars) · Vᴴ`.
///
/// For an `m×n` input, `U` is `m×k` and `V` is `n×k` with `k = min(m, n)`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub singulars: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    pub fn reconstruct(&self) -> Matrix {
        let k = self.singulars.len();
        let us = Matrix::from_fn(self.u.rows(), k, |i, j| self.u[(i, j)] * self.singulars[j]);
        &us * &self.v.adjoint()
    }
}

/// One-sided Jacobi on the columns of `a`.
///
/// Returns the column norms (unsorted), the orthogonalized columns and the
/// accumulated right rotation, which is a full `n×n` unitary.
fn hestenes(a: &Matrix) -> Result<(Vec<f64>, Matrix, Matrix)> {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = Matrix::identity(n);
    let negligible = (f64::EPSILON * a.frobenius_norm()).powi(2);
    for sweep in 0.. {
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, C64::new(0.0, 0.0));
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                let g = gamma.norm();
                if alpha <= negligible || beta <= negligible || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (cs, sn, ph, _) = jacobi_rotation(alpha, beta, gamma);
                let j10 = -ph * sn;
                let j11 = ph * cs;
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    w[(i, p)] = wp * cs + wq * j10;
                    w[(i, q)] = wp * sn + wq * j11;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = vp * cs + vq * j10;
                    v[(i, q)] = vp * sn + vq * j11;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = (0..n).map(|j| (0..m).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt()).collect();
    Ok((sigma, w, v))
}

fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap_or(std::cmp::Ordering::Equal));
    order
}

/// Fills columns flagged `false` in `keep` with unit vectors orthogonal to
/// every other column, by Gram–Schmidt over the standard basis.
fn complete_orthonormal(u: &mut Matrix, keep: &[bool]) {
    let m = u.rows();
    let mut basis: Vec<Vec<C64>> = (0..u.cols()).filter(|&j| keep[j]).map(|j| u.column(j)).collect();
    let mut candidate = 0;
    for (j, &kept) in keep.iter().enumerate().take(u.cols()) {
        if kept {
            continue;
        }
        loop {
            assert!(candidate < m, "cannot complete an orthonormal set");
            let mut x = super::basis_vector(m, candidate);
            candidate += 1;
            for _ in 0..2 {
                for b in &basis {
                    let proj = dot(b, &x);
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi -= proj * bi;
                    }
                }
            }
            let nx = super::norm(&x);
            if nx > 1e-8 {
                let x: Vec<C64> = x.iter().map(|z| z / nx).collect();
                u.set_column(j, &x);
                basis.push(x);
                break;
            }
        }
    }
}

/// Singular value decomposition by one-sided Jacobi.
///
/// `tol` is accepted for uniformity with the other factorizations; the
/// sweep runs to machine precision.
#[allow(clippy::only_used_in_recursion)]
pub fn svd(a: &Matrix, tol: &Tolerance) -> Result<Svd> {
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.adjoint(), tol)?;
        return Ok(Svd { u: t.v, singulars: t.singulars, v: t.u });
    }
    let (sigma, w, v) = hestenes(a)?;
    let order = descending_order(&sigma);
    let singulars: Vec<f64> = order.iter().map(|&j| sigma[j]).collect();
    let v = v.select_columns(&order);
    let mut u = Matrix::zeros(m, n);
    let mut keep = vec![false; n];
    let negligible = f64::EPSILON * a.frobenius_norm();
    for (k, &j) in order.iter().enumerate() {
        let s = sigma[j];
        if s > negligible && s > 0.0 {
            keep[k] = true;
            for i in 0..m {
                u[(i, k)] = w[(i, j)] / s;
            }
        }
    }
    complete_orthonormal(&mut u, &keep);
    Ok(Svd { u, singulars, v })
}

/// Singular values in descending order.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    let (sigma, _, _) = if a.rows() < a.cols() { hestenes(&a.adjoint())? } else { hestenes(a)? };
    let order = descending_order(&sigma);
    Ok(order.iter().map(|&j| sigma[j]).collect())
}

fn threshold(singulars: &[f64], tol: &Tolerance, scale: f64) -> f64 {
    let smax = singulars.iter().cloned().fold(0.0, f64::max);
    tol.rank_tol * smax.max(scale)
}

/// Number of singular values above `rank_tol · σ_max`.
pub fn numerical_rank(a: &Matrix, tol: &Tolerance) -> Result<usize> {
    numerical_rank_scaled(a, tol, 0.0)
}

/// Like [`numerical_rank`] with the cutoff `rank_tol · max(σ_max, scale)`.
///
/// `scale` lets a matrix assembled from other data be judged against the
/// magnitude of that data, so an all-roundoff matrix has rank zero.
pub fn numerical_rank_scaled(a: &Matrix, tol: &Tolerance, scale: f64) -> Result<usize> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0);
    }
    let s = singular_values(a)?;
    let thr = threshold(&s, tol, scale);
    Ok(s.iter().filter(|&&x| x > thr && x > 0.0).count())
}

/// Orthonormal basis of the numerical nullspace, one vector per column.
pub fn nullspace_basis(a: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    nullspace_basis_scaled(a, tol, 0.0)
}

/// Like [`nullspace_basis`] with the cutoff of [`numerical_rank_scaled`].
pub fn nullspace_basis_scaled(a: &Matrix, tol: &Tolerance, scale: f64) -> Result<Matrix> {
    let n = a.cols();
    if a.rows() == 0 {
        return Ok(Matrix::identity(n));
    }
    let (sigma, _, v) = hestenes(a)?;
    let thr = threshold(&sigma, tol, scale);
    let order = descending_order(&sigma);
    let null: Vec<usize> = order.into_iter().filter(|&j| !(sigma[j] > thr && sigma[j] > 0.0)).collect();
    Ok(v.select_columns(&null))
}

/// Orthonormal basis of the orthogonal complement of the column span of
/// `cols` (whose columns are assumed orthonormal).
pub fn orthonormal_complement(cols: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    if cols.cols() == 0 {
        return Ok(Matrix::identity(cols.rows()));
    }
    nullspace_basis(&cols.adjoint(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    #[test]
    fn identity_has_unit_singular_values() {
        let s = svd(&Matrix::identity(4), &Tolerance::default()).unwrap();
        assert_eq!(s.singulars, vec![1.0; 4]);
    }

    #[test]
    fn rank_deficient_wide_matrix() {
        let a = Matrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 1.0), c(0.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 2.0), c(0.0, 0.0)],
        ]);
        let tol = Tolerance::default();
        assert_eq!(numerical_rank(&a, &tol).unwrap(), 1);
        let f = nullspace_basis(&a, &tol).unwrap();
        assert_eq!(f.cols(), 2);
        assert!((&a * &f).frobenius_norm() < 1e-14);
        let s = svd(&a, &tol).unwrap();
        assert!((&s.reconstruct() - &a).frobenius_norm() < 1e-13);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let tol = Tolerance::default();
        assert_eq!(numerical_rank(&Matrix::zeros(3, 2), &tol).unwrap(), 0);
        assert_eq!(nullspace_basis(&Matrix::zeros(3, 2), &tol).unwrap().cols(), 2);
    }

    #[test]
    fn scaled_rank_ignores_roundoff() {
        let a = Matrix::from_real_rows(&[[1e-17, 0.0], [0.0, 0.0]]);
        let tol = Tolerance::default();
        assert_eq!(numerical_rank(&a, &tol).unwrap(), 1);
        assert_eq!(numerical_rank_scaled(&a, &tol, 1.0).unwrap(), 0);
    }
}
