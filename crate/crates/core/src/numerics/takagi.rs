use super::{dot, hermitian_eig, norm, Matrix, Tolerance, C64};
use crate::error::{Error, Result};

/// Takagi factorization `S = G · diag(values) · Gᵀ` of a complex symmetric
/// matrix, with `G` unitary and `values` nonnegative and descending.
#[derive(Debug, Clone)]
pub struct Takagi {
    pub g: Matrix,
    pub values: Vec<f64>,
}

impl Takagi {
    pub fn reconstruct(&self) -> Matrix {
        let k = self.values.len();
        let gd = Matrix::from_fn(self.g.rows(), k, |i, j| self.g[(i, j)] * self.values[j]);
        &gd * &self.g.transpose()
    }
}

/// Takagi factorization of a complex symmetric matrix.
///
/// With `S = X + iY`, the condition `S·conj(g) = σ·g` for `g = a + ib` is
/// the real symmetric eigenproblem `[[X, Y], [Y, −X]]·[a; b] = σ·[a; b]`,
/// whose spectrum is `±σ_k`. Eigenvectors for the nonnegative half give
/// the columns of `G`; vectors spanning a zero singular value are
/// re-orthonormalized in complex arithmetic.
pub fn takagi_symmetric(s: &Matrix, tol: &Tolerance) -> Result<Takagi> {
    let k = s.require_square()?;
    let scale = s.frobenius_norm();
    let asym = s.symmetric_residual();
    if asym > tol.residual_tol * scale {
        return Err(Error::NotSymmetric(if scale > 0.0 { asym / scale } else { asym }));
    }
    if k == 0 {
        return Ok(Takagi { g: Matrix::zeros(0, 0), values: vec![] });
    }
    let sym = Matrix::from_fn(k, k, |i, j| (s[(i, j)] + s[(j, i)]) * 0.5);
    let mut emb = Matrix::zeros(2 * k, 2 * k);
    for i in 0..k {
        for j in 0..k {
            let z = sym[(i, j)];
            emb[(i, j)] = C64::new(z.re, 0.0);
            emb[(i, j + k)] = C64::new(z.im, 0.0);
            emb[(i + k, j)] = C64::new(z.im, 0.0);
            emb[(i + k, j + k)] = C64::new(-z.re, 0.0);
        }
    }
    let eig = hermitian_eig(&emb, tol)?;
    let lmax = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let zero_thr = tol.rank_tol * lmax.max(f64::MIN_POSITIVE);

    let as_complex = |col: usize| -> Vec<C64> {
        (0..k).map(|i| C64::new(eig.vectors[(i, col)].re, eig.vectors[(i + k, col)].re)).collect()
    };

    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    for col in 0..k {
        if eig.values[col] > zero_thr {
            columns.push(as_complex(col));
            values.push(eig.values[col]);
        }
    }
    if columns.len() < k {
        for col in 0..2 * k {
            if columns.len() == k {
                break;
            }
            if eig.values[col].abs() > zero_thr {
                continue;
            }
            let mut x = as_complex(col);
            for _ in 0..2 {
                for b in &columns {
                    let p = dot(b, &x);
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi -= p * bi;
                    }
                }
            }
            let nx = norm(&x);
            if nx > 0.5 {
                columns.push(x.iter().map(|z| z / nx).collect());
                values.push(0.0);
            }
        }
    }
    if columns.len() < k {
        return Err(Error::NoConvergence(super::MAX_SWEEPS));
    }
    Ok(Takagi { g: Matrix::from_columns(k, &columns), values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    #[test]
    fn identity() {
        let t = takagi_symmetric(&Matrix::identity(3), &Tolerance::default()).unwrap();
        assert!((&t.reconstruct() - &Matrix::identity(3)).frobenius_norm() < 1e-14);
        assert_eq!(t.values, vec![1.0; 3]);
    }

    #[test]
    fn swap_matrix() {
        let s = Matrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let t = takagi_symmetric(&s, &Tolerance::default()).unwrap();
        assert!((&t.reconstruct() - &s).frobenius_norm() < 1e-14);
        let gg = &t.g.adjoint() * &t.g;
        assert!((&gg - &Matrix::identity(2)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn singular_symmetric() {
        let s = Matrix::from_rows(&[vec![c(1.0, 1.0), c(1.0, 1.0)], vec![c(1.0, 1.0), c(1.0, 1.0)]]);
        let t = takagi_symmetric(&s, &Tolerance::default()).unwrap();
        assert!((&t.reconstruct() - &s).frobenius_norm() < 1e-13);
        assert_eq!(t.values[1], 0.0);
        let gg = &t.g.adjoint() * &t.g;
        assert!((&gg - &Matrix::identity(2)).frobenius_norm() < 1e-13);
    }

    #[test]
    fn rejects_non_symmetric() {
        let s = Matrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(takagi_symmetric(&s, &Tolerance::default()), Err(Error::NotSymmetric(_))));
    }
}
