use super::{jacobi_rotation, Matrix, Tolerance, C64, MAX_SWEEPS};
use crate::error::{Error, Result};

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: Matrix,
}

impl EigenPairs {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V · diag(f(λ)) · Vᴴ`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.values.len();
        let scaled = Matrix::from_fn(n, n, |i, j| self.vectors[(i, j)] * f(self.values[j]));
        &scaled * &self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> Matrix {
        self.apply(|x| x)
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Values are sorted descending. Each eigenvector is rotated so that its
/// first component with modulus above `rank_tol` is real and positive.
/// Real symmetric input yields real eigenvectors.
pub fn hermitian_eig(h: &Matrix, tol: &Tolerance) -> Result<EigenPairs> {
    let n = h.require_square()?;
    let scale = h.frobenius_norm();
    let asym = h.hermitian_residual();
    if asym > tol.residual_tol * scale {
        return Err(Error::NotHermitian(if scale > 0.0 { asym / scale } else { asym }));
    }
    let mut a =
        Matrix::from_fn(
            n,
            n,
            |i, j| {
                if i == j {
                    C64::new(h[(i, i)].re, 0.0)
                } else {
                    (h[(i, j)] + h[(j, i)].conj()) * 0.5
                }
            },
        );
    let mut v = Matrix::identity(n);

    let off_norm = |a: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    // Entries below `small` are flushed rather than rotated, so that the
    // total off-diagonal mass can always reach `target`.
    let target = f64::EPSILON * scale;
    let small = target / n.max(1) as f64;
    let mut sweeps = 0;
    while off_norm(&a) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() <= small.max(f64::MIN_POSITIVE) {
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                rotated = true;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let (cs, sn, ph, t) = jacobi_rotation(app, aqq, apq);
                let r = apq.norm();
                let j10 = -ph * sn;
                let j11 = ph * cs;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * cs + akq * j10;
                    a[(k, q)] = akp * sn + akq * j11;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * cs + aqk * j10.conj();
                    a[(q, k)] = apk * sn + aqk * j11.conj();
                }
                a[(p, p)] = C64::new(app - t * r, 0.0);
                a[(q, q)] = C64::new(aqq + t * r, 0.0);
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * cs + vkq * j10;
                    v[(k, q)] = vkp * sn + vkq * j11;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = v.select_columns(&order);
    normalize_phases(&mut vectors, tol.rank_tol);
    Ok(EigenPairs { values, vectors })
}

/// Rotates each column so that its first entry with modulus above
/// `threshold` is real and positive.
pub(crate) fn normalize_phases(vectors: &mut Matrix, threshold: f64) {
    for j in 0..vectors.cols() {
        if let Some(i) = (0..vectors.rows()).find(|&i| vectors[(i, j)].norm() > threshold) {
            let z = vectors[(i, j)];
            let ph = z.conj() / z.norm();
            for k in 0..vectors.rows() {
                vectors[(k, j)] *= ph;
            }
            vectors[(i, j)] = C64::new(vectors[(i, j)].re, 0.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    #[test]
    fn diagonal_input_is_returned_sorted() {
        let h = Matrix::diag_real(&[0.0, -2.0, 2.0, 0.0]);
        let e = hermitian_eig(&h, &Tolerance::default()).unwrap();
        assert_eq!(e.values, vec![2.0, 0.0, 0.0, -2.0]);
        assert_eq!(e.vector(0)[2], c(1.0, 0.0));
        assert_eq!(e.vector(3)[1], c(1.0, 0.0));
    }

    #[test]
    fn two_by_two_complex() {
        let h = Matrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 2.0)], vec![c(0.0, -2.0), c(1.0, 0.0)]]);
        let e = hermitian_eig(&h, &Tolerance::default()).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] + 1.0).abs() < 1e-14);
        assert!((&e.reconstruct() - &h).frobenius_norm() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = Matrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(hermitian_eig(&h, &Tolerance::default()), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn real_input_gives_real_vectors() {
        let h = Matrix::from_real_rows(&[[2.0, -1.0, 0.5], [-1.0, 0.0, 3.0], [0.5, 3.0, 1.0]]);
        let e = hermitian_eig(&h, &Tolerance::default()).unwrap();
        assert!(e.vectors.is_real());
        assert!((&e.reconstruct() - &h).frobenius_norm() < 1e-13);
    }
}
