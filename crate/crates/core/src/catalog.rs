//! Reference matrices with known normal-defect behaviour.
//!
//! These are the worked instances used by the tests, the CLI fixtures and
//! the guide.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::numerics::{c, Matrix, C64};

/// The `n×n` upper shift: ones on the first superdiagonal.
pub fn shift(n: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| if j == i + 1 { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

/// A 4×4 matrix whose commutator is `diag(2, −2, 0, 0)` but whose normal
/// defect exceeds one: the completion equation forces `|x₁| < |x₂|`.
pub fn rank_condition_not_sufficient() -> Matrix {
    let h = FRAC_1_SQRT_2;
    Matrix::from_rows(&[
        vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, -1.0)],
        vec![c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(1.0, 0.0), c(h, 0.0), c(0.0, h)],
        vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, h), c(-h, 0.0)],
    ])
}

/// Single Jordan cell with `nd = 1` and `ud = 2`; commutator `diag(1, −1, 0)`.
pub fn jordan_cell_3() -> Matrix {
    Matrix::from_real_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0]])
}

/// The completion `[[A, μ(x₁, x₂, 0)ᵀ], [μ̄(x₂, x₁, 0), 1]]` of
/// [`jordan_cell_3`], valid for real `x₂` with `|x₁|² − x₂² = 1`.
pub fn jordan_cell_3_completion(x1: C64, x2: f64, mu: C64) -> Matrix {
    let mut b = Matrix::zeros(4, 4);
    b.embed(0, 0, &jordan_cell_3());
    b[(0, 3)] = mu * x1;
    b[(1, 3)] = mu * x2;
    b[(3, 0)] = mu.conj() * x2;
    b[(3, 1)] = mu.conj() * x1;
    b[(3, 3)] = c(1.0, 0.0);
    b
}

/// Tridiagonal matrix with three distinct eigenvalues, `nd = 1`, `ud = 2`.
pub fn three_eigenvalues() -> Matrix {
    Matrix::from_rows(&[
        vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.5)],
    ])
}

/// Unitary `U` with `U*·three_eigenvalues()·U` in the special block form.
pub fn three_eigenvalues_basis() -> Matrix {
    let h = FRAC_1_SQRT_2;
    Matrix::from_rows(&[
        vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        vec![c(h, 0.0), c(h, 0.0), c(0.0, 0.0)],
        vec![c(0.0, -h), c(0.0, h), c(0.0, 0.0)],
    ])
}

/// `U*·A·U` for [`three_eigenvalues`]; its commutator is `diag(3, −3, 0)`.
pub fn three_eigenvalues_transformed() -> Matrix {
    let h = FRAC_1_SQRT_2;
    Matrix::from_rows(&[
        vec![c(0.0, 0.75), c(0.0, 0.25), c(h, 0.0)],
        vec![c(0.0, -1.75), c(0.0, 0.75), c(h, 0.0)],
        vec![c(h, 0.0), c(h, 0.0), c(0.0, 0.0)],
    ])
}

/// Completion of [`three_eigenvalues`] parametrized by real `h₁, h₂, h₃`
/// with `h₁² − h₂² = 3` and a phase `μ`.
pub fn three_eigenvalues_completion(h1: f64, h2: f64, h3: f64, mu: C64) -> Matrix {
    let s = FRAC_1_SQRT_2;
    let p = c((h1 + h2) * s, 0.0);
    let q = c(2.0 * h3 * s, (h2 - h1) * s);
    let z = c((h1 * h3 + 5.0 * h2 * h3) / 3.0, (3.0 - 2.0 * h1 * h2 + 2.0 * h2 * h2) / 3.0);
    let mut b = Matrix::zeros(4, 4);
    b.embed(0, 0, &three_eigenvalues());
    b[(1, 3)] = mu * p;
    b[(2, 3)] = mu * q;
    b[(3, 1)] = mu.conj() * p;
    b[(3, 2)] = mu.conj() * q;
    b[(3, 3)] = z;
    b
}

/// A 4×4 matrix with commutator `e₁e₁* − e₂e₂*` for which the witness
/// `x = e₁, y = e₂` fails the dependency test although `nd = 1`.
pub fn eigenvector_witness_fails() -> Matrix {
    let h = FRAC_1_SQRT_2;
    let r = 3f64.sqrt() / 2.0;
    Matrix::from_rows(&[
        vec![c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0), c(0.0, h)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)],
        vec![c(1.0, 0.0), c(h, 0.0), c(r, 0.0), c(0.0, -r)],
        vec![c(0.0, 1.0), c(0.0, h), c(0.0, -r), c(-r, 0.0)],
    ])
}

/// A minimal unitary (hence normal) completion of [`eigenvector_witness_fails`].
pub fn eigenvector_witness_fails_completion() -> Matrix {
    let s2 = 2f64.sqrt();
    let mut b = Matrix::zeros(5, 5);
    b.embed(0, 0, &eigenvector_witness_fails());
    b[(0, 4)] = c(s2, 0.0);
    b[(1, 4)] = c(-1.0, 0.0);
    b[(4, 0)] = c(-1.0, 0.0);
    b[(4, 1)] = c(s2, 0.0);
    b
}

/// The 8×8 state `[[I, B*], [B, BB* + 2e₁e₁*]]` with `B` =
/// [`rank_condition_not_sufficient`]. Both Schur complements are rank one
/// and the partial transpose is positive, yet the state is entangled.
pub fn entangled_state_4() -> Matrix {
    let b = rank_condition_not_sufficient();
    let mut cm = &b * &b.adjoint();
    cm[(0, 0)] += c(2.0, 0.0);
    let mut m = Matrix::zeros(8, 8);
    m.embed(0, 0, &Matrix::identity(4));
    m.embed(0, 4, &b.adjoint());
    m.embed(4, 0, &b);
    m.embed(4, 4, &cm);
    m
}
