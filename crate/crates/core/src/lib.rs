//! Normal defect one.
//!
//! `nd(A)` is the smallest `k` such that `A` is the leading block of a
//! normal matrix of size `n + k`. This crate decides `nd(A) = 1` and
//! parametrizes the minimal completions:
//!
//! - [`commutator`]: `A*A − AA*`, its inertia and eigen-profile, lower
//!   and upper bounds.
//! - [`complex`]: the decision procedure and completion families.
//! - [`real`]: real completions of real matrices.
//! - [`generators`]: seeded random matrices with known status.
//! - [`commuting`]: commuting completions of Hermitian, symmetric and
//!   symmetric/antisymmetric pairs.
//! - [`separability`]: 2×n states via the Peres test and normal
//!   completions.
//! - [`numerics`]: the dense complex linear algebra underneath.
//! - [`catalog`]: worked reference matrices.
//!
//! ```
//! use ndefect::{catalog, complex::nd_status, Tolerance};
//!
//! let status = nd_status(&catalog::shift(3), &Tolerance::default())?;
//! assert!(status.is_one());
//! # Ok::<(), ndefect::Error>(())
//! ```

pub mod catalog;
pub mod commutator;
pub mod commuting;
pub mod complex;
pub mod error;
pub mod generators;
pub mod numerics;
pub mod real;
pub mod separability;

pub use error::{Error, Result};
pub use numerics::{Matrix, Tolerance, C64};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/detection.md")]
    mod detection {}
    #[doc = include_str!("../../../book/src/real.md")]
    mod real {}
    #[doc = include_str!("../../../book/src/generators.md")]
    mod generators {}
    #[doc = include_str!("../../../book/src/commuting.md")]
    mod commuting {}
    #[doc = include_str!("../../../book/src/separability.md")]
    mod separability {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}
