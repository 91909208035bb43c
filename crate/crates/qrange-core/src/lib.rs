//! q-numerical ranges and radii of dense complex matrices.
//!
//! The library is organized around the pipeline
//!
//! * [`matcore`] — the dense complex-matrix kernel (adjoints, norms,
//!   Hermitian eigendecomposition via cyclic Jacobi, SVD, polar
//!   decomposition, PSD square roots),
//! * [`radii`] — classical scalar radii: numerical radius `w(T)`, Crawford
//!   number `c(T)`, transcendental radius `m(T)`,
//! * [`qrange`] — everything `W_q`: admissible pairs, the single-vector
//!   reformulation of `omega_q`, support functions, boundary clouds,
//!   membership and Hausdorff distance,
//! * [`bounds`] — the upper-bound evaluator catalog with certified
//!   comparisons against `omega_q` estimates,
//! * [`structure`] — operator-class predicates, conjugations, the Aluthge
//!   transform and one experiment harness per structural result,
//! * [`verify`] — ensemble property-suite runner, and
//! * [`findings`] — the documented-discrepancy regression log.
//!
//! All computations are pure functions of their inputs plus explicit seeds;
//! parallel sections reduce in index order so results are reproducible.

pub mod bounds;
pub mod findings;
pub mod matcore;
pub mod opt;
pub mod qrange;
pub mod radii;
pub mod structure;
pub mod verify;

pub use matcore::{CMat, CVec, C64};

/// Errors shared across the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("matrix is not Hermitian: asymmetry {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eig:.3e} below -{tol:.3e}")]
    NotPsd { min_eig: f64, tol: f64 },
    #[error("no admissible pair in dimension 1 unless |q| = 1 (got |q| = {0})")]
    InfeasibleQ(f64),
    #[error("support grids differ: {0} vs {1} directions")]
    GridMismatch(usize, usize),
    #[error("premise failed: {0}")]
    PremiseFailed(String),
    #[error("similarity matrix is numerically singular (sigma_min = {0:.3e})")]
    SingularX(f64),
    #[error("perturbation stability requires q > 0")]
    QZero,
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
