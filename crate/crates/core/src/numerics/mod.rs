//! Self-contained special functions and dense linear algebra kernels.

pub mod bessel;
pub mod eig;
pub mod matrix;
pub mod quadrature;

pub use bessel::{bessel_j, j0, j1, two_j1_over_x};
pub use eig::{hermitian_eig, EigDecomposition, HERMITICITY_TOL};
pub use matrix::{solve_linear, ComplexMatrix, LuFactors};
pub use quadrature::{integrate_pixels, rasterize_disc, PixelMap};

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum NumericsError {
    #[error("input is not finite")]
    NonFiniteInput,
    #[error("unsupported Bessel order {order} (only 0 and 1)")]
    UnsupportedOrder { order: u8 },
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular at pivot {pivot}")]
    SingularMatrix { pivot: usize },
    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("brightness map is empty")]
    EmptyMap,
    #[error("brightness map format error: {detail}")]
    MapFormat { detail: String },
}
