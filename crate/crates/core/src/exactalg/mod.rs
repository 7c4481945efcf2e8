//! Exact arithmetic over the Gaussian rationals `Q(i)`.
//!
//! Everything downstream (characteristic polynomials, Čech section maps,
//! eigen-sections, the B-field local model) is built from the types here:
//! [`GaussQ`] scalars, dense univariate [`UniPoly`], bivariate [`BiPoly`]
//! (polynomials in `y` with coefficients in `Q(i)[z]`), sparse [`MultiPoly`]
//! in up to four variables, and the generic [`Matrix`].

mod bipoly;
mod gauss;
mod matrix;
mod multipoly;
mod roots;
mod unipoly;

use thiserror::Error;

pub use bipoly::{resultant_y, BiPoly};
pub use gauss::GaussQ;
pub use matrix::{kernel_basis, Matrix, MultiPolyMatrix, PolyMatrix, Ring, ScalarMatrix};
pub use multipoly::{MultiPoly, Var, NVARS};
pub use roots::{approx_roots, gaussian_rational_roots};
pub use unipoly::{poly_gcd, poly_sqrt, squarefree_part, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial division is not exact")]
    InexactDivision,
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    Singular,
}

/// A malformed Gaussian-rational literal; `position` is a byte offset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid number at position {position}: {message}")]
pub struct ParseGaussError {
    pub position: usize,
    pub message: &'static str,
}

impl ParseGaussError {
    pub(crate) fn new(position: usize, message: &'static str) -> Self {
        ParseGaussError { position, message }
    }
}
