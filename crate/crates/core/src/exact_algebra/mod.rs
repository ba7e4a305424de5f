//! Exact rational scalars, sparse (Laurent) polynomials, truncated parameter
//! series, exact linear algebra and Gröbner normal forms.

pub mod complex;
pub mod groebner;
pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod series;

pub use groebner::{groebner_reduce, GroebnerBasis};
pub use matrix::{DenseMatrix, Span, SparseMatrix, SparseVec};
pub use poly::{monomials, Exponent, MultiPoly, Vars};
pub use scalar::Scalar;
pub use series::{FormalSeries, Truncation};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("variable lists differ: [{0}] vs [{1}]")]
    VariableMismatch(String, String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("Laurent polynomial not allowed here: {0}")]
    LaurentInput(String),
    #[error("denominator is not a monomial at t = 0: {0}")]
    NonMonomialDenominator(String),
    #[error("variable `{0}` has no inverse in this substitution")]
    NotInvertible(String),
    #[error("singular matrix")]
    Singular,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
}
