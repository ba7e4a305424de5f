//! Polyvector fields, the Schouten–Nijenhuis bracket and chart changes.

pub mod basis;
pub mod chart_map;
pub mod identities;
pub mod polyvector;

pub use basis::PolyBasis;
pub use chart_map::{pushforward, pushforward_frame, pushforward_windowed, ChartMap};
pub use polyvector::{merge_tuples, sort_sign, tuples, PolyVector, Tuple};

use num_traits::Zero;
use thiserror::Error;

use crate::exact_algebra::{AlgebraError, MultiPoly, Scalar, Vars};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultivectorError {
    #[error("polyvectors live on different charts")]
    ChartMismatch,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("expected a {expected}-vector, found degree {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("index {0} outside 1..{1}")]
    IndexOutOfRange(usize, usize),
    #[error("repeated index {0} in a bivector term")]
    RepeatedIndex(usize),
    #[error("zero denominator for component `{0}`")]
    ZeroDenominator(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `[Λ,Λ]`; zero exactly when Λ is Poisson.
///
/// With ordered-pair coefficients π_ij (π_ji = −π_ij), the (i,j,k) component
/// equals `−2·Σ_l (π_lk ∂_l π_ij + π_li ∂_l π_jk + π_lj ∂_l π_ki)`.
pub fn jacobi_defect(lambda: &PolyVector) -> Result<PolyVector, MultivectorError> {
    if lambda.degree() != 2 {
        return Err(MultivectorError::WrongDegree { expected: 2, found: lambda.degree() });
    }
    lambda.schouten(lambda)
}

/// One bivector input term `c · z^e · ∂_i ∧ ∂_j` (1-based indices as written).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivectorTerm {
    pub coeff: Scalar,
    pub exponents: Vec<i32>,
    pub i: usize,
    pub j: usize,
}

/// Builds Λ from input terms. Without `ordered_pairs` the terms are read as
/// the all-pairs sum Σ_{α,β} g_αβ ∂_α∧∂_β with g antisymmetric, so a term
/// with i<j contributes 2c to the stored (i,j) coefficient. With
/// `ordered_pairs` the coefficient is taken verbatim. A term with i>j is
/// rewritten as −c on (j,i).
pub fn bivector_from_terms(
    vars: &Vars,
    dim: usize,
    terms: &[BivectorTerm],
    ordered_pairs: bool,
) -> Result<PolyVector, MultivectorError> {
    let mut p = PolyVector::zero(vars, dim, 2);
    for t in terms {
        if t.i == 0 || t.j == 0 || t.i > dim || t.j > dim {
            return Err(MultivectorError::IndexOutOfRange(t.i.max(t.j), dim));
        }
        if t.i == t.j {
            return Err(MultivectorError::RepeatedIndex(t.i));
        }
        if t.exponents.len() != vars.len() {
            return Err(MultivectorError::Shape(format!(
                "exponent vector of length {} for {} variables",
                t.exponents.len(),
                vars.len()
            )));
        }
        let mut c = t.coeff.clone();
        if !ordered_pairs {
            c = c * Scalar::from_integer(2.into());
        }
        let (a, b) = if t.i < t.j { (t.i - 1, t.j - 1) } else { (t.j - 1, t.i - 1) };
        if t.i > t.j {
            c = -c;
        }
        if c.is_zero() {
            continue;
        }
        p.add_term(vec![a, b], MultiPoly::monomial(vars, t.exponents.clone(), c));
    }
    Ok(p)
}

/// Inverse of [`bivector_from_terms`] with `ordered_pairs` (canonical output).
pub fn bivector_to_terms(p: &PolyVector) -> Vec<BivectorTerm> {
    let mut out = Vec::new();
    for (t, c) in p.terms() {
        for (e, x) in c.terms() {
            out.push(BivectorTerm { coeff: x.clone(), exponents: e.clone(), i: t[0] + 1, j: t[1] + 1 });
        }
    }
    out
}
