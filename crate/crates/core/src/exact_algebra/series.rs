//! Truncated power series in deformation parameters.
//!
//! Parameters are ordinary variables of a [`MultiPoly`]; a [`Truncation`]
//! names which of them are parameters and discards every term whose total
//! parameter degree exceeds the order `N`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};


use super::poly::{Exponent, MultiPoly, Vars};
use super::scalar::Scalar;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub params: Vec<usize>,
    pub order: u32,
}

impl Truncation {
    pub fn new(params: Vec<usize>, order: u32) -> Self {
        Truncation { params, order }
    }

    /// No parameters: every polynomial is its own truncation.
    pub fn none() -> Self {
        Truncation { params: Vec::new(), order: 0 }
    }

    pub fn param_degree(&self, e: &[i32]) -> i64 {
        self.params.iter().map(|&i| e[i] as i64).sum()
    }

    pub fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        if self.params.is_empty() {
            return a * b;
        }
        let mut r = MultiPoly::zero(a.vars());
        for (ea, ca) in a.terms() {
            let da = self.param_degree(ea);
            for (eb, cb) in b.terms() {
                if da + self.param_degree(eb) > self.order as i64 {
                    continue;
                }
                r.add_term(ea.iter().zip(eb).map(|(x, y)| x + y).collect(), ca * cb);
            }
        }
        r
    }

    /// Inverse of `den` modulo the parameter ideal. The parameter-free part
    /// of `den` must be a single monomial `c·z^a`; the inverse is then the
    /// finite geometric series `(c z^a)^{-1} Σ_k (−u)^k`, `u = den/(c z^a) − 1`.
    pub fn inverse(&self, den: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        let base = den.filter(|e| self.param_degree(e) == 0);
        if base.len() != 1 {
            return Err(AlgebraError::NonMonomialDenominator(den.to_string()));
        }
        if den.terms().keys().any(|e| self.params.iter().any(|&i| e[i] < 0)) {
            return Err(AlgebraError::NonMonomialDenominator(den.to_string()));
        }
        let (e0, c0) = base.terms().iter().next().unwrap();
        let inv_e: Exponent = e0.iter().map(|x| -x).collect();
        let inv_c = Scalar::one() / c0;
        let lead_inv = MultiPoly::monomial(den.vars(), inv_e, inv_c);
        let rest = &den.filter(|e| self.param_degree(e) > 0) * &lead_inv;
        let minus_u = rest.scale(&-Scalar::one());
        let mut acc = MultiPoly::one(den.vars());
        let mut pw = MultiPoly::one(den.vars());
        for _ in 0..self.order {
            pw = self.mul(&pw, &minus_u);
            if pw.is_zero() {
                break;
            }
            acc = &acc + &pw;
        }
        Ok(self.mul(&acc, &lead_inv))
    }

    /// Splits a polynomial by parameter monomial: t-exponent → coefficient
    /// (with the parameter exponents zeroed).
    pub fn split(&self, p: &MultiPoly) -> BTreeMap<Vec<i32>, MultiPoly> {
        let mut out: BTreeMap<Vec<i32>, MultiPoly> = BTreeMap::new();
        for (e, c) in p.terms() {
            let key: Vec<i32> = self.params.iter().map(|&i| e[i]).collect();
            let mut f = e.clone();
            for &i in &self.params {
                f[i] = 0;
            }
            out.entry(key).or_insert_with(|| MultiPoly::zero(p.vars())).add_term(f, c.clone());
        }
        out
    }

    /// Value at t = 0.
    pub fn at_zero(&self, p: &MultiPoly) -> MultiPoly {
        p.filter(|e| self.params.iter().all(|&i| e[i] == 0))
    }

    /// Directional derivative Σ c_λ ∂/∂t_λ evaluated at t = 0.
    pub fn derivative_at_zero(&self, p: &MultiPoly, direction: &[Scalar]) -> MultiPoly {
        assert_eq!(direction.len(), self.params.len());
        let mut r = MultiPoly::zero(p.vars());
        for (l, &i) in self.params.iter().enumerate() {
            if direction[l].is_zero() {
                continue;
            }
            let d = self.at_zero(&p.partial(i));
            r.add_scaled(&d, &direction[l]);
        }
        r
    }
}

/// A polynomial in parameters t₁..t_m (with coefficients in the remaining
/// variables) truncated at total parameter degree N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSeries {
    poly: MultiPoly,
    trunc: Truncation,
}

impl FormalSeries {
    pub fn new(poly: MultiPoly, trunc: Truncation) -> Self {
        let poly = poly.truncate(&trunc);
        FormalSeries { poly, trunc }
    }

    pub fn zero(vars: &Vars, trunc: Truncation) -> Self {
        FormalSeries { poly: MultiPoly::zero(vars), trunc }
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    pub fn order(&self) -> u32 {
        self.trunc.order
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn add(&self, o: &FormalSeries) -> Result<FormalSeries, AlgebraError> {
        self.same(o)?;
        Ok(FormalSeries { poly: self.poly.try_add(&o.poly)?, trunc: self.trunc.clone() })
    }

    pub fn mul(&self, o: &FormalSeries) -> Result<FormalSeries, AlgebraError> {
        self.same(o)?;
        if self.poly.vars() != o.poly.vars() {
            return Err(AlgebraError::VariableMismatch(
                self.poly.vars().names().join(","),
                o.poly.vars().names().join(","),
            ));
        }
        Ok(FormalSeries { poly: self.trunc.mul(&self.poly, &o.poly), trunc: self.trunc.clone() })
    }

    pub fn inverse(&self) -> Result<FormalSeries, AlgebraError> {
        Ok(FormalSeries { poly: self.trunc.inverse(&self.poly)?, trunc: self.trunc.clone() })
    }

    /// Homogeneous pieces by parameter monomial.
    pub fn coefficients(&self) -> BTreeMap<Vec<i32>, MultiPoly> {
        self.trunc.split(&self.poly)
    }

    fn same(&self, o: &FormalSeries) -> Result<(), AlgebraError> {
        if self.trunc != o.trunc {
            return Err(AlgebraError::Shape("series with different truncations".into()));
        }
        Ok(())
    }
}
