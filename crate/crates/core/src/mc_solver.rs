//! Formal Maurer–Cartan solutions of a finite-dimensional DGLA.
//!
//! Elements of `g_a ⊗ ℚ[t₁..t_m]/(t)^{N+1}` are stored as maps from
//! parameter exponents to coefficient vectors in the basis of `g_a`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::dgla::{HodgeData, FDGLA};
use crate::exact_algebra::{Exponent, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum McError {
    #[error("initial term is not harmonic at t-monomial {0:?}")]
    NotHarmonic(Exponent),
    #[error("initial term has a coefficient of t-degree {0}, expected 1")]
    NotLinear(i32),
    #[error("expected an element of degree {expected}, got degree {got}")]
    Degree { expected: usize, got: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// A truncated series with coefficients in one graded piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSeries {
    pub degree: usize,
    pub nparams: usize,
    /// t-exponent → coefficient vector (never stored when zero)
    pub terms: BTreeMap<Exponent, Vec<Scalar>>,
}

fn t_degree(e: &[i32]) -> i32 {
    e.iter().sum()
}

fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(|c| c.is_zero())
}

impl GSeries {
    pub fn zero(degree: usize, nparams: usize) -> Self {
        GSeries { degree, nparams, terms: BTreeMap::new() }
    }

    /// `Σ_v vectors[v] · t_v`.
    pub fn linear(degree: usize, vectors: &[Vec<Scalar>]) -> Self {
        let m = vectors.len();
        let mut s = GSeries::zero(degree, m);
        for (v, x) in vectors.iter().enumerate() {
            let mut e = vec![0; m];
            e[v] = 1;
            s.add_term(e, x, &Scalar::one());
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exponent, v: &[Scalar], c: &Scalar) {
        if c.is_zero() || is_zero_vec(v) {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(|| vec![Scalar::zero(); v.len()]);
        for (a, b) in entry.iter_mut().zip(v) {
            *a += c * b;
        }
        if is_zero_vec(entry) {
            self.terms.remove(&e);
        }
    }

    pub fn add_scaled(&mut self, o: &GSeries, c: &Scalar) {
        for (e, v) in &o.terms {
            self.add_term(e.clone(), v, c);
        }
    }

    /// Homogeneous part of t-degree `mu`.
    pub fn part(&self, mu: i32) -> GSeries {
        let mut s = GSeries::zero(self.degree, self.nparams);
        s.terms = self.terms.iter().filter(|(e, _)| t_degree(e) == mu).map(|(e, v)| (e.clone(), v.clone())).collect();
        s
    }

    pub fn truncate(&self, order: u32) -> GSeries {
        let mut s = self.clone();
        s.terms.retain(|e, _| t_degree(e) <= order as i32);
        s
    }

    /// Apply a linear map to every coefficient.
    pub fn map(&self, degree: usize, f: impl Fn(&[Scalar]) -> Vec<Scalar>) -> GSeries {
        let mut s = GSeries::zero(degree, self.nparams);
        for (e, v) in &self.terms {
            s.add_term(e.clone(), &f(v), &Scalar::one());
        }
        s
    }

    pub fn min_t_degree(&self) -> Option<i32> {
        self.terms.keys().map(|e| t_degree(e)).min()
    }
}

/// `[x, y]` with t-coefficients multiplied and truncated at `order`.
pub fn bracket_series(g: &FDGLA, x: &GSeries, y: &GSeries, order: u32) -> GSeries {
    let deg = x.degree + y.degree;
    let mut r = GSeries::zero(deg, x.nparams);
    if deg > g.top_degree() {
        return r;
    }
    for (ex, vx) in &x.terms {
        for (ey, vy) in &y.terms {
            let e: Exponent = ex.iter().zip(ey).map(|(a, b)| a + b).collect();
            if t_degree(&e) > order as i32 {
                continue;
            }
            r.add_term(e, &g.bracket(x.degree, vx, y.degree, vy), &Scalar::one());
        }
    }
    r
}

pub fn d_series(g: &FDGLA, x: &GSeries) -> GSeries {
    x.map(x.degree + 1, |v| g.apply_d(x.degree, v))
}

#[derive(Clone, Debug)]
pub struct MCSeries<'g> {
    pub g: &'g FDGLA,
    pub h: &'g HodgeData,
    pub order: u32,
    /// β_μ for μ = 1..=order (index μ−1), each homogeneous of t-degree μ
    pub coefficients: Vec<GSeries>,
}

impl<'g> MCSeries<'g> {
    pub fn nparams(&self) -> usize {
        self.coefficients[0].nparams
    }

    /// β = Σ_μ β_μ.
    pub fn total(&self) -> GSeries {
        let mut s = GSeries::zero(1, self.nparams());
        for b in &self.coefficients {
            s.add_scaled(b, &Scalar::one());
        }
        s
    }

    /// `β₁ − ½ L* G [β, β] − β`, zero iff the fixed-point equation holds mod t^{N+1}.
    pub fn fixed_point_defect(&self) -> GSeries {
        let beta = self.total();
        let mut r = kuranishi_correction(self.g, self.h, &beta, self.order);
        r.add_scaled(&self.coefficients[0], &Scalar::one());
        r.add_scaled(&beta, &-Scalar::one());
        r
    }
}

/// `−½ L*G[x, x]` in degree 1, truncated.
fn kuranishi_correction(g: &FDGLA, h: &HodgeData, x: &GSeries, order: u32) -> GSeries {
    if g.top_degree() < 2 {
        return GSeries::zero(1, x.nparams);
    }
    let b = bracket_series(g, x, x, order);
    let half = -Scalar::new(1.into(), 2.into());
    let s = b.map(1, |v| h.degrees[1].adjoint.mul_vec(&h.degrees[2].green.mul_vec(v)));
    let mut r = GSeries::zero(1, x.nparams);
    r.add_scaled(&s, &half);
    r
}

/// The formal solution of `β = β₁ − ½ L*G[β,β]` to order `order`.
pub fn kuranishi_solve<'g>(
    g: &'g FDGLA,
    h: &'g HodgeData,
    beta1: &GSeries,
    order: u32,
) -> Result<MCSeries<'g>, McError> {
    if beta1.degree != 1 {
        return Err(McError::Degree { expected: 1, got: beta1.degree });
    }
    if g.top_degree() < 1 {
        return Err(McError::Shape("the DGLA has no degree-1 part".into()));
    }
    for (e, v) in &beta1.terms {
        if t_degree(e) != 1 {
            return Err(McError::NotLinear(t_degree(e)));
        }
        if v.len() != g.dim(1) || e.len() != beta1.nparams {
            return Err(McError::Shape(format!("coefficient of length {} for dim g_1 = {}", v.len(), g.dim(1))));
        }
        if h.degrees[1].harmonic.mul_vec(v) != *v {
            return Err(McError::NotHarmonic(e.clone()));
        }
    }
    let mut coefficients = vec![beta1.clone()];
    let half = -Scalar::new(1.into(), 2.into());
    for mu in 2..=order as i32 {
        let mut sum = GSeries::zero(2, beta1.nparams);
        if g.top_degree() >= 2 {
            for lam in 1..mu {
                let x = &coefficients[(lam - 1) as usize];
                let y = &coefficients[(mu - lam - 1) as usize];
                sum.add_scaled(&bracket_series(g, x, y, order), &Scalar::one());
            }
        }
        let mut b = GSeries::zero(1, beta1.nparams);
        if g.top_degree() >= 2 {
            let s = sum.map(1, |v| h.degrees[1].adjoint.mul_vec(&h.degrees[2].green.mul_vec(v)));
            b.add_scaled(&s, &half);
        }
        coefficients.push(b);
    }
    Ok(MCSeries { g, h, order, coefficients })
}

/// Harmonic projections `H[β,β]` per t-degree `μ = 2..=N`.
pub fn obstruction(series: &MCSeries) -> Vec<(u32, GSeries)> {
    let (g, h) = (series.g, series.h);
    let beta = series.total();
    let b = bracket_series(g, &beta, &beta, series.order);
    (2..=series.order)
        .map(|mu| {
            let p = b.part(mu as i32);
            let v = if g.top_degree() >= 2 {
                p.map(2, |v| h.degrees[2].harmonic.mul_vec(v))
            } else {
                GSeries::zero(2, beta.nparams)
            };
            (mu, v)
        })
        .collect()
}

pub fn is_unobstructed(series: &MCSeries) -> bool {
    obstruction(series).iter().all(|(_, v)| v.is_zero())
}

/// `Lβ + ½[β,β]`, truncated at the series order.
pub fn mc_residual(series: &MCSeries) -> GSeries {
    mc_residual_of(series.g, &series.total(), series.order)
}

pub fn mc_residual_of(g: &FDGLA, beta: &GSeries, order: u32) -> GSeries {
    let mut r = if g.top_degree() >= 2 { d_series(g, beta) } else { GSeries::zero(2, beta.nparams) };
    r = r.truncate(order);
    r.add_scaled(&bracket_series(g, beta, beta, order), &Scalar::new(1.into(), 2.into()));
    r
}

/// `e^a · x = x + Σ_{n≥1} (ad a)^{n−1}([a,x] − da) / n!` for `a` with no
/// constant term, which makes the sum finite modulo t^{N+1}.
pub fn gauge_action(g: &FDGLA, a: &GSeries, x: &GSeries, order: u32) -> Result<GSeries, McError> {
    if a.degree != 0 || x.degree != 1 {
        return Err(McError::Degree { expected: if a.degree != 0 { 0 } else { 1 }, got: if a.degree != 0 { a.degree } else { x.degree } });
    }
    if a.min_t_degree().is_some_and(|d| d < 1) {
        return Err(McError::Shape("gauge element must lie in the maximal ideal".into()));
    }
    let mut term = bracket_series(g, a, x, order);
    term.add_scaled(&d_series(g, a).truncate(order), &-Scalar::one());
    let mut out = x.truncate(order);
    let mut fact = Scalar::one();
    let mut n = 1u32;
    while !term.is_zero() {
        fact *= Scalar::from_integer(n.into());
        out.add_scaled(&term, &(Scalar::one() / &fact));
        term = bracket_series(g, a, &term, order);
        n += 1;
    }
    Ok(out)
}

/// True iff `e^a · x = y` exactly modulo t^{N+1}.
pub fn gauge_equivalent(g: &FDGLA, x: &GSeries, y: &GSeries, a: &GSeries, order: u32) -> Result<bool, McError> {
    Ok(gauge_action(g, a, x, order)? == y.truncate(order))
}

/// A basis of `ker □_a` (the harmonic space in degree `a`).
pub fn harmonic_basis(h: &HodgeData, a: usize) -> Vec<Vec<Scalar>> {
    h.degrees[a].laplacian.kernel_basis()
}
