//! Polyvector fields with (Laurent) polynomial coefficients on one chart.
//!
//! A q-vector is stored as a map from strictly increasing index tuples
//! (0-based internally) to coefficient polynomials. The coefficient ring may
//! carry extra trailing variables (deformation parameters); only the first
//! `dim` variables are chart coordinates.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::exact_algebra::{MultiPoly, Scalar, Truncation, Vars};

use super::MultivectorError;

pub type Tuple = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVector {
    vars: Vars,
    dim: usize,
    degree: usize,
    terms: BTreeMap<Tuple, MultiPoly>,
}

/// ξ_I ξ_J = sign · ξ_K, or `None` when I and J overlap.
pub fn merge_tuples(a: &[usize], b: &[usize]) -> Option<(i32, Tuple)> {
    let mut inversions = 0usize;
    for x in a {
        for y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut k: Tuple = a.iter().chain(b).copied().collect();
    k.sort_unstable();
    Some((if inversions % 2 == 0 { 1 } else { -1 }, k))
}

/// Sign that sorts an arbitrary index list, or `None` on a repeat.
pub fn sort_sign(idx: &[usize]) -> Option<(i32, Tuple)> {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] == idx[j] {
                return None;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    let mut t = idx.to_vec();
    t.sort_unstable();
    Some((sign, t))
}

fn right_derivative(i: &[usize], k: usize) -> Option<(i32, Tuple)> {
    let p = i.iter().position(|&x| x == k)?;
    let q = i.len();
    let sign = if (q - 1 - p) % 2 == 0 { 1 } else { -1 };
    let mut t = i.to_vec();
    t.remove(p);
    Some((sign, t))
}

fn left_derivative(i: &[usize], k: usize) -> Option<(i32, Tuple)> {
    let p = i.iter().position(|&x| x == k)?;
    let sign = if p % 2 == 0 { 1 } else { -1 };
    let mut t = i.to_vec();
    t.remove(p);
    Some((sign, t))
}

fn sc(s: i32) -> Scalar {
    Scalar::from_integer(s.into())
}

/// All strictly increasing q-tuples from 0..n.
pub fn tuples(n: usize, q: usize) -> Vec<Tuple> {
    fn rec(start: usize, n: usize, q: usize, cur: &mut Tuple, out: &mut Vec<Tuple>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, q, &mut Vec::new(), &mut out);
    out
}

/// Determinant of a small square matrix of polynomials (cofactor expansion).
pub fn poly_det(m: &[Vec<MultiPoly>], vars: &Vars, tr: &Truncation) -> MultiPoly {
    let n = m.len();
    match n {
        0 => MultiPoly::one(vars),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = MultiPoly::zero(vars);
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MultiPoly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
                    .collect();
                let d = tr.mul(&m[0][c], &poly_det(&minor, vars, tr));
                let s = if c % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                acc.add_scaled(&d, &s);
            }
            acc
        }
    }
}

impl PolyVector {
    pub fn zero(vars: &Vars, dim: usize, degree: usize) -> Self {
        assert!(dim <= vars.len(), "chart dimension exceeds variable count");
        PolyVector { vars: vars.clone(), dim, degree, terms: BTreeMap::new() }
    }

    /// A 0-vector (function).
    pub fn function(f: MultiPoly, dim: usize) -> Self {
        let mut p = PolyVector::zero(f.vars(), dim, 0);
        p.add_term(Vec::new(), f);
        p
    }

    /// `f · ∂_{i₁}∧…∧∂_{i_q}` for an arbitrary index list (sorted with sign).
    pub fn term(f: MultiPoly, dim: usize, idx: &[usize]) -> Result<Self, MultivectorError> {
        let mut p = PolyVector::zero(f.vars(), dim, idx.len());
        if let Some(&bad) = idx.iter().find(|&&i| i >= dim) {
            return Err(MultivectorError::IndexOutOfRange(bad + 1, dim));
        }
        if let Some((s, t)) = sort_sign(idx) {
            p.add_term(t, f.scale(&Scalar::from_integer(s.into())));
        }
        Ok(p)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Tuple, MultiPoly> {
        &self.terms
    }

    pub fn coeff(&self, idx: &[usize]) -> MultiPoly {
        self.terms.get(idx).cloned().unwrap_or_else(|| MultiPoly::zero(&self.vars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `f·∂_I` (I sorted, of the right length).
    pub fn add_term(&mut self, idx: Tuple, f: MultiPoly) {
        debug_assert_eq!(idx.len(), self.degree);
        debug_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        if f.is_zero() {
            return;
        }
        let e = self.terms.entry(idx.clone()).or_insert_with(|| MultiPoly::zero(&self.vars));
        e.add_scaled(&f, &Scalar::one());
        if e.is_zero() {
            self.terms.remove(&idx);
        }
    }

    fn same_chart(&self, o: &PolyVector) -> Result<(), MultivectorError> {
        if self.vars != o.vars || self.dim != o.dim {
            return Err(MultivectorError::ChartMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, o: &PolyVector) -> Result<PolyVector, MultivectorError> {
        self.same_chart(o)?;
        if self.degree != o.degree {
            // brackets of two functions are zero with a nominal degree
            if o.is_zero() {
                return Ok(self.clone());
            }
            if self.is_zero() {
                return Ok(o.clone());
            }
            return Err(MultivectorError::DegreeMismatch(self.degree, o.degree));
        }
        let mut r = self.clone();
        for (i, f) in &o.terms {
            r.add_term(i.clone(), f.clone());
        }
        Ok(r)
    }

    pub fn add(&self, o: &PolyVector) -> PolyVector {
        self.try_add(o).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn sub(&self, o: &PolyVector) -> PolyVector {
        self.add(&o.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> PolyVector {
        let mut r = PolyVector::zero(&self.vars, self.dim, self.degree);
        if c.is_zero() {
            return r;
        }
        for (i, f) in &self.terms {
            r.terms.insert(i.clone(), f.scale(c));
        }
        r
    }

    /// Multiplies every coefficient by the function `g`.
    pub fn mul_function(&self, g: &MultiPoly) -> PolyVector {
        let mut r = PolyVector::zero(&self.vars, self.dim, self.degree);
        for (i, f) in &self.terms {
            r.add_term(i.clone(), f * g);
        }
        r
    }

    pub fn map_coeffs<F: Fn(&MultiPoly) -> MultiPoly>(&self, vars: &Vars, dim: usize, f: F) -> PolyVector {
        let mut r = PolyVector::zero(vars, dim, self.degree);
        for (i, c) in &self.terms {
            r.add_term(i.clone(), f(c));
        }
        r
    }

    pub fn truncate(&self, tr: &Truncation) -> PolyVector {
        self.map_coeffs(&self.vars.clone(), self.dim, |c| c.truncate(tr))
    }

    /// Exterior product.
    pub fn wedge(&self, o: &PolyVector) -> Result<PolyVector, MultivectorError> {
        self.same_chart(o)?;
        let mut r = PolyVector::zero(&self.vars, self.dim, self.degree + o.degree);
        if self.degree + o.degree > self.dim {
            return Ok(r);
        }
        for (i, f) in &self.terms {
            for (j, g) in &o.terms {
                if let Some((s, k)) = merge_tuples(i, j) {
                    r.add_term(k, (f * g).scale(&Scalar::from_integer(s.into())));
                }
            }
        }
        Ok(r)
    }

    /// Schouten–Nijenhuis bracket, written on superfunctions in odd ξ_k:
    /// `[P,Q] = Σ_k (P ∂⃖/∂ξ_k)(∂_k Q) − (∂_k P)(∂⃗/∂ξ_k Q)`.
    /// It restricts to the Lie bracket on vector fields and `[X,f] = X(f)`.
    pub fn schouten(&self, o: &PolyVector) -> Result<PolyVector, MultivectorError> {
        self.same_chart(o)?;
        let deg = (self.degree + o.degree).saturating_sub(1);
        let mut r = PolyVector::zero(&self.vars, self.dim, deg);
        if self.degree + o.degree == 0 {
            return Ok(r);
        }
        for (i, f) in &self.terms {
            for (j, g) in &o.terms {
                for &k in i {
                    let dg = g.partial(k);
                    if dg.is_zero() {
                        continue;
                    }
                    let (s1, ik) = right_derivative(i, k).unwrap();
                    if let Some((s2, kk)) = merge_tuples(&ik, j) {
                        r.add_term(kk, (f * &dg).scale(&sc(s1 * s2)));
                    }
                }
                for &k in j {
                    let df = f.partial(k);
                    if df.is_zero() {
                        continue;
                    }
                    let (s1, jk) = left_derivative(j, k).unwrap();
                    if let Some((s2, kk)) = merge_tuples(i, &jk) {
                        r.add_term(kk, (&df * g).scale(&sc(-s1 * s2)));
                    }
                }
            }
        }
        Ok(r)
    }

    /// Rewrites `Σ c_I ∂_{z_I}` in a new frame `∂_{z_r} = Σ_a J[a][r] ∂_{w_a}`;
    /// `J` entries live in the coefficient ring of `self`.
    pub fn change_frame(&self, jac: &[Vec<MultiPoly>], new_dim: usize, tr: &Truncation) -> PolyVector {
        let q = self.degree;
        let mut r = PolyVector::zero(&self.vars, new_dim, q);
        let targets = tuples(new_dim, q);
        for (i, c) in &self.terms {
            for a in &targets {
                let minor: Vec<Vec<MultiPoly>> =
                    a.iter().map(|&row| i.iter().map(|&col| jac[row][col].clone()).collect()).collect();
                let d = poly_det(&minor, &self.vars, tr);
                if !d.is_zero() {
                    r.add_term(a.clone(), tr.mul(c, &d));
                }
            }
        }
        r
    }

    /// Coefficient-wise substitution into a new coefficient ring.
    pub fn substitute(
        &self,
        vars: &Vars,
        dim: usize,
        images: &[MultiPoly],
        inverses: &[Option<MultiPoly>],
        tr: Option<&Truncation>,
    ) -> Result<PolyVector, MultivectorError> {
        let mut r = PolyVector::zero(vars, dim, self.degree);
        for (i, c) in &self.terms {
            r.add_term(i.clone(), c.substitute(images, inverses, tr)?);
        }
        Ok(r)
    }

    /// Drops every term with a chart exponent outside `[-w, w]`; returns the
    /// truncated field and whether anything was dropped.
    pub fn window(&self, w: i32) -> (PolyVector, bool) {
        let dim = self.dim;
        let mut r = PolyVector::zero(&self.vars, dim, self.degree);
        let mut dropped = false;
        for (i, c) in &self.terms {
            let k = c.filter(|e| e[..dim].iter().all(|x| x.abs() <= w));
            dropped |= k.len() != c.len();
            r.add_term(i.clone(), k);
        }
        (r, dropped)
    }

    /// Largest absolute chart exponent occurring (0 for the zero field).
    pub fn max_abs_exponent(&self) -> i32 {
        self.terms
            .values()
            .flat_map(|c| c.terms().keys())
            .flat_map(|e| e[..self.dim].iter().map(|x| x.abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn is_laurent(&self) -> bool {
        self.terms.values().any(|c| c.is_laurent())
    }

    /// Contracts a bivector with `df ∧ dg`: `{f,g} = Σ_{i<j} π_ij (∂_i f ∂_j g − ∂_j f ∂_i g)`.
    pub fn bracket_functions(&self, f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly, MultivectorError> {
        if self.degree != 2 {
            return Err(MultivectorError::WrongDegree { expected: 2, found: self.degree });
        }
        let mut r = MultiPoly::zero(&self.vars);
        for (t, c) in &self.terms {
            let (i, j) = (t[0], t[1]);
            let a = &f.partial(i) * &g.partial(j);
            let b = &f.partial(j) * &g.partial(i);
            r.add_scaled(&(c * &(&a - &b)), &Scalar::one());
        }
        Ok(r)
    }
}

impl fmt::Display for PolyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(i, c)| {
                let frame: Vec<String> = i.iter().map(|&k| format!("d{}", self.vars.name(k))).collect();
                if frame.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c}) {}", frame.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
