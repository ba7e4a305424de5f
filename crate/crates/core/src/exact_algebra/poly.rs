//! Sparse multivariate (Laurent) polynomials over ℚ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::scalar::{fmt_scalar, Scalar};
use super::series::Truncation;
use super::AlgebraError;

/// An ordered list of variable names, shared cheaply between polynomials.
#[derive(Clone, Debug, Eq)]
pub struct Vars(Arc<Vec<String>>);

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Vars {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Vars(Arc::new(names.into_iter().map(Into::into).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Vars) -> Vars {
        Vars::new(self.0.iter().chain(other.0.iter()).cloned())
    }
}

pub type Exponent = Vec<i32>;

/// A finite sum of (Laurent) monomials with rational coefficients. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Exponent, Scalar>,
}

fn mismatch(a: &Vars, b: &Vars) -> AlgebraError {
    AlgebraError::VariableMismatch(a.names().join(","), b.names().join(","))
}

impl MultiPoly {
    pub fn zero(vars: &Vars) -> Self {
        MultiPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: Scalar) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Scalar::one())
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, Scalar::one())
    }

    pub fn monomial(vars: &Vars, exp: Exponent, c: Scalar) -> Self {
        assert_eq!(exp.len(), vars.len(), "exponent length");
        let mut p = Self::zero(vars);
        p.add_term(exp, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Scalar)>>(vars: &Vars, it: I) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in it {
            assert_eq!(e.len(), vars.len(), "exponent length");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Exponent, Scalar> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[i32]) -> Scalar {
        self.terms.get(exp).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&vec![0; self.nvars()])
    }

    /// Adds `c·z^exp` in place, pruning a cancelled term.
    pub fn add_term(&mut self, exp: Exponent, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &MultiPoly) -> Result<(), AlgebraError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(mismatch(&self.vars, &other.vars))
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), -c.clone());
        }
        Ok(r)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check(other)?;
        let mut r = MultiPoly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                r.add_term(e, ca * cb);
            }
        }
        Ok(r)
    }

    /// In-place `self += c · other`.
    pub fn add_scaled(&mut self, other: &MultiPoly, c: &Scalar) {
        assert!(self.vars == other.vars, "{}", mismatch(&self.vars, &other.vars));
        if c.is_zero() {
            return;
        }
        for (e, x) in &other.terms {
            self.add_term(e.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by the monomial `c·z^exp`.
    pub fn mul_monomial(&self, exp: &[i32], c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.iter().zip(exp).map(|(a, b)| a + b).collect(), x * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> MultiPoly {
        let mut r = MultiPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] != 0 {
                let mut f = e.clone();
                f[i] -= 1;
                r.add_term(f, c * Scalar::from_integer(e[i].into()));
            }
        }
        r
    }

    pub fn partial_var(&self, name: &str) -> Result<MultiPoly, AlgebraError> {
        let i = self
            .vars
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        Ok(self.partial(i))
    }

    pub fn is_laurent(&self) -> bool {
        self.terms.keys().any(|e| e.iter().any(|&x| x < 0))
    }

    /// Largest total degree of a term (`None` for the zero polynomial).
    pub fn total_degree(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Largest total degree counting only the listed variables.
    pub fn degree_in(&self, idx: &[usize]) -> Option<i32> {
        self.terms.keys().map(|e| idx.iter().map(|&i| e[i]).sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<i32>());
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }

    /// Keeps only terms satisfying `keep`.
    pub fn filter<F: Fn(&[i32]) -> bool>(&self, keep: F) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    pub fn truncate(&self, tr: &Truncation) -> MultiPoly {
        self.filter(|e| tr.param_degree(e) <= tr.order as i64)
    }

    /// Reinterprets the exponent vectors in a variable list of equal length.
    pub fn with_vars(&self, vars: &Vars) -> MultiPoly {
        assert_eq!(vars.len(), self.vars.len());
        MultiPoly { vars: vars.clone(), terms: self.terms.clone() }
    }

    /// Moves into `vars`, sending variable `i` to `map[i]`.
    pub fn embed(&self, vars: &Vars, map: &[usize]) -> MultiPoly {
        assert_eq!(map.len(), self.nvars());
        let mut r = MultiPoly::zero(vars);
        for (e, c) in &self.terms {
            let mut f = vec![0; vars.len()];
            for (i, &x) in e.iter().enumerate() {
                f[map[i]] += x;
            }
            r.add_term(f, c.clone());
        }
        r
    }

    /// Substitutes `images[i]` for variable `i`. A negative power of variable
    /// `i` requires `inverses[i]`. With a truncation every intermediate product
    /// is reduced modulo the parameter ideal.
    pub fn substitute(
        &self,
        images: &[MultiPoly],
        inverses: &[Option<MultiPoly>],
        tr: Option<&Truncation>,
    ) -> Result<MultiPoly, AlgebraError> {
        assert_eq!(images.len(), self.nvars());
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(self.clone()),
        };
        for p in images.iter().chain(inverses.iter().flatten()) {
            if p.vars != target {
                return Err(mismatch(&p.vars, &target));
            }
        }
        let mulr = |a: &MultiPoly, b: &MultiPoly| -> MultiPoly {
            let m = a * b;
            match tr {
                Some(t) => m.truncate(t),
                None => m,
            }
        };
        // cache of powers per variable, positive and negative
        let mut pos: Vec<Vec<MultiPoly>> = vec![vec![MultiPoly::one(&target)]; self.nvars()];
        let mut neg: Vec<Vec<MultiPoly>> = vec![vec![MultiPoly::one(&target)]; self.nvars()];
        let mut out = MultiPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut acc = MultiPoly::constant(&target, c.clone());
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let k = x.unsigned_abs() as usize;
                let (cache, base) = if x > 0 {
                    (&mut pos[i], images[i].clone())
                } else {
                    let inv = inverses
                        .get(i)
                        .and_then(|o| o.clone())
                        .ok_or_else(|| AlgebraError::NotInvertible(self.vars.name(i).to_string()))?;
                    (&mut neg[i], inv)
                };
                while cache.len() <= k {
                    let next = mulr(cache.last().unwrap(), &base);
                    cache.push(next);
                }
                acc = mulr(&acc, &cache[k]);
            }
            out.add_scaled(&acc, &Scalar::one());
        }
        Ok(out)
    }

    /// Evaluates at a rational point (Laurent terms need nonzero coordinates).
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut s = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k >= 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                } else {
                    t /= num_traits::pow(x.clone(), (-k) as usize);
                }
            }
            s += t;
        }
        s
    }

    /// The leading coefficient's sign helps canonical display only.
    pub fn leading_is_negative(&self) -> bool {
        self.terms.values().next_back().map(|c| c.is_negative()).unwrap_or(false)
    }
}

impl<'a> Add for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        self.try_add(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Sub for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self.try_sub(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Mul for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.try_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Neg for &'a MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.vars.name(i).to_string()
                    } else {
                        format!("{}^{}", self.vars.name(i), k)
                    }
                })
                .collect();
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{}", fmt_scalar(&a))?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_scalar(&a), mono.join("*"))?;
            }
        }
        Ok(())
    }
}


/// All exponent vectors of `n` variables with total degree exactly `d`,
/// in lexicographically decreasing order.
pub fn monomials(n: usize, d: i32) -> Vec<Exponent> {
    fn rec(n: usize, d: i32, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if cur.len() + 1 == n {
            cur.push(d);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=d).rev() {
            cur.push(k);
            rec(n, d - k, cur, out);
            cur.pop();
        }
    }
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}
