//! Finite monomial bases of polyvector spaces, for matrix assembly.

use std::collections::HashMap;

use crate::exact_algebra::{Exponent, MultiPoly, Scalar, SparseVec, Vars};

use super::polyvector::{PolyVector, Tuple};

/// An indexed list of basis fields `z^e ∂_I` of a fixed multivector degree.
#[derive(Clone, Debug)]
pub struct PolyBasis {
    vars: Vars,
    dim: usize,
    degree: usize,
    elems: Vec<(Tuple, Exponent)>,
    index: HashMap<(Tuple, Exponent), usize>,
}

impl PolyBasis {
    pub fn new(vars: &Vars, dim: usize, degree: usize, elems: Vec<(Tuple, Exponent)>) -> Self {
        let index = elems.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        PolyBasis { vars: vars.clone(), dim, degree, elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn elems(&self) -> &[(Tuple, Exponent)] {
        &self.elems
    }

    pub fn index_of(&self, t: &Tuple, e: &Exponent) -> Option<usize> {
        self.index.get(&(t.clone(), e.clone())).copied()
    }

    /// The basis field with index `k`.
    pub fn element(&self, k: usize) -> PolyVector {
        let (t, e) = &self.elems[k];
        let mut p = PolyVector::zero(&self.vars, self.dim, self.degree);
        p.add_term(t.clone(), MultiPoly::monomial(&self.vars, e.clone(), Scalar::from_integer(1.into())));
        p
    }

    /// Coordinates of `p`; `Err` lists a term outside the basis.
    pub fn coords(&self, p: &PolyVector) -> Result<SparseVec, (Tuple, Exponent)> {
        let mut v = SparseVec::new();
        if p.is_zero() {
            return Ok(v);
        }
        for (t, c) in p.terms() {
            for (e, x) in c.terms() {
                match self.index_of(t, e) {
                    Some(k) => {
                        v.insert(k, x.clone());
                    }
                    None => return Err((t.clone(), e.clone())),
                }
            }
        }
        Ok(v)
    }

    /// Coordinates split into in-basis part and the out-of-basis remainder.
    pub fn coords_split(&self, p: &PolyVector) -> (SparseVec, PolyVector) {
        let mut v = SparseVec::new();
        let mut rest = PolyVector::zero(&self.vars, self.dim, p.degree());
        for (t, c) in p.terms() {
            for (e, x) in c.terms() {
                match self.index_of(t, e) {
                    Some(k) => {
                        v.insert(k, x.clone());
                    }
                    None => rest.add_term(t.clone(), MultiPoly::monomial(&self.vars, e.clone(), x.clone())),
                }
            }
        }
        (v, rest)
    }

    pub fn field(&self, v: &SparseVec) -> PolyVector {
        let mut p = PolyVector::zero(&self.vars, self.dim, self.degree);
        for (&k, x) in v {
            let (t, e) = &self.elems[k];
            p.add_term(t.clone(), MultiPoly::monomial(&self.vars, e.clone(), x.clone()));
        }
        p
    }
}
