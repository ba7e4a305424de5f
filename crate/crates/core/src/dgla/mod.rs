//! Finite-dimensional differential graded Lie algebras given by structure
//! constants, with exact validation and Hodge theory.
//!
//! Degrees run over `0..dims.len()`. Basis vector `k` of degree `a` is
//! written `(a, k)`. The differential `L_a: g_a → g_{a+1}` is a matrix whose
//! column `j` is `L e_j`; the bracket table stores `[e_i, e_j]` for
//! `e_i ∈ g_a`, `e_j ∈ g_b` as a sparse vector of `g_{a+b}`.

mod hodge;

pub use hodge::{hodge, HodgeData, HodgeDegree};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_algebra::{DenseMatrix, Scalar, SparseVec};

/// A basis element: (degree, index).
pub type BasisRef = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `L_{a+1} L_a e ≠ 0`
    DifferentialSquare { x: BasisRef },
    /// `[x,y] ≠ −(−1)^{ab}[y,x]`
    Antisymmetry { x: BasisRef, y: BasisRef },
    /// `[x,[y,z]] ≠ [[x,y],z] + (−1)^{ab}[y,[x,z]]`
    Jacobi { x: BasisRef, y: BasisRef, z: BasisRef },
    /// `L[x,y] ≠ [Lx,y] + (−1)^a [x,Ly]`
    Leibniz { x: BasisRef, y: BasisRef },
    /// a nonzero bracket into a degree that does not exist
    DegreeRange { x: BasisRef, y: BasisRef },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |r: &BasisRef| format!("e{}_{}", r.0, r.1);
        match self {
            Violation::DifferentialSquare { x } => write!(f, "L∘L ≠ 0 on {}", b(x)),
            Violation::Antisymmetry { x, y } => write!(f, "antisymmetry fails for ({}, {})", b(x), b(y)),
            Violation::Jacobi { x, y, z } => write!(f, "Jacobi fails for ({}, {}, {})", b(x), b(y), b(z)),
            Violation::Leibniz { x, y } => write!(f, "Leibniz fails for ({}, {})", b(x), b(y)),
            Violation::DegreeRange { x, y } => write!(f, "[{}, {}] lands outside the graded range", b(x), b(y)),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DglaError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("{} axiom violation(s), first: {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    Invalid(Vec<Violation>),
}

/// Raw structure constants as read from input.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DglaPresentation {
    pub dims: Vec<usize>,
    /// `(a, i, j, c)`: component i of `L e_j` for `e_j ∈ g_a`
    pub differential: Vec<(usize, usize, usize, Scalar)>,
    /// `(a, i, b, j, k, c)`: component k of `[e^a_i, e^b_j]`
    pub bracket: Vec<(usize, usize, usize, usize, usize, Scalar)>,
}

impl DglaPresentation {
    /// Adds the mirror `[y,x] = −(−1)^{ab}[x,y]` of every bracket entry whose
    /// mirror pair is not given at all.
    pub fn complete_antisymmetry(&mut self) {
        let given: std::collections::BTreeSet<(usize, usize, usize, usize)> =
            self.bracket.iter().map(|&(a, i, b, j, _, _)| (a, i, b, j)).collect();
        let mut extra = Vec::new();
        for (a, i, b, j, k, c) in &self.bracket {
            if !given.contains(&(*b, *j, *a, *i)) {
                let s = if (a * b) % 2 == 0 { -c.clone() } else { c.clone() };
                extra.push((*b, *j, *a, *i, *k, s));
            }
        }
        self.bracket.extend(extra);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FDGLA {
    dims: Vec<usize>,
    diff: Vec<DenseMatrix>,
    table: BTreeMap<(usize, usize), Vec<Vec<SparseVec>>>,
}

fn sign(e: usize) -> Scalar {
    if e % 2 == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

fn axpy(acc: &mut SparseVec, c: &Scalar, v: &SparseVec) {
    for (k, x) in v {
        let e = acc.entry(*k).or_insert_with(Scalar::zero);
        *e += c * x;
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

fn dense_to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

impl FDGLA {
    /// Builds from a presentation and checks every axiom on basis elements.
    pub fn validate(p: &DglaPresentation) -> Result<FDGLA, DglaError> {
        let g = Self::from_presentation(p)?;
        let v = g.violations();
        if v.is_empty() {
            Ok(g)
        } else {
            Err(DglaError::Invalid(v))
        }
    }

    /// Builds without checking the axioms (shapes are still checked).
    pub fn from_presentation(p: &DglaPresentation) -> Result<FDGLA, DglaError> {
        let dims = p.dims.clone();
        let top = dims.len();
        if top == 0 {
            return Err(DglaError::Shape("no degrees".into()));
        }
        let mut diff: Vec<DenseMatrix> =
            (0..top).map(|a| DenseMatrix::zeros(dims.get(a + 1).copied().unwrap_or(0), dims[a])).collect();
        for (a, i, j, c) in &p.differential {
            if *a >= top || *j >= dims[*a] || *i >= diff[*a].rows() {
                return Err(DglaError::Shape(format!("differential entry ({a}, {i}, {j}) out of range")));
            }
            diff[*a].set(*i, *j, c.clone());
        }
        let mut g = FDGLA { dims, diff, table: BTreeMap::new() };
        let mut out_of_range = Vec::new();
        for (a, i, b, j, k, c) in &p.bracket {
            if *a >= top || *b >= top || *i >= g.dims[*a] || *j >= g.dims[*b] {
                return Err(DglaError::Shape(format!("bracket entry ({a}, {i}, {b}, {j}) out of range")));
            }
            if a + b >= top {
                if !c.is_zero() {
                    out_of_range.push(Violation::DegreeRange { x: (*a, *i), y: (*b, *j) });
                }
                continue;
            }
            if *k >= g.dims[a + b] {
                return Err(DglaError::Shape(format!("bracket target index {k} out of range in degree {}", a + b)));
            }
            let t = g.table_mut(*a, *b);
            let e = t[*i][*j].entry(*k).or_insert_with(Scalar::zero);
            *e = c.clone();
            if e.is_zero() {
                t[*i][*j].remove(k);
            }
        }
        if !out_of_range.is_empty() {
            return Err(DglaError::Invalid(out_of_range));
        }
        Ok(g)
    }

    /// Builds from matrices and a full bracket table, unchecked.
    pub fn from_parts(dims: Vec<usize>, diff: Vec<DenseMatrix>, table: BTreeMap<(usize, usize), Vec<Vec<SparseVec>>>) -> FDGLA {
        FDGLA { dims, diff, table }
    }

    fn table_mut(&mut self, a: usize, b: usize) -> &mut Vec<Vec<SparseVec>> {
        let (da, db) = (self.dims[a], self.dims[b]);
        self.table.entry((a, b)).or_insert_with(|| vec![vec![SparseVec::new(); db]; da])
    }

    /// Zero bracket and zero differential.
    pub fn abelian(dims: Vec<usize>) -> FDGLA {
        let p = DglaPresentation { dims, ..Default::default() };
        Self::from_presentation(&p).expect("abelian presentation")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, a: usize) -> usize {
        self.dims.get(a).copied().unwrap_or(0)
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    /// `L_a` as a `dim(a+1) × dim(a)` matrix.
    pub fn differential(&self, a: usize) -> &DenseMatrix {
        &self.diff[a]
    }

    pub fn apply_d(&self, a: usize, x: &[Scalar]) -> Vec<Scalar> {
        self.diff[a].mul_vec(x)
    }

    pub fn bracket_basis(&self, a: usize, i: usize, b: usize, j: usize) -> SparseVec {
        self.table.get(&(a, b)).map(|t| t[i][j].clone()).unwrap_or_default()
    }

    pub fn bracket_sparse(&self, a: usize, x: &SparseVec, b: usize, y: &SparseVec) -> SparseVec {
        let mut r = SparseVec::new();
        let Some(t) = self.table.get(&(a, b)) else { return r };
        for (i, xi) in x {
            for (j, yj) in y {
                let v = &t[*i][*j];
                if !v.is_empty() {
                    axpy(&mut r, &(xi * yj), v);
                }
            }
        }
        r
    }

    /// `[x,y]` for `x ∈ g_a`, `y ∈ g_b`; empty when `a+b` is out of range.
    pub fn bracket(&self, a: usize, x: &[Scalar], b: usize, y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim(a + b);
        if a + b > self.top_degree() {
            return Vec::new();
        }
        let s = self.bracket_sparse(a, &dense_to_sparse(x), b, &dense_to_sparse(y));
        let mut v = vec![Scalar::zero(); n];
        for (k, c) in s {
            v[k] = c;
        }
        v
    }

    fn d_sparse(&self, a: usize, x: &SparseVec) -> SparseVec {
        let m = &self.diff[a];
        let mut r = SparseVec::new();
        for (j, c) in x {
            for i in 0..m.rows() {
                let v = m.get(i, *j);
                if !v.is_zero() {
                    let e = r.entry(i).or_insert_with(Scalar::zero);
                    *e += c * v;
                    if e.is_zero() {
                        r.remove(&i);
                    }
                }
            }
        }
        r
    }

    fn unit(k: usize) -> SparseVec {
        SparseVec::from([(k, Scalar::one())])
    }

    /// Every failing axiom instance on basis elements.
    pub fn violations(&self) -> Vec<Violation> {
        let top = self.top_degree();
        let mut out = Vec::new();
        for a in 0..top.saturating_sub(1) {
            let sq = self.diff[a + 1].mul(&self.diff[a]);
            for j in 0..self.dims[a] {
                if (0..sq.rows()).any(|i| !sq.get(i, j).is_zero()) {
                    out.push(Violation::DifferentialSquare { x: (a, j) });
                }
            }
        }
        let basis: Vec<BasisRef> = (0..=top).flat_map(|a| (0..self.dims[a]).map(move |i| (a, i))).collect();
        for &(a, i) in &basis {
            for &(b, j) in &basis {
                if a + b > top {
                    continue;
                }
                let xy = self.bracket_basis(a, i, b, j);
                let mut yx = self.bracket_basis(b, j, a, i);
                let s = sign(a * b);
                let mut sum = xy.clone();
                for v in yx.values_mut() {
                    *v = &*v * &s;
                }
                axpy(&mut sum, &Scalar::one(), &yx);
                if !sum.is_empty() {
                    out.push(Violation::Antisymmetry { x: (a, i), y: (b, j) });
                }
                // Leibniz
                if a + b < top {
                    let lhs = self.d_sparse(a + b, &xy);
                    let mut rhs = self.bracket_sparse(a + 1, &self.d_sparse(a, &Self::unit(i)), b, &Self::unit(j));
                    if a + 1 > top {
                        rhs.clear();
                    }
                    let t2 = if b < top {
                        self.bracket_sparse(a, &Self::unit(i), b + 1, &self.d_sparse(b, &Self::unit(j)))
                    } else {
                        SparseVec::new()
                    };
                    axpy(&mut rhs, &sign(a), &t2);
                    axpy(&mut rhs, &-Scalar::one(), &lhs);
                    if !rhs.is_empty() {
                        out.push(Violation::Leibniz { x: (a, i), y: (b, j) });
                    }
                }
            }
        }
        for &(a, i) in &basis {
            for &(b, j) in &basis {
                if a + b > top {
                    continue;
                }
                let xy = self.bracket_basis(a, i, b, j);
                for &(c, k) in &basis {
                    if a + b + c > top {
                        continue;
                    }
                    let ek = Self::unit(k);
                    let ei = Self::unit(i);
                    let ej = Self::unit(j);
                    let lhs = self.bracket_sparse(a, &ei, b + c, &self.bracket_sparse(b, &ej, c, &ek));
                    let mut rhs = self.bracket_sparse(a + b, &xy, c, &ek);
                    let t = self.bracket_sparse(b, &ej, a + c, &self.bracket_sparse(a, &ei, c, &ek));
                    axpy(&mut rhs, &sign(a * b), &t);
                    axpy(&mut rhs, &-Scalar::one(), &lhs);
                    if !rhs.is_empty() {
                        out.push(Violation::Jacobi { x: (a, i), y: (b, j), z: (c, k) });
                    }
                }
            }
        }
        out
    }

    /// `dim H^a(g, L) = dim ker L_a − rank L_{a−1}`.
    pub fn cohomology_dim(&self, a: usize) -> usize {
        let k = self.dims[a] - self.diff[a].rank();
        let im = if a == 0 { 0 } else { self.diff[a - 1].rank() };
        k - im
    }

    /// Back to structure constants (canonical order).
    pub fn to_presentation(&self) -> DglaPresentation {
        let mut p = DglaPresentation { dims: self.dims.clone(), ..Default::default() };
        for (a, m) in self.diff.iter().enumerate() {
            for j in 0..m.cols() {
                for i in 0..m.rows() {
                    let v = m.get(i, j);
                    if !v.is_zero() {
                        p.differential.push((a, i, j, v.clone()));
                    }
                }
            }
        }
        for ((a, b), t) in &self.table {
            for (i, row) in t.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    for (k, c) in v {
                        p.bracket.push((*a, i, *b, j, *k, c.clone()));
                    }
                }
            }
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::scalar::int;

    #[test]
    fn abelian_is_valid() {
        let g = FDGLA::abelian(vec![2, 3, 1]);
        assert!(g.violations().is_empty());
        assert_eq!(g.cohomology_dim(1), 3);
    }

    #[test]
    fn mirror_completion() {
        let mut p = DglaPresentation { dims: vec![2], ..Default::default() };
        p.bracket.push((0, 0, 0, 1, 1, int(1)));
        p.complete_antisymmetry();
        assert_eq!(p.bracket.len(), 2);
        assert!(FDGLA::validate(&p).is_ok());
    }

    #[test]
    fn bracket_outside_range_is_reported() {
        let mut p = DglaPresentation { dims: vec![1, 1], ..Default::default() };
        p.bracket.push((1, 0, 1, 0, 0, int(1)));
        assert!(matches!(FDGLA::validate(&p), Err(DglaError::Invalid(_))));
    }

    #[test]
    fn differential_square() {
        let mut p = DglaPresentation { dims: vec![1, 1, 1], ..Default::default() };
        p.differential.push((0, 0, 0, int(1)));
        p.differential.push((1, 0, 0, int(1)));
        let v = FDGLA::validate(&p).unwrap_err();
        assert_eq!(v, DglaError::Invalid(vec![Violation::DifferentialSquare { x: (0, 0) }]));
    }
}
