//! Exact sparse and dense linear algebra.
//!
//! All rank/kernel/solve computations go through one fraction-free
//! elimination: rows are scaled to primitive integer vectors, the pivot is
//! the smallest-magnitude nonzero entry (ties: lowest row, then lowest
//! column), and rows are kept primitive after every combination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::Scalar;
use super::AlgebraError;

pub type SparseVec = BTreeMap<usize, Scalar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Scalar> {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Scalar) {
        let cur = self.get(r, c);
        self.set(r, c, cur + v);
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut m = SparseMatrix::new(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (&i, v) in col {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut m = SparseMatrix::new(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            d.set(i, j, v.clone());
        }
        d
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect(),
        }
    }

    fn row_lists(&self) -> Vec<Vec<(usize, Scalar)>> {
        let mut rows = vec![Vec::new(); self.rows];
        for (&(i, j), v) in &self.entries {
            rows[i].push((j, v.clone()));
        }
        rows
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![Scalar::zero(); self.rows];
        for (&(i, j), v) in &self.entries {
            if !x[j].is_zero() {
                y[i] += v * &x[j];
            }
        }
        y
    }

    pub fn mul_sparse(&self, x: &SparseVec) -> SparseVec {
        let mut y = SparseVec::new();
        for (&(i, j), v) in &self.entries {
            if let Some(xj) = x.get(&j) {
                *y.entry(i).or_insert_with(Scalar::zero) += v * xj;
            }
        }
        y.retain(|_, v| !v.is_zero());
        y
    }

    /// Rows restricted to the given index set, renumbered in order.
    pub fn select_rows(&self, keep: &[usize]) -> SparseMatrix {
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut m = SparseMatrix::new(keep.len(), self.cols);
        for (&(i, j), v) in &self.entries {
            if let Some(&k) = pos.get(&i) {
                m.set(k, j, v.clone());
            }
        }
        m
    }

    pub fn echelon(&self) -> Echelon {
        Echelon::compute(self.cols, self.row_lists(), self.cols)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of the null space; `rank + basis.len() == cols`.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        self.echelon().kernel_basis()
    }

    /// Kernel basis as sparse vectors.
    pub fn kernel_basis_sparse(&self) -> Vec<SparseVec> {
        self.echelon().kernel_basis_sparse()
    }

    /// Some solution of `M x = b` (free variables set to 0), or `None`.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut rows = self.row_lists();
        for (i, v) in b.iter().enumerate() {
            if !v.is_zero() {
                rows[i].push((self.cols, v.clone()));
            }
        }
        let e = Echelon::compute(self.cols + 1, rows, self.cols);
        e.particular_solution(self.cols)
    }
}

/// Reduced row echelon form over ℤ-primitive rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    /// (pivot column, reduced row); the row vanishes at every other pivot column
    pivots: Vec<(usize, Vec<(usize, BigInt)>)>,
    /// rows left with no entry in an eligible pivot column
    residual: Vec<Vec<(usize, BigInt)>>,
}

fn primitive(row: Vec<(usize, Scalar)>) -> Vec<(usize, BigInt)> {
    let mut row: Vec<(usize, Scalar)> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    row.sort_by_key(|(c, _)| *c);
    // merge duplicates
    let mut merged: Vec<(usize, Scalar)> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match merged.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => merged.push((c, v)),
        }
    }
    merged.retain(|(_, v)| !v.is_zero());
    let mut l = BigInt::one();
    for (_, v) in &merged {
        l = l.lcm(v.denom());
    }
    let ints: Vec<(usize, BigInt)> =
        merged.into_iter().map(|(c, v)| (c, (v * BigRational::from_integer(l.clone())).to_integer())).collect();
    make_primitive(ints)
}

fn make_primitive(mut row: Vec<(usize, BigInt)>) -> Vec<(usize, BigInt)> {
    let mut g = BigInt::zero();
    for (_, v) in &row {
        g = g.gcd(v);
        if g.is_one() {
            return row;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    row
}

fn entry_at(row: &[(usize, BigInt)], c: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&c, |(k, _)| *k).ok().map(|i| &row[i].1)
}

/// `pa·a − pb·b`, made primitive.
fn combine(a: &[(usize, BigInt)], pa: &BigInt, b: &[(usize, BigInt)], pb: &BigInt) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|x| x.0).unwrap_or(usize::MAX);
        let cb = b.get(j).map(|x| x.0).unwrap_or(usize::MAX);
        if ca < cb {
            out.push((ca, pa * &a[i].1));
            i += 1;
        } else if cb < ca {
            out.push((cb, -(pb * &b[j].1)));
            j += 1;
        } else {
            let v = pa * &a[i].1 - pb * &b[j].1;
            if !v.is_zero() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    make_primitive(out)
}

impl Echelon {
    /// Eliminates with pivots restricted to columns `< limit`.
    fn compute(cols: usize, rows: Vec<Vec<(usize, Scalar)>>, limit: usize) -> Echelon {
        let mut active: Vec<Vec<(usize, BigInt)>> =
            rows.into_iter().map(primitive).filter(|r| !r.is_empty()).collect();
        let mut pivots: Vec<(usize, Vec<(usize, BigInt)>)> = Vec::new();
        loop {
            // smallest magnitude, ties by (row, col)
            let mut best: Option<(usize, usize, BigInt)> = None;
            for (ri, row) in active.iter().enumerate() {
                for (c, v) in row {
                    if *c >= limit {
                        break;
                    }
                    let m = v.abs();
                    let better = match &best {
                        None => true,
                        Some((_, _, bm)) => m < *bm,
                    };
                    if better {
                        let one = m.is_one();
                        best = Some((ri, *c, m));
                        if one {
                            break;
                        }
                    }
                }
                if matches!(&best, Some((_, _, m)) if m.is_one()) {
                    break;
                }
            }
            let Some((ri, pc, _)) = best else { break };
            let prow = active.remove(ri);
            let pv = entry_at(&prow, pc).unwrap().clone();
            let mut next = Vec::with_capacity(active.len());
            for row in active.drain(..) {
                match entry_at(&row, pc) {
                    Some(a) => {
                        let a = a.clone();
                        let r = combine(&row, &pv, &prow, &a);
                        if !r.is_empty() {
                            next.push(r);
                        }
                    }
                    None => next.push(row),
                }
            }
            active = next;
            pivots.push((pc, prow));
        }
        // back substitution to reduced form
        for k in (0..pivots.len()).rev() {
            let (pc, prow) = pivots[k].clone();
            let pv = entry_at(&prow, pc).unwrap().clone();
            for j in 0..k {
                if let Some(a) = entry_at(&pivots[j].1, pc) {
                    let a = a.clone();
                    let r = combine(&pivots[j].1, &pv, &prow, &a);
                    pivots[j].1 = r;
                }
            }
        }
        Echelon { cols, pivots, residual: active }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.iter().map(|(c, _)| *c).collect()
    }

    pub fn kernel_basis_sparse(&self) -> Vec<SparseVec> {
        let mut is_pivot = vec![false; self.cols];
        for (c, _) in &self.pivots {
            is_pivot[*c] = true;
        }
        // column -> list of (pivot col, ratio -row[f]/row[pc])
        let mut by_col: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (pc, row) in &self.pivots {
            let pv = entry_at(row, *pc).unwrap();
            for (c, v) in row {
                if *c != *pc {
                    by_col
                        .entry(*c)
                        .or_default()
                        .push((*pc, -BigRational::new(v.clone(), pv.clone())));
                }
            }
        }
        let mut out = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = SparseVec::new();
            v.insert(f, Scalar::one());
            if let Some(list) = by_col.get(&f) {
                for (pc, x) in list {
                    v.insert(*pc, x.clone());
                }
            }
            out.push(v);
        }
        out
    }

    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        self.kernel_basis_sparse()
            .into_iter()
            .map(|s| {
                let mut v = vec![Scalar::zero(); self.cols];
                for (i, x) in s {
                    v[i] = x;
                }
                v
            })
            .collect()
    }

    fn particular_solution(&self, n: usize) -> Option<Vec<Scalar>> {
        if self.residual.iter().any(|r| !r.is_empty()) {
            return None;
        }
        let mut x = vec![Scalar::zero(); n];
        for (pc, row) in &self.pivots {
            if let Some(b) = entry_at(row, n) {
                let pv = entry_at(row, *pc).unwrap();
                x[*pc] = BigRational::new(b.clone(), pv.clone());
            }
        }
        Some(x)
    }
}

/// Incrementally maintained span of sparse vectors (membership and basis
/// extension).
#[derive(Clone, Debug, Default)]
pub struct Span {
    rows: BTreeMap<usize, SparseVec>,
}

impl Span {
    pub fn new() -> Self {
        Span::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        v.retain(|_, x| !x.is_zero());
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).find(|(c, _)| self.rows.contains_key(c)).map(|(c, x)| (*c, x.clone()));
            let Some((c, a)) = next else { break };
            let row = &self.rows[&c];
            for (k, y) in row {
                let e = v.entry(*k).or_insert_with(Scalar::zero);
                *e -= &a * y;
                if e.is_zero() {
                    v.remove(k);
                }
            }
            cursor = c + 1;
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((&c, lead)) = r.iter().next() else { return false };
        let inv = Scalar::one() / lead;
        let r: SparseVec = r.iter().map(|(k, x)| (*k, x * &inv)).collect();
        self.rows.insert(c, r);
        true
    }
}

/// Dense rational matrix (small sizes: FDGLA operators).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Scalar>]) -> Result<Self, AlgebraError> {
        let c = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut m = Self::zeros(rows.len(), c);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != c {
                return Err(AlgebraError::Shape(format!("ragged row {i}")));
            }
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut r = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        r.data[idx] += a * b;
                    }
                }
            }
        }
        r
    }

    pub fn add(&self, o: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> DenseMatrix {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = Scalar::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x[j].is_zero() {
                        s += a * &x[j];
                    }
                }
                s
            })
            .collect()
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let mut m = SparseMatrix::new(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.to_sparse().rank()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        self.to_sparse().kernel_basis()
    }

    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        self.to_sparse().solve(b)
    }

    /// Matrix with the given vectors as columns.
    pub fn from_columns(rows: usize, cols: &[Vec<Scalar>]) -> DenseMatrix {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Inverse of a square nonsingular matrix.
    pub fn inverse(&self) -> Result<DenseMatrix, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::Shape("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let sp = self.to_sparse();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![Scalar::zero(); n];
            e[j] = Scalar::one();
            cols.push(sp.solve(&e).ok_or(AlgebraError::Singular)?);
        }
        Ok(DenseMatrix::from_columns(n, &cols))
    }
}

pub fn to_sparse_vec(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense_vec(v: &SparseVec, n: usize) -> Vec<Scalar> {
    let mut d = vec![Scalar::zero(); n];
    for (&i, x) in v {
        d[i] = x.clone();
    }
    d
}

/// Quotient dimension `dim ker(a) − rank(b)` for composable `a∘b = 0`.
pub fn quotient_dimension(a: &SparseMatrix, b: &SparseMatrix) -> usize {
    let k = a.cols() - a.rank();
    k - b.rank()
}
