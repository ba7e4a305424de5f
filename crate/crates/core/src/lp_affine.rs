//! The truncated Lichnerowicz–Poisson complex `Θ → ∧²Θ → …` of an affine
//! Poisson space, graded by coefficient degree.
//!
//! Index convention: `HP^i` is the cohomology at `∧^i T` (so bivector classes
//! live in `HP²`); the complex starts at vector fields, `HP¹ = ker [Λ,−]` on
//! vector fields.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::exact_algebra::complex::{cohomology, CohomologyPiece};
use crate::dgla::FDGLA;
use crate::exact_algebra::{monomials, DenseMatrix, Exponent, SparseMatrix, SparseVec, Vars};
use crate::multivector::{jacobi_defect, tuples, MultivectorError, PolyBasis, PolyVector, Tuple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("bivector is not Poisson: [Λ,Λ] = {0}")]
    NotPoisson(String),
    #[error("cohomology index must be ≥ 1")]
    BadIndex,
    #[error("Λ must have polynomial coefficients")]
    Laurent,
    #[error("polyvector DGLA needs 1 <= lo <= hi and Λ without constant terms (got lo={0}, hi={1})")]
    Truncation(i32, i32),
    #[error(transparent)]
    Multivector(#[from] MultivectorError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpEntry {
    /// coefficient degree (graded) or cumulative degree bound (filtered)
    pub degree: i32,
    pub dim: usize,
    pub representatives: Vec<PolyVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpTable {
    pub index: usize,
    pub bound: i32,
    /// true when Λ is homogeneous and entries are graded pieces; false when
    /// entry `d` is the cohomology of the whole complex truncated at degree ≤ d
    pub graded: bool,
    pub entries: Vec<HpEntry>,
}

impl HpTable {
    pub fn total(&self) -> usize {
        if self.graded {
            self.entries.iter().map(|e| e.dim).sum()
        } else {
            self.entries.last().map(|e| e.dim).unwrap_or(0)
        }
    }
}

/// `[Λ,−]` on polynomial polyvectors of ℚ^n.
#[derive(Clone, Debug)]
pub struct LpComplex {
    lambda: PolyVector,
    /// coefficient degree when Λ is homogeneous (Λ = 0 counts as degree 1)
    homogeneous: Option<i32>,
}

impl LpComplex {
    pub fn new(lambda: &PolyVector) -> Result<Self, LpError> {
        if lambda.degree() != 2 {
            return Err(MultivectorError::WrongDegree { expected: 2, found: lambda.degree() }.into());
        }
        if lambda.is_laurent() {
            return Err(LpError::Laurent);
        }
        let defect = jacobi_defect(lambda)?;
        if !defect.is_zero() {
            return Err(LpError::NotPoisson(defect.to_string()));
        }
        let mut degs = lambda.terms().values().flat_map(|c| c.terms().keys().map(|e| e.iter().sum::<i32>()));
        let homogeneous = match degs.next() {
            None => Some(1),
            Some(d) => {
                if degs.all(|x| x == d) {
                    Some(d)
                } else {
                    None
                }
            }
        };
        Ok(LpComplex { lambda: lambda.clone(), homogeneous })
    }

    pub fn lambda(&self) -> &PolyVector {
        &self.lambda
    }

    pub fn vars(&self) -> &Vars {
        self.lambda.vars()
    }

    pub fn dim(&self) -> usize {
        self.lambda.dim()
    }

    pub fn homogeneous_degree(&self) -> Option<i32> {
        self.homogeneous
    }

    /// q-vectors with coefficients of degree exactly `d`.
    pub fn graded_basis(&self, q: usize, d: i32) -> PolyBasis {
        self.basis(q, d..=d)
    }

    /// q-vectors with coefficients of degree ≤ `d`.
    pub fn truncated_basis(&self, q: usize, d: i32) -> PolyBasis {
        self.basis(q, 0..=d)
    }

    fn basis(&self, q: usize, degs: std::ops::RangeInclusive<i32>) -> PolyBasis {
        let n = self.dim();
        let mut elems: Vec<(Tuple, Exponent)> = Vec::new();
        if q <= n && *degs.end() >= 0 {
            for d in degs.filter(|d| *d >= 0) {
                for e in monomials(n, d) {
                    for t in tuples(n, q) {
                        elems.push((t, e.clone()));
                    }
                }
            }
        }
        PolyBasis::new(self.vars(), n, q, elems)
    }

    /// The polyvector DGLA: degree `i` holds `(i+1)`-vectors with coefficient
    /// degree in `[lo, hi]`, bracket the Schouten bracket and `L = [Λ,−]`,
    /// everything taken modulo coefficient degree > `hi`. Since degree − 1 is
    /// additive under the bracket, `lo ≥ 1` makes this a quotient of a
    /// sub-DGLA by an ideal. Returns the DGLA and the basis of each degree.
    pub fn polyvector_dgla(&self, lo: i32, hi: i32) -> Result<(FDGLA, Vec<PolyBasis>), LpError> {
        if lo < 1 || hi < lo {
            return Err(LpError::Truncation(lo, hi));
        }
        let low_term = self.lambda.terms().values().flat_map(|c| c.terms().keys()).any(|e| e.iter().sum::<i32>() < 1);
        if low_term {
            return Err(LpError::Truncation(lo, hi));
        }
        let n = self.dim();
        let bases: Vec<PolyBasis> = (0..n).map(|i| self.basis(i + 1, lo..=hi)).collect();
        let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
        let coords = |b: &PolyBasis, p: &PolyVector| -> SparseVec {
            let (v, rest) = b.coords_split(p);
            debug_assert!(rest.terms().values().flat_map(|c| c.terms().keys()).all(|e| e.iter().sum::<i32>() > hi));
            v
        };
        let mut diff = Vec::new();
        for a in 0..n {
            let rows = dims.get(a + 1).copied().unwrap_or(0);
            let mut m = DenseMatrix::zeros(rows, dims[a]);
            if a + 1 < n {
                for j in 0..dims[a] {
                    let img = self.lambda.schouten(&bases[a].element(j))?;
                    for (i, x) in coords(&bases[a + 1], &img) {
                        m.set(i, j, x);
                    }
                }
            }
            diff.push(m);
        }
        let mut table = BTreeMap::new();
        for a in 0..n {
            for b in 0..n - a {
                let mut t = vec![vec![SparseVec::new(); dims[b]]; dims[a]];
                for (i, row) in t.iter_mut().enumerate() {
                    let x = bases[a].element(i);
                    for (j, slot) in row.iter_mut().enumerate() {
                        let br = x.schouten(&bases[b].element(j))?;
                        *slot = coords(&bases[a + b], &br);
                    }
                }
                table.insert((a, b), t);
            }
        }
        Ok((FDGLA::from_parts(dims, diff, table), bases))
    }

    /// Matrix of `[Λ,−]` from `src` into `tgt`, plus the rows of image terms
    /// falling outside `tgt` (indexed in first-seen order).
    pub fn differential(&self, src: &PolyBasis, tgt: &PolyBasis) -> (SparseMatrix, SparseMatrix) {
        let mut m = SparseMatrix::new(tgt.len(), src.len());
        let mut out_index: HashMap<(Tuple, Exponent), usize> = HashMap::new();
        let mut out_entries = Vec::new();
        for k in 0..src.len() {
            let img = self.lambda.schouten(&src.element(k)).expect("same chart");
            for (t, c) in img.terms() {
                for (e, x) in c.terms() {
                    match tgt.index_of(t, e) {
                        Some(r) => m.set(r, k, x.clone()),
                        None => {
                            let n = out_index.len();
                            let r = *out_index.entry((t.clone(), e.clone())).or_insert(n);
                            out_entries.push((r, k, x.clone()));
                        }
                    }
                }
            }
        }
        let mut out = SparseMatrix::new(out_index.len(), src.len());
        for (r, k, x) in out_entries {
            out.set(r, k, x);
        }
        (m, out)
    }

    /// Graded piece `(ker on (i,d)) / (image from (i−1, d−e+1))` for
    /// homogeneous Λ of coefficient degree e.
    fn graded_piece(&self, i: usize, d: i32, with_reps: bool) -> (CohomologyPiece, PolyBasis) {
        let e = self.homogeneous.expect("homogeneous");
        let cur = self.graded_basis(i, d);
        let next = self.graded_basis(i + 1, d + e - 1);
        let (dout, leak_out) = self.differential(&cur, &next);
        debug_assert_eq!(leak_out.nnz(), 0);
        let incoming = if i >= 2 {
            let prev = self.graded_basis(i - 1, d - e + 1);
            let (din, leak) = self.differential(&prev, &cur);
            debug_assert_eq!(leak.nnz(), 0);
            Some(din)
        } else {
            None
        };
        let piece = cohomology(cur.len(), incoming.as_ref().map(|m| (m, None)), Some(&dout), with_reps);
        (piece, cur)
    }

    /// Cohomology of the complex truncated at coefficient degree ≤ d (the
    /// windowed subcomplex of cochains whose image stays in the truncation).
    fn filtered_piece(&self, i: usize, d: i32, with_reps: bool) -> (CohomologyPiece, PolyBasis) {
        let cur = self.truncated_basis(i, d);
        let next = self.truncated_basis(i + 1, d);
        let (dout, leak_out) = self.differential(&cur, &next);
        let full_out = crate::exact_algebra::complex::stack(&dout, &leak_out);
        let incoming = if i >= 2 {
            let prev = self.truncated_basis(i - 1, d);
            Some(self.differential(&prev, &cur))
        } else {
            None
        };
        let piece = cohomology(
            cur.len(),
            incoming.as_ref().map(|(m, l)| (m, Some(l))),
            Some(&full_out),
            with_reps,
        );
        (piece, cur)
    }

    pub fn hp(&self, i: usize, bound: i32, with_reps: bool) -> Result<HpTable, LpError> {
        if i == 0 {
            return Err(LpError::BadIndex);
        }
        let mut entries = Vec::new();
        for d in 0..=bound {
            let (piece, basis) = if self.homogeneous.is_some() {
                self.graded_piece(i, d, with_reps)
            } else {
                self.filtered_piece(i, d, with_reps)
            };
            entries.push(HpEntry {
                degree: d,
                dim: piece.dim,
                representatives: piece.representatives.iter().map(|v| basis.field(v)).collect(),
            });
        }
        Ok(HpTable { index: i, bound, graded: self.homogeneous.is_some(), entries })
    }
}

/// Per-degree `HP^i` of the affine Poisson space `(ℚ^n, Λ)` up to degree `bound`.
pub fn hp_affine(lambda: &PolyVector, i: usize, bound: i32) -> Result<HpTable, LpError> {
    LpComplex::new(lambda)?.hp(i, bound, true)
}
