//! Cohomology of one spot of a (possibly windowed) cochain complex.
//!
//! `C^{i-1} → C^i → C^{i+1}` is given by matrices. For a windowed
//! subcomplex the incoming map may leave the window; its out-of-window rows
//! are passed separately, and only cochains whose image stays inside count
//! (`K = ker(out)`), so `dim B = rank([in; out]) − rank(out)`.

use super::matrix::{to_sparse_vec, Span, SparseMatrix, SparseVec};

#[derive(Clone, Debug, Default)]
pub struct CohomologyPiece {
    pub dim: usize,
    pub cocycle_dim: usize,
    pub boundary_dim: usize,
    /// cocycles not in the span of boundaries (one per class)
    pub representatives: Vec<SparseVec>,
    /// a basis of the boundary space (only when representatives are requested)
    pub boundaries: Vec<SparseVec>,
}

/// Stacks `a` over `b` (same column count).
pub fn stack(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    assert_eq!(a.cols(), b.cols());
    let mut m = SparseMatrix::new(a.rows() + b.rows(), a.cols());
    for (&(i, j), v) in a.entries() {
        m.set(i, j, v.clone());
    }
    for (&(i, j), v) in b.entries() {
        m.set(a.rows() + i, j, v.clone());
    }
    m
}

pub fn cohomology(
    n: usize,
    incoming: Option<(&SparseMatrix, Option<&SparseMatrix>)>,
    outgoing: Option<&SparseMatrix>,
    with_reps: bool,
) -> CohomologyPiece {
    let out_ech = outgoing.map(|m| {
        assert_eq!(m.cols(), n);
        m.echelon()
    });
    let cocycle_dim = n - out_ech.as_ref().map(|e| e.rank()).unwrap_or(0);
    let mut boundary_dim = 0;
    let mut boundaries = Vec::new();
    if let Some((inc, leak)) = incoming {
        assert_eq!(inc.rows(), n);
        match leak {
            Some(l) if l.nnz() > 0 => {
                let full = stack(inc, l);
                boundary_dim = full.rank() - l.rank();
                if with_reps {
                    for k in l.kernel_basis_sparse() {
                        boundaries.push(inc.mul_sparse(&k));
                    }
                }
            }
            _ => {
                boundary_dim = inc.rank();
                if with_reps {
                    let t = inc.transpose();
                    for i in 0..inc.cols() {
                        let col: SparseVec = t
                            .entries()
                            .range((i, 0)..(i + 1, 0))
                            .map(|(&(_, r), v)| (r, v.clone()))
                            .collect();
                        boundaries.push(col);
                    }
                }
            }
        }
    }
    let mut representatives = Vec::new();
    let mut basis = Vec::new();
    if with_reps {
        let mut span = Span::new();
        for b in &boundaries {
            if span.insert(b) {
                basis.push(b.clone());
            }
        }
        let cocycles: Vec<SparseVec> = match &out_ech {
            Some(e) => e.kernel_basis_sparse(),
            None => (0..n).map(|i| to_sparse_vec(&unit(n, i))).collect(),
        };
        for z in cocycles {
            if span.insert(&z) {
                representatives.push(z);
            }
        }
        debug_assert_eq!(basis.len(), boundary_dim);
    }
    CohomologyPiece {
        dim: cocycle_dim - boundary_dim,
        cocycle_dim,
        boundary_dim,
        representatives,
        boundaries: basis,
    }
}

fn unit(n: usize, i: usize) -> Vec<super::Scalar> {
    let mut v = vec![num_traits::Zero::zero(); n];
    v[i] = num_traits::One::one();
    v
}
