//! Brute-force reference computations. Nothing here calls the library's
//! higher-level algorithms; only basic polynomial and matrix arithmetic.

use num_traits::Zero;
use poisson_core::exact_algebra::{MultiPoly, Scalar, SparseMatrix};
use poisson_core::multivector::PolyVector;

/// π as a full antisymmetric matrix of coefficients.
pub fn pi_matrix(l: &PolyVector) -> Vec<Vec<MultiPoly>> {
    let n = l.dim();
    let v = l.vars();
    let mut m = vec![vec![MultiPoly::zero(v); n]; n];
    for (t, c) in l.terms() {
        m[t[0]][t[1]] = c.clone();
        m[t[1]][t[0]] = -c;
    }
    m
}

/// Σ_l π_lk ∂_l π_ij + π_li ∂_l π_jk + π_lj ∂_l π_ki.
pub fn pi_cyclic_sum(l: &PolyVector, i: usize, j: usize, k: usize) -> MultiPoly {
    let p = pi_matrix(l);
    let n = l.dim();
    let mut s = MultiPoly::zero(l.vars());
    for a in 0..n {
        s = &s + &(&p[a][k] * &p[i][j].partial(a));
        s = &s + &(&p[a][i] * &p[j][k].partial(a));
        s = &s + &(&p[a][j] * &p[k][i].partial(a));
    }
    s
}

/// {f,g} from π directly: Σ_{a,b} π_ab ∂_a f ∂_b g (π antisymmetric, ordered storage).
pub fn bracket(l: &PolyVector, f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let p = pi_matrix(l);
    let n = l.dim();
    let mut s = MultiPoly::zero(l.vars());
    for a in 0..n {
        for b in 0..n {
            if a < b {
                s = &s + &(&p[a][b] * &(&f.partial(a) * &g.partial(b)));
                s = &s - &(&p[a][b] * &(&f.partial(b) * &g.partial(a)));
            }
        }
    }
    s
}

/// Whether the Jacobi identity holds on all coordinate triples.
pub fn jacobi_on_coordinates(l: &PolyVector) -> bool {
    let n = l.dim();
    let x: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(l.vars(), i)).collect();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = bracket(l, &x[i], &bracket(l, &x[j], &x[k]));
                let b = bracket(l, &x[j], &bracket(l, &x[k], &x[i]));
                let c = bracket(l, &x[k], &bracket(l, &x[i], &x[j]));
                if !(&(&a + &b) + &c).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// Rank of a dense matrix of rationals by plain Gauss–Jordan (no pivot rule).
pub fn dense_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pv = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pv;
                for k in 0..ncols {
                    let d = &f * &m[rank][k];
                    m[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn sparse_to_rows(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    let mut rows = vec![vec![Scalar::zero(); m.cols()]; m.rows()];
    for (&(i, j), v) in m.entries() {
        rows[i][j] = v.clone();
    }
    rows
}

/// Some solution of `Σ x_k cols[k] = target` by Gauss–Jordan on the
/// augmented matrix, or `None` when inconsistent.
pub fn dense_solve(cols: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<Scalar>> {
    let nr = target.len();
    let nc = cols.len();
    let mut m: Vec<Vec<Scalar>> = (0..nr)
        .map(|r| {
            let mut row: Vec<Scalar> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..nc {
        let Some(p) = (rank..nr).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pv = m[rank][c].clone();
        for k in 0..=nc {
            m[rank][k] = &m[rank][k] / &pv;
        }
        for r in 0..nr {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..=nc {
                    let d = &f * &m[rank][k];
                    m[r][k] -= d;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    if (rank..nr).any(|r| !m[r][nc].is_zero()) {
        return None;
    }
    let mut x = vec![Scalar::zero(); nc];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][nc].clone();
    }
    Some(x)
}

/// Kernel basis of a dense matrix given by rows, by reduced row echelon form.
pub fn dense_kernel(rows: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pv = m[rank][c].clone();
        for k in 0..ncols {
            m[rank][k] = &m[rank][k] / &pv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..ncols {
                    let d = &f * &m[rank][k];
                    m[r][k] -= d;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Scalar::zero(); ncols];
        v[free] = Scalar::from_integer(1.into());
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m[r][free].clone();
        }
        out.push(v);
    }
    out
}
