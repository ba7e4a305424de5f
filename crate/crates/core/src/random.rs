//! Seeded random generators for property checks (tests and the CLI's
//! randomized commands). All generators are deterministic given the RNG.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::dgla::FDGLA;
use crate::exact_algebra::scalar::frac;
use crate::exact_algebra::{DenseMatrix, MultiPoly, Scalar, SparseVec, Vars};
use crate::multivector::{tuples, PolyVector};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small nonzero-ish rational with numerator in [-4, 4], denominator in [1, 3].
pub fn small_scalar(r: &mut TestRng) -> Scalar {
    frac(r.gen_range(-4..=4), r.gen_range(1..=3))
}

pub fn small_int(r: &mut TestRng, lo: i64, hi: i64) -> Scalar {
    frac(r.gen_range(lo..=hi), 1)
}

/// Random polynomial with at most `terms` terms of total degree ≤ `deg`
/// in the first `nvars` variables of `vars`.
pub fn poly(r: &mut TestRng, vars: &Vars, nvars: usize, deg: i32, terms: usize) -> MultiPoly {
    let mut p = MultiPoly::zero(vars);
    let k = r.gen_range(0..=terms);
    for _ in 0..k {
        let mut e = vec![0i32; vars.len()];
        let d = r.gen_range(0..=deg);
        for _ in 0..d {
            e[r.gen_range(0..nvars)] += 1;
        }
        p.add_term(e, small_scalar(r));
    }
    p
}

/// Random q-vector on `vars` (all variables are chart coordinates).
pub fn polyvector(r: &mut TestRng, vars: &Vars, q: usize, coeff_deg: i32) -> PolyVector {
    let n = vars.len();
    let mut p = PolyVector::zero(vars, n, q);
    for t in tuples(n, q) {
        if r.gen_bool(0.7) {
            p.add_term(t, poly(r, vars, n, coeff_deg, 3));
        }
    }
    p
}

pub fn coordinate_vars(n: usize) -> Vars {
    let names = ["x", "y", "z", "w", "u", "v"];
    if n <= names.len() {
        Vars::new(names[..n].iter().copied())
    } else {
        Vars::new((1..=n).map(|i| format!("x{i}")))
    }
}

fn random_left_annihilator(r: &mut TestRng, prev: &DenseMatrix, rows: usize) -> DenseMatrix {
    // rows drawn from the left kernel of `prev`, so that result·prev = 0
    let left = prev.transpose().kernel_basis();
    let n = prev.rows();
    let mut m = DenseMatrix::zeros(rows, n);
    for i in 0..rows {
        for v in &left {
            let c = small_int(r, -2, 2);
            if c.is_zero() {
                continue;
            }
            for (j, x) in v.iter().enumerate() {
                let cur = m.get(i, j).clone();
                m.set(i, j, cur + &c * x);
            }
        }
    }
    m
}

/// Random cochain complex `g_0 → g_1 → …` (zero bracket) with `L² = 0`.
pub fn random_complex(r: &mut TestRng, dims: &[usize]) -> FDGLA {
    let mut diff: Vec<DenseMatrix> = Vec::new();
    for a in 0..dims.len() {
        let rows = dims.get(a + 1).copied().unwrap_or(0);
        let m = if a == 0 {
            let mut m = DenseMatrix::zeros(rows, dims[0]);
            for i in 0..rows {
                for j in 0..dims[0] {
                    if r.gen_bool(0.6) {
                        m.set(i, j, small_int(r, -2, 2));
                    }
                }
            }
            m
        } else {
            random_left_annihilator(r, &diff[a - 1], rows)
        };
        diff.push(m);
    }
    FDGLA::from_parts(dims.to_vec(), diff, BTreeMap::new())
}

/// `End^{≥0}(V)` for a graded space `V = V_0 ⊕ V_1 ⊕ V_2` with a random
/// differential `d` (`d² = 0`): bracket the graded commutator, `L = [d,−]`.
/// Degree k has basis the elementary maps `E_pq` raising degree by k.
pub fn random_end_dgla(r: &mut TestRng, vdims: [usize; 3]) -> FDGLA {
    let deg: Vec<usize> = (0..3).flat_map(|k| std::iter::repeat(k).take(vdims[k])).collect();
    let nv = deg.len();
    let mut basis: Vec<Vec<(usize, usize)>> = vec![Vec::new(); 3];
    for p in 0..nv {
        for q in 0..nv {
            if deg[p] >= deg[q] {
                basis[deg[p] - deg[q]].push((p, q));
            }
        }
    }
    let index = |k: usize, p: usize, q: usize| basis[k].iter().position(|&e| e == (p, q));
    // d = d0 + d1 with d1 d0 = 0
    let off = |k: usize| vdims[..k].iter().sum::<usize>();
    let mut d0 = DenseMatrix::zeros(vdims[1], vdims[0]);
    for i in 0..vdims[1] {
        for j in 0..vdims[0] {
            if r.gen_bool(0.6) {
                d0.set(i, j, small_int(r, -2, 2));
            }
        }
    }
    let d1 = random_left_annihilator(r, &d0, vdims[2]);
    let mut dmat: Vec<(usize, usize, Scalar)> = Vec::new();
    for i in 0..vdims[1] {
        for j in 0..vdims[0] {
            if !d0.get(i, j).is_zero() {
                dmat.push((off(1) + i, off(0) + j, d0.get(i, j).clone()));
            }
        }
    }
    for i in 0..vdims[2] {
        for j in 0..vdims[1] {
            if !d1.get(i, j).is_zero() {
                dmat.push((off(2) + i, off(1) + j, d1.get(i, j).clone()));
            }
        }
    }
    let dims: Vec<usize> = basis.iter().map(|b| b.len()).collect();
    let mut table: BTreeMap<(usize, usize), Vec<Vec<SparseVec>>> = BTreeMap::new();
    for a in 0..3 {
        for b in 0..3 - a {
            let mut t = vec![vec![SparseVec::new(); dims[b]]; dims[a]];
            for (i, &(p, q)) in basis[a].iter().enumerate() {
                for (j, &(u, v)) in basis[b].iter().enumerate() {
                    let s = if (a * b) % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                    let entry = &mut t[i][j];
                    if q == u {
                        let k = index(a + b, p, v).expect("composite degree");
                        *entry.entry(k).or_insert_with(Scalar::zero) += Scalar::one();
                    }
                    if v == p {
                        let k = index(a + b, u, q).expect("composite degree");
                        *entry.entry(k).or_insert_with(Scalar::zero) -= s;
                    }
                    entry.retain(|_, x| !x.is_zero());
                }
            }
            table.insert((a, b), t);
        }
    }
    // L A = d A − (−1)^{|A|} A d
    let mut diff = Vec::new();
    for a in 0..3 {
        let rows = dims.get(a + 1).copied().unwrap_or(0);
        let mut m = DenseMatrix::zeros(rows, dims[a]);
        if a < 2 {
            let s = if a % 2 == 0 { Scalar::one() } else { -Scalar::one() };
            for (j, &(p, q)) in basis[a].iter().enumerate() {
                for (x, y, c) in &dmat {
                    // d E_pq: (x,y)(p,q) with y == p gives E_xq
                    if *y == p {
                        let i = index(a + 1, *x, q).unwrap();
                        let cur = m.get(i, j).clone();
                        m.set(i, j, cur + c);
                    }
                    // E_pq d: (p,q)(x,y) with q == x gives E_py
                    if q == *x {
                        let i = index(a + 1, p, *y).unwrap();
                        let cur = m.get(i, j).clone();
                        m.set(i, j, cur - &s * c);
                    }
                }
            }
        }
        diff.push(m);
    }
    FDGLA::from_parts(dims, diff, table)
}
