//! The n-th Jacobi (Quillen standard) complex of a finite-dimensional DGLA,
//! the artinian ring `ℚ ⊕ ℍ⁰(J_n)*` and morphic elements.
//!
//! A basis monomial is a sorted word of DGLA basis elements `(degree, index)`;
//! letters of odd degree may repeat, letters of even degree may not. The same
//! words index both `∧𝔤` and `S(𝔤[1])`; the décalage sign relates them.
//! Differentials are computed on the `∧𝔤` side and transported; the
//! coderivation formulas on the symmetric side are kept as an independent
//! cross-check.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::dgla::{BasisRef, FDGLA};
use crate::exact_algebra::complex::cohomology;
use crate::exact_algebra::{DenseMatrix, MultiPoly, Scalar, SparseMatrix, Truncation, Vars};
use crate::mc_solver::GSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JacobiError {
    #[error("Jacobi order must be at least 1")]
    Order,
    #[error("parameter ideal is not nilpotent of exponent {0}: {1}")]
    NotNilpotent(usize, String),
    #[error("the assembled element is not closed under the total differential")]
    NotClosed,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Monomial = Vec<BasisRef>;
/// Finite linear combination of basis monomials.
pub type Chain = BTreeMap<Monomial, Scalar>;

fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    /// graded exterior: `x∧y = −(−1)^{pq} y∧x`
    Wedge,
    /// graded symmetric on shifted degrees: `x̄⊙ȳ = (−1)^{(p−1)(q−1)} ȳ⊙x̄`
    Sym,
}

impl Side {
    fn swap_odd(self, p: usize, q: usize) -> bool {
        match self {
            Side::Wedge => (p * q) % 2 == 0,
            Side::Sym => ((p + 1) * (q + 1)) % 2 == 1,
        }
    }
}

/// Sort a word into a basis monomial; `None` when it vanishes.
fn normalize(side: Side, mut w: Vec<BasisRef>) -> Option<(bool, Monomial)> {
    let mut odd = false;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            odd ^= side.swap_odd(w[j - 1].0, w[j].0);
            w.swap(j - 1, j);
            j -= 1;
        }
    }
    if w.windows(2).any(|p| p[0] == p[1] && side.swap_odd(p[0].0, p[0].0)) {
        return None;
    }
    Some((odd, w))
}

fn add_to(c: &mut Chain, m: Monomial, v: Scalar) {
    if v.is_zero() {
        return;
    }
    let e = c.entry(m.clone()).or_insert_with(Scalar::zero);
    *e += v;
    if e.is_zero() {
        c.remove(&m);
    }
}

fn push_word(c: &mut Chain, side: Side, w: Vec<BasisRef>, v: Scalar) {
    if let Some((odd, m)) = normalize(side, w) {
        add_to(c, m, if odd { -v } else { v });
    }
}

/// Parity of the décalage exponent `A_I = Σ_i (r−i) p_i` (1-indexed).
pub fn dec_odd(m: &[BasisRef]) -> bool {
    let r = m.len();
    m.iter().enumerate().map(|(i, x)| (r - 1 - i) * x.0).sum::<usize>() % 2 == 1
}

/// Internal degree `Σ p` of a monomial.
pub fn internal_degree(m: &[BasisRef]) -> usize {
    m.iter().map(|x| x.0).sum()
}

/// Total degree `−r + Σ p`.
pub fn total_degree(m: &[BasisRef]) -> i64 {
    internal_degree(m) as i64 - m.len() as i64
}

fn shifted_degree(m: &[BasisRef]) -> i64 {
    m.iter().map(|x| x.0 as i64 - 1).sum()
}

#[derive(Clone, Debug)]
pub struct JacobiComplex<'g> {
    g: &'g FDGLA,
    n: usize,
    /// (r, s) → monomials with r letters of internal degree s
    blocks: BTreeMap<(usize, usize), Vec<Monomial>>,
}

pub fn build_jacobi(g: &FDGLA, n: usize) -> Result<JacobiComplex<'_>, JacobiError> {
    JacobiComplex::new(g, n)
}

impl<'g> JacobiComplex<'g> {
    pub fn new(g: &'g FDGLA, n: usize) -> Result<Self, JacobiError> {
        if n == 0 {
            return Err(JacobiError::Order);
        }
        let letters: Vec<BasisRef> =
            (0..=g.top_degree()).flat_map(|a| (0..g.dim(a)).map(move |i| (a, i))).collect();
        let mut blocks: BTreeMap<(usize, usize), Vec<Monomial>> = BTreeMap::new();
        fn rec(
            letters: &[BasisRef],
            start: usize,
            left: usize,
            cur: &mut Vec<BasisRef>,
            out: &mut BTreeMap<(usize, usize), Vec<Monomial>>,
        ) {
            if !cur.is_empty() {
                out.entry((cur.len(), internal_degree(cur))).or_default().push(cur.clone());
            }
            if left == 0 {
                return;
            }
            for k in start..letters.len() {
                cur.push(letters[k]);
                // odd letters may repeat
                let next = if letters[k].0 % 2 == 1 { k } else { k + 1 };
                rec(letters, next, left - 1, cur, out);
                cur.pop();
            }
        }
        rec(&letters, 0, n, &mut Vec::new(), &mut blocks);
        Ok(JacobiComplex { g, n, blocks })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn fdgla(&self) -> &'g FDGLA {
        self.g
    }

    pub fn blocks(&self) -> &BTreeMap<(usize, usize), Vec<Monomial>> {
        &self.blocks
    }

    pub fn block(&self, r: usize, s: usize) -> &[Monomial] {
        self.blocks.get(&(r, s)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Basis of `J^i`, ordered by r then lexicographically.
    pub fn basis(&self, i: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        for r in 1..=self.n {
            let s = r as i64 + i;
            if s >= 0 {
                out.extend(self.block(r, s as usize).iter().cloned());
            }
        }
        out
    }

    fn d_letter(&self, x: BasisRef) -> Vec<(BasisRef, Scalar)> {
        let m = self.g.differential(x.0);
        (0..m.rows()).filter(|&i| !m.get(i, x.1).is_zero()).map(|i| ((x.0 + 1, i), m.get(i, x.1).clone())).collect()
    }

    fn bracket_letters(&self, x: BasisRef, y: BasisRef) -> Vec<(BasisRef, Scalar)> {
        if x.0 + y.0 > self.g.top_degree() {
            return Vec::new();
        }
        self.g.bracket_basis(x.0, x.1, y.0, y.1).into_iter().map(|(k, c)| ((x.0 + y.0, k), c)).collect()
    }

    /// `d(x₁∧…∧x_n) = Σ_i (−1)^{p₁+…+p_{i−1}} x₁∧…∧dx_i∧…∧x_n`.
    pub fn wedge_d(&self, m: &[BasisRef]) -> Chain {
        let mut out = Chain::new();
        let mut pre = 0;
        for (i, &x) in m.iter().enumerate() {
            for (y, c) in self.d_letter(x) {
                let mut w = m.to_vec();
                w[i] = y;
                push_word(&mut out, Side::Wedge, w, sign(pre % 2 == 1) * c);
            }
            pre += x.0;
        }
        out
    }

    /// `Q(x₁∧…∧x_n) = Σ_{i<j} (−1)^a [x_i,x_j]∧x₁∧…x̂_i…x̂_j…∧x_n`, with `(−1)^a`
    /// the sign of moving `x_i, x_j` to the front.
    pub fn wedge_q(&self, m: &[BasisRef]) -> Chain {
        let mut out = Chain::new();
        let p: Vec<usize> = m.iter().map(|x| x.0).collect();
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                let before_i: usize = p[..i].iter().sum();
                let before_j: usize = p[..j].iter().sum::<usize>() - p[i];
                let a = i + p[i] * before_i + (j - 1) + p[j] * before_j;
                let rest: Vec<BasisRef> =
                    m.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, x)| *x).collect();
                for (z, c) in self.bracket_letters(m[i], m[j]) {
                    let mut w = vec![z];
                    w.extend_from_slice(&rest);
                    push_word(&mut out, Side::Wedge, w, sign(a % 2 == 1) * c);
                }
            }
        }
        out
    }

    fn transport(m: &[BasisRef], c: Chain, extra: bool) -> Chain {
        let base = dec_odd(m) ^ extra;
        c.into_iter().map(|(k, v)| (k.clone(), if base ^ dec_odd(&k) { -v } else { v })).collect()
    }

    /// `d̄ = dec⁻¹ ∘ (−1)^{|I|} d ∘ dec`.
    pub fn d_bar(&self, m: &[BasisRef]) -> Chain {
        Self::transport(m, self.wedge_d(m), m.len() % 2 == 1)
    }

    /// `Q̄ = dec⁻¹ ∘ Q ∘ dec`.
    pub fn q_bar(&self, m: &[BasisRef]) -> Chain {
        Self::transport(m, self.wedge_q(m), false)
    }

    /// `d̄` as the coderivation extending `x̄ ↦ −(dx)‾` with Koszul signs.
    pub fn d_bar_direct(&self, m: &[BasisRef]) -> Chain {
        let mut out = Chain::new();
        let mut pre = 0i64;
        for (i, &x) in m.iter().enumerate() {
            for (y, c) in self.d_letter(x) {
                let mut w = m.to_vec();
                w[i] = y;
                push_word(&mut out, Side::Sym, w, -sign(pre.rem_euclid(2) == 1) * c);
            }
            pre += x.0 as i64 - 1;
        }
        out
    }

    /// `Q̄` as the coderivation extending `x̄⊙ȳ ↦ (−1)^{|x|}[x,y]‾`.
    pub fn q_bar_direct(&self, m: &[BasisRef]) -> Chain {
        let mut out = Chain::new();
        let s: Vec<i64> = m.iter().map(|x| x.0 as i64 - 1).collect();
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                let before_i: i64 = s[..i].iter().sum();
                let before_j: i64 = s[..j].iter().sum::<i64>() - s[i];
                let eps = (s[i] * before_i + s[j] * before_j).rem_euclid(2) == 1;
                let q = m[i].0 % 2 == 1;
                let rest: Vec<BasisRef> =
                    m.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, x)| *x).collect();
                for (z, c) in self.bracket_letters(m[i], m[j]) {
                    let mut w = vec![z];
                    w.extend_from_slice(&rest);
                    push_word(&mut out, Side::Sym, w, sign(eps ^ q) * c);
                }
            }
        }
        out
    }

    /// `d̄ + Q̄`.
    pub fn total(&self, m: &[BasisRef]) -> Chain {
        let mut c = self.d_bar(m);
        for (k, v) in self.q_bar(m) {
            add_to(&mut c, k, v);
        }
        c
    }

    /// Extend a per-monomial map linearly.
    pub fn apply(&self, f: impl Fn(&[BasisRef]) -> Chain, c: &Chain) -> Chain {
        let mut out = Chain::new();
        for (m, v) in c {
            for (k, w) in f(m) {
                add_to(&mut out, k, v * &w);
            }
        }
        out
    }

    /// Matrix of `d̄ + Q̄ : J^i → J^{i+1}` in the bases of [`Self::basis`].
    pub fn differential_matrix(&self, i: i64) -> SparseMatrix {
        let src = self.basis(i);
        let dst = self.basis(i + 1);
        let index: HashMap<&Monomial, usize> = dst.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let mut mat = SparseMatrix::new(dst.len(), src.len());
        for (j, m) in src.iter().enumerate() {
            for (k, v) in self.total(m) {
                mat.set(index[&k], j, v);
            }
        }
        mat
    }

    /// Named exact identities over every basis monomial of every block:
    /// `d² = 0`, `Q² = 0`, `Qd = dQ` on `∧𝔤`, `(d̄+Q̄)² = 0`, and agreement
    /// of the transported and directly-defined `d̄`, `Q̄`.
    pub fn identity_checks(&self) -> Vec<(String, bool)> {
        let mut ok = [true; 6];
        for ms in self.blocks.values() {
            for m in ms {
                let single: Chain = [(m.clone(), Scalar::one())].into();
                let d = self.wedge_d(m);
                let q = self.wedge_q(m);
                ok[0] &= self.apply(|x| self.wedge_d(x), &d).is_empty();
                ok[1] &= self.apply(|x| self.wedge_q(x), &q).is_empty();
                ok[2] &= self.apply(|x| self.wedge_q(x), &d) == self.apply(|x| self.wedge_d(x), &q);
                let t = self.apply(|x| self.total(x), &single);
                ok[3] &= self.apply(|x| self.total(x), &t).is_empty();
                ok[4] &= self.d_bar(m) == self.d_bar_direct(m);
                ok[5] &= self.q_bar(m) == self.q_bar_direct(m);
            }
        }
        ["d∘d = 0", "Q∘Q = 0", "Qd = dQ", "(d̄+Q̄)² = 0", "d̄ transported = d̄ direct", "Q̄ transported = Q̄ direct"]
            .iter()
            .zip(ok)
            .map(|(n, b)| (n.to_string(), b))
            .collect()
    }

    /// Monomials whose total degree `−r + Σp` differs from the shifted
    /// degree `Σ(p−1)` (always empty; kept as an explicit check).
    pub fn grading_conflicts(&self) -> Vec<Monomial> {
        self.blocks.values().flatten().filter(|m| total_degree(m) != shifted_degree(m)).cloned().collect()
    }

    /// `x̄_I ⊙ x̄_J` as a signed basis monomial.
    pub fn product(a: &[BasisRef], b: &[BasisRef]) -> Option<(Scalar, Monomial)> {
        let mut w = a.to_vec();
        w.extend_from_slice(b);
        normalize(Side::Sym, w).map(|(odd, m)| (sign(odd), m))
    }

    /// Reduced coproduct `Δ′(x̄₁⊙…⊙x̄_n) = Σ_I (−1)^{s(I)} x̄_I ⊗ x̄_Ī` over
    /// nonempty proper position subsets.
    pub fn coproduct(m: &[BasisRef]) -> BTreeMap<(Monomial, Monomial), Scalar> {
        let r = m.len();
        let mut out: BTreeMap<(Monomial, Monomial), Scalar> = BTreeMap::new();
        if r < 2 {
            return out;
        }
        for mask in 1u32..(1 << r) - 1 {
            let (mut left, mut right) = (Vec::new(), Vec::new());
            let mut odd = false;
            // sign of sorting the word into (I, Ī): count crossings
            for (k, &x) in m.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    let passed: i64 = right.iter().map(|y: &BasisRef| y.0 as i64 - 1).sum();
                    odd ^= ((x.0 as i64 - 1) * passed).rem_euclid(2) == 1;
                    left.push(x);
                } else {
                    right.push(x);
                }
            }
            let e = out.entry((left, right)).or_insert_with(Scalar::zero);
            *e += sign(odd);
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

/// `ℍ⁰(J_n)` with class representatives and dual functionals: `functionals[k]`
/// vanishes on coboundaries and takes `δ_kl` on `representatives[l]`.
#[derive(Clone, Debug)]
pub struct JacobiH0 {
    pub n: usize,
    pub dim: usize,
    pub cocycle_dim: usize,
    pub boundary_dim: usize,
    pub representatives: Vec<Chain>,
    pub functionals: Vec<Chain>,
}

impl JacobiH0 {
    pub fn coordinates(&self, z: &Chain) -> Vec<Scalar> {
        self.functionals.iter().map(|a| pair(a, z)).collect()
    }
}

fn pair(a: &Chain, z: &Chain) -> Scalar {
    a.iter().filter_map(|(m, x)| z.get(m).map(|y| x * y)).fold(Scalar::zero(), |s, v| s + v)
}

pub fn jacobi_h0(j: &JacobiComplex) -> JacobiH0 {
    let basis = j.basis(0);
    let inc = j.differential_matrix(-1);
    let out = j.differential_matrix(0);
    let piece = cohomology(basis.len(), Some((&inc, None)), Some(&out), true);
    let to_chain = |v: &BTreeMap<usize, Scalar>| -> Chain { v.iter().map(|(k, c)| (basis[*k].clone(), c.clone())).collect() };
    let representatives: Vec<Chain> = piece.representatives.iter().map(to_chain).collect();
    // functionals: rows [boundaries; reps] · a = e_k
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let dense = |v: &BTreeMap<usize, Scalar>| {
        let mut d = vec![Scalar::zero(); basis.len()];
        for (k, c) in v {
            d[*k] = c.clone();
        }
        d
    };
    rows.extend(piece.boundaries.iter().map(dense));
    rows.extend(piece.representatives.iter().map(dense));
    let mut functionals = Vec::new();
    if !piece.representatives.is_empty() {
        let m = DenseMatrix::from_rows(&rows).expect("rectangular");
        for k in 0..piece.representatives.len() {
            let mut e = vec![Scalar::zero(); rows.len()];
            e[piece.boundaries.len() + k] = Scalar::one();
            let a = m.solve(&e).expect("independent rows");
            functionals.push(
                a.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (basis[i].clone(), c)).collect(),
            );
        }
    }
    JacobiH0 {
        n: j.order(),
        dim: piece.dim,
        cocycle_dim: piece.cocycle_dim,
        boundary_dim: piece.boundary_dim,
        representatives,
        functionals,
    }
}

/// `ℚ ⊕ m` with `m = ℍ⁰(J_n)*`; basis `1, a₁, …, a_h` with `a_k` dual to the
/// k-th class. `table[k][l]` are the coordinates of `a_k · a_l` in `m`.
#[derive(Clone, Debug)]
pub struct BaseRing {
    pub n: usize,
    pub h0: JacobiH0,
    pub table: Vec<Vec<Vec<Scalar>>>,
}

pub fn base_ring(j: &JacobiComplex) -> BaseRing {
    let h0 = jacobi_h0(j);
    let h = h0.dim;
    // (a_k · a_l)(z_m) = (a_k ⊗ a_l)(Δ′ z_m)
    let mut table = vec![vec![vec![Scalar::zero(); h]; h]; h];
    for (mi, z) in h0.representatives.iter().enumerate() {
        let mut co: BTreeMap<(Monomial, Monomial), Scalar> = BTreeMap::new();
        for (mono, c) in z {
            for (pair_, v) in JacobiComplex::coproduct(mono) {
                if total_degree(&pair_.0) == 0 && total_degree(&pair_.1) == 0 {
                    *co.entry(pair_).or_insert_with(Scalar::zero) += c * &v;
                }
            }
        }
        for k in 0..h {
            for l in 0..h {
                let (ak, al) = (&h0.functionals[k], &h0.functionals[l]);
                let mut s = Scalar::zero();
                for ((x, y), v) in &co {
                    if let (Some(p), Some(q)) = (ak.get(x), al.get(y)) {
                        s += v * p * q;
                    }
                }
                table[k][l][mi] = s;
            }
        }
    }
    BaseRing { n: j.order(), h0, table }
}

impl BaseRing {
    /// Dimension of the ring (1 + dim m).
    pub fn dim(&self) -> usize {
        1 + self.h0.dim
    }

    /// Product of two ring elements given as coordinates `(unit, a₁, …, a_h)`.
    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let h = self.h0.dim;
        let mut r = vec![Scalar::zero(); h + 1];
        r[0] = &x[0] * &y[0];
        for k in 0..h {
            r[k + 1] += &x[0] * &y[k + 1] + &y[0] * &x[k + 1];
        }
        for k in 0..h {
            if x[k + 1].is_zero() {
                continue;
            }
            for l in 0..h {
                if y[l + 1].is_zero() {
                    continue;
                }
                let c = &x[k + 1] * &y[l + 1];
                for m in 0..h {
                    r[m + 1] += &c * &self.table[k][l][m];
                }
            }
        }
        r
    }

    pub fn unit_vec(&self, k: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[k] = Scalar::one();
        v
    }

    /// Smallest `e` with `m^e = 0` (`m^0` is the whole ring, so `e ≥ 1` when m ≠ 0).
    pub fn nilpotency_exponent(&self) -> usize {
        let h = self.h0.dim;
        let mut power: Vec<Vec<Scalar>> = (1..=h).map(|k| self.unit_vec(k)).collect();
        let mut e = 1;
        loop {
            if power.iter().all(|v| v.iter().all(|c| c.is_zero())) {
                return e;
            }
            let mut next = Vec::new();
            for p in &power {
                for k in 1..=h {
                    let v = self.multiply(p, &self.unit_vec(k));
                    if v.iter().any(|c| !c.is_zero()) {
                        next.push(v);
                    }
                }
            }
            // keep a spanning set of manageable size
            power = reduce_span(next);
            e += 1;
        }
    }

    /// Commutativity, associativity, unit and `m^{n+1} = 0`.
    pub fn checks(&self) -> Vec<(String, bool)> {
        let d = self.dim();
        let mut comm = true;
        let mut assoc = true;
        let mut unit = true;
        for i in 0..d {
            let x = self.unit_vec(i);
            unit &= self.multiply(&self.unit_vec(0), &x) == x && self.multiply(&x, &self.unit_vec(0)) == x;
            for j in 0..d {
                let y = self.unit_vec(j);
                let xy = self.multiply(&x, &y);
                comm &= xy == self.multiply(&y, &x);
                for k in 0..d {
                    let z = self.unit_vec(k);
                    assoc &= self.multiply(&xy, &z) == self.multiply(&x, &self.multiply(&y, &z));
                }
            }
        }
        vec![
            ("commutative".into(), comm),
            ("associative".into(), assoc),
            ("unital".into(), unit),
            (format!("m^{} = 0", self.n + 1), self.nilpotency_exponent() <= self.n + 1),
        ]
    }

    pub fn is_valid(&self) -> bool {
        self.checks().iter().all(|(_, b)| *b)
    }
}

fn reduce_span(vs: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    if vs.is_empty() {
        return vs;
    }
    let m = DenseMatrix::from_rows(&vs).expect("rectangular");
    // row space basis via the kernel of the orthogonal complement is overkill;
    // greedily keep independent rows
    let mut kept: Vec<Vec<Scalar>> = Vec::new();
    let mut rank = 0;
    for i in 0..m.rows() {
        let mut trial = kept.clone();
        trial.push(m.row(i));
        let r = DenseMatrix::from_rows(&trial).expect("rectangular").rank();
        if r > rank {
            kept = trial;
            rank = r;
        }
    }
    kept
}

/// The surjection `m_{n+1} → m_n` dual to `ℍ⁰(J_n) → ℍ⁰(J_{n+1})`, as a
/// `dim m_n × dim m_{n+1}` matrix.
pub fn connecting_map(small: &BaseRing, big: &BaseRing) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(small.h0.dim, big.h0.dim);
    for (l, z) in small.h0.representatives.iter().enumerate() {
        for (k, c) in big.h0.coordinates(z).into_iter().enumerate() {
            m.set(l, k, c);
        }
    }
    m
}

/// `v = v₁ + v₁⊙v₁/2! + … + v₁^{⊙n}/n!` with coefficients in the maximal
/// ideal of `ℚ[t₁..t_m]/(t)^{n+1}`.
#[derive(Clone, Debug)]
pub struct MorphicElement {
    pub n: usize,
    pub params: Vars,
    pub components: BTreeMap<Monomial, MultiPoly>,
}

fn param_vars(m: usize) -> Vars {
    Vars::new((1..=m).map(|i| format!("t{i}")))
}

impl MorphicElement {
    fn truncation(&self) -> Truncation {
        Truncation::new((0..self.params.len()).collect(), self.n as u32)
    }

    /// `Δ′(v) = v ⊗ v` modulo `t^{n+1}`.
    pub fn is_grouplike(&self) -> bool {
        let tr = self.truncation();
        let mut lhs: BTreeMap<(Monomial, Monomial), MultiPoly> = BTreeMap::new();
        for (m, c) in &self.components {
            for (k, s) in JacobiComplex::coproduct(m) {
                let e = lhs.entry(k).or_insert_with(|| MultiPoly::zero(&self.params));
                *e = &*e + &c.scale(&s);
            }
        }
        let mut rhs: BTreeMap<(Monomial, Monomial), MultiPoly> = BTreeMap::new();
        for (a, ca) in &self.components {
            for (b, cb) in &self.components {
                let p = tr.mul(ca, cb);
                if !p.is_zero() {
                    rhs.insert((a.clone(), b.clone()), p);
                }
            }
        }
        lhs.retain(|_, p| !p.truncate(&tr).is_zero());
        lhs.into_iter().map(|(k, p)| (k, p.truncate(&tr))).collect::<BTreeMap<_, _>>() == rhs
    }

    /// `(d̄ + Q̄) v` modulo `t^{n+1}`.
    pub fn differential(&self, j: &JacobiComplex) -> BTreeMap<Monomial, MultiPoly> {
        let tr = self.truncation();
        let mut out: BTreeMap<Monomial, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.components {
            for (k, s) in j.total(m) {
                let e = out.entry(k).or_insert_with(|| MultiPoly::zero(&self.params));
                *e = &*e + &c.scale(&s);
            }
        }
        out.into_iter().map(|(k, p)| (k, p.truncate(&tr))).filter(|(_, p)| !p.is_zero()).collect()
    }

    pub fn is_closed(&self, j: &JacobiComplex) -> bool {
        self.differential(j).is_empty()
    }
}

/// Assemble `v` from `v₁ ∈ g₁ ⊗ m`, where `m = (t)` in `ℚ[t]/(t)^{order+1}`.
/// Requires `order ≤ n` (so `m^{n+1} = 0`) and no constant terms.
pub fn morphic_assemble(v1: &GSeries, n: usize, order: u32) -> Result<MorphicElement, JacobiError> {
    if v1.degree != 1 {
        return Err(JacobiError::Shape(format!("v₁ must have degree 1, got {}", v1.degree)));
    }
    if order as usize > n {
        return Err(JacobiError::NotNilpotent(n, format!("truncation order {order} exceeds {n}")));
    }
    if v1.min_t_degree().is_some_and(|d| d < 1) {
        return Err(JacobiError::NotNilpotent(n, "v₁ has a constant term".into()));
    }
    let params = param_vars(v1.nparams);
    let tr = Truncation::new((0..v1.nparams).collect(), order);
    let mut lin: BTreeMap<Monomial, MultiPoly> = BTreeMap::new();
    for (e, v) in &v1.terms {
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let p = lin.entry(vec![(1, i)]).or_insert_with(|| MultiPoly::zero(&params));
                p.add_term(e.clone(), c.clone());
            }
        }
    }
    lin.retain(|_, p| !p.is_zero());
    let mut components = lin.clone();
    let mut power = lin.clone();
    for i in 2..=n {
        let mut next: BTreeMap<Monomial, MultiPoly> = BTreeMap::new();
        for (a, ca) in &power {
            for (b, cb) in &lin {
                if let Some((s, m)) = JacobiComplex::product(a, b) {
                    let p = tr.mul(ca, cb).scale(&s);
                    let e = next.entry(m).or_insert_with(|| MultiPoly::zero(&params));
                    *e = &*e + &p;
                }
            }
        }
        next.retain(|_, p| !p.is_zero());
        let inv = Scalar::one() / Scalar::from_integer((2..=i).product::<usize>().into());
        for (m, p) in &next {
            components.insert(m.clone(), p.scale(&inv));
        }
        power = next;
    }
    Ok(MorphicElement { n, params, components: components.into_iter().filter(|(_, p)| !p.is_zero()).collect() })
}

/// The linear map `m_n → m`, `a_k ↦ a_k(v)`, for a closed morphic element.
#[derive(Clone, Debug)]
pub struct RingHom {
    pub images: Vec<MultiPoly>,
    pub params: Vars,
    pub order: u32,
}

pub fn morphic_to_hom(v: &MorphicElement, ring: &BaseRing, j: &JacobiComplex) -> Result<RingHom, JacobiError> {
    if ring.n != v.n || j.order() != v.n {
        return Err(JacobiError::Shape(format!("orders differ: ring {}, element {}", ring.n, v.n)));
    }
    if !v.is_closed(j) {
        return Err(JacobiError::NotClosed);
    }
    let images = ring
        .h0
        .functionals
        .iter()
        .map(|a| {
            let mut p = MultiPoly::zero(&v.params);
            for (m, c) in a {
                if let Some(q) = v.components.get(m) {
                    p = &p + &q.scale(c);
                }
            }
            p
        })
        .collect();
    Ok(RingHom { images, params: v.params.clone(), order: v.n as u32 })
}

impl RingHom {
    /// `f(a_k · a_l) = f(a_k) f(a_l)` on all basis pairs.
    pub fn is_multiplicative(&self, ring: &BaseRing) -> bool {
        let tr = Truncation::new((0..self.params.len()).collect(), self.order);
        let h = ring.h0.dim;
        for k in 0..h {
            for l in 0..h {
                let mut lhs = MultiPoly::zero(&self.params);
                for m in 0..h {
                    lhs = &lhs + &self.images[m].scale(&ring.table[k][l][m]);
                }
                if lhs.truncate(&tr) != tr.mul(&self.images[k], &self.images[l]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|p| p.is_zero())
    }
}
