//! The windowed Čech hyper-complex and its cohomology.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::exact_algebra::complex::{cohomology, stack};
use crate::exact_algebra::{Exponent, Scalar, SparseMatrix, SparseVec};
use crate::multivector::{jacobi_defect, pushforward, tuples, PolyBasis, PolyVector, Tuple};

use super::{Atlas, CechError, GlueStatus};

/// Components keyed by (multivector degree b, chart set J), all written in
/// reference-chart coordinates. The Čech level is `J.len() − 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HyperCochain {
    pub parts: BTreeMap<(usize, Vec<usize>), PolyVector>,
}

impl HyperCochain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, b: usize, j: Vec<usize>, p: &PolyVector) {
        if p.is_zero() {
            return;
        }
        let key = (b, j);
        let s = match self.parts.get(&key) {
            Some(q) => q.add(p),
            None => p.clone(),
        };
        if s.is_zero() {
            self.parts.remove(&key);
        } else {
            self.parts.insert(key, s);
        }
    }

    pub fn add_cochain(&mut self, o: &HyperCochain, c: &Scalar) {
        for ((b, j), p) in &o.parts {
            self.add(*b, j.clone(), &p.scale(c));
        }
    }

    pub fn part(&self, b: usize, j: &[usize]) -> Option<&PolyVector> {
        self.parts.get(&(b, j.to_vec()))
    }

    pub fn is_zero(&self) -> bool {
        self.parts.values().all(|p| p.is_zero())
    }
}

/// Which differential to use: the full `Δ`, or only δ on one row `∧^b T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Total,
    Row(usize),
}

/// The (unwindowed) hyper-complex of an atlas at t = 0.
#[derive(Clone, Debug)]
pub struct CechHyperComplex {
    atlas: Atlas,
    n: usize,
    lambda: PolyVector,
    shift: Vec<i32>,
    levels: Vec<Vec<Vec<usize>>>,
    free: BTreeMap<Vec<usize>, Vec<bool>>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The torus weight `e − e_I` shared by every term, if there is one.
fn weight(p: &PolyVector) -> Option<Vec<i32>> {
    let n = p.dim();
    let mut w: Option<Vec<i32>> = None;
    for (t, c) in p.terms() {
        for e in c.terms().keys() {
            let mut g = e[..n].to_vec();
            for &i in t {
                g[i] -= 1;
            }
            match &w {
                None => w = Some(g),
                Some(v) if *v == g => {}
                Some(_) => return None,
            }
        }
    }
    w
}

impl CechHyperComplex {
    /// Checks gluing and `[Λ,Λ] = 0`; families are evaluated at t = 0.
    pub fn new(atlas: &Atlas) -> Result<Self, CechError> {
        let atlas = if atlas.params().is_empty() { atlas.clone() } else { atlas.at_zero()? };
        let glue = atlas.glue_check(None)?;
        if glue.status != GlueStatus::Glued {
            let names: Vec<String> = glue
                .failing()
                .iter()
                .map(|&(j, k)| format!("{}∩{}", atlas.charts()[j].name, atlas.charts()[k].name))
                .collect();
            return Err(CechError::NotGlued(names.join(", ")));
        }
        let lambda = atlas.bivector(0).clone();
        if !jacobi_defect(&lambda)?.is_zero() {
            return Err(CechError::NotPoisson);
        }
        let shift = match weight(&lambda) {
            Some(w) => w.iter().map(|x| -x).collect(),
            None => vec![0; atlas.dim()],
        };
        Ok(Self::build(atlas, lambda, shift))
    }

    /// The complex with Λ replaced by 0 (for sections and single rows).
    pub fn without_bivector(atlas: &Atlas) -> Result<Self, CechError> {
        let atlas = if atlas.params().is_empty() { atlas.clone() } else { atlas.at_zero()? };
        let lambda = PolyVector::zero(atlas.ring(0), atlas.dim(), 2);
        let shift = vec![0; atlas.dim()];
        Ok(Self::build(atlas, lambda, shift))
    }

    fn build(atlas: Atlas, lambda: PolyVector, shift: Vec<i32>) -> Self {
        let n = atlas.dim();
        let nch = atlas.len();
        let levels: Vec<Vec<Vec<usize>>> = (1..=nch).map(|k| subsets(nch, k)).collect();
        let mut free = BTreeMap::new();
        for lv in &levels {
            for j in lv {
                let mut f = vec![false; n];
                for &r in &j[1..] {
                    for v in atlas.map(r, j[0]).inverted_source_vars() {
                        f[v] = true;
                    }
                }
                free.insert(j.clone(), f);
            }
        }
        CechHyperComplex { atlas, n, lambda, shift, levels, free }
    }

    pub fn atlas(&self) -> &Atlas {
        &self.atlas
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &PolyVector {
        &self.lambda
    }

    /// Window offset per unit of multivector degree (minus the weight of Λ).
    pub fn shift(&self) -> &[i32] {
        &self.shift
    }

    pub fn levels(&self) -> &[Vec<Vec<usize>>] {
        &self.levels
    }

    /// A reference-chart field rewritten on chart `j`.
    pub fn to_chart(&self, p: &PolyVector, j: usize) -> Result<PolyVector, CechError> {
        if j == 0 {
            return Ok(p.clone());
        }
        Ok(pushforward(p, &self.atlas.map(j, 0), &self.atlas.map(0, j))?)
    }

    /// A chart-`j` field rewritten in reference coordinates.
    pub fn from_chart(&self, p: &PolyVector, j: usize) -> Result<PolyVector, CechError> {
        if j == 0 {
            return Ok(p.clone());
        }
        Ok(pushforward(p, &self.atlas.map(0, j), &self.atlas.map(j, 0))?)
    }

    /// Whether a reference-coordinate component is regular on `U_J`.
    pub fn is_regular(&self, p: &PolyVector, j: &[usize]) -> Result<bool, CechError> {
        let img = self.to_chart(p, j[0])?;
        let free = &self.free[j];
        Ok(img
            .terms()
            .values()
            .flat_map(|c| c.terms().keys())
            .all(|e| e[..self.n].iter().enumerate().all(|(v, &x)| x >= 0 || free[v])))
    }

    /// Exact Δ (or δ on a row), without any window.
    pub fn delta(&self, mode: Mode, c: &HyperCochain) -> Result<HyperCochain, CechError> {
        let nch = self.atlas.len();
        let mut r = HyperCochain::new();
        for ((b, j), p) in &c.parts {
            let a = j.len() - 1;
            let sign = if (a + b) % 2 == 0 { Scalar::one() } else { -Scalar::one() };
            for x in 0..nch {
                if j.contains(&x) {
                    continue;
                }
                let mut jj = j.clone();
                let pos = jj.partition_point(|&y| y < x);
                jj.insert(pos, x);
                let s = if pos % 2 == 0 { sign.clone() } else { -sign.clone() };
                r.add(*b, jj, &p.scale(&s));
            }
            if mode == Mode::Total && *b < self.n {
                r.add(b + 1, j.clone(), &self.lambda.schouten(p)?);
            }
        }
        Ok(r)
    }

    /// The windowed complex at window `w`; `center` is the multivector
    /// degree whose fields are windowed by their own weight (usually the
    /// cohomological degree of interest).
    pub fn window(&self, w: i32, mode: Mode, center: usize) -> Result<WindowedComplex<'_>, CechError> {
        WindowedComplex::new(self, w, mode, center)
    }

    /// The window coordinate `γ + (b − center)·s` of a term `z^e ∂_I`,
    /// `γ = e − e_I`; it is preserved by δ and by `[Λ,−]`.
    fn coordinate(&self, t: &Tuple, e: &[i32], shift: &[i32], center: usize) -> Vec<i32> {
        let b = t.len() as i32 - center as i32;
        let mut g: Vec<i32> = (0..self.n).map(|v| e[v] + b * shift[v]).collect();
        for &i in t {
            g[i] -= 1;
        }
        g
    }

    /// Smallest window containing every term of `c`.
    pub fn required_window(&self, c: &HyperCochain, mode: Mode, center: usize) -> i32 {
        let shift = self.mode_shift(mode);
        let mut w = 0;
        for p in c.parts.values() {
            for (t, f) in p.terms() {
                for e in f.terms().keys() {
                    for x in self.coordinate(t, e, &shift, center) {
                        w = w.max(x.abs());
                    }
                }
            }
        }
        w
    }

    fn mode_shift(&self, mode: Mode) -> Vec<i32> {
        match mode {
            Mode::Total => self.shift.clone(),
            Mode::Row(_) => vec![0; self.n],
        }
    }
}

type OutKey = (usize, Vec<usize>, Tuple, Exponent);

/// The spaces and differentials of one window.
pub struct WindowedComplex<'a> {
    cx: &'a CechHyperComplex,
    w: i32,
    mode: Mode,
    bases: Vec<PolyBasis>,
    constraints: HashMap<(usize, Vec<usize>), SparseMatrix>,
    regular: HashMap<(usize, Vec<usize>), Vec<SparseVec>>,
    brk: HashMap<(usize, usize), (SparseVec, Vec<(Tuple, Exponent, Scalar)>)>,
}

/// Cohomology of the windowed complex at one total degree; vectors are in
/// ambient coordinates (see [`WindowedComplex::to_cochain`]).
#[derive(Clone, Debug)]
pub struct WindowedCohomology {
    pub degree: usize,
    pub window: i32,
    pub dim: usize,
    pub cocycle_dim: usize,
    pub boundary_dim: usize,
    pub representatives: Vec<SparseVec>,
    pub boundaries: Vec<SparseVec>,
}

impl<'a> WindowedComplex<'a> {
    fn new(cx: &'a CechHyperComplex, w: i32, mode: Mode, center: usize) -> Result<Self, CechError> {
        let n = cx.n;
        if w < 0 {
            return Err(CechError::Argument("negative window".into()));
        }
        let shift = cx.mode_shift(mode);
        let active: Vec<usize> = match mode {
            Mode::Total => (1..=n).collect(),
            Mode::Row(b) if b <= n => vec![b],
            Mode::Row(b) => return Err(CechError::Argument(format!("row {b} exceeds dimension {n}"))),
        };
        let ring = cx.atlas.ring(0);
        let side = (2 * w + 1) as usize;
        let total = side.pow(n as u32);
        let mut bases = Vec::new();
        for b in 0..=n {
            let mut elems = Vec::new();
            if active.contains(&b) || (mode == Mode::Total && b >= 1) {
                for idx in 0..total {
                    let mut g = vec![0i32; n];
                    let mut r = idx;
                    for v in (0..n).rev() {
                        g[v] = (r % side) as i32 - w;
                        r /= side;
                    }
                    for t in tuples(n, b) {
                        let mut e: Vec<i32> = (0..n).map(|v| g[v] - (b as i32 - center as i32) * shift[v]).collect();
                        for &i in &t {
                            e[i] += 1;
                        }
                        e.resize(ring.len(), 0);
                        elems.push((t, e));
                    }
                }
            }
            bases.push(PolyBasis::new(ring, n, b, elems));
        }
        let mut wc = WindowedComplex {
            cx,
            w,
            mode,
            bases,
            constraints: HashMap::new(),
            regular: HashMap::new(),
            brk: HashMap::new(),
        };
        let nch = cx.atlas.len();
        for &b in &active {
            let mut images: HashMap<usize, Vec<PolyVector>> = HashMap::new();
            for i0 in 0..nch {
                let basis = &wc.bases[b];
                let imgs = (0..basis.len()).map(|k| cx.to_chart(&basis.element(k), i0)).collect::<Result<Vec<_>, _>>()?;
                images.insert(i0, imgs);
            }
            for lv in &cx.levels {
                for j in lv {
                    let free = &cx.free[j];
                    let mut rows: HashMap<(Tuple, Exponent), usize> = HashMap::new();
                    let mut entries = Vec::new();
                    for (k, img) in images[&j[0]].iter().enumerate() {
                        for (t, c) in img.terms() {
                            for (e, x) in c.terms() {
                                if e[..n].iter().enumerate().any(|(v, &ev)| ev < 0 && !free[v]) {
                                    let next = rows.len();
                                    let r = *rows.entry((t.clone(), e.clone())).or_insert(next);
                                    entries.push((r, k, x.clone()));
                                }
                            }
                        }
                    }
                    let mut m = SparseMatrix::new(rows.len(), wc.bases[b].len());
                    for (r, k, x) in entries {
                        m.add_to(r, k, &x);
                    }
                    let reg = if m.rows() == 0 {
                        (0..m.cols()).map(|k| SparseVec::from([(k, Scalar::one())])).collect()
                    } else {
                        m.kernel_basis_sparse()
                    };
                    wc.constraints.insert((b, j.clone()), m);
                    wc.regular.insert((b, j.clone()), reg);
                }
            }
            if mode == Mode::Total && b < n {
                for k in 0..wc.bases[b].len() {
                    let q = cx.lambda.schouten(&wc.bases[b].element(k))?;
                    let (inside, rest) = wc.bases[b + 1].coords_split(&q);
                    let mut out = Vec::new();
                    for (t, c) in rest.terms() {
                        for (e, x) in c.terms() {
                            out.push((t.clone(), e.clone(), x.clone()));
                        }
                    }
                    wc.brk.insert((b, k), (inside, out));
                }
            }
        }
        Ok(wc)
    }

    pub fn window(&self) -> i32 {
        self.w
    }

    pub fn basis(&self, b: usize) -> &PolyBasis {
        &self.bases[b]
    }

    /// Blocks `(b, J, offset)` of total degree `i`, and the ambient size.
    pub fn layout(&self, i: usize) -> (Vec<(usize, Vec<usize>, usize)>, usize) {
        let n = self.cx.n;
        let bs: Vec<usize> = match self.mode {
            Mode::Total => (1..=n).collect(),
            Mode::Row(b) => vec![b],
        };
        let mut out = Vec::new();
        let mut off = 0;
        for b in bs {
            if i < b || i - b >= self.cx.levels.len() {
                continue;
            }
            for j in &self.cx.levels[i - b] {
                out.push((b, j.clone(), off));
                off += self.bases[b].len();
            }
        }
        (out, off)
    }

    /// Dimension of the admissible (regular) windowed cochains in degree `i`.
    pub fn regular_dim(&self, i: usize) -> usize {
        self.layout(i).0.iter().map(|(b, j, _)| self.regular[&(*b, j.clone())].len()).sum()
    }

    /// A basis of the admissible windowed cochains of degree `i`.
    pub fn regular_cochains(&self, i: usize) -> Vec<HyperCochain> {
        let mut out = Vec::new();
        for (b, j, _) in self.layout(i).0 {
            for v in &self.regular[&(b, j.clone())] {
                let mut c = HyperCochain::new();
                c.add(b, j.clone(), &self.bases[b].field(v));
                out.push(c);
            }
        }
        out
    }

    /// `Δ` on an ambient vector: the in-window image and the clipped part.
    pub fn apply(&self, i: usize, v: &SparseVec) -> (SparseVec, BTreeMap<OutKey, Scalar>) {
        let (src, _) = self.layout(i);
        let (tgt, _) = self.layout(i + 1);
        let toff: HashMap<(usize, Vec<usize>), usize> = tgt.into_iter().map(|(b, j, o)| ((b, j), o)).collect();
        let nch = self.cx.atlas.len();
        let mut res = SparseVec::new();
        let mut leak: BTreeMap<OutKey, Scalar> = BTreeMap::new();
        let acc = |m: &mut SparseVec, k: usize, x: Scalar| {
            let e = m.entry(k).or_insert_with(Scalar::zero);
            *e += x;
            if e.is_zero() {
                m.remove(&k);
            }
        };
        for (b, j, off) in src {
            let len = self.bases[b].len();
            let sub: Vec<(usize, Scalar)> = v.range(off..off + len).map(|(&k, x)| (k - off, x.clone())).collect();
            if sub.is_empty() {
                continue;
            }
            let a = j.len() - 1;
            let sign = if (a + b) % 2 == 0 { Scalar::one() } else { -Scalar::one() };
            for x in 0..nch {
                if j.contains(&x) {
                    continue;
                }
                let mut jj = j.clone();
                let pos = jj.partition_point(|&y| y < x);
                jj.insert(pos, x);
                let s = if pos % 2 == 0 { sign.clone() } else { -sign.clone() };
                let o = toff[&(b, jj)];
                for (k, c) in &sub {
                    acc(&mut res, o + k, &s * c);
                }
            }
            if self.mode == Mode::Total && b < self.cx.n {
                let o = toff[&(b + 1, j.clone())];
                for (k, c) in &sub {
                    let (inside, out) = &self.brk[&(b, *k)];
                    for (idx, x) in inside {
                        acc(&mut res, o + idx, c * x);
                    }
                    for (t, e, x) in out {
                        let key = (b + 1, j.clone(), t.clone(), e.clone());
                        let ent = leak.entry(key.clone()).or_insert_with(Scalar::zero);
                        *ent += c * x;
                        if ent.is_zero() {
                            leak.remove(&key);
                        }
                    }
                }
            }
        }
        (res, leak)
    }

    /// Matrix of Δ out of ambient degree `i`, stacked with the clipped rows
    /// and the regularity constraints; its kernel is the cocycle space.
    fn outgoing(&self, i: usize) -> SparseMatrix {
        let (src, size) = self.layout(i);
        let (_, tsize) = self.layout(i + 1);
        let mut cols = Vec::with_capacity(size);
        let mut keys: BTreeMap<OutKey, usize> = BTreeMap::new();
        let mut leak_cols = Vec::with_capacity(size);
        for k in 0..size {
            let (r, l) = self.apply(i, &SparseVec::from([(k, Scalar::one())]));
            let mut lc = SparseVec::new();
            for (key, x) in l {
                let next = keys.len();
                let row = *keys.entry(key).or_insert(next);
                lc.insert(row, x);
            }
            cols.push(r);
            leak_cols.push(lc);
        }
        let main = SparseMatrix::from_columns(tsize, &cols);
        let leak = SparseMatrix::from_columns(keys.len(), &leak_cols);
        let ncons: usize = src.iter().map(|(b, j, _)| self.constraints[&(*b, j.clone())].rows()).sum();
        let mut cons = SparseMatrix::new(ncons, size);
        let mut r0 = 0;
        for (b, j, off) in &src {
            let m = &self.constraints[&(*b, j.clone())];
            for (&(r, c), x) in m.entries() {
                cons.set(r0 + r, off + c, x.clone());
            }
            r0 += m.rows();
        }
        stack(&stack(&main, &leak), &cons)
    }

    /// Δ on the regular cochains of degree `i−1`: in-window image and leak.
    fn incoming(&self, i: usize) -> (SparseMatrix, SparseMatrix) {
        let (_, size) = self.layout(i);
        if i == 0 {
            return (SparseMatrix::new(size, 0), SparseMatrix::new(0, 0));
        }
        let (src, _) = self.layout(i - 1);
        let mut cols = Vec::new();
        let mut leak_cols = Vec::new();
        let mut keys: BTreeMap<OutKey, usize> = BTreeMap::new();
        for (b, j, off) in &src {
            for v in &self.regular[&(*b, j.clone())] {
                let amb: SparseVec = v.iter().map(|(k, x)| (off + k, x.clone())).collect();
                let (r, l) = self.apply(i - 1, &amb);
                let mut lc = SparseVec::new();
                for (key, x) in l {
                    let next = keys.len();
                    let row = *keys.entry(key).or_insert(next);
                    lc.insert(row, x);
                }
                cols.push(r);
                leak_cols.push(lc);
            }
        }
        (SparseMatrix::from_columns(size, &cols), SparseMatrix::from_columns(keys.len(), &leak_cols))
    }

    /// H^i of the windowed subcomplex.
    pub fn cohomology(&self, i: usize, with_reps: bool) -> WindowedCohomology {
        let (_, size) = self.layout(i);
        let out = self.outgoing(i);
        let (inc, leak) = self.incoming(i);
        let piece = cohomology(size, Some((&inc, Some(&leak))), Some(&out), with_reps);
        WindowedCohomology {
            degree: i,
            window: self.w,
            dim: piece.dim,
            cocycle_dim: piece.cocycle_dim,
            boundary_dim: piece.boundary_dim,
            representatives: piece.representatives,
            boundaries: piece.boundaries,
        }
    }

    pub fn to_cochain(&self, i: usize, v: &SparseVec) -> HyperCochain {
        let mut c = HyperCochain::new();
        for (b, j, off) in self.layout(i).0 {
            let len = self.bases[b].len();
            let sub: SparseVec = v.range(off..off + len).map(|(&k, x)| (k - off, x.clone())).collect();
            if !sub.is_empty() {
                c.add(b, j, &self.bases[b].field(&sub));
            }
        }
        c
    }

    /// Ambient coordinates of a degree-`i` cochain.
    pub fn coords(&self, i: usize, c: &HyperCochain) -> Result<SparseVec, CechError> {
        let (blocks, _) = self.layout(i);
        let offs: HashMap<(usize, Vec<usize>), usize> = blocks.into_iter().map(|(b, j, o)| ((b, j), o)).collect();
        let mut v = SparseVec::new();
        for ((b, j), p) in &c.parts {
            let o = *offs
                .get(&(*b, j.clone()))
                .ok_or_else(|| CechError::Argument(format!("component ({b}, {j:?}) is not in degree {i}")))?;
            let x = self.bases[*b].coords(p).map_err(|_| CechError::OutsideWindow(self.w))?;
            for (k, y) in x {
                v.insert(o + k, y);
            }
        }
        Ok(v)
    }

    /// Coordinates of the class of the cocycle `c` with respect to `reps`
    /// (which must be cocycles projecting to a basis of H^i).
    pub fn class_coordinates(
        &self,
        i: usize,
        c: &HyperCochain,
        reps: &[HyperCochain],
        h: &WindowedCohomology,
    ) -> Result<Vec<Scalar>, CechError> {
        let (_, size) = self.layout(i);
        let target = self.coords(i, c)?;
        let mut cols = Vec::new();
        for r in reps {
            cols.push(self.coords(i, r)?);
        }
        let nr = cols.len();
        cols.extend(h.boundaries.iter().cloned());
        let m = SparseMatrix::from_columns(size, &cols);
        if m.rank() != nr + h.boundaries.len() || nr != h.dim {
            return Err(CechError::Argument("the given representatives are not a basis of the cohomology".into()));
        }
        let dense: Vec<Scalar> = (0..size).map(|k| target.get(&k).cloned().unwrap_or_else(Scalar::zero)).collect();
        let x = m.solve(&dense).ok_or_else(|| CechError::Cocycle("not a cocycle of the windowed complex".into()))?;
        Ok(x[..nr].to_vec())
    }
}

/// Outcome of a window-stabilized dimension computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilization {
    pub dim: usize,
    pub stabilized: bool,
    /// the window W with dim(W) = dim(W+1), or the last one tried
    pub window: i32,
    /// stabilization was only confirmed at the configured maximum window
    pub used_max_window: bool,
    pub history: Vec<(i32, usize)>,
}

fn stabilize<F: FnMut(i32) -> Result<usize, CechError>>(start: i32, max: i32, mut f: F) -> Result<Stabilization, CechError> {
    if start > max {
        return Err(CechError::Argument(format!("start window {start} exceeds the maximum {max}")));
    }
    let mut history = vec![(start, f(start)?)];
    let mut w = start;
    while w < max {
        let d = f(w + 1)?;
        history.push((w + 1, d));
        if d == history[history.len() - 2].1 {
            return Ok(Stabilization { dim: d, stabilized: true, window: w, used_max_window: w + 1 == max, history });
        }
        w += 1;
    }
    let dim = history.last().unwrap().1;
    Ok(Stabilization { dim, stabilized: false, window: max, used_max_window: true, history })
}

#[derive(Clone, Debug)]
pub struct HpCechResult {
    pub index: usize,
    pub dim: usize,
    pub stabilized: bool,
    pub window: i32,
    pub used_max_window: bool,
    pub history: Vec<(i32, usize)>,
    pub representatives: Vec<HyperCochain>,
}

/// `HP^i` (cohomology at the `∧^i T` spot) with window stabilization.
pub fn hp_cech(atlas: &Atlas, i: usize, start: i32, max: i32, with_reps: bool) -> Result<HpCechResult, CechError> {
    let cx = CechHyperComplex::new(atlas)?;
    let s = stabilize(start, max, |w| Ok(cx.window(w, Mode::Total, i)?.cohomology(i, false).dim))?;
    let mut representatives = Vec::new();
    if with_reps {
        let wc = cx.window(s.window, Mode::Total, i)?;
        let h = wc.cohomology(i, true);
        representatives = h.representatives.iter().map(|v| wc.to_cochain(i, v)).collect();
    }
    Ok(HpCechResult {
        index: i,
        dim: s.dim,
        stabilized: s.stabilized,
        window: s.window,
        used_max_window: s.used_max_window,
        history: s.history,
        representatives,
    })
}

/// Čech cohomology `H^a(∧^b T)` of one row (Λ ignored).
pub fn cech_row(atlas: &Atlas, a: usize, b: usize, start: i32, max: i32) -> Result<Stabilization, CechError> {
    let cx = CechHyperComplex::without_bivector(atlas)?;
    if b > cx.dim() {
        return Ok(Stabilization { dim: 0, stabilized: true, window: start, used_max_window: false, history: vec![] });
    }
    stabilize(start, max, |w| Ok(cx.window(w, Mode::Row(b), b)?.cohomology(a + b, false).dim))
}

#[derive(Clone, Debug)]
pub struct SectionsResult {
    pub degree: usize,
    pub dim: usize,
    pub stabilized: bool,
    pub window: i32,
    pub used_max_window: bool,
    pub history: Vec<(i32, usize)>,
    /// each section in reference coordinates
    pub sections: Vec<PolyVector>,
    /// `per_chart[s][j]`: section s written on chart j
    pub per_chart: Vec<Vec<PolyVector>>,
}

/// Global sections of `∧^q T`: the kernel of δ on level 0.
pub fn global_sections(atlas: &Atlas, q: usize, start: i32, max: i32) -> Result<SectionsResult, CechError> {
    let cx = CechHyperComplex::without_bivector(atlas)?;
    if q > cx.dim() {
        return Ok(SectionsResult {
            degree: q,
            dim: 0,
            stabilized: true,
            window: start,
            used_max_window: false,
            history: vec![],
            sections: vec![],
            per_chart: vec![],
        });
    }
    let s = stabilize(start, max, |w| Ok(cx.window(w, Mode::Row(q), q)?.cohomology(q, false).dim))?;
    let wc = cx.window(s.window, Mode::Row(q), q)?;
    let h = wc.cohomology(q, true);
    let mut sections = Vec::new();
    let mut per_chart = Vec::new();
    for v in &h.representatives {
        let c = wc.to_cochain(q, v);
        let p = c.part(q, &[0]).cloned().unwrap_or_else(|| PolyVector::zero(cx.atlas().ring(0), cx.dim(), q));
        let charts = (0..cx.atlas().len()).map(|j| cx.to_chart(&p, j)).collect::<Result<Vec<_>, _>>()?;
        sections.push(p);
        per_chart.push(charts);
    }
    Ok(SectionsResult {
        degree: q,
        dim: s.dim,
        stabilized: s.stabilized,
        window: s.window,
        used_max_window: s.used_max_window,
        history: s.history,
        sections,
        per_chart,
    })
}
