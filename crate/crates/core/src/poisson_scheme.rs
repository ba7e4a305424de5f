//! Affine Poisson schemes `Spec ℚ[x₁..x_n]/I` with bivector Λ: Poisson
//! ideals, Poisson derivations, first-order deformations, the conormal
//! description of PT¹ for a surjection, and trivial square-zero extensions.
//!
//! Every module-theoretic space is truncated by coefficient degree. Modules
//! are cyclic quotients `M = B/J`, with the bracket `{a, m}` given by a
//! bivector (normally Λ itself) and reduced modulo `J`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_algebra::{
    monomials, AlgebraError, Exponent, GroebnerBasis, MultiPoly, Scalar, Span, SparseMatrix, SparseVec, Vars,
};
use crate::lp_affine::{HpTable, LpComplex, LpError};
use crate::multivector::{jacobi_defect, MultivectorError, PolyVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PoissonError {
    #[error("bivector is not Poisson: [Λ,Λ] = {0}")]
    NotPoisson(String),
    #[error("polynomial input required: {0}")]
    Laurent(String),
    #[error("variables differ: {0}")]
    Vars(String),
    #[error("ideal is not Poisson: {{{var}, g{generator}}} has normal form {remainder}")]
    NotPoissonIdeal { generator: usize, var: String, remainder: String },
    #[error("this operation needs an empty ideal")]
    IdealNotEmpty,
    #[error("module axiom fails: {0}")]
    ModuleAxiom(String),
    #[error("module is not annihilated by the ideal: {0}")]
    NotOverQuotient(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Multivector(#[from] MultivectorError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn total_degree(p: &MultiPoly) -> i32 {
    p.total_degree().unwrap_or(0)
}

fn is_homogeneous_poly(p: &MultiPoly) -> bool {
    p.is_zero() || p.is_homogeneous()
}

fn is_homogeneous_bivector(l: &PolyVector) -> bool {
    let mut degs = l.terms().values().flat_map(|c| c.terms().keys().map(|e| e.iter().sum::<i32>()));
    match degs.next() {
        None => true,
        Some(d) => degs.all(|x| x == d),
    }
}

fn max_coeff_degree(l: &PolyVector) -> i32 {
    l.terms().values().filter_map(|c| c.total_degree()).max().unwrap_or(0)
}

/// Ambient ring `ℚ[vars]` with a Poisson bivector and ideal generators.
#[derive(Clone, Debug)]
pub struct PoissonPresentation {
    pub vars: Vars,
    pub lambda: PolyVector,
    pub ideal: Vec<MultiPoly>,
}

impl PoissonPresentation {
    pub fn new(lambda: &PolyVector, ideal: &[MultiPoly]) -> Result<Self, PoissonError> {
        if lambda.degree() != 2 {
            return Err(MultivectorError::WrongDegree { expected: 2, found: lambda.degree() }.into());
        }
        if lambda.is_laurent() {
            return Err(PoissonError::Laurent(lambda.to_string()));
        }
        let defect = jacobi_defect(lambda)?;
        if !defect.is_zero() {
            return Err(PoissonError::NotPoisson(defect.to_string()));
        }
        for g in ideal {
            if g.vars() != lambda.vars() {
                return Err(PoissonError::Vars(format!("generator {g} is not over [{}]", lambda.vars().names().join(","))));
            }
            if g.is_laurent() {
                return Err(PoissonError::Laurent(g.to_string()));
            }
        }
        let ideal = ideal.iter().filter(|g| !g.is_zero()).cloned().collect();
        Ok(PoissonPresentation { vars: lambda.vars().clone(), lambda: lambda.clone(), ideal })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn bracket(&self, f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
        self.lambda.bracket_functions(f, g).expect("bivector")
    }

    pub fn var(&self, i: usize) -> MultiPoly {
        MultiPoly::var(&self.vars, i)
    }

    pub fn is_homogeneous(&self) -> bool {
        is_homogeneous_bivector(&self.lambda) && self.ideal.iter().all(is_homogeneous_poly)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailingPair {
    pub generator: usize,
    pub variable: usize,
    /// normal form of `{x_variable, g_generator}` modulo I
    pub remainder: MultiPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealCheck {
    pub is_poisson: bool,
    pub failing: Option<FailingPair>,
}

/// `{x_j, g_i} ∈ I` for every variable and generator (which suffices, the
/// bracket being a biderivation).
pub fn is_poisson_ideal(p: &PoissonPresentation) -> Result<IdealCheck, PoissonError> {
    if p.ideal.is_empty() {
        return Ok(IdealCheck { is_poisson: true, failing: None });
    }
    let gb = GroebnerBasis::new(&p.ideal)?;
    for (i, g) in p.ideal.iter().enumerate() {
        for j in 0..p.nvars() {
            let r = gb.reduce(&p.bracket(&p.var(j), g))?;
            if !r.is_zero() {
                return Ok(IdealCheck {
                    is_poisson: false,
                    failing: Some(FailingPair { generator: i, variable: j, remainder: r }),
                });
            }
        }
    }
    Ok(IdealCheck { is_poisson: true, failing: None })
}

fn require_poisson_ideal(p: &PoissonPresentation) -> Result<(), PoissonError> {
    let c = is_poisson_ideal(p)?;
    match c.failing {
        None => Ok(()),
        Some(f) => Err(PoissonError::NotPoissonIdeal {
            generator: f.generator,
            var: p.vars.name(f.variable).to_string(),
            remainder: f.remainder.to_string(),
        }),
    }
}

/// One coefficient-degree block of a bounded-degree computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBlock {
    pub degree: i32,
    pub dim: usize,
    pub representatives: Vec<PolyVector>,
}

/// Per-degree output of the affine LP complex. With `graded` false (Λ not
/// homogeneous) block `d` describes everything of coefficient degree ≤ d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub graded: bool,
    pub blocks: Vec<DegreeBlock>,
}

impl DegreeReport {
    fn from_table(t: HpTable) -> Self {
        DegreeReport {
            graded: t.graded,
            blocks: t
                .entries
                .into_iter()
                .map(|e| DegreeBlock { degree: e.degree, dim: e.dim, representatives: e.representatives })
                .collect(),
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.dim).collect()
    }
}

/// Poisson derivations of `B = ℚ[x]`: vector fields `X` with `[Λ, X] = 0`,
/// per coefficient degree ≤ `bound`.
pub fn poisson_derivations(p: &PoissonPresentation, bound: i32) -> Result<DegreeReport, PoissonError> {
    if !p.ideal.is_empty() {
        return Err(PoissonError::IdealNotEmpty);
    }
    let r = DegreeReport::from_table(LpComplex::new(&p.lambda)?.hp(1, bound, true)?);
    for b in &r.blocks {
        for x in &b.representatives {
            debug_assert!(p.lambda.schouten(x)?.is_zero());
        }
    }
    Ok(r)
}

/// First-order deformations `Λ₀ + εΛ′` modulo `Λ′ ~ Λ′ + [Λ₀, X]`, i.e. affine
/// `HP²` per coefficient degree ≤ `bound`.
pub fn first_order_deformations(p: &PoissonPresentation, bound: i32) -> Result<DegreeReport, PoissonError> {
    if !p.ideal.is_empty() {
        return Err(PoissonError::IdealNotEmpty);
    }
    let r = DegreeReport::from_table(LpComplex::new(&p.lambda)?.hp(2, bound, true)?);
    for b in &r.blocks {
        for l in &b.representatives {
            if !is_first_order_poisson(&p.lambda, l)? {
                return Err(PoissonError::NotPoisson(format!("representative {l}")));
            }
        }
    }
    Ok(r)
}

/// `[Λ₀+εΛ′, Λ₀+εΛ′] = 0` in `ℚ[ε]/(ε²)`: the ε⁰ part is `[Λ₀,Λ₀]` and the
/// ε¹ part `2[Λ₀,Λ′]`.
pub fn is_first_order_poisson(l0: &PolyVector, l1: &PolyVector) -> Result<bool, PoissonError> {
    Ok(l0.schouten(l0)?.is_zero() && l0.schouten(l1)?.is_zero())
}

/// Whether `θ(x_i) = x_i + εX(x_i)` is a Poisson map from
/// `(B[ε], Λ₀ + εΛ₂)` to `(B[ε], Λ₀ + εΛ₁)`, checked on coordinate pairs:
/// `θ{x_i,x_j}₂ = {θx_i, θx_j}₁` modulo ε².
pub fn substitution_relates(
    l0: &PolyVector,
    l1: &PolyVector,
    l2: &PolyVector,
    x: &PolyVector,
) -> Result<bool, PoissonError> {
    if x.degree() != 1 {
        return Err(MultivectorError::WrongDegree { expected: 1, found: x.degree() }.into());
    }
    let vars = l0.vars();
    let n = l0.dim();
    let xi = |i: usize| MultiPoly::var(vars, i);
    let apply = |f: &MultiPoly| {
        let mut r = MultiPoly::zero(vars);
        for k in 0..n {
            r = &r + &(&x.coeff(&[k]) * &f.partial(k));
        }
        r
    };
    for i in 0..n {
        for j in i + 1..n {
            let pi = l0.bracket_functions(&xi(i), &xi(j))?;
            // ε-parts of both sides
            let lhs = &l2.bracket_functions(&xi(i), &xi(j))? + &apply(&pi);
            let rhs = &(&l1.bracket_functions(&xi(i), &xi(j))? + &l0.bracket_functions(&x.coeff(&[i]), &xi(j))?)
                + &l0.bracket_functions(&xi(i), &x.coeff(&[j]))?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A cyclic Poisson module `M = B/J`, bracket `{a, m} = π(da, dm) mod J`.
#[derive(Clone, Debug)]
pub struct QuotientModule {
    vars: Vars,
    relations: Vec<MultiPoly>,
    gb: Option<GroebnerBasis>,
    action: PolyVector,
}

impl QuotientModule {
    pub fn new(relations: &[MultiPoly], action: &PolyVector) -> Result<Self, PoissonError> {
        if action.degree() != 2 {
            return Err(MultivectorError::WrongDegree { expected: 2, found: action.degree() }.into());
        }
        for r in relations {
            if r.vars() != action.vars() {
                return Err(PoissonError::Vars(format!("relation {r}")));
            }
        }
        let relations: Vec<MultiPoly> = relations.iter().filter(|r| !r.is_zero()).cloned().collect();
        let gb = if relations.is_empty() { None } else { Some(GroebnerBasis::new(&relations)?) };
        Ok(QuotientModule { vars: action.vars().clone(), relations, gb, action: action.clone() })
    }

    /// `B` acting on itself.
    pub fn adjoint(p: &PoissonPresentation) -> Self {
        QuotientModule::new(&[], &p.lambda).expect("valid")
    }

    /// `B/J` with the bracket induced from Λ.
    pub fn quotient(p: &PoissonPresentation, relations: &[MultiPoly]) -> Result<Self, PoissonError> {
        QuotientModule::new(relations, &p.lambda)
    }

    pub fn zero(p: &PoissonPresentation) -> Self {
        QuotientModule::new(&[MultiPoly::one(&p.vars)], &p.lambda).expect("valid")
    }

    pub fn relations(&self) -> &[MultiPoly] {
        &self.relations
    }

    pub fn action(&self) -> &PolyVector {
        &self.action
    }

    pub fn is_zero_module(&self) -> bool {
        self.gb.as_ref().is_some_and(|g| g.is_unit())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.relations.iter().all(is_homogeneous_poly) && is_homogeneous_bivector(&self.action)
    }

    pub fn normal_form(&self, m: &MultiPoly) -> MultiPoly {
        match &self.gb {
            None => m.clone(),
            Some(g) => g.reduce(m).expect("polynomial"),
        }
    }

    pub fn contains_relation(&self, f: &MultiPoly) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn mul(&self, b: &MultiPoly, m: &MultiPoly) -> MultiPoly {
        self.normal_form(&(b * m))
    }

    pub fn bracket(&self, a: &MultiPoly, m: &MultiPoly) -> MultiPoly {
        self.normal_form(&self.action.bracket_functions(a, m).expect("bivector"))
    }

    /// Standard monomials (a basis of `M`) of total degree ≤ `d`.
    pub fn standard_monomials(&self, d: i32) -> Vec<Exponent> {
        let n = self.vars.len();
        let mut out = Vec::new();
        for k in 0..=d.max(-1) {
            for e in monomials(n, k) {
                if self.gb.as_ref().map_or(true, |g| g.is_standard(&e)) {
                    out.push(e);
                }
            }
        }
        out
    }
}

/// Outcome of an exhaustive identity check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }
}

/// The Poisson-module axioms on variables `a, b` and standard monomials `m`
/// of degree ≤ `bound`, plus `{x_j, J} ⊂ J` (well-definedness):
/// `{a, bm} = {a,b}m + b{a,m}`, `{ab, m} = a{b,m} + b{a,m}`,
/// `{{a,b}, m} = {a,{b,m}} − {b,{a,m}}`.
pub fn validate_module(p: &PoissonPresentation, m: &QuotientModule, bound: i32) -> AxiomReport {
    let mut rep = AxiomReport::default();
    if m.vars != p.vars {
        rep.check(false, || "module and ring have different variables".into());
        return rep;
    }
    let n = p.nvars();
    let rels: Vec<MultiPoly> = m.gb.as_ref().map(|g| g.polys().to_vec()).unwrap_or_default();
    for j in 0..n {
        for r in &rels {
            let b = m.bracket(&p.var(j), r);
            rep.check(b.is_zero(), || format!("{{{}, {r}}} ∉ J", p.vars.name(j)));
        }
    }
    let ms: Vec<MultiPoly> = m
        .standard_monomials(bound)
        .into_iter()
        .map(|e| MultiPoly::monomial(&p.vars, e, Scalar::one()))
        .collect();
    for a in 0..n {
        for b in 0..n {
            let (xa, xb) = (p.var(a), p.var(b));
            let ab = p.bracket(&xa, &xb);
            for s in &ms {
                let l1 = m.bracket(&xa, &m.mul(&xb, s));
                let r1 = m.normal_form(&(&(&ab * s) + &(&xb * &m.bracket(&xa, s))));
                rep.check(l1 == r1, || format!("{{a, b·m}} Leibniz at a={xa}, b={xb}, m={s}"));
                let l2 = m.bracket(&(&xa * &xb), s);
                let r2 = m.normal_form(&(&(&xa * &m.bracket(&xb, s)) + &(&xb * &m.bracket(&xa, s))));
                rep.check(l2 == r2, || format!("{{ab, m}} Leibniz at a={xa}, b={xb}, m={s}"));
                let l3 = m.bracket(&ab, s);
                let r3 = &m.bracket(&xa, &m.bracket(&xb, s)) - &m.bracket(&xb, &m.bracket(&xa, s));
                rep.check(l3 == m.normal_form(&r3), || format!("Jacobi at a={xa}, b={xb}, m={s}"));
            }
        }
    }
    rep
}

fn require_module(p: &PoissonPresentation, m: &QuotientModule, bound: i32) -> Result<(), PoissonError> {
    let rep = validate_module(p, m, bound);
    match rep.failures.first() {
        None => Ok(()),
        Some(f) => Err(PoissonError::ModuleAxiom(f.clone())),
    }
}

/// The trivial extension `B ⊕̃ M`.
#[derive(Clone, Debug)]
pub struct TrivialExtension {
    pub ring: PoissonPresentation,
    pub module: QuotientModule,
}

/// An element `(b, m)` of `B ⊕̃ M`.
pub type ExtElement = (MultiPoly, MultiPoly);

impl TrivialExtension {
    pub fn normalize(&self, u: &ExtElement) -> ExtElement {
        (u.0.clone(), self.module.normal_form(&u.1))
    }

    /// `(b₁b₂, b₁m₂ + b₂m₁)`.
    pub fn mul(&self, u: &ExtElement, v: &ExtElement) -> ExtElement {
        (&u.0 * &v.0, self.module.normal_form(&(&(&u.0 * &v.1) + &(&v.0 * &u.1))))
    }

    /// `({b₁,b₂}, −{b₂,m₁} + {b₁,m₂})`.
    pub fn bracket(&self, u: &ExtElement, v: &ExtElement) -> ExtElement {
        let b = self.ring.bracket(&u.0, &v.0);
        let m = &self.module.bracket(&u.0, &v.1) - &self.module.bracket(&v.0, &u.1);
        (b, self.module.normal_form(&m))
    }

    pub fn add(&self, u: &ExtElement, v: &ExtElement) -> ExtElement {
        (&u.0 + &v.0, self.module.normal_form(&(&u.1 + &v.1)))
    }

    pub fn projection(&self, u: &ExtElement) -> MultiPoly {
        u.0.clone()
    }

    /// Test elements: `(x^α, 0)` for `|α| ≤ 1` and `(0, s)` for standard
    /// monomials `s` of `M` of degree ≤ `bound`.
    pub fn test_elements(&self, bound: i32) -> Vec<ExtElement> {
        let v = &self.ring.vars;
        let z = MultiPoly::zero(v);
        let mut out = vec![(MultiPoly::one(v), z.clone())];
        for j in 0..v.len() {
            out.push((MultiPoly::var(v, j), z.clone()));
        }
        for e in self.module.standard_monomials(bound) {
            out.push((z.clone(), MultiPoly::monomial(v, e, Scalar::one())));
        }
        out
    }

    /// Commutativity, associativity, antisymmetry, Jacobi and Leibniz on all
    /// triples of test elements, and that the projection is multiplicative
    /// and bracket-preserving.
    pub fn axiom_report(&self, bound: i32) -> AxiomReport {
        let els = self.test_elements(bound);
        let mut rep = AxiomReport::default();
        let neg = |u: &ExtElement| (-&u.0, -&u.1);
        for u in &els {
            for v in &els {
                rep.check(self.mul(u, v) == self.mul(v, u), || format!("commutativity at {u:?}, {v:?}"));
                rep.check(self.bracket(u, v) == neg(&self.bracket(v, u)), || format!("antisymmetry at {u:?}, {v:?}"));
                rep.check(self.projection(&self.mul(u, v)) == &u.0 * &v.0, || "projection product".into());
                rep.check(
                    self.projection(&self.bracket(u, v)) == self.ring.bracket(&u.0, &v.0),
                    || "projection bracket".into(),
                );
                for w in &els {
                    rep.check(
                        self.mul(&self.mul(u, v), w) == self.mul(u, &self.mul(v, w)),
                        || format!("associativity at {u:?}, {v:?}, {w:?}"),
                    );
                    let j = self.add(
                        &self.add(&self.bracket(u, &self.bracket(v, w)), &self.bracket(v, &self.bracket(w, u))),
                        &self.bracket(w, &self.bracket(u, v)),
                    );
                    rep.check(j.0.is_zero() && j.1.is_zero(), || format!("Jacobi at {u:?}, {v:?}, {w:?}"));
                    let l = self.bracket(u, &self.mul(v, w));
                    let r = self.add(&self.mul(&self.bracket(u, v), w), &self.mul(v, &self.bracket(u, w)));
                    rep.check(l == r, || format!("Leibniz at {u:?}, {v:?}, {w:?}"));
                }
            }
        }
        rep
    }
}

/// Builds `B ⊕̃ M` after validating `M` in degree ≤ `bound`, and reports the
/// extension's own axioms on test elements.
pub fn trivial_extension(
    p: &PoissonPresentation,
    m: &QuotientModule,
    bound: i32,
) -> Result<(TrivialExtension, AxiomReport), PoissonError> {
    if !p.ideal.is_empty() {
        return Err(PoissonError::IdealNotEmpty);
    }
    require_module(p, m, bound)?;
    let ext = TrivialExtension { ring: p.clone(), module: m.clone() };
    let rep = ext.axiom_report(bound);
    Ok((ext, rep))
}

/// Indexes monomials on first sight, turning polynomials into sparse vectors.
#[derive(Default)]
struct MonoIndex {
    index: HashMap<Exponent, usize>,
}

impl MonoIndex {
    fn vec(&mut self, p: &MultiPoly) -> SparseVec {
        let mut v = SparseVec::new();
        for (e, c) in p.terms() {
            let n = self.index.len();
            let k = *self.index.entry(e.clone()).or_insert(n);
            v.insert(k, c.clone());
        }
        v
    }
}

/// `N = I / (I² + {I,I})` through its spanning set `x^α g_k` of degree ≤ R,
/// everything reduced modulo `K = I² + ({g_k, g_l})`.
#[derive(Clone, Debug)]
pub struct ConormalModule {
    gens: Vec<MultiPoly>,
    k_basis: GroebnerBasis,
    bound: i32,
    /// (generator, multiplier exponent) with `|α| + deg g_k ≤ bound`
    spanning: Vec<(usize, Exponent)>,
}

impl ConormalModule {
    pub fn new(p: &PoissonPresentation, bound: i32) -> Result<Self, PoissonError> {
        require_poisson_ideal(p)?;
        let gens = p.ideal.clone();
        let mut kgens = Vec::new();
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i..] {
                kgens.push(a * b);
            }
            for b in &gens[i + 1..] {
                kgens.push(p.bracket(a, b));
            }
        }
        kgens.retain(|g| !g.is_zero());
        if kgens.is_empty() {
            kgens.push(MultiPoly::zero(&p.vars));
        }
        let k_basis = GroebnerBasis::new(&kgens)?;
        let n = p.nvars();
        let mut spanning = Vec::new();
        for (k, g) in gens.iter().enumerate() {
            for d in 0..=bound - total_degree(g) {
                for e in monomials(n, d) {
                    spanning.push((k, e));
                }
            }
        }
        Ok(ConormalModule { gens, k_basis, bound, spanning })
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn bound(&self) -> i32 {
        self.bound
    }

    fn nf(&self, f: &MultiPoly) -> MultiPoly {
        self.k_basis.reduce(f).expect("polynomial")
    }

    fn spanning_element(&self, s: usize) -> MultiPoly {
        let (k, e) = &self.spanning[s];
        self.gens[*k].mul_monomial(e, &Scalar::one())
    }

    /// Columns `NF_K(x^α g_k)` over a shared monomial index, plus the vector of `extra`.
    fn system(&self, extra: &[MultiPoly]) -> (SparseMatrix, Vec<SparseVec>) {
        let mut idx = MonoIndex::default();
        let cols: Vec<SparseVec> = (0..self.spanning.len()).map(|s| idx.vec(&self.nf(&self.spanning_element(s)))).collect();
        let ex: Vec<SparseVec> = extra.iter().map(|f| idx.vec(&self.nf(f))).collect();
        (SparseMatrix::from_columns(idx.index.len(), &cols), ex)
    }

    /// Dimension of the span of `N` in degree ≤ `bound`.
    pub fn dim(&self) -> usize {
        self.system(&[]).0.rank()
    }

    /// Linear relations `Σ c_{k,α} x^α g_k ∈ K` among the spanning set.
    fn relations(&self) -> Vec<SparseVec> {
        self.system(&[]).0.kernel_basis_sparse()
    }

    /// Coefficients `c_{k,α}` with `f ≡ Σ c_{k,α} x^α g_k (mod K)`, if `f`
    /// is in the span within the bound.
    fn express(&self, f: &MultiPoly) -> Option<Vec<(usize, Exponent, Scalar)>> {
        let (m, ex) = self.system(std::slice::from_ref(f));
        let mut b = vec![Scalar::zero(); m.rows()];
        for (k, c) in &ex[0] {
            b[*k] = c.clone();
        }
        let sol = m.solve(&b)?;
        Some(
            sol.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(s, c)| (self.spanning[s].0, self.spanning[s].1.clone(), c))
                .collect(),
        )
    }
}

/// A Poisson-module map `φ: I/(I²+{I,I}) → M`, fixed by the generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonModuleHom {
    /// `deg φ(g_k) ≤ deg g_k + degree − 1`
    pub degree: i32,
    pub images: Vec<MultiPoly>,
}

impl PoissonModuleHom {
    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|m| m.is_zero())
    }

    fn apply_combination(&self, m: &QuotientModule, comb: &[(usize, Exponent, Scalar)]) -> MultiPoly {
        let mut r = MultiPoly::zero(&m.vars);
        for (k, e, c) in comb {
            r = &r + &self.images[*k].mul_monomial(e, c);
        }
        m.normal_form(&r)
    }

    /// `φ(f)` for `f ∈ I` within the conormal bound.
    pub fn apply(&self, n: &ConormalModule, m: &QuotientModule, f: &MultiPoly) -> Option<MultiPoly> {
        Some(self.apply_combination(m, &n.express(f)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pt1Block {
    pub degree: i32,
    pub dim: usize,
    pub homs: Vec<PoissonModuleHom>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pt1Report {
    /// ideal, module and Λ homogeneous: blocks are the graded pieces
    pub exact: bool,
    /// relations among `x^α g_k` are imposed up to this total degree
    pub check_degree: i32,
    pub blocks: Vec<Pt1Block>,
}

impl Pt1Report {
    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.dim).collect()
    }
}

fn default_check_degree(p: &PoissonPresentation, bound: i32) -> i32 {
    let g = p.ideal.iter().map(total_degree).max().unwrap_or(0);
    (2 * g + max_coeff_degree(&p.lambda).max(1)).max(g + bound + 1)
}

/// `Hom(I/(I²+{I,I}), M)` of Poisson modules, per degree `d ≤ bound`, where a
/// map of degree `d` sends `g_k` into `M` in degree ≤ `deg g_k + d − 1`.
pub fn pt1_surjection(p: &PoissonPresentation, m: &QuotientModule, bound: i32) -> Result<Pt1Report, PoissonError> {
    pt1_surjection_checked(p, m, bound, default_check_degree(p, bound))
}

pub fn pt1_surjection_checked(
    p: &PoissonPresentation,
    m: &QuotientModule,
    bound: i32,
    check_degree: i32,
) -> Result<Pt1Report, PoissonError> {
    require_poisson_ideal(p)?;
    let module_bound = p.ideal.iter().map(total_degree).max().unwrap_or(0) + bound;
    require_module(p, m, module_bound)?;
    for g in &p.ideal {
        if !m.contains_relation(g) {
            return Err(PoissonError::NotOverQuotient(g.to_string()));
        }
    }
    let exact = p.is_homogeneous() && m.is_homogeneous();
    if p.ideal.is_empty() || m.is_zero_module() {
        let blocks = (0..=bound).map(|d| Pt1Block { degree: d, dim: 0, homs: Vec::new() }).collect();
        return Ok(Pt1Report { exact, check_degree, blocks });
    }
    let n = ConormalModule::new(p, check_degree)?;
    let relations = n.relations();
    // cofactors of {x_j, g_k}
    let mut bracket_terms = Vec::new();
    for (k, g) in p.ideal.iter().enumerate() {
        for j in 0..p.nvars() {
            let b = p.bracket(&p.var(j), g);
            let comb = n.express(&b).ok_or_else(|| {
                PoissonError::NotOverQuotient(format!("{{{}, g{k}}} has no cofactors in degree ≤ {check_degree}", p.vars.name(j)))
            })?;
            bracket_terms.push((j, k, comb));
        }
    }
    // unknowns: coefficient of standard monomial s in φ(g_k)
    let degs: Vec<i32> = p.ideal.iter().map(total_degree).collect();
    let mut unknowns: Vec<(usize, Exponent)> = Vec::new();
    for (k, dg) in degs.iter().enumerate() {
        for s in m.standard_monomials(dg + bound - 1) {
            unknowns.push((k, s));
        }
    }
    let mut span = Span::new();
    let mut blocks = Vec::new();
    for d in 0..=bound {
        let active: Vec<usize> = (0..unknowns.len())
            .filter(|&u| unknowns[u].1.iter().sum::<i32>() <= degs[unknowns[u].0] + d - 1)
            .collect();
        let mut rows: HashMap<(usize, Exponent), usize> = HashMap::new();
        let mut cols: Vec<SparseVec> = Vec::new();
        for &u in &active {
            let (k, s) = &unknowns[u];
            let sm = MultiPoly::monomial(&p.vars, s.clone(), Scalar::one());
            let mut col: BTreeMap<(usize, Exponent), Scalar> = BTreeMap::new();
            let mut put = |cond: usize, f: &MultiPoly, c: &Scalar| {
                for (e, x) in f.terms() {
                    *col.entry((cond, e.clone())).or_insert_with(Scalar::zero) += c * x;
                }
            };
            for (r, rel) in relations.iter().enumerate() {
                for (sidx, c) in rel {
                    let (kk, alpha) = &n.spanning[*sidx];
                    if kk == k {
                        put(r, &m.normal_form(&sm.mul_monomial(alpha, &Scalar::one())), c);
                    }
                }
            }
            let base = relations.len();
            for (t, (j, kk, comb)) in bracket_terms.iter().enumerate() {
                // φ({x_j, g_kk}) − {x_j, φ(g_kk)}
                for (k2, alpha, c) in comb {
                    if k2 == k {
                        put(base + t, &m.normal_form(&sm.mul_monomial(alpha, &Scalar::one())), c);
                    }
                }
                if kk == k {
                    put(base + t, &m.bracket(&p.var(*j), &sm), &-Scalar::one());
                }
            }
            let mut v = SparseVec::new();
            for (key, x) in col {
                if x.is_zero() {
                    continue;
                }
                let nr = rows.len();
                let r = *rows.entry(key).or_insert(nr);
                v.insert(r, x);
            }
            cols.push(v);
        }
        let mat = SparseMatrix::from_columns(rows.len(), &cols);
        let mut homs = Vec::new();
        for kv in mat.kernel_basis_sparse() {
            let global: SparseVec = kv.iter().map(|(i, c)| (active[*i], c.clone())).collect();
            if span.insert(&global) {
                let mut images = vec![MultiPoly::zero(&p.vars); p.ideal.len()];
                for (u, c) in &global {
                    let (k, s) = &unknowns[*u];
                    images[*k].add_term(s.clone(), c.clone());
                }
                homs.push(PoissonModuleHom { degree: d, images });
            }
        }
        blocks.push(Pt1Block { degree: d, dim: homs.len(), homs });
    }
    Ok(Pt1Report { exact, check_degree, blocks })
}

/// Both hom conditions on `n = x^α g_k` with `|α| ≤ 1`:
/// `φ(x_j n) = x_j φ(n)` and `φ({x_j, n}) = {x_j, φ(n)}`.
pub fn verify_hom(
    p: &PoissonPresentation,
    m: &QuotientModule,
    hom: &PoissonModuleHom,
    check_degree: i32,
) -> Result<AxiomReport, PoissonError> {
    let n = ConormalModule::new(p, check_degree)?;
    let mut rep = AxiomReport::default();
    let nv = p.nvars();
    for (k, g) in p.ideal.iter().enumerate() {
        let mut sources = vec![g.clone()];
        for j in 0..nv {
            sources.push(&p.var(j) * g);
        }
        for src in &sources {
            let Some(phi) = hom.apply(&n, m, src) else { continue };
            for j in 0..nv {
                let xj = p.var(j);
                if let Some(l) = hom.apply(&n, m, &(&xj * src)) {
                    rep.check(l == m.mul(&xj, &phi), || format!("B-linearity at x_{j}·({src}), g{k}"));
                }
                if let Some(l) = hom.apply(&n, m, &p.bracket(&xj, src)) {
                    rep.check(l == m.bracket(&xj, &phi), || format!("bracket at {{x_{j}, {src}}}"));
                }
            }
        }
    }
    Ok(rep)
}
