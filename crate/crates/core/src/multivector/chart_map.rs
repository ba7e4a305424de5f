//! Rational coordinate changes between charts.

use crate::exact_algebra::{AlgebraError, MultiPoly, Truncation, Vars};

use super::polyvector::PolyVector;
use super::MultivectorError;

/// `z ↦ w = f(z)`: one numerator/denominator pair per target chart
/// coordinate, written in the source ring (chart coordinates followed by
/// `nparams` deformation parameters shared with the target ring).
///
/// Denominators must be a single monomial once the parameters are set to
/// zero; their inverses are then exact Laurent polynomials, expanded as a
/// geometric series modulo `t^{order+1}` when parameters occur.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartMap {
    source: Vars,
    target: Vars,
    dim: usize,
    nparams: usize,
    order: u32,
    nums: Vec<MultiPoly>,
    dens: Vec<MultiPoly>,
}

impl ChartMap {
    pub fn new(
        source: &Vars,
        target: &Vars,
        nparams: usize,
        order: u32,
        components: Vec<(MultiPoly, MultiPoly)>,
    ) -> Result<Self, MultivectorError> {
        let dim = components.len();
        if source.len() != dim + nparams || target.len() != dim + nparams {
            return Err(MultivectorError::Shape(format!(
                "chart map with {dim} components between rings of sizes {} and {}",
                source.len(),
                target.len()
            )));
        }
        if source.names()[dim..] != target.names()[dim..] {
            return Err(MultivectorError::Shape("source and target parameters differ".into()));
        }
        let (nums, dens): (Vec<_>, Vec<_>) = components.into_iter().unzip();
        let m = ChartMap { source: source.clone(), target: target.clone(), dim, nparams, order, nums, dens };
        let tr = m.truncation();
        for (a, d) in m.dens.iter().enumerate() {
            if d.vars() != source || m.nums[a].vars() != source {
                return Err(MultivectorError::Algebra(AlgebraError::VariableMismatch(
                    d.vars().names().join(","),
                    source.names().join(","),
                )));
            }
            if d.is_zero() {
                return Err(MultivectorError::ZeroDenominator(target.name(a).to_string()));
            }
            tr.inverse(d)?;
        }
        Ok(m)
    }

    pub fn identity(vars: &Vars, dim: usize, order: u32) -> Self {
        let comps = (0..dim).map(|i| (MultiPoly::var(vars, i), MultiPoly::one(vars))).collect();
        ChartMap::new(vars, vars, vars.len() - dim, order, comps).expect("identity map")
    }

    pub fn source(&self) -> &Vars {
        &self.source
    }

    pub fn target(&self) -> &Vars {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn numerator(&self, a: usize) -> &MultiPoly {
        &self.nums[a]
    }

    pub fn denominator(&self, a: usize) -> &MultiPoly {
        &self.dens[a]
    }

    /// Truncation on the source ring.
    pub fn truncation(&self) -> Truncation {
        Truncation::new((self.dim..self.dim + self.nparams).collect(), self.order)
    }

    /// `f_a(z)` as a (Laurent, truncated) polynomial in the source ring.
    pub fn component(&self, a: usize) -> MultiPoly {
        let tr = self.truncation();
        let inv = tr.inverse(&self.dens[a]).expect("validated denominator");
        tr.mul(&self.nums[a], &inv)
    }

    /// `1/f_a(z)`, available when the numerator is a monomial at t = 0.
    pub fn inverse_component(&self, a: usize) -> Option<MultiPoly> {
        let tr = self.truncation();
        let inv = tr.inverse(&self.nums[a]).ok()?;
        Some(tr.mul(&self.dens[a], &inv))
    }

    /// Jacobian `J[a][r] = ∂f_a/∂z_r` in the source ring.
    pub fn jacobian(&self) -> Vec<Vec<MultiPoly>> {
        let comps: Vec<MultiPoly> = (0..self.dim).map(|a| self.component(a)).collect();
        comps.iter().map(|c| (0..self.dim).map(|r| c.partial(r)).collect()).collect()
    }

    /// `p ↦ p∘f`: a polynomial on the target chart pulled back to the source.
    pub fn pullback(&self, p: &MultiPoly) -> Result<MultiPoly, MultivectorError> {
        if p.vars() != &self.target {
            return Err(MultivectorError::Algebra(AlgebraError::VariableMismatch(
                p.vars().names().join(","),
                self.target.names().join(","),
            )));
        }
        let mut images = Vec::with_capacity(self.source.len());
        let mut inverses = Vec::with_capacity(self.source.len());
        for a in 0..self.dim {
            images.push(self.component(a));
            inverses.push(self.inverse_component(a));
        }
        for l in 0..self.nparams {
            images.push(MultiPoly::var(&self.source, self.dim + l));
            inverses.push(None);
        }
        let tr = self.truncation();
        Ok(p.substitute(&images, &inverses, Some(&tr))?)
    }

    /// `g∘self` (first `self`, then `g`), as a map with unit denominators.
    pub fn then(&self, g: &ChartMap) -> Result<ChartMap, MultivectorError> {
        if g.source != self.target {
            return Err(MultivectorError::ChartMismatch);
        }
        let mut comps = Vec::new();
        for a in 0..g.dim {
            let num = self.pullback(&g.nums[a])?;
            let den = self.pullback(&g.dens[a])?;
            comps.push((num, den));
        }
        ChartMap::new(&self.source, &g.target, self.nparams, self.order.min(g.order), comps)
    }

    /// The same map with every parameter set to zero.
    pub fn at_zero(&self) -> ChartMap {
        let tr = self.truncation();
        ChartMap {
            source: self.source.clone(),
            target: self.target.clone(),
            dim: self.dim,
            nparams: self.nparams,
            order: self.order,
            nums: self.nums.iter().map(|p| tr.at_zero(p)).collect(),
            dens: self.dens.iter().map(|p| tr.at_zero(p)).collect(),
        }
    }

    /// Source-side chart variables that are inverted on the overlap: those
    /// dividing a denominator (or an inverted numerator) at t = 0.
    pub fn inverted_source_vars(&self) -> Vec<usize> {
        let tr = self.truncation();
        let mut out = std::collections::BTreeSet::new();
        for a in 0..self.dim {
            for e in tr.at_zero(&self.dens[a]).terms().keys() {
                for (i, &x) in e[..self.dim].iter().enumerate() {
                    if x > 0 {
                        out.insert(i);
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}

/// Expresses the source-frame coefficients of `p` in the target frame
/// (Jacobian minors); coefficients stay functions of the source coordinates.
pub fn pushforward_frame(p: &PolyVector, f: &ChartMap) -> Result<PolyVector, MultivectorError> {
    if p.vars() != f.source() {
        return Err(MultivectorError::ChartMismatch);
    }
    Ok(p.change_frame(&f.jacobian(), f.dim(), &f.truncation()))
}

/// `f_* p` written in target coordinates; `finv` is the inverse chart map.
pub fn pushforward(p: &PolyVector, f: &ChartMap, finv: &ChartMap) -> Result<PolyVector, MultivectorError> {
    if finv.source() != f.target() || finv.target() != f.source() {
        return Err(MultivectorError::ChartMismatch);
    }
    let framed = pushforward_frame(p, f)?;
    let mut r = PolyVector::zero(f.target(), f.dim(), p.degree());
    for (i, c) in framed.terms() {
        r.add_term(i.clone(), finv.pullback(c)?);
    }
    Ok(r)
}

/// As [`pushforward`], truncated to Laurent exponents in `[-w, w]`; the flag
/// reports whether any term fell outside the window.
pub fn pushforward_windowed(
    p: &PolyVector,
    f: &ChartMap,
    finv: &ChartMap,
    w: i32,
) -> Result<(PolyVector, bool), MultivectorError> {
    Ok(pushforward(p, f, finv)?.window(w))
}
