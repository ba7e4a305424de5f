//! Chart atlases with rational transitions and per-chart bivectors.

use std::collections::BTreeMap;

use crate::exact_algebra::{MultiPoly, Truncation, Vars};
use crate::multivector::{pushforward, ChartMap, PolyVector};

use super::CechError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub name: String,
    pub coords: Vec<String>,
}

/// Charts `U_0..U_{N-1}` of one dimension `n`, optional deformation
/// parameters `t` (shared by every chart ring), transitions
/// `f_jk: z_k ↦ z_j` for every ordered pair, and a bivector `Λ_j` per chart.
/// Chart 0 is the reference chart.
#[derive(Clone, Debug)]
pub struct Atlas {
    charts: Vec<Chart>,
    dim: usize,
    params: Vec<String>,
    order: u32,
    rings: Vec<Vars>,
    maps: BTreeMap<(usize, usize), ChartMap>,
    bivectors: Vec<PolyVector>,
}

/// Outcome of the pairwise gluing check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlueStatus {
    Glued,
    Failed,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluePair {
    pub j: usize,
    pub k: usize,
    pub holds: Option<bool>,
    /// `f_jk* Λ_k − Λ_j` when nonzero
    pub difference: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueReport {
    pub status: GlueStatus,
    pub pairs: Vec<GluePair>,
}

impl GlueReport {
    pub fn failing(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().filter(|p| p.holds == Some(false)).map(|p| (p.j, p.k)).collect()
    }
}

impl Atlas {
    /// `maps[(j,k)]` must be given for every ordered pair j ≠ k; each map's
    /// source ring is chart k's ring and its target ring chart j's ring.
    pub fn new(
        charts: Vec<Chart>,
        params: Vec<String>,
        order: u32,
        maps: BTreeMap<(usize, usize), ChartMap>,
        bivectors: Option<Vec<PolyVector>>,
    ) -> Result<Self, CechError> {
        let dim = charts.first().map(|c| c.coords.len()).ok_or(CechError::Atlas("no charts".into()))?;
        let mut rings = Vec::new();
        for c in &charts {
            if c.coords.len() != dim {
                return Err(CechError::Atlas(format!("chart {} has the wrong dimension", c.name)));
            }
            rings.push(Vars::new(c.coords.iter().chain(params.iter()).cloned()));
        }
        let nch = charts.len();
        for j in 0..nch {
            for k in 0..nch {
                if j == k {
                    continue;
                }
                let m = maps
                    .get(&(j, k))
                    .ok_or_else(|| CechError::Atlas(format!("missing transition {} <- {}", charts[j].name, charts[k].name)))?;
                if m.source() != &rings[k] || m.target() != &rings[j] {
                    return Err(CechError::Atlas(format!(
                        "transition {} <- {} has mismatched variables",
                        charts[j].name, charts[k].name
                    )));
                }
            }
        }
        let bivectors = match bivectors {
            Some(b) => {
                if b.len() != nch {
                    return Err(CechError::Atlas("one bivector per chart required".into()));
                }
                for (j, l) in b.iter().enumerate() {
                    if l.vars() != &rings[j] || l.degree() != 2 || l.dim() != dim {
                        return Err(CechError::Atlas(format!("bivector on chart {} is malformed", charts[j].name)));
                    }
                }
                b
            }
            None => rings.iter().map(|r| PolyVector::zero(r, dim, 2)).collect(),
        };
        let a = Atlas { charts, dim, params, order, rings, maps, bivectors };
        let bad = a.cocycle_failures()?;
        if let Some((i, j, k)) = bad.first() {
            return Err(CechError::Atlas(format!(
                "transition cocycle fails: f_{}{} ∘ f_{}{} ≠ f_{}{}",
                a.charts[*i].name, a.charts[*j].name, a.charts[*j].name, a.charts[*k].name, a.charts[*i].name, a.charts[*k].name
            )));
        }
        Ok(a)
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn ring(&self, j: usize) -> &Vars {
        &self.rings[j]
    }

    pub fn bivector(&self, j: usize) -> &PolyVector {
        &self.bivectors[j]
    }

    pub fn bivectors(&self) -> &[PolyVector] {
        &self.bivectors
    }

    pub fn truncation(&self) -> Truncation {
        Truncation::new((self.dim..self.dim + self.params.len()).collect(), self.order)
    }

    /// `f_jk: z_k ↦ z_j`.
    pub fn map(&self, j: usize, k: usize) -> ChartMap {
        if j == k {
            return ChartMap::identity(&self.rings[j], self.dim, self.order);
        }
        self.maps[&(j, k)].clone()
    }

    pub fn maps(&self) -> &BTreeMap<(usize, usize), ChartMap> {
        &self.maps
    }

    /// Replaces the bivectors (validated as in [`Atlas::new`]).
    pub fn with_bivectors(&self, b: Vec<PolyVector>) -> Result<Atlas, CechError> {
        Atlas::new(self.charts.clone(), self.params.clone(), self.order, self.maps.clone(), Some(b))
    }

    /// Triples (i,j,k) where `f_ij ∘ f_jk ≠ f_ik` modulo t^{N+1}.
    pub fn cocycle_failures(&self) -> Result<Vec<(usize, usize, usize)>, CechError> {
        let n = self.len();
        let tr = self.truncation();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == j || j == k {
                        continue;
                    }
                    let fij = self.map(i, j);
                    let fjk = self.map(j, k);
                    let fik = self.map(i, k);
                    for a in 0..self.dim {
                        let lhs = fjk.pullback(&fij.component(a))?.truncate(&tr);
                        let rhs = fik.component(a).truncate(&tr);
                        if lhs != rhs {
                            bad.push((i, j, k));
                            break;
                        }
                    }
                }
            }
        }
        Ok(bad)
    }

    /// Checks `f_jk* Λ_k = Λ_j` for every pair j < k (modulo t^{N+1}).
    /// With a window, a pair whose fields exceed it is inconclusive unless
    /// the in-window parts already disagree.
    pub fn glue_check(&self, window: Option<i32>) -> Result<GlueReport, CechError> {
        let tr = self.truncation();
        let mut pairs = Vec::new();
        for j in 0..self.len() {
            for k in j + 1..self.len() {
                let pushed = pushforward(&self.bivectors[k], &self.map(j, k), &self.map(k, j))?.truncate(&tr);
                let target = self.bivectors[j].truncate(&tr);
                let (holds, diff) = match window {
                    None => {
                        let d = pushed.sub(&target);
                        (Some(d.is_zero()), d)
                    }
                    Some(w) => {
                        let (pw, lost_a) = pushed.window(w);
                        let (tw, lost_b) = target.window(w);
                        let d = pw.sub(&tw);
                        if !d.is_zero() {
                            (Some(false), d)
                        } else if lost_a || lost_b {
                            (None, d)
                        } else {
                            (Some(true), d)
                        }
                    }
                };
                pairs.push(GluePair {
                    j,
                    k,
                    holds,
                    difference: if diff.is_zero() { None } else { Some(diff.to_string()) },
                });
            }
        }
        let status = if pairs.iter().any(|p| p.holds == Some(false)) {
            GlueStatus::Failed
        } else if pairs.iter().any(|p| p.holds.is_none()) {
            GlueStatus::Inconclusive
        } else {
            GlueStatus::Glued
        };
        Ok(GlueReport { status, pairs })
    }

    /// The parameter-free atlas at t = 0.
    pub fn at_zero(&self) -> Result<Atlas, CechError> {
        let n = self.dim;
        let rings: Vec<Vars> = self.charts.iter().map(|c| Vars::new(c.coords.clone())).collect();
        let tr = self.truncation();
        let proj = |p: &MultiPoly, to: &Vars| -> MultiPoly {
            let z = tr.at_zero(p);
            MultiPoly::from_terms(to, z.terms().iter().map(|(e, c)| (e[..n].to_vec(), c.clone())))
        };
        let mut maps = BTreeMap::new();
        for (&(j, k), m) in &self.maps {
            let comps = (0..n)
                .map(|a| (proj(m.numerator(a), &rings[k]), proj(m.denominator(a), &rings[k])))
                .collect();
            maps.insert((j, k), ChartMap::new(&rings[k], &rings[j], 0, 0, comps)?);
        }
        let bivectors = self
            .bivectors
            .iter()
            .enumerate()
            .map(|(j, l)| l.map_coeffs(&rings[j], n, |c| proj(c, &rings[j])))
            .collect();
        Atlas::new(self.charts.clone(), Vec::new(), 0, maps, Some(bivectors))
    }
}
