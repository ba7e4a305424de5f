//! Built-in atlases: projective space and the Hirzebruch family.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::exact_algebra::{MultiPoly, Scalar, Vars};
use crate::multivector::{pushforward, ChartMap, PolyVector};

use super::{Atlas, CechError, Chart};

fn mono(vars: &Vars, e: &[i32], c: i64) -> MultiPoly {
    MultiPoly::monomial(vars, e.to_vec(), Scalar::from_integer(c.into()))
}

/// Default chart-0 names for ℙⁿ.
pub fn pn_names(n: usize) -> Vec<String> {
    match n {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "w".into()],
        _ => (1..=n).map(|i| format!("z{i}")).collect(),
    }
}

/// Standard charts `U_i = {z_i ≠ 0}` of ℙⁿ. Chart 0 uses `names` (for
/// z_1/z_0, …, z_n/z_0); chart i>0 uses `z{l}_{i}` for z_l/z_i.
///
/// With `lambda` (a bivector on chart 0, possibly depending on trailing
/// parameter variables) the other charts receive its pushforward, which must
/// be polynomial there.
pub fn pn(n: usize, names: &[String], lambda: Option<&PolyVector>, order: u32) -> Result<Atlas, CechError> {
    if n == 0 || names.len() != n {
        return Err(CechError::Atlas(format!("ℙ^{n} needs {n} chart coordinates")));
    }
    let params: Vec<String> = match lambda {
        Some(l) => {
            if l.dim() != n || l.vars().names()[..n] != names[..] {
                return Err(CechError::Atlas("bivector is not written in the chart-0 coordinates".into()));
            }
            l.vars().names()[n..].to_vec()
        }
        None => Vec::new(),
    };
    let mut charts = Vec::new();
    for i in 0..=n {
        let coords = if i == 0 {
            names.to_vec()
        } else {
            (0..=n).filter(|&l| l != i).map(|l| format!("z{l}_{i}")).collect()
        };
        charts.push(Chart { name: format!("U{i}"), coords });
    }
    let rings: Vec<Vars> = charts.iter().map(|c| Vars::new(c.coords.iter().chain(params.iter()).cloned())).collect();
    // position of homogeneous coordinate l among chart i's coordinates
    let pos = |i: usize, l: usize| if l < i { l } else { l - 1 };
    let np = params.len();
    let mut maps = BTreeMap::new();
    for j in 0..=n {
        for k in 0..=n {
            if j == k {
                continue;
            }
            let src = &rings[k];
            let coord = |l: usize| -> MultiPoly {
                if l == k {
                    MultiPoly::one(src)
                } else {
                    MultiPoly::var(src, pos(k, l))
                }
            };
            let comps = (0..=n).filter(|&l| l != j).map(|l| (coord(l), coord(j))).collect();
            maps.insert((j, k), ChartMap::new(src, &rings[j], np, order, comps)?);
        }
    }
    let bivectors = match lambda {
        None => None,
        Some(l) => {
            let l0 = PolyVector::zero(&rings[0], n, 2).add(&l.map_coeffs(&rings[0], n, |c| c.with_vars(&rings[0])));
            let mut out = vec![l0.clone()];
            for j in 1..=n {
                let p = pushforward(&l0, &maps[&(j, 0)], &maps[&(0, j)])?;
                if p.is_laurent() {
                    return Err(CechError::NotGlobal(format!("bivector has a pole on chart U{j}: {p}")));
                }
                out.push(p);
            }
            Some(out)
        }
    };
    Atlas::new(charts, params, order, maps, bivectors)
}

/// The Hirzebruch family: charts A=(u,x), B=(u,y), C=(v,w), D=(v,z) glued by
/// u = 1/v, x = v^m w + t v^k, y = 1/x, z = 1/w, carrying the Poisson
/// structure `g(t) x² ∂u∧∂x` on A. `g` lists the coefficients of g(t).
/// Requires m − 2 ≤ 2k ≤ m.
pub fn hirzebruch(m: i32, k: i32, g: &[Scalar], order: u32) -> Result<Atlas, CechError> {
    if k < 0 || 2 * k > m || m - 2 > 2 * k {
        return Err(CechError::Atlas(format!("hirzebruch needs m-2 <= 2k <= m, got m={m}, k={k}")));
    }
    let names = [["u", "x"], ["u", "y"], ["v", "w"], ["v", "z"]];
    let charts: Vec<Chart> = ["A", "B", "C", "D"]
        .iter()
        .zip(names.iter())
        .map(|(n, c)| Chart { name: n.to_string(), coords: c.iter().map(|s| s.to_string()).collect() })
        .collect();
    let rings: Vec<Vars> = names.iter().map(|c| Vars::new([c[0], c[1], "t"])).collect();
    let (a, b, c, d) = (0usize, 1usize, 2usize, 3usize);
    let mk = m - k;
    let mut specs: Vec<((usize, usize), [(Vec<(Vec<i32>, i64)>, Vec<(Vec<i32>, i64)>); 2])> = Vec::new();
    let one = vec![(vec![0, 0, 0], 1)];
    let v0 = |e: [i32; 3], c: i64| vec![(e.to_vec(), c)];
    // (u, 1/y) and friends; each component as numerator / denominator term lists
    specs.push(((a, b), [(v0([1, 0, 0], 1), one.clone()), (one.clone(), v0([0, 1, 0], 1))]));
    specs.push(((b, a), [(v0([1, 0, 0], 1), one.clone()), (one.clone(), v0([0, 1, 0], 1))]));
    specs.push(((c, d), [(v0([1, 0, 0], 1), one.clone()), (one.clone(), v0([0, 1, 0], 1))]));
    specs.push(((d, c), [(v0([1, 0, 0], 1), one.clone()), (one.clone(), v0([0, 1, 0], 1))]));
    let vmw_tvk = vec![(vec![m, 1, 0], 1), (vec![k, 0, 1], 1)];
    let xum_tumk = vec![(vec![m, 1, 0], 1), (vec![mk, 0, 1], -1)];
    let inv_first = (one.clone(), v0([1, 0, 0], 1));
    specs.push(((a, c), [inv_first.clone(), (vmw_tvk.clone(), one.clone())]));
    specs.push(((c, a), [inv_first.clone(), (xum_tumk.clone(), one.clone())]));
    specs.push(((a, d), [inv_first.clone(), (vec![(vec![m, 0, 0], 1), (vec![k, 1, 1], 1)], v0([0, 1, 0], 1))]));
    specs.push(((d, a), [inv_first.clone(), (one.clone(), xum_tumk.clone())]));
    specs.push(((b, c), [inv_first.clone(), (one.clone(), vmw_tvk.clone())]));
    specs.push(((c, b), [inv_first.clone(), (vec![(vec![m, 0, 0], 1), (vec![mk, 1, 1], -1)], v0([0, 1, 0], 1))]));
    specs.push(((b, d), [inv_first.clone(), (v0([0, 1, 0], 1), vec![(vec![m, 0, 0], 1), (vec![k, 1, 1], 1)])]));
    specs.push(((d, b), [inv_first.clone(), (v0([0, 1, 0], 1), vec![(vec![m, 0, 0], 1), (vec![mk, 1, 1], -1)])]));
    let build = |r: &Vars, ts: &[(Vec<i32>, i64)]| {
        let mut p = MultiPoly::zero(r);
        for (e, c) in ts {
            p.add_term(e.clone(), Scalar::from_integer((*c).into()));
        }
        p
    };
    let mut maps = BTreeMap::new();
    for ((j, kk), comps) in specs {
        let src = &rings[kk];
        let comps = comps.iter().map(|(nu, de)| (build(src, nu), build(src, de))).collect();
        maps.insert((j, kk), ChartMap::new(src, &rings[j], 1, order, comps)?);
    }
    let gpoly = |r: &Vars| {
        let mut p = MultiPoly::zero(r);
        for (i, c) in g.iter().enumerate() {
            if !c.is_zero() && (i as u32) <= order {
                p.add_term(vec![0, 0, i as i32], c.clone());
            }
        }
        p
    };
    let e = 2 * k - m + 2;
    let tr = crate::exact_algebra::Truncation::new(vec![2], order);
    let biv = |coeff: MultiPoly| -> Result<PolyVector, CechError> {
        Ok(PolyVector::term(coeff.truncate(&tr), 2, &[0, 1])?)
    };
    let ra = &rings[a];
    let la = biv(tr.mul(&gpoly(ra), &mono(ra, &[0, 2, 0], 1)))?;
    let rb = &rings[b];
    let lb = biv(gpoly(rb).scale(&-Scalar::one()))?;
    let rc = &rings[c];
    let sc = &mono(rc, &[mk, 1, 0], 1) + &mono(rc, &[0, 0, 1], 1);
    let lc = biv(tr.mul(&tr.mul(&gpoly(rc), &mono(rc, &[e, 0, 0], -1)), &tr.mul(&sc, &sc)))?;
    let rd = &rings[d];
    let sd = &mono(rd, &[mk, 0, 0], 1) + &mono(rd, &[0, 1, 1], 1);
    let ld = biv(tr.mul(&tr.mul(&gpoly(rd), &mono(rd, &[e, 0, 0], 1)), &tr.mul(&sd, &sd)))?;
    Atlas::new(charts, vec!["t".into()], order, maps, Some(vec![la, lb, lc, ld]))
}
