//! The infinitesimal deformation class of a family.

use std::collections::BTreeMap;

use crate::exact_algebra::{MultiPoly, Scalar, Vars};
use crate::multivector::PolyVector;

use super::complex::{CechHyperComplex, HyperCochain, Mode};
use super::{Atlas, CechError};

#[derive(Clone, Debug)]
pub struct KsClass {
    /// θ_jk (j < k) in reference coordinates
    pub theta: BTreeMap<(usize, usize), PolyVector>,
    /// Λ′_j on chart j, in chart-j coordinates
    pub lambda_prime: Vec<PolyVector>,
    pub cochain: HyperCochain,
    /// (name, holds) for δθ = 0, δΛ′ + [Λ₀,θ] = 0, [Λ₀,Λ′] = 0 and regularity
    pub checks: Vec<(String, bool)>,
    pub hp2_dim: usize,
    pub stabilized: bool,
    pub window: i32,
    pub used_max_window: bool,
    /// class coordinates in the chosen representative basis
    pub coordinates: Vec<Scalar>,
    /// the representatives used for `coordinates`
    pub basis: Vec<HyperCochain>,
}

impl KsClass {
    pub fn is_trivial(&self) -> bool {
        self.coordinates.iter().all(|c| num_traits::Zero::is_zero(c))
    }
}

fn drop_params(p: &MultiPoly, to: &Vars) -> MultiPoly {
    let n = to.len();
    MultiPoly::from_terms(to, p.terms().iter().map(|(e, c)| (e[..n].to_vec(), c.clone())))
}

/// θ_jk = Σ ∂f^α_jk/∂t|₀ ∂/∂z_j^α and Λ′_j = ∂Λ_j/∂t|₀ along `direction`,
/// verified as a 2-cocycle and reduced to coordinates in `basis` (default:
/// the computed representatives of HP²).
pub fn ks_class(
    family: &Atlas,
    direction: &[Scalar],
    basis: Option<&[HyperCochain]>,
    start: i32,
    max: i32,
) -> Result<KsClass, CechError> {
    if direction.len() != family.params().len() {
        return Err(CechError::Argument(format!(
            "direction has {} entries for {} parameters",
            direction.len(),
            family.params().len()
        )));
    }
    let cx = CechHyperComplex::new(family)?;
    let a0 = cx.atlas();
    let n = family.dim();
    let tr = family.truncation();
    let nch = family.len();
    let mut cochain = HyperCochain::new();
    let mut theta = BTreeMap::new();
    for j in 0..nch {
        for k in j + 1..nch {
            let f = family.map(j, k);
            let rk = a0.ring(k);
            let d: Vec<MultiPoly> =
                (0..n).map(|a| drop_params(&tr.derivative_at_zero(&f.component(a), direction), rk)).collect();
            if d.iter().all(|p| p.is_zero()) {
                continue;
            }
            let to_ref = a0.map(k, 0);
            let pk = d.iter().map(|p| to_ref.pullback(p)).collect::<Result<Vec<_>, _>>()?;
            let jac = a0.map(0, j).jacobian();
            let back = a0.map(j, 0);
            let mut th = PolyVector::zero(a0.ring(0), n, 1);
            for (al, row) in jac.iter().enumerate() {
                let mut c = MultiPoly::zero(a0.ring(0));
                for (r, entry) in row.iter().enumerate() {
                    if entry.is_zero() || pk[r].is_zero() {
                        continue;
                    }
                    c = &c + &(&back.pullback(entry)? * &pk[r]);
                }
                th.add_term(vec![al], c);
            }
            cochain.add(1, vec![j, k], &th);
            theta.insert((j, k), th);
        }
    }
    let mut lambda_prime = Vec::new();
    for j in 0..nch {
        let rj = a0.ring(j);
        let lp = family.bivector(j).map_coeffs(rj, n, |c| drop_params(&tr.derivative_at_zero(c, direction), rj));
        cochain.add(2, vec![j], &cx.from_chart(&lp, j)?);
        lambda_prime.push(lp);
    }
    let d = cx.delta(Mode::Total, &cochain)?;
    let has = |b: usize, level: usize| d.parts.keys().any(|(bb, jj)| *bb == b && jj.len() == level + 1);
    let mut regular = true;
    for ((b, jj), p) in &cochain.parts {
        let _ = b;
        regular &= cx.is_regular(p, jj)?;
    }
    let checks = vec![
        ("regular on every overlap".to_string(), regular),
        ("delta theta = 0".to_string(), !has(1, 2)),
        ("delta Lambda' + [Lambda, theta] = 0".to_string(), !has(2, 1)),
        ("[Lambda, Lambda'] = 0".to_string(), !has(3, 0)),
    ];
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(s, _)| s.as_str()).collect();
    if !failed.is_empty() {
        return Err(CechError::Cocycle(failed.join("; ")));
    }
    let mut w0 = start.max(cx.required_window(&cochain, Mode::Total, 2));
    if let Some(bs) = basis {
        for b in bs {
            w0 = w0.max(cx.required_window(b, Mode::Total, 2));
        }
    }
    let mut history: Vec<(i32, usize)> = Vec::new();
    let mut w = w0;
    let (dim, stabilized) = loop {
        let d0 = match history.last() {
            Some(&(ww, dd)) if ww == w => dd,
            _ => cx.window(w, Mode::Total, 2)?.cohomology(2, false).dim,
        };
        if w >= max {
            break (d0, false);
        }
        let d1 = cx.window(w + 1, Mode::Total, 2)?.cohomology(2, false).dim;
        history.push((w + 1, d1));
        if d0 == d1 {
            break (d0, true);
        }
        w += 1;
    };
    let wc = cx.window(w, Mode::Total, 2)?;
    let h = wc.cohomology(2, true);
    let reps: Vec<HyperCochain> = match basis {
        Some(bs) => bs.to_vec(),
        None => h.representatives.iter().map(|v| wc.to_cochain(2, v)).collect(),
    };
    let coordinates = wc.class_coordinates(2, &cochain, &reps, &h)?;
    Ok(KsClass {
        theta,
        lambda_prime,
        cochain,
        checks,
        hp2_dim: dim,
        stabilized,
        window: w,
        used_max_window: w + 1 >= max,
        coordinates,
        basis: reps,
    })
}
