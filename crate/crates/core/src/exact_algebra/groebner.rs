//! Buchberger's algorithm for ideal membership (degrevlex order).

use std::cmp::Ordering;

use num_traits::One;

use super::poly::{Exponent, MultiPoly};
use super::scalar::Scalar;
use super::AlgebraError;

/// Degree reverse lexicographic order; the first declared variable is largest.
pub fn degrevlex_cmp(a: &[i32], b: &[i32]) -> Ordering {
    let da: i32 = a.iter().sum();
    let db: i32 = b.iter().sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

fn leading(p: &MultiPoly) -> Option<(&Exponent, &Scalar)> {
    p.terms().iter().max_by(|x, y| degrevlex_cmp(x.0, y.0))
}

fn divides(a: &[i32], b: &[i32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn monic(p: &MultiPoly) -> MultiPoly {
    match leading(p) {
        Some((_, c)) => p.scale(&(Scalar::one() / c)),
        None => p.clone(),
    }
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    polys: Vec<MultiPoly>,
}

impl GroebnerBasis {
    /// Completes `gens` to a reduced Gröbner basis.
    pub fn new(gens: &[MultiPoly]) -> Result<Self, AlgebraError> {
        for g in gens {
            if g.is_laurent() {
                return Err(AlgebraError::LaurentInput(g.to_string()));
            }
        }
        if let Some(first) = gens.first() {
            for g in gens {
                if g.vars() != first.vars() {
                    return Err(AlgebraError::VariableMismatch(
                        first.vars().names().join(","),
                        g.vars().names().join(","),
                    ));
                }
            }
        }
        let mut basis: Vec<MultiPoly> = gens.iter().filter(|g| !g.is_zero()).map(monic).collect();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for j in 0..basis.len() {
            for i in 0..j {
                pairs.push((i, j));
            }
        }
        while let Some((i, j)) = pairs.pop() {
            let (li, _) = leading(&basis[i]).unwrap();
            let (lj, _) = leading(&basis[j]).unwrap();
            // coprime leading monomials: the S-polynomial reduces to zero
            if li.iter().zip(lj).all(|(a, b)| *a == 0 || *b == 0) {
                continue;
            }
            let s = s_polynomial(&basis[i], &basis[j]);
            let r = reduce_by(&s, &basis);
            if !r.is_zero() {
                let k = basis.len();
                basis.push(monic(&r));
                for i in 0..k {
                    pairs.push((i, k));
                }
            }
        }
        Ok(GroebnerBasis { polys: interreduce(basis) })
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    /// Normal form of `p`.
    pub fn reduce(&self, p: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        if p.is_laurent() {
            return Err(AlgebraError::LaurentInput(p.to_string()));
        }
        if let Some(g) = self.polys.first() {
            if g.vars() != p.vars() {
                return Err(AlgebraError::VariableMismatch(g.vars().names().join(","), p.vars().names().join(",")));
            }
        }
        Ok(reduce_by(p, &self.polys))
    }

    pub fn contains(&self, p: &MultiPoly) -> Result<bool, AlgebraError> {
        Ok(self.reduce(p)?.is_zero())
    }

    /// True iff the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(|g| g.len() == 1 && g.terms().keys().all(|e| e.iter().all(|&x| x == 0)))
    }

    /// Whether the monomial is standard (not divisible by any leading term).
    pub fn is_standard(&self, e: &[i32]) -> bool {
        self.polys.iter().all(|g| !divides(leading(g).unwrap().0, e))
    }
}

fn s_polynomial(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (lf, cf) = leading(f).unwrap();
    let (lg, cg) = leading(g).unwrap();
    let l: Exponent = lf.iter().zip(lg).map(|(a, b)| *a.max(b)).collect();
    let mf: Exponent = l.iter().zip(lf).map(|(a, b)| a - b).collect();
    let mg: Exponent = l.iter().zip(lg).map(|(a, b)| a - b).collect();
    let a = f.mul_monomial(&mf, &(Scalar::one() / cf));
    let b = g.mul_monomial(&mg, &(Scalar::one() / cg));
    &a - &b
}

/// Full multivariate division remainder.
fn reduce_by(p: &MultiPoly, basis: &[MultiPoly]) -> MultiPoly {
    let mut rem = MultiPoly::zero(p.vars());
    let mut cur = p.clone();
    while let Some((e, c)) = leading(&cur).map(|(e, c)| (e.clone(), c.clone())) {
        let mut hit = false;
        for g in basis {
            let (lg, cg) = leading(g).unwrap();
            if divides(lg, &e) {
                let m: Exponent = e.iter().zip(lg).map(|(a, b)| a - b).collect();
                let q = g.mul_monomial(&m, &(&c / cg));
                cur = &cur - &q;
                hit = true;
                break;
            }
        }
        if !hit {
            rem.add_term(e.clone(), c.clone());
            cur.add_term(e, -c);
        }
    }
    rem
}

fn interreduce(mut basis: Vec<MultiPoly>) -> Vec<MultiPoly> {
    // drop elements whose leading term is divisible by another's
    let mut keep: Vec<MultiPoly> = Vec::new();
    basis.sort_by(|a, b| degrevlex_cmp(leading(a).unwrap().0, leading(b).unwrap().0));
    for g in basis {
        let lg = leading(&g).unwrap().0.clone();
        if keep.iter().any(|h| divides(leading(h).unwrap().0, &lg)) {
            continue;
        }
        keep.push(g);
    }
    let n = keep.len();
    for i in 0..n {
        let others: Vec<MultiPoly> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let r = reduce_by(&keep[i], &others);
        keep[i] = monic(&r);
    }
    keep.retain(|g| !g.is_zero());
    keep
}

/// Normal form of `p` modulo the ideal generated by `gens`.
pub fn groebner_reduce(p: &MultiPoly, gens: &[MultiPoly]) -> Result<MultiPoly, AlgebraError> {
    if gens.iter().all(|g| g.is_zero()) {
        if p.is_laurent() {
            return Err(AlgebraError::LaurentInput(p.to_string()));
        }
        return Ok(p.clone());
    }
    GroebnerBasis::new(gens)?.reduce(p)
}

/// Leading monomial accessor for callers that need the order.
pub fn leading_exponent(p: &MultiPoly) -> Option<Exponent> {
    leading(p).map(|(e, _)| e.clone())
}

#[cfg(test)]
mod tests {
    use super::super::poly::Vars;
    use super::super::scalar::int;
    use super::*;

    fn setup() -> (Vars, MultiPoly, MultiPoly) {
        let v = Vars::new(["x", "y"]);
        (v.clone(), MultiPoly::var(&v, 0), MultiPoly::var(&v, 1))
    }

    #[test]
    fn simple_reductions() {
        let (_, x, y) = setup();
        assert!(groebner_reduce(&x.pow(2), &[x.clone()]).unwrap().is_zero());
        assert_eq!(groebner_reduce(&y, &[x.clone()]).unwrap(), y);
        let f = &x.pow(2) - &y.pow(3);
        assert!(groebner_reduce(&f, &[f.clone()]).unwrap().is_zero());
    }

    #[test]
    fn laurent_rejected() {
        let (v, x, _) = setup();
        let p = MultiPoly::monomial(&v, vec![-1, 0], int(1));
        assert!(groebner_reduce(&p, &[x]).is_err());
    }

    #[test]
    fn order_is_degrevlex() {
        assert_eq!(degrevlex_cmp(&[2, 0], &[1, 1]), Ordering::Greater);
        assert_eq!(degrevlex_cmp(&[1, 1], &[0, 2]), Ordering::Greater);
        assert_eq!(degrevlex_cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
    }

    #[test]
    fn completion_finds_hidden_member() {
        // (x^2 - y, xy - 1): y^2 - x is a member, not visible by naive division
        let (_, x, y) = setup();
        let one = MultiPoly::one(x.vars());
        let g1 = &x.pow(2) - &y;
        let g2 = &(&x * &y) - &one;
        let target = &y.pow(2) - &x;
        let gb = GroebnerBasis::new(&[g1, g2]).unwrap();
        assert!(gb.contains(&target).unwrap());
        assert!(!gb.contains(&x).unwrap());
    }
}
