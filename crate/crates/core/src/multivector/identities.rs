//! Graded identities of the Schouten bracket, in the shifted grading where a
//! q-vector has degree q−1. Each check returns `Err` with a description of
//! the first violated identity.

use crate::exact_algebra::Scalar;

use super::{MultivectorError, PolyVector};

fn sign(e: usize) -> Scalar {
    if e % 2 == 0 {
        Scalar::from_integer(1.into())
    } else {
        Scalar::from_integer((-1).into())
    }
}

fn shifted(p: &PolyVector) -> i64 {
    p.degree() as i64 - 1
}

/// Equality that ignores the nominal degree of zero fields.
fn same(a: &PolyVector, b: &PolyVector) -> bool {
    (a.is_zero() && b.is_zero()) || a == b
}

fn parity(x: i64) -> usize {
    x.rem_euclid(2) as usize
}

/// `[P,Q] = −(−1)^{(p−1)(q−1)} [Q,P]`.
pub fn antisymmetry(p: &PolyVector, q: &PolyVector) -> Result<bool, MultivectorError> {
    let lhs = p.schouten(q)?;
    let rhs = q.schouten(p)?.scale(&-sign(parity(shifted(p) * shifted(q))));
    Ok(same(&lhs, &rhs))
}

/// `[P,[Q,R]] = [[P,Q],R] + (−1)^{(p−1)(q−1)} [Q,[P,R]]`.
pub fn jacobi(p: &PolyVector, q: &PolyVector, r: &PolyVector) -> Result<bool, MultivectorError> {
    let lhs = p.schouten(&q.schouten(r)?)?;
    let a = p.schouten(q)?.schouten(r)?;
    let b = q.schouten(&p.schouten(r)?)?.scale(&sign(parity(shifted(p) * shifted(q))));
    Ok(same(&lhs, &a.add(&b)))
}

/// `[P, Q∧R] = [P,Q]∧R + (−1)^{(p−1)q} Q∧[P,R]`.
pub fn leibniz_left(p: &PolyVector, q: &PolyVector, r: &PolyVector) -> Result<bool, MultivectorError> {
    let lhs = p.schouten(&q.wedge(r)?)?;
    let a = p.schouten(q)?.wedge(r)?;
    let b = q.wedge(&p.schouten(r)?)?.scale(&sign(parity(shifted(p) * q.degree() as i64)));
    Ok(same(&lhs, &a.add(&b)))
}

/// `[P∧Q, R] = P∧[Q,R] + (−1)^{q(r−1)} [P,R]∧Q`.
pub fn leibniz_right(p: &PolyVector, q: &PolyVector, r: &PolyVector) -> Result<bool, MultivectorError> {
    let lhs = p.wedge(q)?.schouten(r)?;
    let a = p.wedge(&q.schouten(r)?)?;
    let b = p.schouten(r)?.wedge(q)?.scale(&sign(parity(q.degree() as i64 * shifted(r))));
    Ok(same(&lhs, &a.add(&b)))
}

/// Runs all four identities on one triple; returns the names of failures.
pub fn check_all(p: &PolyVector, q: &PolyVector, r: &PolyVector) -> Result<Vec<&'static str>, MultivectorError> {
    let mut bad = Vec::new();
    if !antisymmetry(p, q)? {
        bad.push("antisymmetry");
    }
    if !jacobi(p, q, r)? {
        bad.push("jacobi");
    }
    if !leibniz_left(p, q, r)? {
        bad.push("leibniz_left");
    }
    if !leibniz_right(p, q, r)? {
        bad.push("leibniz_right");
    }
    Ok(bad)
}
