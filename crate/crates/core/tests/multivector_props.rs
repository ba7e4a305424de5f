mod support;

use poisson_core::exact_algebra::scalar::int;
use poisson_core::exact_algebra::{MultiPoly, Vars};
use poisson_core::multivector::{identities, jacobi_defect, PolyVector};
use poisson_core::random::{coordinate_vars, polyvector, rng};
use rand::Rng;
use support::oracles::{jacobi_on_coordinates, pi_cyclic_sum};

#[test]
fn schouten_identities_random() {
    let mut r = rng(11);
    for trial in 0..100 {
        let n = r.gen_range(1..=3);
        let v = coordinate_vars(n);
        let dp = r.gen_range(0..=n.min(3));
        let p = polyvector(&mut r, &v, dp, 2);
        let dq = r.gen_range(0..=n.min(3));
        let q = polyvector(&mut r, &v, dq, 2);
        let ds = r.gen_range(0..=n.min(3));
        let s = polyvector(&mut r, &v, ds, 2);
        let bad = identities::check_all(&p, &q, &s).unwrap();
        assert!(bad.is_empty(), "trial {trial}: {bad:?} for P={p}, Q={q}, R={s}");
    }
}

#[test]
fn defect_matches_cyclic_formula() {
    let mut r = rng(12);
    let v = coordinate_vars(3);
    for _ in 0..50 {
        let l = polyvector(&mut r, &v, 2, 2);
        let d = jacobi_defect(&l).unwrap();
        let want = pi_cyclic_sum(&l, 0, 1, 2).scale(&int(-2));
        assert_eq!(d.coeff(&[0, 1, 2]), want, "Λ = {l}");
    }
}

#[test]
fn defect_vanishes_iff_jacobi_on_coordinates() {
    let mut r = rng(13);
    let v = coordinate_vars(3);
    let mut poisson_seen = 0;
    for trial in 0..60 {
        let l = if trial % 2 == 0 {
            polyvector(&mut r, &v, 2, 2)
        } else {
            // Λ = g · ι(dC) vol^{-1}: Poisson for every g and Casimir C
            let g = poisson_core::random::poly(&mut r, &v, 3, 1, 2);
            let c = poisson_core::random::poly(&mut r, &v, 3, 2, 3);
            let mut l = PolyVector::zero(&v, 3, 2);
            l.add_term(vec![0, 1], &g * &c.partial(2));
            l.add_term(vec![1, 2], &g * &c.partial(0));
            l.add_term(vec![0, 2], -&(&g * &c.partial(1)));
            l
        };
        let zero = jacobi_defect(&l).unwrap().is_zero();
        poisson_seen += zero as usize;
        assert_eq!(zero, jacobi_on_coordinates(&l), "Λ = {l}");
    }
    assert!(poisson_seen >= 25);
}

#[test]
fn cubic_example_defect() {
    // Λ = (x₁x₂)∂₁∧∂₂ + x₃∂₂∧∂₃ on ℂ³
    let v = Vars::new(["x1", "x2", "x3"]);
    let mut l = PolyVector::zero(&v, 3, 2);
    l.add_term(vec![0, 1], &MultiPoly::var(&v, 0) * &MultiPoly::var(&v, 1));
    l.add_term(vec![1, 2], MultiPoly::var(&v, 2));
    let d = jacobi_defect(&l).unwrap();
    assert_eq!(d.coeff(&[0, 1, 2]), pi_cyclic_sum(&l, 0, 1, 2).scale(&int(-2)));
    assert!(!d.is_zero());
}
