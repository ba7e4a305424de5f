mod support;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use poisson_core::cech_hyper::*;
use poisson_core::exact_algebra::{MultiPoly, Scalar, Vars};
use poisson_core::multivector::PolyVector;

use support::oracles::{dense_rank, dense_solve};

fn int(k: i64) -> Scalar {
    Scalar::from_integer(k.into())
}

fn p2_with(l: impl Fn(&Vars) -> MultiPoly) -> Atlas {
    let names = pn_names(2);
    let v = Vars::new(names.clone());
    let lam = PolyVector::term(l(&v), 2, &[0, 1]).unwrap();
    pn(2, &names, Some(&lam), 0).unwrap()
}

fn p2_x() -> Atlas {
    p2_with(|v| MultiPoly::var(v, 0))
}

fn mono(v: &Vars, e: &[i32]) -> MultiPoly {
    MultiPoly::monomial(v, e.to_vec(), Scalar::one())
}

#[test]
fn p1_vector_fields_match_hand_count() {
    // oracle: f(x)∂x with deg f ≤ D; on y = 1/x, ∂x = −y²∂y, so the chart-1
    // coefficient −y² f(1/y) must have no negative powers of y
    let d: i64 = 8;
    // one row per power y^{-r} (r ≥ 1); column k is x^k ↦ −y^{2−k}
    let rows: Vec<Vec<Scalar>> = (1..=d)
        .map(|r| (0..=d).map(|k| if 2 - k == -r { int(-1) } else { int(0) }).collect())
        .collect();
    let expected = (d + 1) as usize - dense_rank(&rows);
    assert_eq!(expected, 3);
    let p1 = pn(1, &pn_names(1), None, 0).unwrap();
    let s = global_sections(&p1, 1, 1, 6).unwrap();
    assert!(s.stabilized);
    assert_eq!(s.dim, expected);
    assert_eq!(s.per_chart.len(), 3);
}

#[test]
fn p1_hypercohomology_with_zero_bivector() {
    let p1 = pn(1, &pn_names(1), None, 0).unwrap();
    let r = hp_cech(&p1, 1, 1, 6, false).unwrap();
    assert!(r.stabilized);
    assert_eq!(r.dim, 3);
}

#[test]
fn p2_sections_of_bivectors() {
    let s = global_sections(&p2_x(), 2, 1, 6).unwrap();
    assert!(s.stabilized);
    assert_eq!(s.dim, 10);
    let s3 = global_sections(&p2_x(), 3, 1, 6).unwrap();
    assert_eq!(s3.dim, 0);
    // every section is polynomial on every chart
    for per in &s.per_chart {
        assert!(per.iter().all(|p| !p.is_laurent()));
    }
}

#[test]
fn p2_poisson_cohomology() {
    let a = p2_x();
    let h2 = hp_cech(&a, 2, 1, 6, true).unwrap();
    assert!(h2.stabilized);
    assert_eq!(h2.dim, 5);
    assert_eq!(h2.representatives.len(), 5);
    let h3 = hp_cech(&a, 3, 1, 6, false).unwrap();
    assert!(h3.stabilized);
    assert_eq!(h3.dim, 0);
}

#[test]
fn p2_extension_glues() {
    let a = p2_x();
    assert_eq!(a.glue_check(None).unwrap().status, GlueStatus::Glued);
    // rebuild the atlas from the stored bivectors and re-verify
    let b = a.with_bivectors(a.bivectors().to_vec()).unwrap();
    assert_eq!(b.glue_check(Some(6)).unwrap().status, GlueStatus::Glued);
}

#[test]
fn pn_rejects_bivector_with_a_pole() {
    // x⁴ ∂x∧∂w has degree too high to extend over ℙ²
    let names = pn_names(2);
    let v = Vars::new(names.clone());
    let lam = PolyVector::term(mono(&v, &[4, 0]), 2, &[0, 1]).unwrap();
    assert!(matches!(pn(2, &names, Some(&lam), 0), Err(CechError::NotGlobal(_))));
}

fn closed_form_hirzebruch_bivectors(m: i32, k: i32) -> Vec<PolyVector> {
    // closed forms of the four chart bivectors for g = 1
    let e = 2 * k - m + 2;
    let ra = Vars::new(["u", "x", "t"]);
    let rb = Vars::new(["u", "y", "t"]);
    let rc = Vars::new(["v", "w", "t"]);
    let rd = Vars::new(["v", "z", "t"]);
    let a = mono(&ra, &[0, 2, 0]);
    let b = MultiPoly::constant(&rb, int(-1));
    let sc = &mono(&rc, &[m - k, 1, 0]) + &mono(&rc, &[0, 0, 1]);
    let c = &(&mono(&rc, &[e, 0, 0]) * &(&sc * &sc)).scale(&int(-1)) + &MultiPoly::zero(&rc);
    let sd = &mono(&rd, &[m - k, 0, 0]) + &mono(&rd, &[0, 1, 1]);
    let d = &mono(&rd, &[e, 0, 0]) * &(&sd * &sd);
    [a, b, c, d].into_iter().map(|p| PolyVector::term(p, 2, &[0, 1]).unwrap()).collect()
}

#[test]
fn hirzebruch_six_identities() {
    for (m, k) in [(2, 1), (0, 0), (1, 0), (2, 0), (3, 1), (4, 1), (4, 2)] {
        let h = hirzebruch(m, k, &[int(1)], 4).unwrap();
        let tr = h.truncation();
        for (j, p) in closed_form_hirzebruch_bivectors(m, k).iter().enumerate() {
            assert_eq!(h.bivector(j).to_string(), p.truncate(&tr).to_string(), "m={m} k={k} chart {j}");
        }
        let rep = h.glue_check(None).unwrap();
        assert_eq!(rep.status, GlueStatus::Glued, "m={m} k={k}");
        assert_eq!(rep.pairs.len(), 6);
        assert!(rep.pairs.iter().all(|p| p.holds == Some(true)));
    }
}

#[test]
fn hirzebruch_rejects_bad_twist() {
    assert!(hirzebruch(4, 0, &[int(1)], 2).is_err());
    assert!(hirzebruch(2, 2, &[int(1)], 2).is_err());
}

#[test]
fn corrupted_bivector_is_located() {
    let h = hirzebruch(2, 1, &[int(1)], 3).unwrap();
    for bad in 0..4 {
        let mut bs = h.bivectors().to_vec();
        bs[bad] = bs[bad].scale(&int(-1));
        let c = h.with_bivectors(bs).unwrap();
        let rep = c.glue_check(None).unwrap();
        assert_eq!(rep.status, GlueStatus::Failed);
        let failing = rep.failing();
        assert_eq!(failing.len(), 3);
        assert!(failing.iter().all(|&(j, k)| j == bad || k == bad));
        assert!(matches!(hp_cech(&c, 2, 1, 3, false), Err(CechError::NotGlued(_))));
    }
}

#[test]
fn small_window_is_inconclusive() {
    let h = hirzebruch(2, 1, &[int(1)], 3).unwrap();
    assert_eq!(h.glue_check(Some(1)).unwrap().status, GlueStatus::Inconclusive);
    assert_eq!(h.glue_check(Some(8)).unwrap().status, GlueStatus::Glued);
    // a corruption inside the window is still reported as a failure
    let mut bs = h.bivectors().to_vec();
    bs[1] = bs[1].scale(&int(2));
    let c = h.with_bivectors(bs).unwrap();
    assert_eq!(c.glue_check(Some(1)).unwrap().status, GlueStatus::Failed);
}

#[test]
fn transition_cocycle_is_enforced() {
    let h = hirzebruch(2, 1, &[int(1)], 2).unwrap();
    let mut maps = h.maps().clone();
    let swapped = maps[&(0, 1)].clone();
    let comps = (0..2)
        .map(|a| {
            let (n, d) = (swapped.numerator(a).clone(), swapped.denominator(a).clone());
            if a == 1 {
                (n.scale(&int(2)), d)
            } else {
                (n, d)
            }
        })
        .collect();
    let bad = poisson_core::multivector::ChartMap::new(swapped.source(), swapped.target(), 1, 2, comps).unwrap();
    maps.insert((0, 1), bad);
    assert!(Atlas::new(h.charts().to_vec(), h.params().to_vec(), 2, maps, None).is_err());
}

fn check_delta_squared(a: &Atlas, w: i32) {
    let cx = CechHyperComplex::new(a).unwrap();
    for i in 1..=cx.dim() + cx.atlas().len() {
        let wc = cx.window(w, Mode::Total, i).unwrap();
        for c in wc.regular_cochains(i) {
            let d = cx.delta(Mode::Total, &c).unwrap();
            assert!(cx.delta(Mode::Total, &d).unwrap().is_zero(), "ΔΔ ≠ 0 in degree {i}");
            // matrix form agrees with the symbolic differential inside the window
            let v = wc.coords(i, &c).unwrap();
            let (img, leak) = wc.apply(i, &v);
            if leak.is_empty() {
                assert_eq!(wc.to_cochain(i + 1, &img), d);
            }
        }
    }
}

#[test]
fn delta_squares_to_zero() {
    check_delta_squared(&p2_x(), 2);
    check_delta_squared(&hirzebruch(2, 1, &[int(1)], 2).unwrap(), 2);
    // a non-homogeneous structure (clipping occurs)
    check_delta_squared(&p2_with(|v| &mono(v, &[1, 0]) + &mono(v, &[0, 2])), 1);
    check_delta_squared(&pn(1, &pn_names(1), None, 0).unwrap(), 2);
}

#[test]
fn zero_bivector_splits_into_rows() {
    for (a, n) in [(pn(1, &pn_names(1), None, 0).unwrap(), 1usize), (p2_with(|v| MultiPoly::zero(v)), 2)] {
        let nch = a.len();
        for i in 1..=n + 1 {
            let total = hp_cech(&a, i, 1, 5, false).unwrap();
            assert!(total.stabilized);
            let mut sum = 0;
            for b in 1..=n.min(i) {
                if i - b < nch {
                    let r = cech_row(&a, i - b, b, 1, 5).unwrap();
                    assert!(r.stabilized);
                    sum += r.dim;
                }
            }
            assert_eq!(total.dim, sum, "degree {i}");
        }
    }
}

#[test]
fn hirzebruch_row_sums() {
    let h = hirzebruch(2, 1, &[int(1)], 1).unwrap();
    let zero: Vec<PolyVector> = (0..4).map(|j| PolyVector::zero(h.ring(j), 2, 2)).collect();
    let z = h.with_bivectors(zero).unwrap();
    // F₂: h⁰(T) = 7, h¹(T) = 1, h⁰(−K) = 9
    assert_eq!(cech_row(&z, 0, 1, 1, 6).unwrap().dim, 7);
    assert_eq!(cech_row(&z, 1, 1, 1, 6).unwrap().dim, 1);
    assert_eq!(cech_row(&z, 0, 2, 1, 6).unwrap().dim, 9);
    assert_eq!(hp_cech(&z, 2, 1, 6, false).unwrap().dim, 10);
}

fn p2_family() -> Atlas {
    let names = pn_names(2);
    let v = Vars::new(["x", "w", "t1", "t2", "t3", "t4", "t5"]);
    let m = |e: [i32; 7]| mono(&v, &e);
    let f = [
        m([0, 2, 1, 0, 0, 0, 0]),
        m([1, 0, 0, 0, 0, 0, 0]),
        m([3, 0, 0, 1, 0, 0, 0]),
        m([2, 1, 0, 0, 1, 0, 0]),
        m([1, 2, 0, 0, 0, 1, 0]),
        m([0, 3, 0, 0, 0, 0, 1]),
    ]
    .iter()
    .fold(MultiPoly::zero(&v), |a, b| &a + b);
    let lam = PolyVector::term(f, 2, &[0, 1]).unwrap();
    pn(2, &names, Some(&lam), 1).unwrap()
}

fn global_cochain(cx: &CechHyperComplex, p: &PolyVector) -> HyperCochain {
    let mut c = HyperCochain::new();
    for j in 0..cx.atlas().len() {
        c.add(2, vec![j], p);
    }
    c
}

#[test]
fn p2_family_class_is_the_chosen_direction() {
    let fam = p2_family();
    let cx = CechHyperComplex::new(&fam).unwrap();
    let r0 = cx.atlas().ring(0).clone();
    let reps: Vec<HyperCochain> = [[0, 2], [3, 0], [2, 1], [1, 2], [0, 3]]
        .iter()
        .map(|e| global_cochain(&cx, &PolyVector::term(mono(&r0, e), 2, &[0, 1]).unwrap()))
        .collect();
    for l in 0..5 {
        let mut dir = vec![int(0); 5];
        dir[l] = int(1);
        let k = ks_class(&fam, &dir, Some(&reps), 1, 6).unwrap();
        assert!(k.checks.iter().all(|(_, ok)| *ok));
        assert!(k.theta.is_empty());
        assert_eq!(k.hp2_dim, 5);
        let mut want = vec![int(0); 5];
        want[l] = int(1);
        assert_eq!(k.coordinates, want);
    }
    // a combined direction
    let dir: Vec<Scalar> = (1..=5).map(int).collect();
    let k = ks_class(&fam, &dir, Some(&reps), 1, 6).unwrap();
    assert_eq!(k.coordinates, dir);
}

#[test]
fn constant_family_has_zero_class() {
    let names = pn_names(2);
    let v = Vars::new(["x", "w", "t"]);
    let lam = PolyVector::term(mono(&v, &[1, 0, 0]), 2, &[0, 1]).unwrap();
    let fam = pn(2, &names, Some(&lam), 2).unwrap();
    let k = ks_class(&fam, &[int(1)], None, 1, 6).unwrap();
    assert!(k.is_trivial());
    assert!(k.cochain.is_zero());
}

#[test]
fn hirzebruch_class_against_quotient_oracle() {
    let h = hirzebruch(2, 1, &[int(1)], 2).unwrap();
    let k = ks_class(&h, &[int(1)], None, 1, 6).unwrap();
    assert!(k.checks.iter().all(|(_, ok)| *ok));
    assert!(!k.theta.is_empty());
    // oracle: coordinates keyed by (b, J, ∂-tuple, exponent); boundaries are
    // Δ of a spanning set of admissible 1-cochains (computed symbolically)
    let cx = CechHyperComplex::new(&h).unwrap();
    let wc = cx.window(k.window, Mode::Total, 2).unwrap();
    let flat = |c: &HyperCochain| -> BTreeMap<String, Scalar> {
        let mut m = BTreeMap::new();
        for ((b, j), p) in &c.parts {
            for (t, f) in p.terms() {
                for (e, x) in f.terms() {
                    m.insert(format!("{b}{j:?}{t:?}{e:?}"), x.clone());
                }
            }
        }
        m
    };
    let mut vecs: Vec<BTreeMap<String, Scalar>> = k.basis.iter().map(&flat).collect();
    let nb = vecs.len();
    for c in wc.regular_cochains(1) {
        let d = cx.delta(Mode::Total, &c).unwrap();
        // only boundaries of cochains whose image stays in the window count
        if wc.coords(2, &d).is_ok() {
            vecs.push(flat(&d));
        }
    }
    let target = flat(&k.cochain);
    let mut keys: Vec<String> = vecs.iter().flat_map(|m| m.keys().cloned()).collect();
    keys.extend(target.keys().cloned());
    keys.sort();
    keys.dedup();
    let col = |m: &BTreeMap<String, Scalar>| keys.iter().map(|k| m.get(k).cloned().unwrap_or_else(Scalar::zero)).collect::<Vec<_>>();
    let cols: Vec<Vec<Scalar>> = vecs.iter().map(col).collect();
    let x = dense_solve(&cols, &col(&target)).expect("class lies in span of reps and boundaries");
    assert_eq!(x[..nb].to_vec(), k.coordinates);
    assert!(!k.is_trivial());
}

#[test]
fn unstable_result_is_flagged() {
    let r = hp_cech(&p2_x(), 2, 0, 1, false).unwrap();
    assert!(!r.stabilized);
    assert!(r.used_max_window);
}
