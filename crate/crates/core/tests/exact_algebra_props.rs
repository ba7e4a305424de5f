use num_traits::Zero;
use poisson_core::exact_algebra::scalar::{frac, int};
use poisson_core::exact_algebra::{groebner_reduce, GroebnerBasis, MultiPoly, Scalar, SparseMatrix, Vars};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn cfg(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..Config::default() }
}

fn vars3() -> Vars {
    Vars::new(["x", "y", "z"])
}

fn poly(nvars: usize, max_deg: i32) -> impl Strategy<Value = Vec<(Vec<i32>, i64, i64)>> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, nvars), -5i64..=5, 1i64..=3),
        0..5,
    )
    .prop_map(move |ts| {
        ts.into_iter()
            .map(|(mut e, n, d)| {
                // clamp total degree
                while e.iter().sum::<i32>() > max_deg {
                    let i = e.iter().position(|&x| x > 0).unwrap();
                    e[i] -= 1;
                }
                (e, n, d)
            })
            .collect()
    })
}

fn build(v: &Vars, ts: &[(Vec<i32>, i64, i64)]) -> MultiPoly {
    MultiPoly::from_terms(v, ts.iter().map(|(e, n, d)| (e.clone(), frac(*n, *d))))
}

proptest! {
    #![proptest_config(cfg(100))]

    #[test]
    fn ring_laws(a in poly(3, 4), b in poly(3, 4), c in poly(3, 4)) {
        let v = vars3();
        let (a, b, c) = (build(&v, &a), build(&v, &b), build(&v, &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        for i in 0..3 {
            let lhs = (&a * &b).partial(i);
            let rhs = &(&a * &b.partial(i)) + &(&b * &a.partial(i));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn kernel_rank_nullity(rows in 1usize..6, cols in 1usize..6,
                           entries in prop::collection::vec(-3i64..=3, 36)) {
        let mut m = SparseMatrix::new(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                // sparse-ish: keep about half the entries
                let x = entries[i * 6 + j];
                if (i + j) % 2 == 0 || x.abs() > 1 {
                    m.set(i, j, int(x));
                }
            }
        }
        let k = m.kernel_basis();
        prop_assert_eq!(k.len() + m.rank(), cols);
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        // rank is transpose-invariant
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }
}

/// Bounded-degree membership oracle: is `p` in the ℚ-span of `m·g`
/// for monomials `m` with `deg(m·g) ≤ bound`?
fn brute_member(p: &MultiPoly, gens: &[MultiPoly], bound: i32) -> bool {
    let v = p.vars().clone();
    let n = v.len();
    let mut monos: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for m in &monos {
            for k in 0..=bound {
                let mut e = m.clone();
                e.push(k);
                if e.iter().sum::<i32>() <= bound {
                    next.push(e);
                }
            }
        }
        monos = next;
    }
    let mut cols = Vec::new();
    for g in gens {
        let dg = g.total_degree().unwrap_or(0);
        for m in &monos {
            if m.iter().sum::<i32>() + dg <= bound {
                cols.push(g.mul_monomial(m, &Scalar::from_integer(1.into())));
            }
        }
    }
    // index all exponents
    let mut idx = std::collections::BTreeMap::new();
    for c in cols.iter().chain(std::iter::once(p)) {
        for e in c.terms().keys() {
            let k = idx.len();
            idx.entry(e.clone()).or_insert(k);
        }
    }
    let mut m = SparseMatrix::new(idx.len(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (e, x) in c.terms() {
            m.set(idx[e], j, x.clone());
        }
    }
    let mut b = vec![Scalar::zero(); idx.len()];
    for (e, x) in p.terms() {
        b[idx[e]] = x.clone();
    }
    m.solve(&b).is_some()
}

proptest! {
    #![proptest_config(cfg(60))]

    #[test]
    fn membership_matches_oracle(g1 in poly(2, 3), g2 in poly(2, 3), a1 in poly(2, 2), a2 in poly(2, 2),
                                 r in poly(2, 3), member in any::<bool>()) {
        let v = Vars::new(["x", "y"]);
        let gens = vec![build(&v, &g1), build(&v, &g2)];
        let p = if member {
            &(&build(&v, &a1) * &gens[0]) + &(&build(&v, &a2) * &gens[1])
        } else {
            build(&v, &r)
        };
        let gb = GroebnerBasis::new(&gens).unwrap();
        let nf = gb.reduce(&p).unwrap();
        if member {
            prop_assert!(nf.is_zero());
        }
        // p - nf always lies in the ideal
        let diff = &p - &nf;
        prop_assert!(gb.contains(&diff).unwrap());
        let in_ideal = nf.is_zero();
        // the bounded oracle can only certify genuine members
        if brute_member(&p, &gens, 5) {
            prop_assert!(in_ideal);
        }
        if in_ideal {
            prop_assert!(brute_member(&p, &gens, 9));
        }
        prop_assert_eq!(groebner_reduce(&p, &gens).unwrap(), nf);
    }
}
