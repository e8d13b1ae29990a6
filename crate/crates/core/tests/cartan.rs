use qaffine::cartan::{affine_cartan, diagram_automorphism, supported_types, AffineType, FiniteType, RootForm};
use qaffine::scalar::{q_frac, rat_int, Q};

fn ty(s: &str) -> AffineType {
    s.parse().unwrap()
}

fn qs(v: &[(i64, i64)]) -> Vec<Q> {
    v.iter().map(|&(n, d)| q_frac(n, d)).collect()
}

#[test]
fn every_supported_type_satisfies_the_invariants() {
    for t in supported_types(8) {
        let c = affine_cartan(t).unwrap_or_else(|e| panic!("{t}: {e}"));
        c.check_invariants().unwrap();
        assert_eq!(c.rank(), t.rank(), "{t}");
    }
}

#[test]
fn untwisted_d_vectors() {
    let g2 = affine_cartan(ty("G2^1")).unwrap();
    assert_eq!(g2.d, qs(&[(1, 1), (1, 1), (1, 3)]));
    for s in ["A4^1", "D5^1", "E6^1", "E7^1", "E8^1"] {
        assert!(affine_cartan(ty(s)).unwrap().d.iter().all(|d| *d == Q::from_integer(1.into())), "{s}");
    }
    let c3 = affine_cartan(ty("C3^1")).unwrap();
    assert_eq!(c3.d, qs(&[(1, 1), (1, 2), (1, 2), (1, 1)]));
    let b3 = affine_cartan(ty("B3^1")).unwrap();
    assert_eq!(b3.d, qs(&[(1, 1), (1, 1), (1, 1), (1, 2)]));
    let f4 = affine_cartan(ty("F4^1")).unwrap();
    assert_eq!(f4.d, qs(&[(1, 1), (1, 1), (1, 1), (1, 2), (1, 2)]));
}

#[test]
fn twisted_d_tuples() {
    let cases: [(&str, Vec<Q>); 7] = [
        ("A3^2", qs(&[(1, 1), (1, 1), (2, 1)])),
        ("A5^2", qs(&[(1, 1), (1, 1), (1, 1), (2, 1)])),
        ("D4^2", qs(&[(1, 1), (2, 1), (2, 1), (1, 1)])),
        ("A4^2", qs(&[(2, 1), (1, 1), (1, 2)])),
        ("A6^2", qs(&[(2, 1), (1, 1), (1, 1), (1, 2)])),
        ("E6^2", qs(&[(1, 1), (1, 1), (1, 1), (2, 1), (2, 1)])),
        ("D4^3", qs(&[(1, 1), (1, 1), (3, 1)])),
    ];
    for (s, d) in cases {
        assert_eq!(affine_cartan(ty(s)).unwrap().d, d, "{s}");
    }
}

#[test]
fn bilinear_form_values() {
    let a4 = affine_cartan(ty("A4^1")).unwrap();
    for i in 1..4 {
        assert_eq!(a4.bilinear(i, i + 1), rat_int(-1));
    }
    let g2 = affine_cartan(ty("G2^1")).unwrap();
    assert_eq!(g2.bilinear(2, 2), q_frac(2, 3));
    for t in supported_types(6) {
        let c = affine_cartan(t).unwrap();
        for i in c.nodes() {
            let mut e = vec![0; c.rank() + 1];
            e[i] = 1;
            assert_eq!(c.pair(&c.delta, &e), Q::from_integer(0.into()), "{t} node {i}");
            assert_eq!(c.bilinear(i, i), &c.d[i] * rat_int(2));
        }
    }
}

#[test]
fn diagram_automorphisms() {
    let d5: FiniteType = "D5".parse().unwrap();
    assert_eq!(diagram_automorphism(d5, 2).unwrap(), vec![0, 1, 2, 3, 5, 4]);
    let e6: FiniteType = "E6".parse().unwrap();
    assert_eq!(diagram_automorphism(e6, 2).unwrap(), vec![0, 5, 4, 3, 2, 1, 6]);
    let d4: FiniteType = "D4".parse().unwrap();
    assert_eq!(diagram_automorphism(d4, 3).unwrap(), vec![0, 3, 2, 4, 1]);
    // σ(i) = N + 1 - i; the literal N - i would send node N to 0
    let a5: FiniteType = "A5".parse().unwrap();
    assert_eq!(diagram_automorphism(a5, 2).unwrap(), vec![0, 5, 4, 3, 2, 1]);
    assert!(diagram_automorphism(e6, 3).is_err());
    assert!(diagram_automorphism("B3".parse().unwrap(), 2).is_err());
}

#[test]
fn folding_normalization_is_r_times_the_simply_laced_form() {
    for s in ["A3^2", "A4^2", "D3^2", "E6^2", "D4^3"] {
        let c = affine_cartan(ty(s)).unwrap();
        let f = c.folding.as_ref().unwrap();
        for i in 1..=f.base.rank {
            assert_eq!(f.primed_form(i, i), 2 * f.r as i64);
            for j in 1..=f.base.rank {
                assert_eq!(f.primed_form(i, j), f.r as i64 * f.a(i, j));
            }
        }
    }
}

// Independent oracle: a root is maximal iff adding any simple root leaves the root set.
fn maximal_by_addition(form: &RootForm) -> Vec<i64> {
    let roots = form.positive_roots();
    let set: std::collections::HashSet<_> = roots.iter().cloned().collect();
    let maxes: Vec<_> = roots
        .iter()
        .filter(|r| {
            (0..r.len()).all(|i| {
                let mut s = (*r).clone();
                s[i] += 1;
                !set.contains(&s)
            })
        })
        .cloned()
        .collect();
    assert_eq!(maxes.len(), 1);
    maxes[0].clone()
}

#[test]
fn highest_roots() {
    let hr = |s: &str| qaffine::cartan::highest_root(s.parse().unwrap());
    assert_eq!(hr("A2"), vec![1, 1]);
    assert_eq!(hr("C2"), vec![2, 1]);
    assert_eq!(hr("G2")[1], 3);
    assert_eq!(hr("E6"), vec![1, 2, 3, 2, 1, 2]);
    assert_eq!(hr("E7"), vec![2, 3, 4, 3, 2, 1, 2]);
    assert_eq!(hr("E8"), vec![2, 3, 4, 5, 6, 4, 2, 3]);
    assert_eq!(hr("F4"), vec![2, 3, 4, 2]);
    for s in ["A1", "A5", "B3", "B4", "C3", "C4", "D4", "D6", "E6", "E7", "E8", "F4", "G2"] {
        let ft: FiniteType = s.parse().unwrap();
        assert_eq!(ft.form().highest_root(), maximal_by_addition(&ft.form()), "{s}");
        let f = ft.form();
        let th = f.highest_root();
        let max_d = f.d.iter().max().unwrap().clone();
        assert_eq!(f.pair(&th, &th), max_d * rat_int(2));
    }
}

#[test]
fn coxeter_numbers_agree_with_highest_root_heights() {
    for s in ["A1", "A2", "A6", "B2", "B5", "C3", "D4", "D7", "E6", "E7", "E8", "F4", "G2"] {
        let ft: FiniteType = s.parse().unwrap();
        let sum: i64 = ft.form().highest_root().iter().sum();
        assert_eq!(ft.coxeter_number(), 1 + sum, "{s}");
    }
    let e7: FiniteType = "E7".parse().unwrap();
    assert_eq!(e7.coxeter_number(), 18);
    let e8: FiniteType = "E8".parse().unwrap();
    assert_eq!(e8.coxeter_number(), 30);
    let n_roots = e8.form().roots().len();
    assert_eq!(n_roots, 240);
}

#[test]
fn twisted_theta_and_orbits() {
    let a3 = affine_cartan(ty("A3^2")).unwrap();
    assert_eq!(a3.theta, vec![1, 1]);
    let d43 = affine_cartan(ty("D4^3")).unwrap();
    assert_eq!(d43.theta, vec![2, 1]);
    let f = d43.folding.as_ref().unwrap();
    assert_eq!(f.orbit(1), vec![1, 3, 4]);
    assert!(f.is_fixed(2));
    let a4 = affine_cartan(ty("A4^2")).unwrap();
    assert_eq!(a4.theta, vec![2, 2]);
    let e62 = affine_cartan(ty("E6^2")).unwrap();
    assert_eq!(e62.theta, vec![2, 3, 2, 1]);
}

#[test]
fn type_strings() {
    assert_eq!(ty("A3^1").to_string(), "A3^1");
    assert_eq!(ty("d4^3").to_string(), "D4^3");
    for bad in ["A0^1", "B3^2", "E9^1", "A3", "Q3^1", "D4^4", "D3^1"] {
        assert!(bad.parse::<AffineType>().is_err(), "{bad}");
    }
}
