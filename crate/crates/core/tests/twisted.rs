use qaffine::cartan::affine_cartan;
use qaffine::drinfeld::twisted::{TwistedAlgebra, TwistedSpec};
use qaffine::drinfeld::Sign;
use qaffine::reduce::fold::check_twisted;
use qaffine::reduce::{Reducer, ReductionConfig, Verdict};

fn algebra(t: &str) -> TwistedAlgebra {
    TwistedAlgebra::new(&affine_cartan(t.parse().unwrap()).unwrap()).unwrap()
}

#[test]
fn window_expansion() {
    let t = TwistedSpec::XxProduct { sign: Sign::Plus, i: 1, j: 2, a: 0, b: 0 };
    assert!(t.window(0).is_err());
    assert!(t.window(-1).is_err());
    assert_eq!(t.window(3).unwrap().len(), 49);
    let aa = TwistedSpec::AA { i: 1, k: 1, j: 1, l: -1 };
    assert_eq!(aa.window(3).unwrap(), vec![aa]);
}

#[test]
fn heisenberg_relations_survive_folding() {
    for ty in ["A3^2", "D4^3"] {
        let t = algebra(ty);
        let mut red = Reducer::new(&t.base);
        let cfg = ReductionConfig::default();
        for i in 1..=t.big_n {
            for j in 1..=t.big_n {
                for k in 1..=3 {
                    let r = check_twisted(&t, &mut red, &TwistedSpec::AA { i, k, j, l: -k }, &cfg).unwrap();
                    assert_eq!(r.verdict, Verdict::Zero, "{ty} aa {i} {k} {j}");
                }
            }
        }
    }
}

#[test]
fn mixed_relation_is_off_by_root_of_r() {
    for (ty, want) in [("A3^2", "sqrt(2)*(1/2)"), ("D4^3", "sqrt(3)*(1/3)")] {
        let t = algebra(ty);
        let mut red = Reducer::new(&t.base);
        let cfg = ReductionConfig::default();
        let spec = TwistedSpec::AX { i: 1, k: 1, sign: Sign::Plus, j: 1, l: 0 };
        let r = check_twisted(&t, &mut red, &spec, &cfg).unwrap();
        assert_ne!(r.verdict, Verdict::Zero);
        assert_eq!(r.ratio.map(|s| s.to_string()).as_deref(), Some(want), "{ty}");
        for c in &r.certificates {
            assert!(c.resum(&t.base, &|_| None).is_ok());
        }
    }
}
