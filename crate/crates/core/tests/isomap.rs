use qaffine::cartan::{affine_cartan, AffineType, CartanData};
use qaffine::drinfeld::{gamma_pow, DrinfeldAlgebra};
use qaffine::epsseq::builtin_sequence;
use qaffine::isomap::{
    bracket_checkpoint, central_product, chevalley_images, goal_relations, inverse_generators, omega_duality, ChevalleyImage, GoalKind,
    Variant,
};
use qaffine::reduce::{Reducer, ReductionConfig, Verdict};
use qaffine::scalar::Scalar;

fn setup(t: &str) -> (CartanData, ChevalleyImage, DrinfeldAlgebra) {
    let c = affine_cartan(t.parse::<AffineType>().unwrap()).unwrap();
    let b = builtin_sequence(&c).unwrap();
    let img = chevalley_images(&b.sequence, &c).unwrap();
    let alg = DrinfeldAlgebra::new(&c);
    (c, img, alg)
}

#[test]
fn central_element_is_gamma() {
    for t in ["A1^1", "A3^1", "C2^1", "D4^1", "E6^1", "G2^1"] {
        let (_, img, alg) = setup(t);
        let out = Reducer::new(&alg).reduce(&central_product(&img), &ReductionConfig::default()).unwrap();
        assert_eq!(out.result(), gamma_pow(1), "{t}");
    }
}

#[test]
fn omega_exchanges_the_brackets() {
    for t in ["A2^1", "A3^1", "D4^1", "C2^1"] {
        let (_, img, _) = setup(t);
        assert!(omega_duality(&img).unwrap().is_some(), "{t}");
    }
}

#[test]
fn a2_goals_certify() {
    let (_, img, alg) = setup("A2^1");
    let mut red = Reducer::new(&alg);
    let cfg = ReductionConfig::default();
    let goals = goal_relations(&img).unwrap();
    assert!(goals.iter().any(|g| g.kind == GoalKind::Serre));
    for g in goals {
        let r = red.certify_zero(&g.element, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Zero, "{}", g.name);
        assert!(r.certificate.check(&alg, &g.element).unwrap(), "{}", g.name);
    }
}

#[test]
fn checkpoint_constants() {
    let cfg = ReductionConfig::default();
    let (_, img, alg) = setup("A2^1");
    let cp = bracket_checkpoint(&img, &mut Reducer::new(&alg), &cfg).unwrap();
    assert_eq!(cp.verdict, Verdict::Zero);
    assert_eq!(cp.kappa, Some(-&Scalar::q(-1)));
    assert_eq!(cp.required_a, Some(Scalar::one()));

    let (_, img, alg) = setup("C2^1");
    let cp = bracket_checkpoint(&img, &mut Reducer::new(&alg), &cfg).unwrap();
    // (1 + q^{-1})^2 = q^{-1}(q^{1/2} + q^{-1/2})^2
    let one_q = &Scalar::one() + &Scalar::q(-1);
    assert_eq!(cp.kappa, Some(&one_q * &one_q));
}

#[test]
fn step2_constants_a2() {
    let (_, img, alg) = setup("A2^1");
    let mut red = Reducer::new(&alg);
    let r = inverse_generators(&img, &mut red, &ReductionConfig::default()).unwrap();
    assert_eq!(r.a, Some(Scalar::one()));
    assert_eq!(r.b, Some(-&Scalar::q(-1)));
    assert!(r.covers_all_nodes);
    for f in &r.formulas {
        match f.variant {
            Variant::Printed => assert_ne!(f.verdict, Verdict::Zero),
            _ => {
                assert_eq!(f.verdict, Verdict::Zero, "{}", f.target);
                let c = f.constant.clone().unwrap();
                let target = qaffine::freealg::parse_element(&f.target).unwrap();
                let diff = &f.expression.scale(&c) - &target;
                assert_eq!(red.certify_zero(&diff, &ReductionConfig::default()).unwrap().verdict, Verdict::Zero);
            }
        }
    }
}
