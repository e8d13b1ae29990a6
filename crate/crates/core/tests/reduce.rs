use qaffine::cartan::{affine_cartan, AffineType};
use qaffine::drinfeld::{a, gamma_half_pow, k_pow, xm, xp, DrinfeldAlgebra, RelationSpec, Sign};
use qaffine::freealg::{bracket, parse_element, Element, GenSym};
use qaffine::reduce::{verify_trace, Reducer, ReductionConfig, Rule, Status, Verdict};
use qaffine::scalar::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn alg(t: &str) -> DrinfeldAlgebra {
    DrinfeldAlgebra::new(&affine_cartan(t.parse::<AffineType>().unwrap()).unwrap())
}

fn el(s: &str) -> Element {
    parse_element(s).unwrap()
}

fn nf(alg: &DrinfeldAlgebra, e: &Element) -> Element {
    let out = Reducer::new(alg).reduce(e, &ReductionConfig::default()).unwrap();
    assert!(verify_trace(alg, e, &out).unwrap());
    out.result()
}

#[test]
fn gamma_halves_cancel() {
    let u = alg("A1^1");
    assert_eq!(nf(&u, &gamma_half_pow(1).mul_ref(&gamma_half_pow(-1))), Element::one());
    assert_eq!(nf(&u, &el("g^(-1/2)·qd·g^(1/2)·qd^-1")), Element::one());
}

#[test]
fn cartan_conjugation() {
    let u = alg("A2^1");
    let e = k_pow(1, 1).mul_ref(&xp(1, 0)).mul_ref(&k_pow(1, -1));
    assert_eq!(nf(&u, &e), xp(1, 0).scale(&Scalar::q(2)));
    let e = k_pow(2, 1).mul_ref(&xm(1, 3)).mul_ref(&k_pow(2, -1));
    assert_eq!(nf(&u, &e), xm(1, 3).scale(&Scalar::q(1)));
    let c = alg("C2^1");
    let e = k_pow(1, 1).mul_ref(&xp(1, 0)).mul_ref(&k_pow(1, -1));
    assert_eq!(nf(&c, &e), xp(1, 0).scale(&Scalar::q(1)));
}

#[test]
fn mixed_bracket_gives_heisenberg() {
    for t in ["A1^1", "A2^1", "C2^1"] {
        let u = alg(t);
        let e = bracket(&xp(1, 0), &xm(1, 1), &Scalar::one());
        let want = gamma_half_pow(-1).mul_ref(&k_pow(1, 1)).mul_ref(&a(1, 1));
        assert_eq!(nf(&u, &e), want, "{t}");
    }
}

#[test]
fn certify_zero_examples() {
    let u = alg("A1^1");
    let mut red = Reducer::new(&u);
    let cfg = ReductionConfig::default();
    let aa = red.relation(&RelationSpec::AA { i: 1, k: 2, j: 1, l: -2 }).unwrap();
    let r = red.certify_zero(&aa, &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Zero);
    assert!(r.certificate.check(&u, &aa).unwrap());

    let q = Scalar::q(1);
    let two = &q + &Scalar::q(-1);
    let c = two.div_ref(&(&q - &Scalar::q(-1))).unwrap();
    let g = &gamma_half_pow(2) - &gamma_half_pow(-2);
    let e = &bracket(&a(1, 1), &a(1, -1), &Scalar::one()) - &g.scale(&c);
    assert_eq!(red.certify_zero(&e, &cfg).unwrap().verdict, Verdict::Zero);

    let e = xp(1, 0).mul_ref(&xp(1, 1));
    let r = red.certify_zero(&e, &cfg).unwrap();
    assert_ne!(r.verdict, Verdict::Zero);
    assert!(matches!(r.outcome.status, Status::NormalForm(_)));

    let e = xp(1, 0).mul_ref(&xm(1, 0));
    assert_eq!(red.certify_zero(&e, &cfg).unwrap().verdict, Verdict::NonZero);
}

#[test]
fn span_certifies_serre_in_context() {
    let u = alg("A2^1");
    let mut red = Reducer::new(&u);
    let cfg = ReductionConfig::default();
    let serre = red
        .relation(&RelationSpec::Serre { sign: Sign::Plus, i: 1, j: 2, modes: vec![0, 1], n: 0 })
        .unwrap();
    let e = xm(2, 1).mul_ref(&serre).mul_ref(&k_pow(1, 1));
    let r = red.certify_zero(&e, &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Zero);
    assert!(r.certificate.check(&u, &e).unwrap());
    // same-sign exchange relation
    let xx = red
        .relation(&RelationSpec::XxSame { sign: Sign::Minus, i: 1, j: 2, k: 0, l: 2 })
        .unwrap();
    let r = red.certify_zero(&xx, &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Zero);
}

#[test]
fn r5_rewrites_same_sign_pairs() {
    let u = alg("A1^1");
    let mut red = Reducer::new(&u);
    let cfg = ReductionConfig::default().with_r5();
    assert!(cfg.rules.contains(&Rule::R5));
    let e = xp(1, 3).mul_ref(&xp(1, 0));
    let out = red.reduce(&e, &cfg).unwrap();
    assert!(verify_trace(&u, &e, &out).unwrap());
    assert!(out.steps.iter().any(|s| s.rule == Rule::R5));
}

fn random_element(rng: &mut ChaCha8Rng) -> Element {
    let gens: Vec<Element> = vec![
        xp(1, 0),
        xp(2, -1),
        xm(1, 1),
        xm(2, 0),
        a(1, 1),
        a(2, -1),
        a(1, -2),
        k_pow(1, 1),
        k_pow(2, -1),
        gamma_half_pow(1),
        gamma_half_pow(-1),
    ];
    let mut e = Element::zero();
    for _ in 0..3 {
        let len = rng.gen_range(1..=4);
        let mut w = Element::one();
        for _ in 0..len {
            w = w.mul_ref(&gens[rng.gen_range(0..gens.len())]);
        }
        e.add_scaled(&w, &Scalar::from_i64(rng.gen_range(-3..=3)));
    }
    e
}

#[test]
fn traces_replay_and_normal_forms_are_fixed() {
    let u = alg("A2^1");
    let mut red = Reducer::new(&u);
    let cfg = ReductionConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let e = random_element(&mut rng);
        let out = red.reduce(&e, &cfg).unwrap();
        assert!(verify_trace(&u, &e, &out).unwrap());
        let n = out.result();
        let again = red.reduce(&n, &cfg).unwrap();
        assert_eq!(again.step_count, 0);
        assert_eq!(again.result(), n);
    }
}

#[test]
fn budget_and_foreign_symbols() {
    let u = alg("A2^1");
    let mut red = Reducer::new(&u);
    let e = xp(1, 0).mul_ref(&xm(1, 3)).mul_ref(&xp(2, 0)).mul_ref(&xm(2, 1)).mul_ref(&k_pow(1, 1));
    let out = red.reduce(&e, &ReductionConfig::default().budget(1)).unwrap();
    assert!(matches!(out.status, Status::BudgetExhausted(_)));
    let foreign = Element::gen(GenSym::free(0)).mul_ref(&xp(1, 0));
    assert!(red.reduce(&foreign, &ReductionConfig::default()).is_err());
}
