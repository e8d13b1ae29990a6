use qaffine::cartan::{affine_cartan, AffineType};
use qaffine::drinfeld::twisted::{TwistedAlgebra, TwistedSpec};
use qaffine::drinfeld::{a, k_pow, xm, xp, DrinfeldAlgebra, RelationSpec, Sign, UGen};
use qaffine::freealg::{parse_element, Element, Word};
use qaffine::scalar::Scalar;

fn alg(t: &str) -> DrinfeldAlgebra {
    DrinfeldAlgebra::new(&affine_cartan(t.parse::<AffineType>().unwrap()).unwrap())
}

fn el(s: &str) -> Element {
    parse_element(s).unwrap()
}

/// exp(c Σ_{k≥1} a_i(s k) z^k) by truncated series multiplication, words sorted afterwards.
fn exp_oracle(i: usize, m: usize, c: &Scalar, s: i64) -> Element {
    let mut x = vec![Element::zero(); m + 1];
    for (k, xk) in x.iter_mut().enumerate().skip(1) {
        *xk = a(i, s * k as i64).scale(c);
    }
    let mul = |p: &[Element], q: &[Element]| {
        let mut out = vec![Element::zero(); m + 1];
        for (d1, e1) in p.iter().enumerate() {
            for (d2, e2) in q.iter().enumerate() {
                if d1 + d2 <= m {
                    out[d1 + d2].add_assign(&e1.mul_ref(e2));
                }
            }
        }
        out
    };
    let mut total = vec![Element::zero(); m + 1];
    total[0] = Element::one();
    let mut power = total.clone();
    let mut fact = Scalar::one();
    for n in 1..=m {
        power = mul(&power, &x);
        fact = &fact * &Scalar::from_i64(n as i64);
        let inv = fact.inv().unwrap();
        for d in 0..=m {
            total[d].add_scaled(&power[d], &inv);
        }
    }
    let mut sorted = Element::zero();
    for (w, c) in total[m].terms() {
        let mut syms = w.syms().to_vec();
        syms.sort();
        sorted.add_term(Word::new(&syms), c.clone());
    }
    sorted
}

#[test]
fn psi_phi_match_series_oracle() {
    for t in ["A1^1", "C2^1", "G2^1"] {
        let g = alg(t);
        for i in 1..=g.n {
            let c = g.q_i_diff(i);
            for m in 0..=4i64 {
                let want = k_pow(i, 1).mul_ref(&exp_oracle(i, m as usize, &c, 1));
                assert_eq!(g.psi(i, m), want, "{t} psi_{i}({m})");
                let want = k_pow(i, -1).mul_ref(&exp_oracle(i, m as usize, &-&c, -1));
                assert_eq!(g.phi(i, -m), want, "{t} phi_{i}({})", -m);
            }
        }
    }
    let g = alg("A1^1");
    assert_eq!(g.psi(1, 0), el("K1"));
    assert_eq!(g.psi(1, 1), el("(q - q^-1)*K1·a1(1)"));
    assert_eq!(g.phi(1, 0), el("K1^-1"));
    assert!(g.psi(1, -1).is_zero());
    assert!(g.phi(1, 1).is_zero());
}

#[test]
fn relation_examples() {
    let g = alg("A1^1");
    let aa = RelationSpec::AA { i: 1, k: 1, j: 1, l: -1 }.build(&g).unwrap();
    assert_eq!(aa.element, el("a1(1)·a1(-1) - a1(-1)·a1(1) - qint(2)*(g - g^-1)/(q - q^-1)"));
    let g3 = alg("A3^1");
    let mixed = RelationSpec::XxMixed { i: 1, j: 2, k: 0, l: 3 }.build(&g3).unwrap();
    assert_eq!(mixed.element, &(&xp(1, 0) * &xm(2, 3)) - &(&xm(2, 3) * &xp(1, 0)));
    let serre = RelationSpec::Serre { sign: Sign::Minus, i: 1, j: 2, modes: vec![0, 0], n: 1 }.build(&g3).unwrap();
    let double = RelationSpec::SerreDouble { sign: Sign::Minus, i: 1, j: 2, m: 0, n: 1 }.build(&g3).unwrap();
    assert_eq!(serre.element, double.element.scale(&Scalar::from_i64(2)));
    let kx = RelationSpec::KX { i: 1, e: 1, sign: Sign::Plus, j: 1, k: 0 }.build(&g3).unwrap();
    assert_eq!(kx.element, el("K1·xp1(0) - q^2*xp1(0)·K1"));
    assert!(RelationSpec::AA { i: 1, k: 0, j: 1, l: 1 }.build(&g3).is_err());
    assert!(RelationSpec::Serre { sign: Sign::Plus, i: 1, j: 2, modes: vec![0], n: 0 }.build(&g3).is_err());
    assert!(RelationSpec::KX { i: 9, e: 1, sign: Sign::Plus, j: 1, k: 0 }.build(&g3).is_err());
    let json = serde_json::to_string(&RelationSpec::XxSame { sign: Sign::Plus, i: 1, j: 2, k: 0, l: 1 }).unwrap();
    assert_eq!(json, r#"{"kind":"xx-same","sign":"+","i":1,"j":2,"k":0,"l":1}"#);
}

#[test]
fn non_simply_laced_coefficients() {
    // C2: α1 short, (α1|α1) = 1
    let g = alg("C2^1");
    let ax = RelationSpec::AX { i: 1, k: 1, sign: Sign::Plus, j: 1, l: 0 }.build(&g).unwrap();
    let want = el("a1(1)·xp1(0) - xp1(0)·a1(1) - qint(2, 1/2)*g^(-1/2)·xp1(1)");
    assert_eq!(ax.element, want);
    let s = RelationSpec::Serre { sign: Sign::Plus, i: 1, j: 2, modes: vec![0, 0, 0], n: 0 };
    assert_eq!(s.build(&g).unwrap().element.len(), 4);
}

#[test]
fn folding_generators() {
    let c = affine_cartan("A3^2".parse().unwrap()).unwrap();
    let t = TwistedAlgebra::new(&c).unwrap();
    assert_eq!(t.r, 2);
    let k1 = t.fold_gen(UGen::K(1, 1).sym()).unwrap();
    assert_eq!(k1.rat, el("K1·K3"));
    let k2 = t.fold_gen(UGen::K(2, 1).sym()).unwrap();
    assert_eq!(k2.rat, el("K2·K2"));
    let x0 = t.fold_gen(UGen::X(Sign::Plus, 1, 0).sym()).unwrap();
    assert!(x0.rat.is_zero());
    assert_eq!(x0.irr, el("(1/2)*(xp1(0) + xp3(0))"));
    // fixed node, odd mode vanishes
    let a1 = t.fold_gen(UGen::A(2, 1).sym()).unwrap();
    assert!(a1.is_zero());
    for k in -4..=4 {
        for i in 1..=3 {
            for sign in [Sign::Plus, Sign::Minus] {
                let rel = TwistedSpec::SigmaX { sign, i, k }.element(&t).unwrap();
                assert!(t.fold(&rel).unwrap().is_zero());
            }
        }
    }
    let c3 = affine_cartan("D4^3".parse().unwrap()).unwrap();
    let t3 = TwistedAlgebra::new(&c3).unwrap();
    for k in -4..=4i64 {
        for i in 1..=4 {
            let rel = TwistedSpec::SigmaX { sign: Sign::Minus, i, k }.element(&t3).unwrap();
            assert!(t3.fold(&rel).unwrap().is_zero());
            if k != 0 {
                let rel = TwistedSpec::SigmaA { i, l: k }.element(&t3).unwrap();
                assert!(t3.fold(&rel).unwrap().is_zero());
            }
        }
    }
    assert!(TwistedAlgebra::new(&affine_cartan("A2^1".parse().unwrap()).unwrap()).is_err());
}
