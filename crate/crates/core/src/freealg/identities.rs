//! q-commutator identities, each as an (lhs, rhs) pair of Elements, and a
//! seeded randomized checker.
//!
//! Two printed forms needed correction before they hold identically:
//! the second product rule reads `[ac, b]_v = a[c, b]_x + x[a, b]_{v/x} c`,
//! and the outer parameter of the last term of the first Jacobi-type
//! identity is `u/x`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{bracket as br, nested_bracket, nested_bracket_primed, Element, GenSym, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IdentityKind {
    /// [a,[b,c]_u]_v = [[a,b]_x,c]_{uv/x} + x[b,[a,c]_{v/x}]_{u/x}
    JacobiRight,
    /// [[a,b]_u,c]_v = [a,[b,c]_x]_{uv/x} + x[[a,c]_{v/x},b]_{u/x}
    JacobiLeft,
    /// [a,bc]_v = [a,b]_x c + x b[a,c]_{v/x}
    ProductLeft,
    /// [ac,b]_v = a[c,b]_x + x[a,b]_{v/x} c
    ProductRight,
    /// [a,a,b]_{u v} = [a,a,b]_{v u} = a²b − (u+v)aba + uv ba²
    SwapSym,
    /// [a,[b_1,…,b_n]_v] = Σ_i [b_1,…,[a,b_i],…,b_n]_v
    Leibniz,
    /// Antimorphisms turn right-nested brackets into left-nested ones.
    Antimorphism,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 7] = [
        IdentityKind::JacobiRight,
        IdentityKind::JacobiLeft,
        IdentityKind::ProductLeft,
        IdentityKind::ProductRight,
        IdentityKind::SwapSym,
        IdentityKind::Leibniz,
        IdentityKind::Antimorphism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityKind::JacobiRight => "jacobi-right",
            IdentityKind::JacobiLeft => "jacobi-left",
            IdentityKind::ProductLeft => "product-left",
            IdentityKind::ProductRight => "product-right",
            IdentityKind::SwapSym => "swap-sym",
            IdentityKind::Leibniz => "leibniz-bracket",
            IdentityKind::Antimorphism => "antimorphism-law",
        }
    }

    pub fn from_name(s: &str) -> Option<IdentityKind> {
        IdentityKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

fn nonzero(x: &Scalar) -> Result<()> {
    if x.is_zero() {
        Err(Error::Precondition("identity parameter x must be nonzero".into()))
    } else {
        Ok(())
    }
}

pub fn jacobi_right(a: &Element, b: &Element, c: &Element, u: &Scalar, v: &Scalar, x: &Scalar) -> Result<(Element, Element)> {
    nonzero(x)?;
    let lhs = br(a, &br(b, c, u), v);
    let uv_x = (u * v).div_ref(x)?;
    let v_x = v.div_ref(x)?;
    let u_x = u.div_ref(x)?;
    let mut rhs = br(&br(a, b, x), c, &uv_x);
    rhs.add_scaled(&br(b, &br(a, c, &v_x), &u_x), x);
    Ok((lhs, rhs))
}

/// The first Jacobi-type identity with the outer parameter of its last term
/// as printed (`v/x`). Holds only when u = v.
pub fn jacobi_right_printed(a: &Element, b: &Element, c: &Element, u: &Scalar, v: &Scalar, x: &Scalar) -> Result<(Element, Element)> {
    nonzero(x)?;
    let lhs = br(a, &br(b, c, u), v);
    let v_x = v.div_ref(x)?;
    let mut rhs = br(&br(a, b, x), c, &(u * v).div_ref(x)?);
    rhs.add_scaled(&br(b, &br(a, c, &v_x), &v_x), x);
    Ok((lhs, rhs))
}

pub fn jacobi_left(a: &Element, b: &Element, c: &Element, u: &Scalar, v: &Scalar, x: &Scalar) -> Result<(Element, Element)> {
    nonzero(x)?;
    let lhs = br(&br(a, b, u), c, v);
    let mut rhs = br(a, &br(b, c, x), &(u * v).div_ref(x)?);
    rhs.add_scaled(&br(&br(a, c, &v.div_ref(x)?), b, &u.div_ref(x)?), x);
    Ok((lhs, rhs))
}

pub fn product_left(a: &Element, b: &Element, c: &Element, v: &Scalar, x: &Scalar) -> Result<(Element, Element)> {
    nonzero(x)?;
    let lhs = br(a, &b.mul_ref(c), v);
    let mut rhs = br(a, b, x).mul_ref(c);
    rhs.add_scaled(&b.mul_ref(&br(a, c, &v.div_ref(x)?)), x);
    Ok((lhs, rhs))
}

pub fn product_right(a: &Element, b: &Element, c: &Element, v: &Scalar, x: &Scalar) -> Result<(Element, Element)> {
    nonzero(x)?;
    let lhs = br(&a.mul_ref(c), b, v);
    let mut rhs = a.mul_ref(&br(c, b, x));
    rhs.add_scaled(&br(a, b, &v.div_ref(x)?).mul_ref(c), x);
    Ok((lhs, rhs))
}

/// Product rule for [ac, b]_v exactly as printed: a[b,c]_x + x[a,c]_{v/x} b.
pub fn product_right_printed(a: &Element, b: &Element, c: &Element, v: &Scalar, x: &Scalar) -> Result<(Element, Element)> {
    nonzero(x)?;
    let lhs = br(&a.mul_ref(c), b, v);
    let mut rhs = a.mul_ref(&br(b, c, x));
    rhs.add_scaled(&br(a, c, &v.div_ref(x)?).mul_ref(b), x);
    Ok((lhs, rhs))
}

/// Returns ([a,a,b]_{u v}, [a,a,b]_{v u}, a²b − (u+v)aba + uv·ba²).
pub fn swap_sym(a: &Element, b: &Element, u: &Scalar, v: &Scalar) -> Result<(Element, Element, Element)> {
    let items = [a.clone(), a.clone(), b.clone()];
    let uv = nested_bracket(&items, &[u.clone(), v.clone()])?;
    let vu = nested_bracket(&items, &[v.clone(), u.clone()])?;
    let aa = a.mul_ref(a);
    let mut expanded = aa.mul_ref(b);
    expanded.add_scaled(&a.mul_ref(b).mul_ref(a), &-&(u + v));
    expanded.add_scaled(&b.mul_ref(&aa), &(u * v));
    Ok((uv, vu, expanded))
}

pub fn leibniz(a: &Element, items: &[Element], vs: &[Scalar]) -> Result<(Element, Element)> {
    let one = Scalar::one();
    let lhs = br(a, &nested_bracket(items, vs)?, &one);
    let mut rhs = Element::zero();
    for i in 0..items.len() {
        let mut its = items.to_vec();
        its[i] = br(a, &items[i], &one);
        rhs.add_assign(&nested_bracket(&its, vs)?);
    }
    Ok((lhs, rhs))
}

/// Reverse every word (a linear antimorphism fixing each generator).
pub fn reverse(e: &Element) -> Element {
    Element::from_terms(e.terms().map(|(w, c)| (w.reversed(), c.clone())))
}

/// Reverse every word and invert q in coefficients (Ω on a free alphabet).
pub fn reverse_bar(e: &Element) -> Element {
    Element::from_terms(e.terms().map(|(w, c)| (w.reversed(), c.bar())))
}

/// Two checks of the antimorphism law on a right-nested bracket:
/// A([b_1..b_n]_v) = [A(b_n)..A(b_1)]'_v for the linear reversal A, and
/// B([b_1..b_n]_v) = (−1)^{n−1} v_1⁻¹⋯v_{n−1}⁻¹ [B(b_1)..B(b_n)]_v for B the
/// q-inverting reversal, valid when every v_i satisfies B(v_i) = v_i⁻¹.
pub fn antimorphism(items: &[Element], vs: &[Scalar]) -> Result<[(Element, Element); 2]> {
    let br_v = nested_bracket(items, vs)?;
    let rev_items: Vec<Element> = items.iter().rev().map(reverse).collect();
    let linear = (reverse(&br_v), nested_bracket_primed(&rev_items, vs)?);
    for v in vs {
        if v.bar() != v.inv()? {
            return Err(Error::Precondition(format!("parameter {v} is not inverted by q → q⁻¹")));
        }
    }
    let b_items: Vec<Element> = items.iter().map(reverse_bar).collect();
    let mut factor = if items.len() % 2 == 0 { Scalar::from_i64(-1) } else { Scalar::one() };
    for v in vs {
        factor = &factor * &v.inv()?;
    }
    let semilinear = (reverse_bar(&br_v), nested_bracket(&b_items, vs)?.scale(&factor));
    Ok([linear, semilinear])
}

/// Outcome of a batch of randomized identity checks.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: &'static str,
    pub instances: usize,
    pub failures: usize,
    pub counterexample: Option<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

const ALPHABET: u16 = 3;

fn random_coeff(rng: &mut ChaCha8Rng) -> Scalar {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-3..=3);
    }
    &Scalar::from_i64(c) * &Scalar::t_pow(6 * rng.gen_range(-4..=4))
}

fn random_element(rng: &mut ChaCha8Rng) -> Element {
    let mut e = Element::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let len = rng.gen_range(1..=2);
        let w: Vec<GenSym> = (0..len).map(|_| GenSym::free(rng.gen_range(0..ALPHABET))).collect();
        e.add_term(Word::new(&w), random_coeff(rng));
    }
    if e.is_zero() {
        Element::gen(GenSym::free(0))
    } else {
        e
    }
}

/// ±q^k with k a half-integer in [−3, 3]; these satisfy bar(v) = v⁻¹.
fn random_unit_monomial(rng: &mut ChaCha8Rng) -> Scalar {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    &Scalar::from_i64(sign) * &Scalar::t_pow(6 * rng.gen_range(-6..=6))
}

fn random_monomial(rng: &mut ChaCha8Rng) -> Scalar {
    let c = [1, -1, 2, -2, 3][rng.gen_range(0..5)];
    let m = &Scalar::from_i64(c) * &Scalar::t_pow(6 * rng.gen_range(-6..=6));
    if rng.gen_bool(0.3) {
        m.inv().expect("nonzero")
    } else {
        m
    }
}

fn check_one(kind: IdentityKind, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let a = random_element(rng);
    let b = random_element(rng);
    let c = random_element(rng);
    let (u, v, x) = (random_monomial(rng), random_monomial(rng), random_monomial(rng));
    let mismatch = |pairs: &[(Element, Element)]| -> Option<String> {
        pairs.iter().find(|(l, r)| l != r).map(|(l, r)| format!("a = {a}; b = {b}; c = {c}; u = {u}; v = {v}; x = {x}; lhs − rhs = {}", l - r))
    };
    Ok(match kind {
        IdentityKind::JacobiRight => mismatch(&[jacobi_right(&a, &b, &c, &u, &v, &x)?]),
        IdentityKind::JacobiLeft => mismatch(&[jacobi_left(&a, &b, &c, &u, &v, &x)?]),
        IdentityKind::ProductLeft => mismatch(&[product_left(&a, &b, &c, &v, &x)?]),
        IdentityKind::ProductRight => mismatch(&[product_right(&a, &b, &c, &v, &x)?]),
        IdentityKind::SwapSym => {
            let (uv, vu, ex) = swap_sym(&a, &b, &u, &v)?;
            mismatch(&[(uv.clone(), vu), (uv, ex)])
        }
        IdentityKind::Leibniz => {
            let n = rng.gen_range(2..=4);
            let items: Vec<Element> = (0..n).map(|_| random_element(rng)).collect();
            let vs: Vec<Scalar> = (1..n).map(|_| random_monomial(rng)).collect();
            let (l, r) = leibniz(&a, &items, &vs)?;
            (l != r).then(|| format!("leibniz n = {n}: lhs − rhs = {}", &l - &r))
        }
        IdentityKind::Antimorphism => {
            let n = rng.gen_range(2..=4);
            let items: Vec<Element> = (0..n).map(|_| random_element(rng)).collect();
            let vs: Vec<Scalar> = (1..n).map(|_| random_unit_monomial(rng)).collect();
            let pairs = antimorphism(&items, &vs)?;
            pairs.iter().position(|(l, r)| l != r).map(|k| format!("antimorphism n = {n}, law {k}: lhs − rhs = {}", &pairs[k].0 - &pairs[k].1))
        }
    })
}

/// Check one identity on `instances` random bindings drawn from `seed`.
pub fn check_identity_random(kind: IdentityKind, instances: usize, seed: u64) -> Result<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (kind as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut failures = 0;
    let mut counterexample = None;
    for _ in 0..instances {
        if let Some(ce) = check_one(kind, &mut rng)? {
            failures += 1;
            counterexample.get_or_insert(ce);
        }
    }
    Ok(IdentityReport { identity: kind.name(), instances, failures, counterexample })
}

pub fn run_identity_suite(instances: usize, seed: u64) -> Result<Vec<IdentityReport>> {
    IdentityKind::ALL.iter().map(|&k| check_identity_random(k, instances, seed)).collect()
}
