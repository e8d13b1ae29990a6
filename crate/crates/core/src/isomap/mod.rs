//! The Drinfeld map from Chevalley generators to the loop presentation,
//! the Chevalley relations it must respect, and the inverse formulas.

pub mod inverse;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::cartan::CartanData;
use crate::drinfeld::{gamma_pow, k_pow, x, DrinfeldAlgebra, Sign};
use crate::epsseq::{validate_sequence, AConstant, EpsilonSequence};
use crate::error::{Error, Result};
use crate::freealg::{bracket, nested_bracket, Element, GenSym, SymClass};
use crate::reduce::{Certificate, Reducer, ReductionConfig, Verdict};
use crate::scalar::{q_int, rat_int, Scalar, Q};

pub use inverse::{inverse_generators, InverseFormula, Step2Resolution, Variant};

/// Images of e_i, f_i, t_i (i = 0..=n).
#[derive(Clone, Debug)]
pub struct ChevalleyImage {
    pub label: String,
    pub seq: EpsilonSequence,
    pub e: Vec<Element>,
    pub f: Vec<Element>,
    pub t: Vec<Element>,
    pub t_inv: Vec<Element>,
    pub k_theta: Element,
    pub k_theta_inv: Element,
    /// Bracket part of E_0 (without γK_θ^{-1}).
    pub e0_bracket: Element,
    /// Bracket part of F_0 (without a(−q)^{−ε}γ^{-1}K_θ).
    pub f0_bracket: Element,
    /// a·(−q)^{−ε}; `a` is taken as 1 when unspecified.
    pub f0_constant: Scalar,
    pub a: AConstant,
    /// 1/p_i factors of F_i.
    pub p: Vec<Scalar>,
    /// q_i = q^{d_i}.
    pub q_i: Vec<Scalar>,
    /// (α_i|α_j) over 0..=n.
    pub form: Vec<Vec<Q>>,
}

fn k_monomial(exps: &[i64]) -> Element {
    let mut out = Element::one();
    for (i, &e) in exps.iter().enumerate() {
        if e != 0 {
            out = out.mul_ref(&k_pow(i + 1, e));
        }
    }
    out
}

/// (−q)^e for integer e.
fn minus_q_pow(e: i64) -> Scalar {
    let s = Scalar::q(e);
    if e.rem_euclid(2) == 1 {
        -&s
    } else {
        s
    }
}

/// Images for the untwisted map and for the twisted map over base nodes.
///
/// `p` overrides the 1/p_i factors (default 1).
pub fn chevalley_images(seq: &EpsilonSequence, cartan: &CartanData) -> Result<ChevalleyImage> {
    chevalley_images_with(seq, cartan, None)
}

pub fn chevalley_images_with(seq: &EpsilonSequence, cartan: &CartanData, p: Option<Vec<Scalar>>) -> Result<ChevalleyImage> {
    let labels = validate_sequence(&seq.seq, Some(&seq.labels), cartan)
        .map_err(|f| Error::InvalidSequence(f.to_string()))?;
    if seq.seq.len() + 1 != cartan.h() || seq.theta != cartan.theta {
        return Err(Error::InvalidSequence("sequence does not sum to θ".into()));
    }
    let n = cartan.rank();
    let h1 = seq.seq.len();
    let vs: Vec<Scalar> = labels.iter().map(Scalar::q_pow).collect::<Result<_>>()?;
    let mut minus = Vec::with_capacity(h1);
    let mut plus = Vec::with_capacity(h1);
    for (pos, &i) in seq.seq.iter().enumerate().rev() {
        let mode = if pos == 0 { 1 } else { 0 };
        minus.push(x(Sign::Minus, i, mode));
        plus.push(x(Sign::Plus, i, -mode));
    }
    let e0_bracket = nested_bracket(&minus, &vs)?;
    let f0_bracket = nested_bracket(&plus, &vs)?;
    let k_theta = k_monomial(&seq.theta);
    let k_theta_inv = k_monomial(&seq.theta.iter().map(|c| -c).collect::<Vec<_>>());
    let t0 = gamma_pow(1).mul_ref(&k_theta_inv);
    let t0_inv = gamma_pow(-1).mul_ref(&k_theta);
    let eps = &seq.epsilon;
    if !eps.is_integer() {
        return Err(Error::Exponent(format!("ε = {eps} is not an integer")));
    }
    let eps = eps.to_integer().to_i64().expect("small");
    let a_val = seq.a.value().cloned().unwrap_or_else(Scalar::one);
    let f0_constant = &a_val * &minus_q_pow(-eps);
    let p = p.unwrap_or_else(|| vec![Scalar::one(); n + 1]);
    let mut e = vec![e0_bracket.mul_ref(&t0)];
    let mut f = vec![t0_inv.mul_ref(&f0_bracket).scale(&f0_constant)];
    let mut t = vec![t0];
    let mut t_inv = vec![t0_inv];
    for i in 1..=n {
        e.push(x(Sign::Plus, i, 0));
        f.push(x(Sign::Minus, i, 0).scale(&p[i].inv()?));
        t.push(k_pow(i, 1));
        t_inv.push(k_pow(i, -1));
    }
    let q_i = (0..=n).map(|i| Scalar::q_pow(&cartan.d[i])).collect::<Result<_>>()?;
    let form = (0..=n).map(|i| (0..=n).map(|j| cartan.bilinear(i, j)).collect()).collect();
    Ok(ChevalleyImage {
        label: cartan.ty.to_string(),
        seq: seq.clone(),
        e,
        f,
        t,
        t_inv,
        k_theta,
        k_theta_inv,
        e0_bracket,
        f0_bracket,
        f0_constant,
        a: seq.a.clone(),
        p,
        q_i,
        form,
    })
}

/// Images for a twisted type. The 1/p_i factors default to 1; for σ-fixed
/// nodes the intended p_i is not determined here.
pub fn twisted_images(seq: &EpsilonSequence, cartan: &CartanData) -> Result<ChevalleyImage> {
    if cartan.folding.is_none() {
        return Err(Error::UnsupportedType(format!("{} is not twisted", cartan.ty)));
    }
    chevalley_images(seq, cartan)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GoalKind {
    Conjugation,
    Commutator,
    Serre,
}

/// A Chevalley relation under the map, expected to vanish.
#[derive(Clone, Debug)]
pub struct Goal {
    pub name: String,
    pub kind: GoalKind,
    pub element: Element,
    /// True when the goal involves F_0 and `a` is unspecified.
    pub uses_unspecified: bool,
}

fn commutator(a: &Element, b: &Element) -> Element {
    &a.mul_ref(b) - &b.mul_ref(a)
}

impl ChevalleyImage {
    pub fn n(&self) -> usize {
        self.e.len() - 1
    }

    /// (t_i − t_i^{-1})/(q_i − q_i^{-1}).
    pub fn cartan_quotient(&self, i: usize) -> Result<Element> {
        let qi = &self.q_i[i];
        let c = (qi - &qi.inv()?).inv()?;
        Ok((&self.t[i] - &self.t_inv[i]).scale(&c))
    }

    fn a_unspecified(&self) -> bool {
        self.a == AConstant::Unspecified
    }
}

/// Name of a goal, e.g. `[E0,F1]`, `serre+(0,1)`, `conj(t1,E0)`.
pub fn goal_relations(img: &ChevalleyImage) -> Result<Vec<Goal>> {
    let n = img.n();
    let mut goals = Vec::new();
    let unspec = img.a_unspecified();
    let push = |goals: &mut Vec<Goal>, name: String, kind, element, f0: bool| {
        goals.push(Goal { name, kind, element, uses_unspecified: f0 && unspec });
    };
    // t_j E_i t_j^{-1} = q^{(α_j|α_i)} E_i, and q^d.
    for i in 0..=n {
        for j in 0..=n {
            let c = Scalar::q_pow(&img.form[j][i])?;
            let e = &img.t[j].mul_ref(&img.e[i]).mul_ref(&img.t_inv[j]) - &img.e[i].scale(&c);
            push(&mut goals, format!("conj(t{j},E{i})"), GoalKind::Conjugation, e, false);
            let f = &img.t[j].mul_ref(&img.f[i]).mul_ref(&img.t_inv[j]) - &img.f[i].scale(&c.inv()?);
            push(&mut goals, format!("conj(t{j},F{i})"), GoalKind::Conjugation, f, i == 0);
        }
        let d = crate::drinfeld::qd(1);
        let dinv = crate::drinfeld::qd(-1);
        let s = if i == 0 { 1 } else { 0 };
        let e = &d.mul_ref(&img.e[i]).mul_ref(&dinv) - &img.e[i].scale(&Scalar::q(s));
        push(&mut goals, format!("conj(qd,E{i})"), GoalKind::Conjugation, e, false);
        let f = &d.mul_ref(&img.f[i]).mul_ref(&dinv) - &img.f[i].scale(&Scalar::q(-s));
        push(&mut goals, format!("conj(qd,F{i})"), GoalKind::Conjugation, f, i == 0);
    }
    for i in 0..=n {
        for j in 0..=n {
            let mut el = commutator(&img.e[i], &img.f[j]);
            let name = if i == j {
                el = &el - &img.cartan_quotient(i)?;
                format!("[E{i},F{i}]-(t{i}-t{i}^-1)/(q{i}-q{i}^-1)")
            } else {
                format!("[E{i},F{j}]")
            };
            push(&mut goals, name, GoalKind::Commutator, el, j == 0);
        }
    }
    for i in 0..=n {
        for j in 0..=n {
            if i == j {
                continue;
            }
            let e = serre_sum(img, &img.e, i, j)?;
            push(&mut goals, format!("serre+({i},{j})"), GoalKind::Serre, e, false);
            let f = serre_sum(img, &img.f, i, j)?;
            push(&mut goals, format!("serre-({i},{j})"), GoalKind::Serre, f, i == 0 || j == 0);
        }
    }
    Ok(goals)
}

/// Σ_{m+k=1−a_ij} (−1)^m g_i^{(m)} g_j g_i^{(k)}, divided powers with [k]_i = [k]_{q_i}.
fn serre_sum(img: &ChevalleyImage, g: &[Element], i: usize, j: usize) -> Result<Element> {
    let aij = (rat_int(2) * &img.form[i][j] / &img.form[i][i]).to_integer().to_i64().expect("small");
    let top = 1 - aij;
    let di = &img.form[i][i] / rat_int(2);
    let fact = |m: i64| -> Result<Scalar> {
        let mut acc = Scalar::one();
        for k in 1..=m {
            acc = &acc * &q_int(k, &di)?;
        }
        Ok(acc)
    };
    let mut out = Element::zero();
    for m in 0..=top {
        let k = top - m;
        let mut c = (&fact(m)? * &fact(k)?).inv()?;
        if m % 2 == 1 {
            c = -&c;
        }
        let term = g[i].pow(m as u32).mul_ref(&g[j]).mul_ref(&g[i].pow(k as u32));
        out.add_scaled(&term, &c);
    }
    Ok(out)
}

/// t_0 · Π t_i^{θ_i}, which should be γ.
pub fn central_product(img: &ChevalleyImage) -> Element {
    let mut acc = img.t[0].clone();
    for (k, &c) in img.seq.theta.iter().enumerate() {
        for _ in 0..c {
            acc = acc.mul_ref(&img.t[k + 1]);
        }
    }
    acc
}

/// Images under the anti-involution Ω: x^± ↔ x^∓ with modes negated,
/// K ↦ K^{-1}, γ^{1/2} ↦ γ^{-1/2}, a(l) ↦ a(−l).
pub fn omega_image(g: GenSym) -> Option<Element> {
    let flip = |c| match c {
        SymClass::XMinus => SymClass::XPlus,
        SymClass::XPlus => SymClass::XMinus,
        SymClass::ANeg => SymClass::APos,
        SymClass::APos => SymClass::ANeg,
        other => other,
    };
    Some(Element::gen(GenSym::new(flip(g.class), g.index, -g.mode)))
}

/// Ω applied to E_0's bracket part, compared with F_0's bracket part:
/// returns the scalar c with Ω(e0_bracket) = c·f0_bracket, if it exists.
pub fn omega_duality(img: &ChevalleyImage) -> Result<Option<Scalar>> {
    let om = img.e0_bracket.omega(&omega_image)?;
    let target = &img.f0_bracket;
    let Some((w, c)) = target.terms().next() else { return Ok(None) };
    let Some(d) = om.coeff(w) else { return Ok(None) };
    let ratio = d.div_ref(c)?;
    Ok((om == target.scale(&ratio)).then_some(ratio))
}

/// [e0_bracket, f0_bracket] = κ·(γK_θ^{-1} − γ^{-1}K_θ)/(q − q^{-1}).
#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub kappa: Option<Scalar>,
    pub verdict: Verdict,
    pub certificate: Certificate,
    /// The element [e0_bracket, f0_bracket] − κ·(…), certified zero when κ is found.
    pub element: Element,
    /// Value of a for which [E_0, F_0] = (t_0 − t_0^{-1})/(q_0 − q_0^{-1}), given κ.
    pub required_a: Option<Scalar>,
}

/// Solve for κ by matching the coefficient of γK_θ^{-1}, then certify.
pub fn bracket_checkpoint(img: &ChevalleyImage, red: &mut Reducer<'_>, cfg: &ReductionConfig) -> Result<Checkpoint> {
    let lhs = bracket(&img.e0_bracket, &img.f0_bracket, &Scalar::one());
    let t0 = &img.t[0];
    let t0_inv = &img.t_inv[0];
    let q_diff = &Scalar::q(1) - &Scalar::q(-1);
    let unit = (t0 - t0_inv).scale(&q_diff.inv()?);
    let nf = red.reduce(&lhs, cfg)?.result();
    let t0_nf = red.reduce(t0, cfg)?.result();
    let (w, c0) = t0_nf.terms().next().ok_or_else(|| Error::Exponent("t_0 reduced to zero".into()))?;
    let Some(c) = nf.coeff(w) else {
        // no γK_θ^{-1} term: κ = 0 if the whole bracket vanishes
        let cert = red.certify_zero(&lhs, cfg)?;
        let kappa = (cert.verdict == Verdict::Zero).then(Scalar::zero);
        return Ok(Checkpoint { kappa, verdict: cert.verdict, certificate: cert.certificate, element: lhs, required_a: None });
    };
    let kappa = c.div_ref(c0)?.mul_ref(&q_diff);
    let element = &lhs - &unit.scale(&kappa);
    let cert = red.certify_zero(&element, cfg)?;
    if cert.verdict != Verdict::Zero {
        return Ok(Checkpoint { kappa: None, verdict: cert.verdict, certificate: Certificate::new(), element, required_a: None });
    }
    let eps = img.seq.epsilon.to_integer().to_i64().expect("small");
    // [E_0, F_0] = a(−q)^{−ε}κ·(t_0 − t_0^{-1})/(q − q^{-1})
    let q0 = &img.q_i[0];
    let q0_diff = q0 - &q0.inv()?;
    let required_a = q_diff.div_ref(&q0_diff)?.div_ref(&minus_q_pow(-eps).mul_ref(&kappa)).ok();
    Ok(Checkpoint { kappa: Some(kappa), verdict: Verdict::Zero, certificate: cert.certificate, element, required_a })
}

pub fn drinfeld_algebra(cartan: &CartanData) -> DrinfeldAlgebra {
    DrinfeldAlgebra::new(cartan)
}

/// A printed value of κ for comparison with [`bracket_checkpoint`].
#[derive(Clone, Debug)]
pub struct PrintedKappa {
    pub value: Scalar,
    pub text: String,
    pub citation: &'static str,
}

/// Printed κ: (−q)^{−n} for A_n⁽¹⁾ and q^{−1}[2]_1 for C₂⁽¹⁾; no value otherwise.
pub fn printed_kappa(cartan: &CartanData) -> Result<Option<PrintedKappa>> {
    use crate::cartan::Series;
    let ty = cartan.ty;
    if ty.r != 1 {
        return Ok(None);
    }
    Ok(match (ty.series, ty.n) {
        (Series::A, n) if n >= 2 => Some(PrintedKappa {
            value: minus_q_pow(-(n as i64)),
            text: format!("(-q)^(-{n})"),
            citation: "A_n [e_0, f_0] chain, final line",
        }),
        (Series::C, 2) => Some(PrintedKappa {
            value: &Scalar::q(-1) * &q_int(2, &cartan.d[1])?,
            text: "q^-1*[2]_1".into(),
            citation: "C_2 [e_0, f_0] chain, final line",
        }),
        _ => None,
    })
}
