//! Twisted relations and the folding map into the untwisted algebra of the
//! simply-laced base.

use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{exp_coefficient, gamma_half_pow, k_pow, x, DrinfeldAlgebra, Sign, UGen};
use crate::cartan::{sigma_pow, CartanData, Folding};
use crate::error::{Error, Result};
use crate::freealg::{Element, GenSym, Word};
use crate::scalar::{q_binomial, q_int_rat, rat_int, Scalar, Q};

/// `rat + √r·irr`, with (√r)² = r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtElement {
    pub r: u8,
    pub rat: Element,
    pub irr: Element,
}

impl SqrtElement {
    pub fn rational(r: u8, e: Element) -> Self {
        SqrtElement { r, rat: e, irr: Element::zero() }
    }

    pub fn one(r: u8) -> Self {
        SqrtElement::rational(r, Element::one())
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn mul_ref(&self, o: &SqrtElement) -> SqrtElement {
        let mut rat = self.rat.mul_ref(&o.rat);
        rat.add_scaled(&self.irr.mul_ref(&o.irr), &Scalar::from_i64(self.r as i64));
        let mut irr = self.rat.mul_ref(&o.irr);
        irr.add_assign(&self.irr.mul_ref(&o.rat));
        SqrtElement { r: self.r, rat, irr }
    }

    pub fn add_scaled(&mut self, o: &SqrtElement, c: &Scalar) {
        self.rat.add_scaled(&o.rat, c);
        self.irr.add_scaled(&o.irr, c);
    }

    pub fn map(&self, f: impl Fn(&Element) -> Result<Element>) -> Result<SqrtElement> {
        Ok(SqrtElement { r: self.r, rat: f(&self.rat)?, irr: f(&self.irr)? })
    }
}

impl fmt::Display for SqrtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.irr.is_zero()) {
            (_, true) => write!(f, "{}", self.rat),
            (true, false) => write!(f, "sqrt({})*({})", self.r, self.irr),
            (false, false) => write!(f, "{} + sqrt({})*({})", self.rat, self.r, self.irr),
        }
    }
}

/// The twisted algebra on base nodes 1..=N together with its folding data.
#[derive(Clone, Debug)]
pub struct TwistedAlgebra {
    pub cartan: CartanData,
    pub folding: Folding,
    /// Untwisted algebra of the simply-laced base.
    pub base: DrinfeldAlgebra,
    pub big_n: usize,
    pub r: u8,
    /// d of the orbit containing each base node (index 0 unused).
    pub d: Vec<Q>,
}

impl TwistedAlgebra {
    pub fn new(cartan: &CartanData) -> Result<Self> {
        let folding = cartan
            .folding
            .clone()
            .ok_or_else(|| Error::UnsupportedType(format!("{} is not twisted", cartan.ty)))?;
        let big_n = folding.base.rank;
        let mut d = vec![Q::one()];
        for j in 1..=big_n {
            d.push(cartan.d[folding.orbit_of[j]].clone());
        }
        Ok(TwistedAlgebra {
            base: DrinfeldAlgebra::from_finite(folding.base),
            r: folding.r,
            big_n,
            d,
            folding,
            cartan: cartan.clone(),
        })
    }

    fn check(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.big_n {
            Err(Error::InvalidParams(format!("base node {i} outside 1..={}", self.big_n)))
        } else {
            Ok(())
        }
    }

    pub fn sigma(&self, i: usize, s: usize) -> usize {
        sigma_pow(&self.folding.sigma, i, s)
    }

    pub fn omega(&self, k: i64) -> Scalar {
        Scalar::omega(self.r, k)
    }

    /// a'_{i, σ^s(j)} of the base.
    pub fn a_prime(&self, i: usize, j: usize, s: usize) -> i64 {
        self.folding.a(i, self.sigma(j, s))
    }

    /// (α_i|α_j) on base nodes: Σ_s a'_{σ^s(i), j}.
    pub fn pair(&self, i: usize, j: usize) -> i64 {
        (0..self.r as usize).map(|s| self.folding.a(self.sigma(i, s), j)).sum()
    }

    pub fn q_i(&self, i: usize) -> Scalar {
        Scalar::q_pow(&self.d[i]).expect("d is a multiple of 1/12")
    }

    pub fn q_i_diff(&self, i: usize) -> Scalar {
        let qi = self.q_i(i);
        &qi - &qi.inv().expect("nonzero")
    }

    /// Σ_s [k(α'_i|σ^s α'_j)/r d_i]_i / k · ω^{ks}.
    pub fn heisenberg_coeff(&self, i: usize, j: usize, k: i64) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for s in 0..self.r as usize {
            let arg = rat_int(k * self.a_prime(i, j, s)) / &self.d[i];
            let c = q_int_rat(&arg, &self.d[i])?.div_ref(&Scalar::from_i64(k))?;
            acc = &acc + &(&c * &self.omega(k * s as i64));
        }
        Ok(acc)
    }

    pub fn psi(&self, i: usize, m: i64) -> Element {
        if m < 0 {
            return Element::zero();
        }
        k_pow(i, 1).mul_ref(&exp_coefficient(i, m, &self.q_i_diff(i), 1))
    }

    pub fn phi(&self, i: usize, m: i64) -> Element {
        if m > 0 {
            return Element::zero();
        }
        k_pow(i, -1).mul_ref(&exp_coefficient(i, -m, &-&self.q_i_diff(i), -1))
    }

    /// Image of one twisted generator in the base algebra.
    pub fn fold_gen(&self, g: GenSym) -> Result<SqrtElement> {
        let r = self.r;
        let ug = UGen::from_sym(g).ok_or(Error::ForeignSymbol(g.to_string()))?;
        let node_sum = |i: usize, mode: i64, make: &dyn Fn(usize) -> Element| -> Result<SqrtElement> {
            self.check(i)?;
            let di = q_int_rat(&self.d[i], &Q::one())?;
            let c = (&di * &Scalar::from_i64(r as i64)).inv()?;
            let mut acc = Element::zero();
            for s in 0..r as usize {
                acc.add_scaled(&make(self.sigma(i, s)), &(&c * &self.omega(-mode * s as i64)));
            }
            if r == 1 {
                Ok(SqrtElement::rational(r, acc))
            } else {
                Ok(SqrtElement { r, rat: Element::zero(), irr: acc })
            }
        };
        match ug {
            UGen::X(sign, i, k) => node_sum(i, k, &|j| x(sign, j, k)),
            UGen::A(i, l) => node_sum(i, l, &|j| UGen::A(j, l).el()),
            UGen::K(i, e) => {
                self.check(i)?;
                let mut acc = Element::one();
                for s in 0..r as usize {
                    acc = acc.mul_ref(&k_pow(self.sigma(i, s), e as i64));
                }
                Ok(SqrtElement::rational(r, acc))
            }
            UGen::GammaHalf(_) | UGen::Qd(_) => Ok(SqrtElement::rational(r, Element::gen(g))),
        }
    }

    /// Fold an element of the twisted alphabet into the base algebra.
    pub fn fold(&self, e: &Element) -> Result<SqrtElement> {
        let mut out = SqrtElement::rational(self.r, Element::zero());
        for (w, c) in e.terms() {
            let mut acc = SqrtElement::one(self.r);
            for &g in w.syms() {
                acc = acc.mul_ref(&self.fold_gen(g)?);
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwistedKind {
    SigmaX,
    SigmaA,
    AA,
    AX,
    KX,
    XxProduct,
    XxMixed,
    Serre,
    SerreCubic,
}

impl TwistedKind {
    pub const ALL: [TwistedKind; 9] = [
        TwistedKind::SigmaX,
        TwistedKind::SigmaA,
        TwistedKind::AA,
        TwistedKind::AX,
        TwistedKind::KX,
        TwistedKind::XxProduct,
        TwistedKind::XxMixed,
        TwistedKind::Serre,
        TwistedKind::SerreCubic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TwistedKind::SigmaX => "sigma-x",
            TwistedKind::SigmaA => "sigma-a",
            TwistedKind::AA => "aa",
            TwistedKind::AX => "ax",
            TwistedKind::KX => "kx",
            TwistedKind::XxProduct => "xx-product",
            TwistedKind::XxMixed => "xx-mixed",
            TwistedKind::Serre => "serre",
            TwistedKind::SerreCubic => "serre-cubic",
        }
    }

    pub fn from_name(s: &str) -> Option<TwistedKind> {
        TwistedKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Parameters of a twisted relation instance. The current relations
/// (product, Serre) are taken coefficientwise: `a`, `b`, `modes` are the
/// exponents of z^{-a} w^{-b} (resp. z_1, z_2, z_3).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TwistedSpec {
    SigmaX { sign: Sign, i: usize, k: i64 },
    SigmaA { i: usize, l: i64 },
    #[serde(rename = "aa")]
    AA { i: usize, k: i64, j: usize, l: i64 },
    #[serde(rename = "ax")]
    AX { i: usize, k: i64, sign: Sign, j: usize, l: i64 },
    #[serde(rename = "kx")]
    KX { i: usize, e: i8, sign: Sign, j: usize, k: i64 },
    XxProduct { sign: Sign, i: usize, j: usize, a: i64, b: i64 },
    XxMixed { i: usize, j: usize, k: i64, l: i64 },
    Serre { sign: Sign, i: usize, j: usize, a: i64, b: i64, n: i64 },
    SerreCubic { sign: Sign, i: usize, modes: [i64; 3] },
}

impl TwistedSpec {
    pub fn kind(&self) -> TwistedKind {
        match self {
            TwistedSpec::SigmaX { .. } => TwistedKind::SigmaX,
            TwistedSpec::SigmaA { .. } => TwistedKind::SigmaA,
            TwistedSpec::AA { .. } => TwistedKind::AA,
            TwistedSpec::AX { .. } => TwistedKind::AX,
            TwistedSpec::KX { .. } => TwistedKind::KX,
            TwistedSpec::XxProduct { .. } => TwistedKind::XxProduct,
            TwistedSpec::XxMixed { .. } => TwistedKind::XxMixed,
            TwistedSpec::Serre { .. } => TwistedKind::Serre,
            TwistedSpec::SerreCubic { .. } => TwistedKind::SerreCubic,
        }
    }

    /// Series relations expanded coefficientwise over modes in [−m, m]; the
    /// template's own modes are ignored. Other kinds return the template.
    pub fn window(&self, m: i64) -> Result<Vec<TwistedSpec>> {
        if m <= 0 {
            return Err(Error::InvalidParams(format!("window must be positive, got {m}")));
        }
        let range = || -m..=m;
        let mut out = Vec::new();
        match self {
            TwistedSpec::XxProduct { sign, i, j, .. } => {
                for a in range() {
                    for b in range() {
                        out.push(TwistedSpec::XxProduct { sign: *sign, i: *i, j: *j, a, b });
                    }
                }
            }
            TwistedSpec::Serre { sign, i, j, n, .. } => {
                for a in range() {
                    for b in range() {
                        out.push(TwistedSpec::Serre { sign: *sign, i: *i, j: *j, a, b, n: *n });
                    }
                }
            }
            TwistedSpec::SerreCubic { sign, i, .. } => {
                for a in range() {
                    for b in range() {
                        for c in range() {
                            out.push(TwistedSpec::SerreCubic { sign: *sign, i: *i, modes: [a, b, c] });
                        }
                    }
                }
            }
            other => out.push(other.clone()),
        }
        Ok(out)
    }

    /// The instance as an element `lhs − rhs` of the twisted alphabet.
    pub fn element(&self, alg: &TwistedAlgebra) -> Result<Element> {
        let commutator = |u: &Element, v: &Element| &u.mul_ref(v) - &v.mul_ref(u);
        Ok(match self {
            TwistedSpec::SigmaX { sign, i, k } => {
                alg.check(*i)?;
                let si = alg.sigma(*i, 1);
                &x(*sign, si, *k) - &x(*sign, *i, *k).scale(&alg.omega(*k))
            }
            TwistedSpec::SigmaA { i, l } => {
                alg.check(*i)?;
                nonzero_mode(*l)?;
                let si = alg.sigma(*i, 1);
                &UGen::A(si, *l).el() - &UGen::A(*i, *l).el().scale(&alg.omega(*l))
            }
            TwistedSpec::AA { i, k, j, l } => {
                alg.check(*i)?;
                alg.check(*j)?;
                nonzero_mode(*k)?;
                nonzero_mode(*l)?;
                let mut el = commutator(&UGen::A(*i, *k).el(), &UGen::A(*j, *l).el());
                if k + l == 0 {
                    let c = alg.heisenberg_coeff(*i, *j, *k)?.div_ref(&alg.q_i_diff(*j))?;
                    let g = &gamma_half_pow(2 * k) - &gamma_half_pow(-2 * k);
                    el = &el - &g.scale(&c);
                }
                el
            }
            TwistedSpec::AX { i, k, sign, j, l } => {
                alg.check(*i)?;
                alg.check(*j)?;
                nonzero_mode(*k)?;
                let el = commutator(&UGen::A(*i, *k).el(), &x(*sign, *j, *l));
                let c = alg.heisenberg_coeff(*i, *j, *k)?;
                let c = if *sign == Sign::Plus { c } else { -&c };
                let rhs = gamma_half_pow(-sign.factor() * k.abs()).mul_ref(&x(*sign, *j, k + l));
                &el - &rhs.scale(&c)
            }
            TwistedSpec::KX { i, e, sign, j, k } => {
                alg.check(*i)?;
                alg.check(*j)?;
                let e = *e as i64;
                if e.abs() != 1 {
                    return Err(Error::InvalidParams("exponent must be ±1".into()));
                }
                let kk = k_pow(*i, e);
                let xj = x(*sign, *j, *k);
                let c = Scalar::q(e * sign.factor() * alg.pair(*i, *j));
                &kk.mul_ref(&xj) - &xj.mul_ref(&kk).scale(&c)
            }
            TwistedSpec::XxProduct { sign, i, j, a, b } => {
                alg.check(*i)?;
                alg.check(*j)?;
                let r = alg.r as usize;
                let e = sign.factor();
                // Π_s (z − ω^s q^{±c_s} w) and Π_s (z q^{±c_s} − ω^s w), as
                // coefficient lists in powers of w.
                let mut lhs = vec![Scalar::one()];
                let mut rhs = vec![Scalar::one()];
                for s in 0..r {
                    let cs = alg.a_prime(*i, *j, s);
                    let w_l = -&(&alg.omega(s as i64) * &Scalar::q(e * cs));
                    lhs = poly_mul(&lhs, &Scalar::one(), &w_l);
                    let w_r = -&alg.omega(s as i64);
                    rhs = poly_mul(&rhs, &Scalar::q(e * cs), &w_r);
                }
                let mut el = Element::zero();
                for p in 0..=r {
                    let ki = a + r as i64 - p as i64;
                    let lj = b + p as i64;
                    el.add_scaled(&x(*sign, *i, ki).mul_ref(&x(*sign, *j, lj)), &lhs[p]);
                    el.add_scaled(&x(*sign, *j, lj).mul_ref(&x(*sign, *i, ki)), &-&rhs[p]);
                }
                el
            }
            TwistedSpec::XxMixed { i, j, k, l } => {
                alg.check(*i)?;
                alg.check(*j)?;
                let mut el = commutator(&x(Sign::Plus, *i, *k), &x(Sign::Minus, *j, *l));
                let mut c = Scalar::zero();
                for s in 0..alg.r as usize {
                    if alg.sigma(*i, s) == *j {
                        c = &c + &alg.omega(s as i64 * l);
                    }
                }
                if !c.is_zero() {
                    let c = c.div_ref(&alg.q_i_diff(*i))?;
                    let p = gamma_half_pow(k - l).mul_ref(&alg.psi(*i, k + l));
                    let f = gamma_half_pow(l - k).mul_ref(&alg.phi(*i, k + l));
                    el = &el - &(&p - &f).scale(&c);
                }
                el
            }
            TwistedSpec::Serre { sign, i, j, a, b, n } => twisted_serre(alg, *sign, *i, *j, *a, *b, *n)?,
            TwistedSpec::SerreCubic { sign, i, modes } => {
                alg.check(*i)?;
                if alg.folding.a(*i, alg.sigma(*i, 1)) != -1 {
                    return Err(Error::InvalidParams(format!("A_(i,σ(i)) ≠ −1 for i = {i}")));
                }
                let r4 = rat_int(alg.r as i64) / rat_int(4);
                let e = rat_int(sign.factor());
                let c1 = Scalar::q_pow(&(-(&e * &r4 * rat_int(3))))?;
                let c2 = -&(&Scalar::q_pow(&r4)? + &Scalar::q_pow(&-r4.clone())?);
                let c3 = Scalar::q_pow(&(&e * &r4 * rat_int(3)))?;
                let coeffs = [c1, c2, c3];
                let mut el = Element::zero();
                for perm in PERMS3 {
                    let m = [modes[perm[0]], modes[perm[1]], modes[perm[2]]];
                    for (slot, c) in coeffs.iter().enumerate() {
                        let mut mm = m;
                        mm[slot] += 1;
                        let syms: Vec<GenSym> = mm.iter().map(|&k| UGen::X(*sign, *i, k).sym()).collect();
                        el.add_term(Word::new(&syms), c.clone());
                    }
                }
                el
            }
        })
    }
}

const PERMS3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn nonzero_mode(k: i64) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidParams("a_i(0) is not a generator".into()))
    } else {
        Ok(())
    }
}

/// Multiply Σ p_m z^{deg−m} w^m by (cz·z + cw·w).
fn poly_mul(p: &[Scalar], cz: &Scalar, cw: &Scalar) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); p.len() + 1];
    for (m, c) in p.iter().enumerate() {
        out[m] = &out[m] + &(c * cz);
        out[m + 1] = &out[m + 1] + &(c * cw);
    }
    out
}

fn twisted_serre(alg: &TwistedAlgebra, sign: Sign, i: usize, j: usize, a: i64, b: i64, n: i64) -> Result<Element> {
    alg.check(i)?;
    alg.check(j)?;
    if alg.folding.a(i, j) != -1 || alg.sigma(i, 1) == j {
        return Err(Error::InvalidParams(format!("need A_ij = −1 and σ(i) ≠ j for ({i}, {j})")));
    }
    let r = alg.r as i64;
    let e = sign.factor();
    let si = alg.sigma(i, 1);
    // P(z1, z2) as coefficients of z1^u z2^{deg−u}, indexed by u.
    let (p, d_ij): (Vec<Scalar>, Q) = if si == i {
        (vec![Scalar::one()], rat_int(r))
    } else if alg.folding.a(i, si) == 0 && alg.sigma(j, 1) == j {
        let deg = r - 1;
        let mut p = vec![Scalar::zero(); r as usize];
        for m in 0..r {
            p[(deg - m) as usize] = Scalar::q(2 * e * (deg - m));
        }
        (p, rat_int(r))
    } else if alg.folding.a(i, si) == 0 {
        (vec![Scalar::one()], Q::new(1.into(), 2.into()))
    } else {
        let half = Scalar::q_pow(&(rat_int(e * r) / rat_int(2)))?;
        (vec![Scalar::one(), half], rat_int(r) / rat_int(4))
    };
    let deg = p.len() as i64 - 1;
    let mut el = Element::zero();
    for (m1, m2) in [(a, b), (b, a)] {
        for (u, pu) in p.iter().enumerate() {
            if pu.is_zero() {
                continue;
            }
            let s1 = UGen::X(sign, i, m1 + u as i64).sym();
            let s2 = UGen::X(sign, i, m2 + deg - u as i64).sym();
            let xj = UGen::X(sign, j, n).sym();
            let words = [[xj, s1, s2], [s1, xj, s2], [s1, s2, xj]];
            for (s, w) in words.iter().enumerate() {
                let mut c = pu * &q_binomial(2, s as i64, &d_ij)?;
                if s == 1 {
                    c = -&c;
                }
                el.add_term(Word::new(w), c);
            }
        }
    }
    Ok(el)
}
