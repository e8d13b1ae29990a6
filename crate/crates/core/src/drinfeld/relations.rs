//! Relation instances of the untwisted Drinfeld presentation. Each instance
//! is an element `lhs − rhs` of the free algebra on the alphabet.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{a, gamma_half_pow, k_pow, qd, x, DrinfeldAlgebra, Sign, UGen};
use crate::error::{Error, Result};
use crate::freealg::{Element, Word};
use crate::scalar::{q_binomial, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelKind {
    Central,
    Inverse,
    KK,
    AA,
    AK,
    DK,
    DX,
    DA,
    KX,
    AX,
    XxSame,
    XxMixed,
    Serre,
    SerreDouble,
}

impl RelKind {
    pub const ALL: [RelKind; 14] = [
        RelKind::Central,
        RelKind::Inverse,
        RelKind::KK,
        RelKind::AA,
        RelKind::AK,
        RelKind::DK,
        RelKind::DX,
        RelKind::DA,
        RelKind::KX,
        RelKind::AX,
        RelKind::XxSame,
        RelKind::XxMixed,
        RelKind::Serre,
        RelKind::SerreDouble,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelKind::Central => "central",
            RelKind::Inverse => "inverse",
            RelKind::KK => "kk",
            RelKind::AA => "aa",
            RelKind::AK => "ak",
            RelKind::DK => "dk",
            RelKind::DX => "dx",
            RelKind::DA => "da",
            RelKind::KX => "kx",
            RelKind::AX => "ax",
            RelKind::XxSame => "xx-same",
            RelKind::XxMixed => "xx-mixed",
            RelKind::Serre => "serre",
            RelKind::SerreDouble => "serre-double",
        }
    }

    pub fn from_name(s: &str) -> Option<RelKind> {
        RelKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for RelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters of one relation instance. Exponents `e`, `f` are ±1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RelationSpec {
    /// γ^{e/2} commutes with a generator (written in the element syntax).
    Central { e: i8, gen: String },
    /// g·g^{-1} = 1 for g among K_i, γ^{1/2}, q^d; `gen` names g^{e}.
    Inverse { gen: String, e: i8 },
    #[serde(rename = "kk")]
    KK { i: usize, e: i8, j: usize, f: i8 },
    #[serde(rename = "aa")]
    AA { i: usize, k: i64, j: usize, l: i64 },
    #[serde(rename = "ak")]
    AK { i: usize, k: i64, j: usize, e: i8 },
    #[serde(rename = "dk")]
    DK { e: i8, j: usize, f: i8 },
    #[serde(rename = "dx")]
    DX { e: i8, sign: Sign, i: usize, k: i64 },
    #[serde(rename = "da")]
    DA { e: i8, i: usize, l: i64 },
    #[serde(rename = "kx")]
    KX { i: usize, e: i8, sign: Sign, j: usize, k: i64 },
    #[serde(rename = "ax")]
    AX { i: usize, k: i64, sign: Sign, j: usize, l: i64 },
    XxSame { sign: Sign, i: usize, j: usize, k: i64, l: i64 },
    XxMixed { i: usize, j: usize, k: i64, l: i64 },
    /// Symmetrized Serre relation, `modes` has length 1 − a_ij.
    Serre { sign: Sign, i: usize, j: usize, modes: Vec<i64>, n: i64 },
    /// [x_i(m), x_i(m), x_j(n)]_{q_i, q_i^{-1}} = 0 for a_ij = −1.
    SerreDouble { sign: Sign, i: usize, j: usize, m: i64, n: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationInstance {
    pub kind: RelKind,
    pub spec: RelationSpec,
    pub element: Element,
}

impl fmt::Display for RelationInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} = 0", self.kind, self.element)
    }
}

fn unit(e: i8) -> Result<i64> {
    match e {
        1 | -1 => Ok(e as i64),
        _ => Err(Error::InvalidParams(format!("exponent {e} must be ±1"))),
    }
}

fn commutator(u: &Element, v: &Element) -> Element {
    &u.mul_ref(v) - &v.mul_ref(u)
}

impl RelationSpec {
    pub fn kind(&self) -> RelKind {
        match self {
            RelationSpec::Central { .. } => RelKind::Central,
            RelationSpec::Inverse { .. } => RelKind::Inverse,
            RelationSpec::KK { .. } => RelKind::KK,
            RelationSpec::AA { .. } => RelKind::AA,
            RelationSpec::AK { .. } => RelKind::AK,
            RelationSpec::DK { .. } => RelKind::DK,
            RelationSpec::DX { .. } => RelKind::DX,
            RelationSpec::DA { .. } => RelKind::DA,
            RelationSpec::KX { .. } => RelKind::KX,
            RelationSpec::AX { .. } => RelKind::AX,
            RelationSpec::XxSame { .. } => RelKind::XxSame,
            RelationSpec::XxMixed { .. } => RelKind::XxMixed,
            RelationSpec::Serre { .. } => RelKind::Serre,
            RelationSpec::SerreDouble { .. } => RelKind::SerreDouble,
        }
    }

    pub fn build(&self, alg: &DrinfeldAlgebra) -> Result<RelationInstance> {
        let element = self.element(alg)?;
        Ok(RelationInstance { kind: self.kind(), spec: self.clone(), element })
    }

    fn element(&self, alg: &DrinfeldAlgebra) -> Result<Element> {
        let el = match self {
            RelationSpec::Central { e, gen } => {
                let g = gamma_half_pow(unit(*e)?);
                let u = crate::freealg::parse_element(gen)?;
                commutator(&g, &u)
            }
            RelationSpec::Inverse { gen, e } => {
                let e = unit(*e)?;
                let g = crate::freealg::parse_element(gen)?;
                let syms: Vec<_> = g.symbols().into_iter().collect();
                let one_gen = g.len() == 1 && g.terms().next().map(|(w, c)| w.len() == 1 && c.is_one()) == Some(true);
                if !one_gen {
                    return Err(Error::InvalidParams(format!("`{gen}` is not a single invertible generator")));
                }
                let s = syms[0];
                let inv = match UGen::from_sym(s) {
                    Some(UGen::K(i, f)) => UGen::K(i, -f),
                    Some(UGen::GammaHalf(f)) => UGen::GammaHalf(-f),
                    Some(UGen::Qd(f)) => UGen::Qd(-f),
                    _ => return Err(Error::InvalidParams(format!("`{gen}` is not invertible"))),
                };
                let prod = if e > 0 { g.mul_ref(&inv.el()) } else { inv.el().mul_ref(&g) };
                &prod - &Element::one()
            }
            RelationSpec::KK { i, e, j, f } => {
                alg.check_index(*i)?;
                alg.check_index(*j)?;
                commutator(&k_pow(*i, unit(*e)?), &k_pow(*j, unit(*f)?))
            }
            RelationSpec::AA { i, k, j, l } => {
                check_nodes(alg, &[*i, *j])?;
                check_modes(&[*k, *l])?;
                let mut el = commutator(&a(*i, *k), &a(*j, *l));
                if k + l == 0 {
                    let c = alg.heisenberg_coeff(*i, *j, *k).div_ref(&alg.q_i_diff(*j))?;
                    let g = &gamma_half_pow(2 * k) - &gamma_half_pow(-2 * k);
                    el = &el - &g.scale(&c);
                }
                el
            }
            RelationSpec::AK { i, k, j, e } => {
                check_nodes(alg, &[*i, *j])?;
                check_modes(&[*k])?;
                commutator(&a(*i, *k), &k_pow(*j, unit(*e)?))
            }
            RelationSpec::DK { e, j, f } => {
                alg.check_index(*j)?;
                commutator(&qd(unit(*e)? as i8), &k_pow(*j, unit(*f)?))
            }
            RelationSpec::DX { e, sign, i, k } => {
                alg.check_index(*i)?;
                let e = unit(*e)?;
                let d = qd(e as i8);
                let xi = x(*sign, *i, *k);
                &d.mul_ref(&xi) - &xi.mul_ref(&d).scale(&Scalar::q(e * k))
            }
            RelationSpec::DA { e, i, l } => {
                alg.check_index(*i)?;
                check_modes(&[*l])?;
                let e = unit(*e)?;
                let d = qd(e as i8);
                let ai = a(*i, *l);
                &d.mul_ref(&ai) - &ai.mul_ref(&d).scale(&Scalar::q(e * l))
            }
            RelationSpec::KX { i, e, sign, j, k } => {
                check_nodes(alg, &[*i, *j])?;
                let e = unit(*e)?;
                let kk = k_pow(*i, e);
                let xj = x(*sign, *j, *k);
                let c = alg.q_pair(*i, *j, e * sign.factor());
                &kk.mul_ref(&xj) - &xj.mul_ref(&kk).scale(&c)
            }
            RelationSpec::AX { i, k, sign, j, l } => {
                check_nodes(alg, &[*i, *j])?;
                check_modes(&[*k])?;
                let mut el = commutator(&a(*i, *k), &x(*sign, *j, *l));
                let c = alg.heisenberg_coeff(*i, *j, *k);
                let c = if *sign == Sign::Plus { c } else { -&c };
                let g = gamma_half_pow(-sign.factor() * k.abs());
                el = &el - &g.mul_ref(&x(*sign, *j, k + l)).scale(&c);
                el
            }
            RelationSpec::XxSame { sign, i, j, k, l } => {
                check_nodes(alg, &[*i, *j])?;
                let s = *sign;
                let c = alg.q_pair(*i, *j, s.factor());
                let t1 = x(s, *i, k + 1).mul_ref(&x(s, *j, *l));
                let t2 = x(s, *j, *l).mul_ref(&x(s, *i, k + 1)).scale(&c);
                let t3 = x(s, *i, *k).mul_ref(&x(s, *j, l + 1)).scale(&c);
                let t4 = x(s, *j, l + 1).mul_ref(&x(s, *i, *k));
                &(&(&t1 - &t2) - &t3) + &t4
            }
            RelationSpec::XxMixed { i, j, k, l } => {
                check_nodes(alg, &[*i, *j])?;
                let mut el = commutator(&x(Sign::Plus, *i, *k), &x(Sign::Minus, *j, *l));
                if i == j {
                    let c = alg.q_i_diff(*i).inv()?;
                    let p = gamma_half_pow(k - l).mul_ref(&alg.psi(*i, k + l));
                    let f = gamma_half_pow(l - k).mul_ref(&alg.phi(*i, k + l));
                    el = &el - &(&p - &f).scale(&c);
                }
                el
            }
            RelationSpec::Serre { sign, i, j, modes, n } => {
                check_nodes(alg, &[*i, *j])?;
                if i == j {
                    return Err(Error::InvalidParams("Serre relation needs i ≠ j".into()));
                }
                let m = 1 - alg.a[*i][*j];
                if modes.len() as i64 != m {
                    return Err(Error::InvalidParams(format!(
                        "Serre relation for a_{i}{j} = {} needs {m} modes, got {}",
                        alg.a[*i][*j],
                        modes.len()
                    )));
                }
                serre_element(alg, *sign, *i, *j, modes, *n)?
            }
            RelationSpec::SerreDouble { sign, i, j, m, n } => {
                check_nodes(alg, &[*i, *j])?;
                if alg.a[*i][*j] != -1 {
                    return Err(Error::InvalidParams(format!("a_{i}{j} = {} is not −1", alg.a[*i][*j])));
                }
                let qi = alg.q_i(*i);
                let inner = crate::freealg::bracket(&x(*sign, *i, *m), &x(*sign, *j, *n), &qi.inv()?);
                crate::freealg::bracket(&x(*sign, *i, *m), &inner, &qi)
            }
        };
        Ok(el)
    }
}

fn check_nodes(alg: &DrinfeldAlgebra, nodes: &[usize]) -> Result<()> {
    nodes.iter().try_for_each(|&i| alg.check_index(i))
}

fn check_modes(modes: &[i64]) -> Result<()> {
    if modes.contains(&0) {
        Err(Error::InvalidParams("a_i(0) is not a generator".into()))
    } else {
        Ok(())
    }
}

fn permutations(v: &[i64]) -> Vec<Vec<i64>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for p in 0..v.len() {
        let mut rest = v.to_vec();
        let head = rest.remove(p);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn serre_element(alg: &DrinfeldAlgebra, sign: Sign, i: usize, j: usize, modes: &[i64], n: i64) -> Result<Element> {
    let m = modes.len() as i64;
    let mut out = Element::zero();
    let xj = UGen::X(sign, j, n).sym();
    for perm in permutations(modes) {
        for s in 0..=m {
            let mut syms = Vec::with_capacity(perm.len() + 1);
            for &l in &perm[..s as usize] {
                syms.push(UGen::X(sign, i, l).sym());
            }
            syms.push(xj);
            for &l in &perm[s as usize..] {
                syms.push(UGen::X(sign, i, l).sym());
            }
            let mut c = q_binomial(m, s, &alg.d[i])?;
            if s % 2 == 1 {
                c = -&c;
            }
            out.add_term(Word::new(&syms), c);
        }
    }
    Ok(out)
}
