//! Text form of Elements: terms `coefficient*gen·gen`, brackets
//! `[a, b, c]_(u, v)` (right-nested) and `[a, b]'_(v)` (left-nested).
//!
//! Built-in symbols: `xp<i>(k)`, `xm<i>(k)`, `a<i>(l)`, `K<i>` (with `^-1`),
//! `g` (γ; `g^(1/2)` for γ^{1/2}), `qd` (q^d), and free symbols `s<i>`.

use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::{q_int_rat, Scalar, Q};
use crate::text::{eval_rational, parse_ast, Ast};

use super::{nested_bracket, nested_bracket_primed, Element, GenSym, SymClass};

/// Resolves symbols the built-in alphabet does not know (e.g. Chevalley
/// generators `E0`, `F1`, `t0`).
pub type Resolver<'a> = &'a dyn Fn(&str, Option<u32>, Option<i64>) -> Option<Element>;

pub fn parse_element(src: &str) -> Result<Element> {
    parse_element_with(src, &|_, _, _| None)
}

pub fn parse_element_with(src: &str, resolver: Resolver<'_>) -> Result<Element> {
    eval(&parse_ast(src)?, resolver)
}

fn perr(msg: String) -> Error {
    Error::parse(0, msg)
}

fn idx16(index: Option<u32>, name: &str) -> Result<u16> {
    let i = index.ok_or_else(|| perr(format!("{name} needs an index")))?;
    u16::try_from(i).map_err(|_| perr(format!("index {i} too large")))
}

fn mode32(mode: Option<i64>, name: &str) -> Result<i32> {
    let m = mode.ok_or_else(|| perr(format!("{name} needs a mode")))?;
    i32::try_from(m).map_err(|_| perr(format!("mode {m} too large")))
}

fn builtin(name: &str, index: Option<u32>, mode: Option<i64>) -> Result<Option<Element>> {
    let g = match name {
        "xp" => GenSym::new(SymClass::XPlus, idx16(index, name)?, mode32(mode, name)?),
        "xm" => GenSym::new(SymClass::XMinus, idx16(index, name)?, mode32(mode, name)?),
        "a" => {
            let m = mode32(mode, name)?;
            let class = match m.signum() {
                1 => SymClass::APos,
                -1 => SymClass::ANeg,
                _ => return Err(perr("a_i(0) is not a generator".into())),
            };
            GenSym::new(class, idx16(index, name)?, m)
        }
        "K" if mode.is_none() => GenSym::new(SymClass::K, idx16(index, name)?, 1),
        "s" if mode.is_none() => GenSym::free(idx16(index, name)?),
        "g" if index.is_none() && mode.is_none() => {
            let h = GenSym::new(SymClass::Gamma, 0, 1);
            return Ok(Some(Element::word(&[h, h])));
        }
        "qd" if index.is_none() && mode.is_none() => GenSym::new(SymClass::Qd, 0, 1),
        _ => return Ok(None),
    };
    Ok(Some(Element::gen(g)))
}

fn symbol(name: &str, index: Option<u32>, mode: Option<i64>, resolver: Resolver<'_>) -> Result<Element> {
    if let Some(e) = resolver(name, index, mode) {
        return Ok(e);
    }
    builtin(name, index, mode)?.ok_or_else(|| {
        Error::ForeignSymbol(format!("{name}{}", index.map(|i| i.to_string()).unwrap_or_default()))
    })
}

fn as_scalar(e: &Element, what: &str) -> Result<Scalar> {
    e.as_scalar().ok_or_else(|| perr(format!("{what} must be a scalar, got {e}")))
}

fn power(base: &Ast, e: &Q, resolver: Resolver<'_>) -> Result<Element> {
    if let Ast::Q = base {
        return Ok(Element::scalar(Scalar::q_pow(e)?));
    }
    if let Ast::Symbol { name, index, mode } = base {
        let single = |class: SymClass, idx: u16, sign: i32, count: i64| -> Element {
            let g = GenSym::new(class, idx, sign);
            Element::word(&vec![g; count as usize])
        };
        let neg = e.is_negative();
        let sign = if neg { -1 } else { 1 };
        match (name.as_str(), *index, *mode) {
            ("g", None, None) => {
                let twice = e * Q::from_integer(2.into());
                if !twice.is_integer() {
                    return Err(Error::Exponent(format!("γ^({e})")));
                }
                let n = twice.to_integer().abs().to_i64().unwrap_or(0);
                return Ok(single(SymClass::Gamma, 0, sign, n));
            }
            ("K", Some(_), None) | ("qd", None, None) if e.is_integer() => {
                let class = if name == "K" { SymClass::K } else { SymClass::Qd };
                let idx = index.map_or(0, |i| i as u16);
                let n = e.to_integer().abs().to_i64().unwrap_or(0);
                return Ok(single(class, idx, sign, n));
            }
            _ => {}
        }
        if resolver(name, *index, *mode).is_none() && builtin(name, *index, *mode)?.is_none() {
            return Err(Error::ForeignSymbol(name.clone()));
        }
    }
    let b = eval(base, resolver)?;
    if !e.is_integer() {
        return Err(Error::Exponent(format!("fractional power {e} of {b}")));
    }
    let n = e.to_integer().to_i64().ok_or_else(|| Error::Exponent(e.to_string()))?;
    if n >= 0 {
        return Ok(b.pow(n as u32));
    }
    let s = as_scalar(&b, "a base with negative exponent")?;
    Ok(Element::scalar(s.pow(n)?))
}

pub(crate) fn eval(ast: &Ast, resolver: Resolver<'_>) -> Result<Element> {
    Ok(match ast {
        Ast::Num(n) => Element::scalar(Scalar::from_bigint(n.clone())),
        Ast::Q => Element::scalar(Scalar::q(1)),
        Ast::Omega => Element::scalar(Scalar::omega(3, 1)),
        Ast::QInt(k, d) => {
            let k = eval_rational(k)?;
            let d = match d {
                Some(d) => eval_rational(d)?,
                None => Q::one(),
            };
            Element::scalar(q_int_rat(&k, &d)?)
        }
        Ast::Symbol { name, index, mode } => symbol(name, *index, *mode, resolver)?,
        Ast::Add(ts) => {
            let mut acc = Element::zero();
            for t in ts {
                acc.add_assign(&eval(t, resolver)?);
            }
            acc
        }
        Ast::Neg(a) => -&eval(a, resolver)?,
        Ast::Mul(fs) => {
            let mut acc = Element::one();
            for f in fs {
                acc = acc.mul_ref(&eval(f, resolver)?);
            }
            acc
        }
        Ast::Div(a, b) => {
            let d = as_scalar(&eval(b, resolver)?, "a divisor")?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            eval(a, resolver)?.scale(&d.inv()?)
        }
        Ast::Pow(b, e) => power(b, e, resolver)?,
        Ast::Bracket { items, params, primed } => {
            let items: Vec<Element> = items.iter().map(|i| eval(i, resolver)).collect::<Result<_>>()?;
            let vs: Vec<Scalar> = if params.is_empty() {
                vec![Scalar::one(); items.len().saturating_sub(1)]
            } else {
                params.iter().map(|p| as_scalar(&eval(p, resolver)?, "a bracket parameter")).collect::<Result<_>>()?
            };
            if *primed {
                nested_bracket_primed(&items, &vs)?
            } else {
                nested_bracket(&items, &vs)?
            }
        }
    })
}
