//! Lexer and parser for the shared text grammar of scalars and algebra
//! expressions.
//!
//! ```text
//! sum     := ['-'] term (('+' | '-') term)*
//! term    := unary (('*' | '·' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ['^' exponent]
//! atom    := number | 'q' | 'w' | 'qint' '(' sum [',' sum] ')' | symbol
//!          | '(' sum ')' | '[' sum (',' sum)* ']' ["'"] ['_' '(' sum (',' sum)* ')']
//! symbol  := name [digits] ['(' signed-int ')']
//! exponent:= signed-int | '(' signed-int ['/' int] ')'
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{q_int_rat, Scalar, Q};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Prime,
    Under,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        match c {
            c if c.is_whitespace() => {
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((Tok::Int(s.parse().expect("digits")), off));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric()) {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((Tok::Ident(s), off));
            }
            _ => {
                let t = match c {
                    '+' => Tok::Plus,
                    '-' | '−' => Tok::Minus,
                    '*' | '·' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    ',' => Tok::Comma,
                    '\'' => Tok::Prime,
                    '_' => Tok::Under,
                    other => return Err(Error::parse(off, format!("unexpected character {other:?}"))),
                };
                out.push((t, off));
                i += 1;
            }
        }
    }
    Ok(out)
}

/// Parsed but uninterpreted expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Num(BigInt),
    Q,
    Omega,
    QInt(Box<Ast>, Option<Box<Ast>>),
    /// `name`, optional numeric index, optional mode.
    Symbol { name: String, index: Option<u32>, mode: Option<i64> },
    Add(Vec<Ast>),
    Neg(Box<Ast>),
    Mul(Vec<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, Q),
    Bracket { items: Vec<Ast>, params: Vec<Ast>, primed: bool },
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(_, o)| o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(Error::parse(self.offset(), format!("expected {t:?}")))
        }
    }

    fn sum(&mut self) -> Result<Ast> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(&Tok::Plus) {
                terms.push(self.term()?);
            } else if self.eat(&Tok::Minus) {
                terms.push(Ast::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Ast::Add(terms) })
    }

    fn term(&mut self) -> Result<Ast> {
        let mut acc = self.unary()?;
        let mut factors: Vec<Ast> = Vec::new();
        loop {
            if self.eat(&Tok::Star) {
                factors.push(acc);
                acc = self.unary()?;
            } else if self.eat(&Tok::Slash) {
                let rhs = self.unary()?;
                acc = Ast::Div(Box::new(acc), Box::new(rhs));
            } else {
                break;
            }
        }
        if factors.is_empty() {
            Ok(acc)
        } else {
            factors.push(acc);
            Ok(Ast::Mul(factors))
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if self.eat(&Tok::Minus) {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let e = self.exponent()?;
            return Ok(Ast::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<BigInt> {
        let neg = self.eat(&Tok::Minus);
        match self.bump() {
            Some(Tok::Int(n)) => Ok(if neg { -n } else { n }),
            _ => Err(Error::parse(self.offset(), "expected integer")),
        }
    }

    fn exponent(&mut self) -> Result<Q> {
        if self.eat(&Tok::LParen) {
            let n = self.signed_int()?;
            let d = if self.eat(&Tok::Slash) {
                match self.bump() {
                    Some(Tok::Int(d)) if !d.is_zero() => d,
                    _ => return Err(Error::parse(self.offset(), "expected nonzero denominator")),
                }
            } else {
                BigInt::one()
            };
            self.expect(&Tok::RParen)?;
            Ok(Q::new(n, d))
        } else {
            Ok(Q::from_integer(self.signed_int()?))
        }
    }

    fn atom(&mut self) -> Result<Ast> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Ast::Num(n)),
            Some(Tok::LParen) => {
                let e = self.sum()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::LBrack) => {
                let mut items = vec![self.sum()?];
                while self.eat(&Tok::Comma) {
                    items.push(self.sum()?);
                }
                self.expect(&Tok::RBrack)?;
                let primed = self.eat(&Tok::Prime);
                let mut params = Vec::new();
                if self.eat(&Tok::Under) {
                    self.expect(&Tok::LParen)?;
                    params.push(self.sum()?);
                    while self.eat(&Tok::Comma) {
                        params.push(self.sum()?);
                    }
                    self.expect(&Tok::RParen)?;
                }
                Ok(Ast::Bracket { items, params, primed })
            }
            Some(Tok::Ident(s)) => self.ident(s, off),
            _ => Err(Error::parse(off, "expected an operand")),
        }
    }

    fn ident(&mut self, s: String, off: usize) -> Result<Ast> {
        match s.as_str() {
            "q" => return Ok(Ast::Q),
            "w" => return Ok(Ast::Omega),
            "qint" => {
                self.expect(&Tok::LParen)?;
                let k = self.sum()?;
                let d = if self.eat(&Tok::Comma) { Some(Box::new(self.sum()?)) } else { None };
                self.expect(&Tok::RParen)?;
                return Ok(Ast::QInt(Box::new(k), d));
            }
            _ => {}
        }
        let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        let (name, digits) = s.split_at(split);
        if name.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::parse(off, format!("malformed symbol {s:?}")));
        }
        let index = if digits.is_empty() {
            None
        } else {
            Some(digits.parse().map_err(|_| Error::parse(off, "index too large"))?)
        };
        let mode = if self.eat(&Tok::LParen) {
            let m = self.signed_int()?;
            self.expect(&Tok::RParen)?;
            Some(i64::try_from(m).map_err(|_| Error::parse(off, "mode too large"))?)
        } else {
            None
        };
        Ok(Ast::Symbol { name: name.to_string(), index, mode })
    }
}

pub fn parse_ast(src: &str) -> Result<Ast> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len() };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(Error::parse(p.offset(), "trailing input"));
    }
    Ok(e)
}

/// Evaluate an AST that contains no algebra symbols.
pub fn eval_scalar(ast: &Ast) -> Result<Scalar> {
    Ok(match ast {
        Ast::Num(n) => Scalar::from_q(Q::from_integer(n.clone())),
        Ast::Q => Scalar::q(1),
        Ast::Omega => Scalar::omega(3, 1),
        Ast::QInt(k, d) => {
            let k = eval_rational(k)?;
            let d = match d {
                Some(d) => eval_rational(d)?,
                None => Q::one(),
            };
            q_int_rat(&k, &d)?
        }
        Ast::Symbol { name, .. } => {
            return Err(Error::parse(0, format!("symbol {name:?} in a scalar context")))
        }
        Ast::Add(ts) => {
            let mut acc = Scalar::zero();
            for t in ts {
                acc = &acc + &eval_scalar(t)?;
            }
            acc
        }
        Ast::Neg(a) => -&eval_scalar(a)?,
        Ast::Mul(fs) => {
            let mut acc = Scalar::one();
            for f in fs {
                acc = &acc * &eval_scalar(f)?;
            }
            acc
        }
        Ast::Div(a, b) => eval_scalar(a)?.div_ref(&eval_scalar(b)?)?,
        Ast::Pow(b, e) => {
            if **b == Ast::Q {
                Scalar::q_pow(e)?
            } else if e.is_integer() {
                let n = i64::try_from(e.to_integer()).map_err(|_| Error::Exponent(e.to_string()))?;
                eval_scalar(b)?.pow(n)?
            } else {
                return Err(Error::Exponent(format!("fractional power {e} of a non-q base")));
            }
        }
        Ast::Bracket { .. } => return Err(Error::parse(0, "bracket in a scalar context")),
    })
}

/// Evaluate to a plain rational number (used for q-integer arguments).
pub fn eval_rational(ast: &Ast) -> Result<Q> {
    let s = eval_scalar(ast)?;
    if s.is_zero() {
        return Ok(Q::zero());
    }
    s.to_q_rational().ok_or_else(|| Error::parse(0, format!("expected a rational number, got {s}")))
}

pub fn parse_scalar(src: &str) -> Result<Scalar> {
    eval_scalar(&parse_ast(src)?)
}

pub fn parse_rational(src: &str) -> Result<Q> {
    eval_rational(&parse_ast(src)?)
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_round_trip() {
        for s in ["q^(1/2) - q^(-1/2)", "q^2 - 3", "(q + 1)/(q^2 + 1)", "1/2*q", "(1 + 2*w)*q", "0", "-q^-1"] {
            let x = parse_scalar(s).unwrap();
            assert_eq!(parse_scalar(&x.to_string()).unwrap(), x, "{s}");
        }
    }

    #[test]
    fn qint_syntax() {
        assert_eq!(parse_scalar("qint(2)").unwrap(), parse_scalar("q + q^-1").unwrap());
        assert_eq!(parse_scalar("qint(2, 1/2)").unwrap(), parse_scalar("q^(1/2) + q^(-1/2)").unwrap());
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(parse_scalar("q +"), Err(Error::Parse { offset: 3, .. })));
        assert!(parse_scalar("q $ 1").is_err());
        assert!(parse_scalar("xp1(0)").is_err());
    }

    #[test]
    fn symbols() {
        let a = parse_ast("xp12(-3)").unwrap();
        assert_eq!(a, Ast::Symbol { name: "xp".into(), index: Some(12), mode: Some(-3) });
    }
}
