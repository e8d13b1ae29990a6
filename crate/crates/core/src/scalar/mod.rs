//! Exact coefficients: rational functions in t = q^{1/12} over Q(ω).
//!
//! Every fractional power of q that the algebras need (q^{1/2}, q^{1/3},
//! q^{r/4}) is an integral power of t, so a single Laurent variable suffices.

mod cyc;
mod poly;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use cyc::{q_frac, CycRat, Q};
pub use cyc::q_int as rat_int;
pub use poly::LPoly;

use crate::error::{Error, Result};

/// Number of t-steps in one power of q.
pub const T_PER_Q: i64 = 12;

/// `num / den` with `den` a polynomial whose lowest exponent is 0 and whose
/// leading coefficient is 1; numerator and denominator coprime.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    num: LPoly,
    den: LPoly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: LPoly::zero(), den: LPoly::one() }
    }

    pub fn one() -> Self {
        Scalar { num: LPoly::one(), den: LPoly::one() }
    }

    pub fn from_i64(n: i64) -> Self {
        Scalar::from_cyc(CycRat::from_i64(n))
    }

    pub fn from_q(c: Q) -> Self {
        Scalar::from_cyc(CycRat::from_q(c))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Scalar::from_q(q_frac(n, d))
    }

    pub fn from_cyc(c: CycRat) -> Self {
        Scalar { num: LPoly::monomial(0, c), den: LPoly::one() }
    }

    pub fn from_lpoly(p: LPoly) -> Self {
        Scalar { num: p, den: LPoly::one() }
    }

    /// t^n = q^{n/12}.
    pub fn t_pow(n: i64) -> Self {
        Scalar { num: LPoly::monomial(n, CycRat::one()), den: LPoly::one() }
    }

    /// q^e for a rational exponent with 12·e integral.
    pub fn q_pow(e: &Q) -> Result<Self> {
        let t = e * q_int_n(T_PER_Q);
        if !t.is_integer() {
            return Err(Error::Exponent(format!("q^({e}) is not an integral power of q^(1/12)")));
        }
        Ok(Scalar::t_pow(t.to_integer().to_i64().ok_or_else(|| Error::Exponent(e.to_string()))?))
    }

    /// q^n for integer n.
    pub fn q(n: i64) -> Self {
        Scalar::t_pow(n * T_PER_Q)
    }

    /// Primitive r-th root of unity raised to k.
    pub fn omega(order: u8, k: i64) -> Self {
        Scalar::from_cyc(CycRat::root_of_unity(order, k))
    }

    pub fn numer(&self) -> &LPoly {
        &self.num
    }

    pub fn denom(&self) -> &LPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// If the value is a constant in Q(ω), return it.
    pub fn as_constant(&self) -> Option<&CycRat> {
        if self.is_zero() {
            return None;
        }
        if self.den.is_one() && self.num.is_monomial() && self.num.min_exp() == 0 {
            Some(&self.num.terms()[0].1)
        } else {
            None
        }
    }

    /// If the value is c·t^e, return (c, e).
    pub fn as_monomial(&self) -> Option<(&CycRat, i64)> {
        if self.den.is_one() && self.num.is_monomial() {
            let (e, c) = &self.num.terms()[0];
            Some((c, *e))
        } else {
            None
        }
    }

    fn normalized(num: LPoly, den: LPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Scalar::zero();
        }
        let shift = den.min_exp();
        let (mut num, mut den) = (num.shift(-shift), den.shift(-shift));
        if den.is_monomial() {
            let inv = den.leading().inv().expect("nonzero");
            return Scalar { num: num.scale(&inv), den: LPoly::one() };
        }
        let g = LPoly::poly_gcd(&num, &den);
        if !g.is_one() {
            num = num.div_exact(&g).expect("gcd divides numerator");
            den = den.div_exact(&g).expect("gcd divides denominator");
        }
        let inv = den.leading().inv().expect("nonzero");
        Scalar { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn add_ref(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar { num: self.num.add(&o.num), den: LPoly::one() };
        }
        if self.den == o.den {
            return Scalar::normalized(self.num.add(&o.num), self.den.clone());
        }
        if self.den.is_one() {
            // gcd(a·d + c, d) = gcd(c, d) = 1
            return Scalar { num: self.num.mul(&o.den).add(&o.num), den: o.den.clone() };
        }
        if o.den.is_one() {
            return Scalar { num: o.num.mul(&self.den).add(&self.num), den: self.den.clone() };
        }
        Scalar::normalized(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn mul_ref(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar { num: self.num.mul(&o.num), den: LPoly::one() };
        }
        if self.num.is_monomial() && o.den.is_one() && o.num.is_monomial() {
            return Scalar { num: self.num.mul(&o.num), den: self.den.clone() };
        }
        if o.num.is_monomial() && self.den.is_one() && self.num.is_monomial() {
            return Scalar { num: self.num.mul(&o.num), den: o.den.clone() };
        }
        Scalar::normalized(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn neg_ref(&self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div_ref(&self, o: &Scalar) -> Result<Scalar> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if o.den.is_one() && o.num.is_monomial() {
            let (e, c) = &o.num.terms()[0];
            let inv = c.inv().expect("nonzero");
            return Ok(Scalar { num: self.num.shift(-e).scale(&inv), den: self.den.clone() });
        }
        Ok(Scalar::normalized(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    pub fn pow(&self, n: i64) -> Result<Scalar> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Scalar::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&b);
            }
            b = b.mul_ref(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// q → q⁻¹ (so t → t⁻¹); Q(ω) coefficients are left untouched.
    pub fn bar(&self) -> Scalar {
        Scalar::normalized(self.num.bar(), self.den.bar())
    }

    /// Re-run normalization; a no-op on values produced by this module.
    pub fn normalize(&self) -> Scalar {
        Scalar::normalized(self.num.clone(), self.den.clone())
    }

    /// Evaluate at t = `t` in a prime field, with ω mapped to `omega` (a cube
    /// root of unity mod p). Returns `None` when the denominator vanishes.
    pub fn eval_mod(&self, t: u64, omega: u64, p: u64) -> Option<u64> {
        let n = eval_lpoly_mod(&self.num, t, omega, p)?;
        let d = eval_lpoly_mod(&self.den, t, omega, p)?;
        if d == 0 {
            return None;
        }
        Some(mulmod(n, powmod(d, p - 2, p), p))
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

fn q_mod(c: &Q, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = ((c.numer() % &pb) + &pb) % &pb;
    let d = ((c.denom() % &pb) + &pb) % &pb;
    let n = n.to_u64()?;
    let d = d.to_u64()?;
    if d == 0 {
        return None;
    }
    Some(mulmod(n, powmod(d, p - 2, p), p))
}

fn eval_lpoly_mod(poly: &LPoly, t: u64, omega: u64, p: u64) -> Option<u64> {
    let tinv = powmod(t, p - 2, p);
    let mut acc = 0u64;
    for (e, c) in poly.terms() {
        let re = q_mod(&c.re, p)?;
        let om = q_mod(&c.om, p)?;
        let cv = (re + mulmod(om, omega, p)) % p;
        let tp = if *e >= 0 { powmod(t, *e as u64, p) } else { powmod(tinv, e.unsigned_abs(), p) };
        acc = (acc + mulmod(cv, tp, p)) % p;
    }
    Some(acc)
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.add_ref(o)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.add_ref(&o.neg_ref())
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.mul_ref(o)
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    /// Panics on division by zero; use [`Scalar::div_ref`] for a checked version.
    fn div(self, o: &Scalar) -> Scalar {
        self.div_ref(o).expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_i64(n)
    }
}

/// Symmetric q-integer (q_d^k − q_d^{−k}) / (q_d − q_d^{−1}) with q_d = q^d.
///
/// `k` may be rational as long as 12·k·d is integral.
pub fn q_int_rat(k: &Q, d: &Q) -> Result<Scalar> {
    if d.is_zero() {
        return Err(Error::Exponent("q-integer with d = 0".into()));
    }
    let num = &Scalar::q_pow(&(k * d))? - &Scalar::q_pow(&(-(k * d)))?;
    let den = &Scalar::q_pow(d)? - &Scalar::q_pow(&-d.clone())?;
    num.div_ref(&den)
}

/// [k]_{q^d} for integer k.
pub fn q_int(k: i64, d: &Q) -> Result<Scalar> {
    if k == 0 {
        return Ok(Scalar::zero());
    }
    if k < 0 {
        return Ok(-&q_int(-k, d)?);
    }
    // geometric sum keeps the result a Laurent polynomial
    let step = d * q_int_n(T_PER_Q);
    if !step.is_integer() {
        return Err(Error::Exponent(format!("q^({d}) is not an integral power of q^(1/12)")));
    }
    let s = step.to_integer().to_i64().ok_or_else(|| Error::Exponent(d.to_string()))?;
    let mut acc = Scalar::zero();
    for j in 0..k {
        acc = &acc + &Scalar::t_pow(s * (k - 1 - 2 * j));
    }
    Ok(acc)
}

fn q_int_n(n: i64) -> Q {
    cyc::q_int(n)
}

/// q-integer with the denominator printed in the source, (q_d^k − q_d^{−k}) / (q − q^{−1}).
/// Differs from [`q_int`] whenever d ≠ 1.
pub fn q_int_plain_denominator(k: i64, d: &Q) -> Result<Scalar> {
    let kd = q_int_n(k) * d;
    let num = &Scalar::q_pow(&kd)? - &Scalar::q_pow(&-kd.clone())?;
    num.div_ref(&(&Scalar::q(1) - &Scalar::q(-1)))
}

pub fn q_factorial(m: i64, d: &Q) -> Result<Scalar> {
    let mut acc = Scalar::one();
    for k in 1..=m {
        acc = &acc * &q_int(k, d)?;
    }
    Ok(acc)
}

/// Gaussian binomial [m choose s] in q^d.
pub fn q_binomial(m: i64, s: i64, d: &Q) -> Result<Scalar> {
    if s < 0 || s > m || m < 0 {
        return Err(Error::Domain(format!("q-binomial [{m} choose {s}] out of range")));
    }
    let num = q_factorial(m, d)?;
    let den = &q_factorial(s, d)? * &q_factorial(m - s, d)?;
    num.div_ref(&den)
}

fn fmt_q_exponent(t_exp: i64) -> String {
    let e = q_frac(t_exp, T_PER_Q);
    if e.is_zero() {
        String::new()
    } else if e.is_one() {
        "q".to_string()
    } else if e.is_integer() {
        format!("q^{}", e.numer())
    } else {
        format!("q^({}/{})", e.numer(), e.denom())
    }
}

fn fmt_lpoly(p: &LPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (idx, (e, c)) in p.terms().iter().rev().enumerate() {
        let qe = fmt_q_exponent(*e);
        let (negative, mag) = if c.is_rational() && c.re.is_negative() {
            (true, CycRat::from_q(-c.re.clone()))
        } else {
            (false, c.clone())
        };
        if idx == 0 {
            if negative {
                write!(f, "-")?;
            }
        } else if negative {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let coeff = if mag.is_rational() {
            mag.to_string()
        } else {
            format!("({mag})")
        };
        match (mag.is_one(), qe.is_empty()) {
            (true, true) => write!(f, "1")?,
            (true, false) => write!(f, "{qe}")?,
            (false, true) => write!(f, "{coeff}")?,
            (false, false) => write!(f, "{coeff}*{qe}")?,
        }
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return fmt_lpoly(&self.num, f);
        }
        write!(f, "(")?;
        fmt_lpoly(&self.num, f)?;
        write!(f, ")/(")?;
        fmt_lpoly(&self.den, f)?;
        write!(f, ")")
    }
}

impl Scalar {
    /// Parse the text form produced by `Display` (and the wider scalar grammar).
    pub fn parse(s: &str) -> Result<Scalar> {
        crate::text::parse_scalar(s)
    }

    /// True when the display form needs parentheses inside a product.
    pub fn is_compound(&self) -> bool {
        !(self.den.is_one() && self.num.terms().len() <= 1)
    }

    pub fn to_q_rational(&self) -> Option<Q> {
        self.as_constant().filter(|c| c.is_rational()).map(|c| c.re.clone())
    }

    /// c·q^e with c a negative rational.
    pub fn is_negative_monomial(&self) -> bool {
        self.as_monomial().map_or(false, |(c, _)| c.is_rational() && c.re.is_negative())
    }

    pub fn is_negative_constant(&self) -> bool {
        matches!(self.to_q_rational(), Some(c) if c.is_negative())
    }

    pub fn one_if(b: bool) -> Scalar {
        if b {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    }

    pub fn from_bigint(n: BigInt) -> Scalar {
        Scalar::from_q(Q::from_integer(n))
    }

    pub fn is_unit_constant(&self) -> bool {
        self.as_constant().map_or(false, |c| c.is_one() || (c.is_rational() && (-&c.re).is_one()))
    }

    pub fn one_over(n: i64) -> Scalar {
        Scalar::from_q(Q::one() / q_int_n(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::q(n)
    }

    #[test]
    fn inverse_pair() {
        assert!((&q(1) * &q(-1)).is_one());
    }

    #[test]
    fn self_division() {
        let x = &q(1) - &q(-1);
        assert!(x.div_ref(&x).unwrap().is_one());
    }

    #[test]
    fn quotient_of_q_differences() {
        let num = &q(2) - &q(-2);
        let den = &q(1) - &q(-1);
        assert_eq!(num.div_ref(&den).unwrap(), &q(1) + &q(-1));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(q(1).div_ref(&Scalar::zero()), Err(Error::DivisionByZero)));
        assert!(Scalar::zero().inv().is_err());
    }

    #[test]
    fn q_integers() {
        let one = Q::one();
        assert!(q_int(1, &one).unwrap().is_one());
        assert_eq!(q_int(2, &one).unwrap(), &q(1) + &q(-1));
        assert_eq!(q_int(3, &one).unwrap(), &(&q(2) + &Scalar::one()) + &q(-2));
        assert_eq!(q_int(-3, &one).unwrap(), -&q_int(3, &one).unwrap());
        assert!(q_int(0, &one).unwrap().is_zero());
        // rational route agrees
        for k in 1..5 {
            for d in [q_frac(1, 2), q_frac(1, 3), q_int_n(2)] {
                assert_eq!(q_int(k, &d).unwrap(), q_int_rat(&q_int_n(k), &d).unwrap());
            }
        }
    }

    #[test]
    fn q_binomials() {
        let one = Q::one();
        assert_eq!(q_binomial(2, 1, &one).unwrap(), &q(1) + &q(-1));
        assert!(q_binomial(5, 0, &one).unwrap().is_one());
        assert_eq!(q_binomial(3, 1, &one).unwrap(), q_int(3, &one).unwrap());
        assert!(q_binomial(4, 2, &one).unwrap().is_laurent());
        assert!(q_binomial(2, 3, &one).is_err());
    }

    #[test]
    fn printed_denominator_convention_differs_off_the_simply_laced_case() {
        let half = q_frac(1, 2);
        let std = q_int(2, &half).unwrap();
        let printed = q_int_plain_denominator(2, &half).unwrap();
        assert_ne!(std, printed);
        assert_eq!(q_int(2, &Q::one()).unwrap(), q_int_plain_denominator(2, &Q::one()).unwrap());
    }

    #[test]
    fn rendering() {
        let x = &Scalar::q_pow(&q_frac(1, 2)).unwrap() - &Scalar::q_pow(&q_frac(-1, 2)).unwrap();
        assert_eq!(x.to_string(), "q^(1/2) - q^(-1/2)");
        assert_eq!((&q(2) + &Scalar::from_i64(-3)).to_string(), "q^2 - 3");
        assert_eq!(Scalar::zero().to_string(), "0");
    }

    #[test]
    fn bar_inverts_q() {
        assert_eq!(q(3).bar(), q(-3));
        let x = (&q(1) + &Scalar::from_i64(2)).inv().unwrap();
        assert_eq!(x.bar().bar(), x);
    }
}
