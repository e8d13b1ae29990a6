//! Elements of the cyclotomic field Q(ω) used as coefficients.
//!
//! A single representation `a + b·ω` with ω a primitive cube root of unity
//! covers every twist order that occurs: r = 1 and r = 2 only ever produce
//! rational values (ω₂ = −1), while r = 3 needs the second coordinate.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `re + om·ω` with `ω² = −1 − ω`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycRat {
    pub re: Q,
    pub om: Q,
}

impl CycRat {
    pub fn zero() -> Self {
        CycRat { re: Q::zero(), om: Q::zero() }
    }

    pub fn one() -> Self {
        CycRat { re: Q::one(), om: Q::zero() }
    }

    pub fn from_q(re: Q) -> Self {
        CycRat { re, om: Q::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        CycRat::from_q(q_int(n))
    }

    pub fn omega() -> Self {
        CycRat { re: Q::zero(), om: Q::one() }
    }

    /// ω_r^k for r ∈ {1, 2, 3}.
    pub fn root_of_unity(order: u8, k: i64) -> Self {
        match order {
            1 => CycRat::one(),
            2 => {
                if k.rem_euclid(2) == 0 {
                    CycRat::one()
                } else {
                    CycRat::from_i64(-1)
                }
            }
            3 => match k.rem_euclid(3) {
                0 => CycRat::one(),
                1 => CycRat::omega(),
                _ => CycRat { re: -Q::one(), om: -Q::one() },
            },
            _ => panic!("unsupported root-of-unity order {order}"),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.om.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.om.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.om.is_zero()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.om.is_zero() {
            return Some(CycRat::from_q(self.re.recip()));
        }
        let norm = &self.re * &self.re - &self.re * &self.om + &self.om * &self.om;
        Some(CycRat {
            re: (&self.re - &self.om) / &norm,
            om: -(&self.om) / &norm,
        })
    }

    pub fn scale(&self, c: &Q) -> Self {
        CycRat { re: &self.re * c, om: &self.om * c }
    }
}

impl Add for &CycRat {
    type Output = CycRat;
    fn add(self, o: &CycRat) -> CycRat {
        CycRat { re: &self.re + &o.re, om: &self.om + &o.om }
    }
}

impl AddAssign<&CycRat> for CycRat {
    fn add_assign(&mut self, o: &CycRat) {
        self.re += &o.re;
        if !o.om.is_zero() {
            self.om += &o.om;
        }
    }
}

impl Sub for &CycRat {
    type Output = CycRat;
    fn sub(self, o: &CycRat) -> CycRat {
        CycRat { re: &self.re - &o.re, om: &self.om - &o.om }
    }
}

impl Mul for &CycRat {
    type Output = CycRat;
    fn mul(self, o: &CycRat) -> CycRat {
        if self.om.is_zero() && o.om.is_zero() {
            return CycRat::from_q(&self.re * &o.re);
        }
        let bd = &self.om * &o.om;
        CycRat {
            re: &self.re * &o.re - &bd,
            om: &self.re * &o.om + &self.om * &o.re - bd,
        }
    }
}

impl Neg for &CycRat {
    type Output = CycRat;
    fn neg(self) -> CycRat {
        CycRat { re: -&self.re, om: -&self.om }
    }
}

fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CycRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.om.is_zero()) {
            (_, true) => write!(f, "{}", fmt_q(&self.re)),
            (true, false) => {
                if self.om.is_one() {
                    write!(f, "w")
                } else if (-&self.om).is_one() {
                    write!(f, "-w")
                } else {
                    write!(f, "{}*w", fmt_q(&self.om))
                }
            }
            (false, false) => {
                let sign = if self.om.is_negative() { "-" } else { "+" };
                let mag = self.om.abs();
                if mag.is_one() {
                    write!(f, "{} {} w", fmt_q(&self.re), sign)
                } else {
                    write!(f, "{} {} {}*w", fmt_q(&self.re), sign, fmt_q(&mag))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root_identities() {
        let w = CycRat::omega();
        let w2 = &w * &w;
        let w3 = &w2 * &w;
        assert!(w3.is_one());
        let s = &(&CycRat::one() + &w) + &w2;
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_round_trips() {
        let x = CycRat { re: q_frac(3, 2), om: q_int(-5) };
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert!(CycRat::zero().inv().is_none());
    }

    #[test]
    fn roots_of_unity_by_order() {
        assert_eq!(CycRat::root_of_unity(2, 3), CycRat::from_i64(-1));
        assert_eq!(CycRat::root_of_unity(3, -1), &CycRat::omega() * &CycRat::omega());
        assert!(CycRat::root_of_unity(1, 7).is_one());
    }
}
