//! Sparse Laurent polynomials in t = q^{1/12} with Q(ω) coefficients.

use std::collections::BTreeMap;

use num_integer::Integer;

use super::cyc::CycRat;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LPoly {
    /// (exponent, coefficient), strictly increasing exponents, no zero coefficients.
    terms: Vec<(i64, CycRat)>,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        LPoly::monomial(0, CycRat::one())
    }

    pub fn monomial(exp: i64, c: CycRat) -> Self {
        if c.is_zero() {
            LPoly::zero()
        } else {
            LPoly { terms: vec![(exp, c)] }
        }
    }

    pub fn from_map(map: BTreeMap<i64, CycRat>) -> Self {
        LPoly { terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn terms(&self) -> &[(i64, CycRat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn min_exp(&self) -> i64 {
        self.terms.first().map(|t| t.0).unwrap_or(0)
    }

    pub fn max_exp(&self) -> i64 {
        self.terms.last().map(|t| t.0).unwrap_or(0)
    }

    pub fn leading(&self) -> &CycRat {
        &self.terms.last().expect("leading coefficient of zero polynomial").1
    }

    pub fn shift(&self, by: i64) -> Self {
        LPoly { terms: self.terms.iter().map(|(e, c)| (e + by, c.clone())).collect() }
    }

    pub fn scale(&self, c: &CycRat) -> Self {
        if c.is_zero() {
            return LPoly::zero();
        }
        LPoly { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn neg(&self) -> Self {
        LPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    /// t → t⁻¹.
    pub fn bar(&self) -> Self {
        let mut terms: Vec<_> = self.terms.iter().map(|(e, c)| (-e, c.clone())).collect();
        terms.reverse();
        LPoly { terms }
    }

    pub fn add(&self, o: &LPoly) -> LPoly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &o.terms[j];
            if ea < eb {
                out.push((*ea, ca.clone()));
                i += 1;
            } else if eb < ea {
                out.push((*eb, cb.clone()));
                j += 1;
            } else {
                let s = ca + cb;
                if !s.is_zero() {
                    out.push((*ea, s));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        LPoly { terms: out }
    }

    pub fn sub(&self, o: &LPoly) -> LPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &LPoly) -> LPoly {
        if self.is_zero() || o.is_zero() {
            return LPoly::zero();
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return LPoly { terms: o.terms.iter().map(|(f, d)| (e + f, c * d)).collect() };
        }
        if o.terms.len() == 1 {
            return o.mul(self);
        }
        let mut acc: BTreeMap<i64, CycRat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let p = ca * cb;
                acc.entry(ea + eb).and_modify(|x| *x += &p).or_insert(p);
            }
        }
        LPoly::from_map(acc)
    }

    /// Common step of all exponents after shifting to start at 0.
    fn exponent_step(&self) -> i64 {
        let base = self.min_exp();
        self.terms.iter().fold(0i64, |g, (e, _)| g.gcd(&(e - base)))
    }

    fn to_dense(&self, step: i64) -> Vec<CycRat> {
        let base = self.min_exp();
        let deg = ((self.max_exp() - base) / step) as usize;
        let mut v = vec![CycRat::zero(); deg + 1];
        for (e, c) in &self.terms {
            v[((e - base) / step) as usize] = c.clone();
        }
        v
    }

    fn from_dense(v: &[CycRat], step: i64) -> LPoly {
        LPoly {
            terms: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64 * step, c.clone()))
                .collect(),
        }
    }

    /// Monic gcd of two polynomials, both shifted so their lowest exponent is 0.
    pub fn poly_gcd(a: &LPoly, b: &LPoly) -> LPoly {
        if a.is_zero() {
            return b.shift(-b.min_exp()).monic();
        }
        if b.is_zero() {
            return a.shift(-a.min_exp()).monic();
        }
        let step = a.exponent_step().gcd(&b.exponent_step());
        if step == 0 {
            // both are monomials; t is never a common factor after shifting
            return LPoly::one();
        }
        let mut x = a.to_dense(step);
        let mut y = b.to_dense(step);
        if x.len() < y.len() {
            std::mem::swap(&mut x, &mut y);
        }
        while !(y.len() == 1 && !y[0].is_zero()) {
            let r = dense_rem(&x, &y);
            if r.is_empty() {
                return LPoly::from_dense(&y, step).monic();
            }
            x = y;
            y = r;
        }
        LPoly::one()
    }

    pub fn monic(&self) -> LPoly {
        if self.is_zero() {
            return LPoly::zero();
        }
        let inv = self.leading().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Exact division by a polynomial `d` with lowest exponent 0; `None` if not exact.
    pub fn div_exact(&self, d: &LPoly) -> Option<LPoly> {
        if d.is_monomial() {
            let (e, c) = &d.terms[0];
            let inv = c.inv()?;
            return Some(self.shift(-e).scale(&inv));
        }
        let base = self.min_exp();
        let step = self.exponent_step().gcd(&d.exponent_step());
        let step = if step == 0 { 1 } else { step };
        let n = self.shift(-base).to_dense(step);
        let dd = d.to_dense(step);
        let (quo, rem) = dense_divrem(&n, &dd);
        if !rem.is_empty() {
            return None;
        }
        Some(LPoly::from_dense(&quo, step).shift(base))
    }
}

fn trim(v: &mut Vec<CycRat>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

fn dense_divrem(a: &[CycRat], b: &[CycRat]) -> (Vec<CycRat>, Vec<CycRat>) {
    let mut r: Vec<CycRat> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv_lead = b[db].inv().expect("nonzero divisor");
    let mut q = vec![CycRat::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = &r[r.len() - 1] * &inv_lead;
        for (i, bc) in b.iter().enumerate() {
            let p = &c * bc;
            r[shift + i] = &r[shift + i] - &p;
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn dense_rem(a: &[CycRat], b: &[CycRat]) -> Vec<CycRat> {
    dense_divrem(a, b).1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> LPoly {
        let mut m = BTreeMap::new();
        for (e, c) in terms {
            m.insert(*e, CycRat::from_i64(*c));
        }
        LPoly::from_map(m)
    }

    #[test]
    fn gcd_of_cyclotomic_like_factors() {
        // (t^24 - 1) and (t^12 - 1): gcd t^12 - 1
        let a = p(&[(0, -1), (24, 1)]);
        let b = p(&[(0, -1), (12, 1)]);
        assert_eq!(LPoly::poly_gcd(&a, &b), b);
        let c = p(&[(0, 1), (12, 1)]);
        assert_eq!(LPoly::poly_gcd(&b, &c), LPoly::one());
    }

    #[test]
    fn exact_division() {
        let a = p(&[(0, -1), (24, 1)]);
        let b = p(&[(0, -1), (12, 1)]);
        assert_eq!(a.div_exact(&b).unwrap(), p(&[(0, 1), (12, 1)]));
        assert!(b.div_exact(&p(&[(0, 1), (12, 1)])).is_none());
    }
}
