//! Free associative algebra over a generator alphabet with [`Scalar`]
//! coefficients.

mod bracket;
pub mod identities;
mod parse;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use once_cell::sync::Lazy;
use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use bracket::{bracket, nested_bracket, nested_bracket_primed};
pub use parse::{parse_element, parse_element_with, Resolver};

/// Generator classes, in the layered normal order of the Drinfeld alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymClass {
    /// Abstract symbols for identity checks.
    Free,
    Qd,
    Gamma,
    K,
    ANeg,
    XMinus,
    XPlus,
    APos,
}

/// A generator symbol. For `Qd`, `Gamma` and `K` the mode is the exponent
/// sign (±1); `Gamma` with mode ±1 stands for γ^{±1/2}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenSym {
    pub class: SymClass,
    pub index: u16,
    pub mode: i32,
}

impl GenSym {
    pub const fn new(class: SymClass, index: u16, mode: i32) -> Self {
        GenSym { class, index, mode }
    }

    pub const fn free(index: u16) -> Self {
        GenSym::new(SymClass::Free, index, 0)
    }
}

impl fmt::Display for GenSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let GenSym { class, index, mode } = *self;
        match class {
            SymClass::Free => write!(f, "s{index}"),
            SymClass::Qd => write!(f, "{}", if mode > 0 { "qd" } else { "qd^-1" }),
            SymClass::Gamma => write!(f, "{}", if mode > 0 { "g^(1/2)" } else { "g^(-1/2)" }),
            SymClass::K => {
                if mode > 0 {
                    write!(f, "K{index}")
                } else {
                    write!(f, "K{index}^-1")
                }
            }
            SymClass::ANeg | SymClass::APos => write!(f, "a{index}({mode})"),
            SymClass::XMinus => write!(f, "xm{index}({mode})"),
            SymClass::XPlus => write!(f, "xp{index}({mode})"),
        }
    }
}

static INTERN: Lazy<Mutex<HashSet<Arc<[GenSym]>>>> = Lazy::new(|| Mutex::new(HashSet::new()));

/// An interned word. Equal words share storage, so equality and hashing
/// are pointer operations; ordering compares contents.
#[derive(Clone)]
pub struct Word(Arc<[GenSym]>);

impl Word {
    pub fn new(syms: &[GenSym]) -> Word {
        let mut table = INTERN.lock();
        if let Some(w) = table.get(syms) {
            return Word(w.clone());
        }
        let arc: Arc<[GenSym]> = Arc::from(syms);
        table.insert(arc.clone());
        Word(arc)
    }

    pub fn empty() -> Word {
        Word::new(&[])
    }

    pub fn syms(&self) -> &[GenSym] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, o: &Word) -> Word {
        if self.is_empty() {
            return o.clone();
        }
        if o.is_empty() {
            return self.clone();
        }
        let mut v = Vec::with_capacity(self.len() + o.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&o.0);
        Word::new(&v)
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word::new(&self.0[from..to])
    }

    pub fn reversed(&self) -> Word {
        let v: Vec<GenSym> = self.0.iter().rev().copied().collect();
        Word::new(&v)
    }
}

impl PartialEq for Word {
    fn eq(&self, o: &Word) -> bool {
        Arc::ptr_eq(&self.0, &o.0)
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.0) as *const GenSym as usize).hash(state);
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Word) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Word {
    fn cmp(&self, o: &Word) -> std::cmp::Ordering {
        if self == o {
            return std::cmp::Ordering::Equal;
        }
        self.len().cmp(&o.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "·")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Finite linear combination of words.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<Word, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Element::scalar(Scalar::one())
    }

    pub fn scalar(s: Scalar) -> Self {
        Element::term(Word::empty(), s)
    }

    pub fn gen(g: GenSym) -> Self {
        Element::term(Word::new(&[g]), Scalar::one())
    }

    pub fn word(syms: &[GenSym]) -> Self {
        Element::term(Word::new(syms), Scalar::one())
    }

    pub fn term(w: Word, c: Scalar) -> Self {
        let mut e = Element::zero();
        e.add_term(w, c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Scalar)>>(it: I) -> Self {
        let mut e = Element::zero();
        for (w, c) in it {
            e.add_term(w, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, Scalar)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, w: &Word) -> Option<&Scalar> {
        self.terms.get(w)
    }

    /// The scalar value, if only the empty word occurs.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, o: &Element, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &o.terms {
            self.add_term(w.clone(), d * c);
        }
    }

    pub fn add_assign(&mut self, o: &Element) {
        for (w, d) in &o.terms {
            self.add_term(w.clone(), d.clone());
        }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element { terms: self.terms.iter().map(|(w, d)| (w.clone(), d * c)).collect() }
    }

    pub fn mul_ref(&self, o: &Element) -> Element {
        let mut out = Element::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// Multiply every word on the left by `l` and on the right by `r`.
    pub fn sandwich(&self, l: &Word, c: &Scalar, r: &Word) -> Element {
        let mut out = Element::zero();
        for (w, d) in &self.terms {
            out.add_term(l.concat(w).concat(r), d * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Element {
        (0..n).fold(Element::one(), |acc, _| acc.mul_ref(self))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Element {
        Element::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }

    pub fn symbols(&self) -> BTreeSet<GenSym> {
        self.terms.keys().flat_map(|w| w.syms().iter().copied()).collect()
    }

    /// Anti-algebra map: reverses every word, substitutes generator images,
    /// and applies `q → q⁻¹` to coefficients.
    pub fn omega(&self, image: &dyn Fn(GenSym) -> Option<Element>) -> Result<Element> {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            let mut acc = Element::scalar(c.bar());
            for &g in w.syms().iter().rev() {
                let im = image(g).ok_or_else(|| Error::MissingImage(g.to_string()))?;
                acc = acc.mul_ref(&im);
            }
            out.add_assign(&acc);
        }
        Ok(out)
    }

    /// Linear substitution of generators (coefficients untouched).
    pub fn substitute(&self, image: &dyn Fn(GenSym) -> Option<Element>) -> Result<Element> {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            let mut acc = Element::scalar(c.clone());
            for &g in w.syms() {
                let im = image(g).ok_or_else(|| Error::MissingImage(g.to_string()))?;
                acc = acc.mul_ref(&im);
            }
            out.add_assign(&acc);
        }
        Ok(out)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative_monomial();
            let mag = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if w.is_empty() {
                if mag.is_compound() {
                    write!(f, "({mag})")?;
                } else {
                    write!(f, "{mag}")?;
                }
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else if mag.is_compound() {
                write!(f, "({mag})*{w}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, o: &Element) -> Element {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, o: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(o, &Scalar::from_i64(-1));
        out
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, o: &Element) -> Element {
        self.mul_ref(o)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&Scalar::from_i64(-1))
    }
}

impl From<Scalar> for Element {
    fn from(s: Scalar) -> Self {
        Element::scalar(s)
    }
}

impl From<GenSym> for Element {
    fn from(g: GenSym) -> Self {
        Element::gen(g)
    }
}
