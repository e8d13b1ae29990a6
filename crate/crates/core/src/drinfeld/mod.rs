//! The Drinfeld (loop) presentation: generator alphabet, relation instances,
//! and the ψ/φ Cartan currents.

mod relations;
pub mod twisted;

use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cartan::{CartanData, FiniteType, Matrix};
use crate::error::{Error, Result};
use crate::freealg::{Element, GenSym, SymClass, Word};
use crate::scalar::{q_int_rat, rat_int, Scalar, Q};

pub use relations::{RelKind, RelationInstance, RelationSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn of_class(c: SymClass) -> Option<Sign> {
        match c {
            SymClass::XPlus => Some(Sign::Plus),
            SymClass::XMinus => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Generators x_i^±(k), a_i(l), K_i^{±1}, γ^{±1/2}, q^{±d}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UGen {
    X(Sign, usize, i64),
    A(usize, i64),
    K(usize, i8),
    GammaHalf(i8),
    Qd(i8),
}

impl UGen {
    pub fn sym(self) -> GenSym {
        match self {
            UGen::X(Sign::Plus, i, k) => GenSym::new(SymClass::XPlus, i as u16, k as i32),
            UGen::X(Sign::Minus, i, k) => GenSym::new(SymClass::XMinus, i as u16, k as i32),
            UGen::A(i, l) => {
                assert!(l != 0, "a_i(0) is not a generator");
                let class = if l > 0 { SymClass::APos } else { SymClass::ANeg };
                GenSym::new(class, i as u16, l as i32)
            }
            UGen::K(i, e) => GenSym::new(SymClass::K, i as u16, e.signum() as i32),
            UGen::GammaHalf(e) => GenSym::new(SymClass::Gamma, 0, e.signum() as i32),
            UGen::Qd(e) => GenSym::new(SymClass::Qd, 0, e.signum() as i32),
        }
    }

    pub fn from_sym(g: GenSym) -> Option<UGen> {
        let i = g.index as usize;
        let m = g.mode as i64;
        Some(match g.class {
            SymClass::Free => return None,
            SymClass::XPlus => UGen::X(Sign::Plus, i, m),
            SymClass::XMinus => UGen::X(Sign::Minus, i, m),
            SymClass::APos | SymClass::ANeg => UGen::A(i, m),
            SymClass::K => UGen::K(i, m as i8),
            SymClass::Gamma => UGen::GammaHalf(m as i8),
            SymClass::Qd => UGen::Qd(m as i8),
        })
    }

    pub fn el(self) -> Element {
        Element::gen(self.sym())
    }
}

pub fn xp(i: usize, k: i64) -> Element {
    UGen::X(Sign::Plus, i, k).el()
}

pub fn xm(i: usize, k: i64) -> Element {
    UGen::X(Sign::Minus, i, k).el()
}

pub fn x(sign: Sign, i: usize, k: i64) -> Element {
    UGen::X(sign, i, k).el()
}

pub fn a(i: usize, l: i64) -> Element {
    UGen::A(i, l).el()
}

/// K_i^e for any integer e.
pub fn k_pow(i: usize, e: i64) -> Element {
    let g = UGen::K(i, e.signum() as i8).sym();
    Element::word(&vec![g; e.unsigned_abs() as usize])
}

/// γ^{m/2}.
pub fn gamma_half_pow(m: i64) -> Element {
    let g = UGen::GammaHalf(m.signum() as i8).sym();
    Element::word(&vec![g; m.unsigned_abs() as usize])
}

/// γ^e for integer e.
pub fn gamma_pow(e: i64) -> Element {
    gamma_half_pow(2 * e)
}

pub fn qd(e: i8) -> Element {
    UGen::Qd(e).el()
}

/// The finite-type data the relations need: form, d, Cartan matrix on nodes 1..=n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrinfeldAlgebra {
    pub n: usize,
    /// (α_i|α_j), indexed 1..=n (row/column 0 unused).
    pub form: Vec<Vec<Q>>,
    pub d: Vec<Q>,
    pub a: Matrix,
    pub label: String,
}

impl DrinfeldAlgebra {
    /// The algebra attached to the finite part of an affine type.
    pub fn new(cartan: &CartanData) -> Self {
        let n = cartan.rank();
        let mut form = vec![vec![Q::zero(); n + 1]; n + 1];
        for i in 1..=n {
            for j in 1..=n {
                form[i][j] = cartan.bilinear(i, j);
            }
        }
        DrinfeldAlgebra { n, form, d: cartan.d.clone(), a: cartan.a.clone(), label: cartan.ty.to_string() }
    }

    /// Untwisted algebra of a finite type given directly (used for folding bases such as D3).
    pub fn from_finite(ft: FiniteType) -> Self {
        let n = ft.rank;
        let f = ft.form();
        let fa = ft.cartan();
        let mut form = vec![vec![Q::zero(); n + 1]; n + 1];
        let mut a = vec![vec![0i64; n + 1]; n + 1];
        let mut d = vec![Q::one()];
        for i in 1..=n {
            d.push(f.d[i - 1].clone());
            for j in 1..=n {
                form[i][j] = f.gram[i - 1][j - 1].clone();
                a[i][j] = fa[i - 1][j - 1];
            }
        }
        a[0][0] = 2;
        DrinfeldAlgebra { n, form, d, a, label: format!("{ft}^1") }
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::InvalidParams(format!("node {i} outside 1..={}", self.n)))
        } else {
            Ok(())
        }
    }

    /// (α_i|α_j) for finite nodes.
    pub fn pair(&self, i: usize, j: usize) -> &Q {
        &self.form[i][j]
    }

    pub fn pair_int(&self, i: usize, j: usize) -> Result<i64> {
        let p = &self.form[i][j];
        if p.is_integer() {
            Ok(p.to_integer().to_i64().expect("small"))
        } else {
            Err(Error::Exponent(format!("(α_{i}|α_{j}) = {p} is not an integer")))
        }
    }

    /// q^{(α_i|α_j)·e}.
    pub fn q_pair(&self, i: usize, j: usize, e: i64) -> Scalar {
        Scalar::q_pow(&(&self.form[i][j] * rat_int(e))).expect("pairings are multiples of 1/12")
    }

    /// q_i = q^{d_i}.
    pub fn q_i(&self, i: usize) -> Scalar {
        Scalar::q_pow(&self.d[i]).expect("d_i is a multiple of 1/12")
    }

    /// q_i − q_i^{-1}.
    pub fn q_i_diff(&self, i: usize) -> Scalar {
        let qi = self.q_i(i);
        &qi - &qi.inv().expect("nonzero")
    }

    /// [a_ij k]_i / k.
    pub fn heisenberg_coeff(&self, i: usize, j: usize, k: i64) -> Scalar {
        let arg = rat_int(self.a[i][j] * k);
        let qi = q_int_rat(&arg, &self.d[i]).expect("q-integer");
        qi.div_ref(&Scalar::from_i64(k)).expect("k nonzero")
    }

    /// ψ_i(m) for m ≥ 0; zero for m < 0.
    pub fn psi(&self, i: usize, m: i64) -> Element {
        if m < 0 {
            return Element::zero();
        }
        let c = self.q_i_diff(i);
        k_pow(i, 1).mul_ref(&exp_coefficient(i, m, &c, 1))
    }

    /// φ_i(m) for m ≤ 0; zero for m > 0.
    pub fn phi(&self, i: usize, m: i64) -> Element {
        if m > 0 {
            return Element::zero();
        }
        let c = -&self.q_i_diff(i);
        k_pow(i, -1).mul_ref(&exp_coefficient(i, -m, &c, -1))
    }
}

/// Degree-m coefficient of exp(c Σ_{k≥1} a_i(s·k) z^k) with commuting a's,
/// monomials written in increasing mode order.
fn exp_coefficient(i: usize, m: i64, c: &Scalar, s: i64) -> Element {
    let mut out = Element::zero();
    for part in partitions(m) {
        // part: multiplicities n_k for k = 1..=m
        let mut coeff = Scalar::one();
        let mut syms: Vec<GenSym> = Vec::new();
        for (k, &nk) in part.iter().enumerate() {
            let k = k as i64 + 1;
            if nk == 0 {
                continue;
            }
            let fact: i64 = (1..=nk as i64).product();
            coeff = &coeff * &c.pow(nk as i64).expect("power");
            coeff = coeff.div_ref(&Scalar::from_i64(fact)).expect("nonzero");
            for _ in 0..nk {
                syms.push(UGen::A(i, s * k).sym());
            }
        }
        syms.sort();
        out.add_term(Word::new(&syms), coeff);
    }
    out
}

/// Multiplicity vectors of the partitions of m (entry k−1 counts parts equal to k).
pub(crate) fn partitions(m: i64) -> Vec<Vec<u32>> {
    fn go(rest: i64, max: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=max.min(rest)).rev() {
            cur[(k - 1) as usize] += 1;
            go(rest - k, k, cur, out);
            cur[(k - 1) as usize] -= 1;
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; m.max(0) as usize];
    go(m, m, &mut cur, &mut out);
    out
}
