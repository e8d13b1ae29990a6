//! Twisted relations checked through the folding map: fold into the base
//! algebra, then certify the rational and √r parts separately.

use std::fmt;

use super::{Certificate, Reducer, ReductionConfig, Verdict};
use crate::drinfeld::twisted::{SqrtElement, TwistedAlgebra, TwistedSpec};
use crate::drinfeld::{x, UGen};
use crate::error::Result;
use crate::freealg::Element;
use crate::scalar::Scalar;

/// `rat + √r·irr`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtScalar {
    pub r: u8,
    pub rat: Scalar,
    pub irr: Scalar,
}

impl fmt::Display for SqrtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.irr.is_zero()) {
            (_, true) => write!(f, "{}", self.rat),
            (true, false) => write!(f, "sqrt({})*({})", self.r, self.irr),
            (false, false) => write!(f, "{} + sqrt({})*({})", self.rat, self.r, self.irr),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FoldCheck {
    pub spec: TwistedSpec,
    pub verdict: Verdict,
    /// Certificates for the rational and √r parts of the folded element.
    pub certificates: [Certificate; 2],
    pub residual: SqrtElement,
    /// For a–x instances that fail: λ with fold(lhs) = λ·fold(rhs).
    pub ratio: Option<SqrtScalar>,
}

fn combine(a: Verdict, b: Verdict) -> Verdict {
    match (a, b) {
        (Verdict::Zero, Verdict::Zero) => Verdict::Zero,
        (Verdict::NonZero, _) | (_, Verdict::NonZero) => Verdict::NonZero,
        _ => Verdict::Inconclusive,
    }
}

/// Fold and certify a folded element; `red` works over `alg.base`.
pub fn certify_folded(red: &mut Reducer<'_>, folded: &SqrtElement, cfg: &ReductionConfig) -> Result<(Verdict, [Certificate; 2], SqrtElement)> {
    let a = red.certify_zero(&folded.rat, cfg)?;
    let b = red.certify_zero(&folded.irr, cfg)?;
    let verdict = combine(a.verdict, b.verdict);
    let residual = SqrtElement { r: folded.r, rat: a.residual, irr: b.residual };
    Ok((verdict, [a.certificate, b.certificate], residual))
}

pub fn check_twisted(alg: &TwistedAlgebra, red: &mut Reducer<'_>, spec: &TwistedSpec, cfg: &ReductionConfig) -> Result<FoldCheck> {
    let folded = alg.fold(&spec.element(alg)?)?;
    let (verdict, certificates, residual) = certify_folded(red, &folded, cfg)?;
    let ratio = match (spec, verdict) {
        (TwistedSpec::AX { i, k, sign, j, l }, Verdict::NonZero | Verdict::Inconclusive) => {
            let a = UGen::A(*i, *k).el();
            let xj = x(*sign, *j, *l);
            let lhs = &a.mul_ref(&xj) - &xj.mul_ref(&a);
            let rhs = &lhs - &spec.element(alg)?;
            side_ratio(red, &alg.fold(&lhs)?, &alg.fold(&rhs)?, cfg)?
        }
        _ => None,
    };
    Ok(FoldCheck { spec: spec.clone(), verdict, certificates, residual, ratio })
}

/// λ = α + β√r with lhs = λ·rhs, when rhs is purely rational or purely
/// irrational and the match certifies.
fn side_ratio(red: &mut Reducer<'_>, lhs: &SqrtElement, rhs: &SqrtElement, cfg: &ReductionConfig) -> Result<Option<SqrtScalar>> {
    let r = lhs.r;
    let nf = |red: &mut Reducer<'_>, e: &Element| -> Result<Element> { Ok(red.reduce(e, cfg)?.result()) };
    let (lr, li) = (nf(red, &lhs.rat)?, nf(red, &lhs.irr)?);
    let (rr, ri) = (nf(red, &rhs.rat)?, nf(red, &rhs.irr)?);
    let coeff_ratio = |num: &Element, den: &Element| -> Result<Option<Scalar>> {
        let Some((w, d)) = den.terms().next() else { return Ok(None) };
        Ok(Some(num.coeff(w).cloned().unwrap_or_else(Scalar::zero).div_ref(d)?))
    };
    let rs = Scalar::from_i64(r as i64);
    let lambda = if rr.is_zero() && !ri.is_zero() {
        // (α + β√r)·√r·ri = rβ·ri + √r·α·ri
        let (Some(al), Some(be)) = (coeff_ratio(&li, &ri)?, coeff_ratio(&lr, &ri)?) else { return Ok(None) };
        SqrtScalar { r, rat: al, irr: be.div_ref(&rs)? }
    } else if ri.is_zero() && !rr.is_zero() {
        let (Some(al), Some(be)) = (coeff_ratio(&lr, &rr)?, coeff_ratio(&li, &rr)?) else { return Ok(None) };
        SqrtScalar { r, rat: al, irr: be }
    } else {
        return Ok(None);
    };
    // (α + β√r)(rr + √r·ri) = (α·rr + rβ·ri) + √r(α·ri + β·rr)
    let mut prod = SqrtElement { r, rat: rhs.rat.scale(&lambda.rat), irr: rhs.irr.scale(&lambda.rat) };
    let shifted = SqrtElement { r, rat: rhs.irr.scale(&(&lambda.irr * &rs)), irr: rhs.rat.scale(&lambda.irr) };
    prod.add_scaled(&shifted, &Scalar::one());
    let mut diff = lhs.clone();
    diff.add_scaled(&prod, &-&Scalar::one());
    let (v, _, _) = certify_folded(red, &diff, cfg)?;
    Ok((v == Verdict::Zero).then_some(lambda))
}
