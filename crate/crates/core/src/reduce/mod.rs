//! Rewriting toward the layered normal order
//! Qd < γ < K < a(l<0) < x⁻ < x⁺ < a(l>0), with every rewrite recorded as a
//! multiple of a relation instance in context.

mod cert;
pub mod fold;
pub mod span;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::drinfeld::{DrinfeldAlgebra, RelationSpec, Sign};
use crate::error::{Error, Result};
use crate::freealg::{Element, GenSym, SymClass, Word};
use crate::scalar::Scalar;

pub use cert::{CertEntry, Certificate, Cited};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    /// Central elements, q^d, K and inverse pairs.
    R1,
    /// a–a commutation.
    R2,
    /// a–x commutation.
    R3,
    /// x⁺x⁻ exchange.
    R4,
    /// Same-sign exchange, budgeted.
    R5,
}

impl Rule {
    pub const ALL: [Rule; 5] = [Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5];
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug)]
pub struct ReductionConfig {
    pub max_steps: usize,
    pub rules: Vec<Rule>,
    /// Cap on R5 applications (R5 can loop).
    pub r5_cap: usize,
    pub trace: bool,
    /// Try the same-sign span certifier on a nonzero residual.
    pub span: bool,
    /// Mode slack for the span certifier window.
    pub window: i64,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig {
            max_steps: 2_000_000,
            rules: vec![Rule::R1, Rule::R2, Rule::R3, Rule::R4],
            r5_cap: 10_000,
            trace: true,
            span: true,
            window: 1,
        }
    }
}

impl ReductionConfig {
    pub fn with_r5(mut self) -> Self {
        if !self.rules.contains(&Rule::R5) {
            self.rules.push(Rule::R5);
        }
        self
    }

    pub fn budget(mut self, n: usize) -> Self {
        self.max_steps = n;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: Rule,
    pub position: usize,
    pub left: Word,
    pub coeff: Scalar,
    pub relation: RelationSpec,
    pub right: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    ReducedToZero,
    NormalForm(Element),
    BudgetExhausted(Element),
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::ReducedToZero => "reduced-to-zero",
            Status::NormalForm(_) => "normal-form",
            Status::BudgetExhausted(_) => "budget-exhausted",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReductionOutcome {
    pub status: Status,
    pub steps: Vec<TraceStep>,
    pub step_count: usize,
}

impl ReductionOutcome {
    pub fn result(&self) -> Element {
        match &self.status {
            Status::ReducedToZero => Element::zero(),
            Status::NormalForm(e) | Status::BudgetExhausted(e) => e.clone(),
        }
    }

    /// The trace as a certificate for `input − result`.
    pub fn certificate(&self) -> Certificate {
        Certificate {
            entries: self
                .steps
                .iter()
                .map(|s| CertEntry::relation(s.left.clone(), s.coeff.clone(), s.relation.clone(), s.right.clone()))
                .collect(),
        }
    }
}

/// Reduction engine with a cache of relation instances.
pub struct Reducer<'a> {
    pub alg: &'a DrinfeldAlgebra,
    cache: HashMap<RelationSpec, Arc<Element>>,
}

fn class_rank(c: SymClass) -> u8 {
    match c {
        SymClass::Free => 0,
        SymClass::Qd => 1,
        SymClass::Gamma => 2,
        SymClass::K => 3,
        SymClass::ANeg => 4,
        SymClass::XMinus | SymClass::XPlus => 5,
        SymClass::APos => 6,
    }
}

fn sign_of(g: GenSym) -> Sign {
    if g.class == SymClass::XPlus {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn exp(g: GenSym) -> i8 {
    g.mode.signum() as i8
}

/// The rewrite rule for the adjacent pair (u, v), if the pair is out of order.
fn pair_rule(u: GenSym, v: GenSym, r5: bool) -> Option<(Rule, RelationSpec)> {
    use SymClass::*;
    let (cu, cv) = (class_rank(u.class), class_rank(v.class));
    let (ui, vi) = (u.index as usize, v.index as usize);
    let (um, vm) = (u.mode as i64, v.mode as i64);
    if cu > cv {
        let spec = match (u.class, v.class) {
            (Gamma, Qd) => RelationSpec::Central { e: exp(u), gen: v.to_string() },
            (K, Qd) => RelationSpec::DK { e: exp(v), j: ui, f: exp(u) },
            (XMinus | XPlus, Qd) => RelationSpec::DX { e: exp(v), sign: sign_of(u), i: ui, k: um },
            (ANeg | APos, Qd) => RelationSpec::DA { e: exp(v), i: ui, l: um },
            (_, Gamma) => RelationSpec::Central { e: exp(v), gen: u.to_string() },
            (ANeg | APos, K) => RelationSpec::AK { i: ui, k: um, j: vi, e: exp(v) },
            (XMinus | XPlus, K) => RelationSpec::KX { i: vi, e: exp(v), sign: sign_of(u), j: ui, k: um },
            (XMinus | XPlus, ANeg) => RelationSpec::AX { i: vi, k: vm, sign: sign_of(u), j: ui, l: um },
            (APos, ANeg) => RelationSpec::AA { i: ui, k: um, j: vi, l: vm },
            (APos, XMinus | XPlus) => RelationSpec::AX { i: ui, k: um, sign: sign_of(v), j: vi, l: vm },
            _ => return None,
        };
        let rule = match spec {
            RelationSpec::AA { .. } => Rule::R2,
            RelationSpec::AX { .. } => Rule::R3,
            _ => Rule::R1,
        };
        return Some((rule, spec));
    }
    if cu < cv {
        return None;
    }
    match (u.class, v.class) {
        (Qd, Qd) | (Gamma, Gamma) if um == -vm => Some((Rule::R1, RelationSpec::Inverse { gen: u.to_string(), e: 1 })),
        (K, K) if ui == vi && um == -vm => Some((Rule::R1, RelationSpec::Inverse { gen: u.to_string(), e: 1 })),
        (K, K) if ui > vi => Some((Rule::R1, RelationSpec::KK { i: ui, e: exp(u), j: vi, f: exp(v) })),
        (ANeg, ANeg) | (APos, APos) if u > v => Some((Rule::R2, RelationSpec::AA { i: ui, k: um, j: vi, l: vm })),
        (XPlus, XMinus) => Some((Rule::R4, RelationSpec::XxMixed { i: ui, k: um, j: vi, l: vm })),
        (XMinus, XMinus) | (XPlus, XPlus) if r5 => {
            let fire = um - vm >= 2 || (um == vm + 1 && ui == vi);
            fire.then(|| (Rule::R5, RelationSpec::XxSame { sign: sign_of(u), i: ui, j: vi, k: um - 1, l: vm }))
        }
        _ => None,
    }
}

/// Highest-priority, leftmost rewrite in a word.
fn find_rewrite(w: &Word, rules: &[bool; 5]) -> Option<(Rule, usize, RelationSpec)> {
    let syms = w.syms();
    let mut best: Option<(Rule, usize, RelationSpec)> = None;
    for p in 0..syms.len().saturating_sub(1) {
        if let Some((rule, spec)) = pair_rule(syms[p], syms[p + 1], rules[4]) {
            if !rules[rule as usize] {
                continue;
            }
            if best.as_ref().map_or(true, |b| rule < b.0) {
                best = Some((rule, p, spec));
                if rule == Rule::R1 {
                    break;
                }
            }
        }
    }
    best
}

fn check_alphabet(e: &Element) -> Result<()> {
    for g in e.symbols() {
        if g.class == SymClass::Free {
            return Err(Error::ForeignSymbol(g.to_string()));
        }
    }
    Ok(())
}

impl<'a> Reducer<'a> {
    pub fn new(alg: &'a DrinfeldAlgebra) -> Self {
        Reducer { alg, cache: HashMap::new() }
    }

    pub fn relation(&mut self, spec: &RelationSpec) -> Result<Arc<Element>> {
        if let Some(e) = self.cache.get(spec) {
            return Ok(e.clone());
        }
        let e = Arc::new(spec.build(self.alg)?.element);
        self.cache.insert(spec.clone(), e.clone());
        Ok(e)
    }

    pub fn reduce(&mut self, e: &Element, cfg: &ReductionConfig) -> Result<ReductionOutcome> {
        check_alphabet(e)?;
        let mut flags = [false; 5];
        for r in &cfg.rules {
            flags[*r as usize] = true;
        }
        let mut pending: BTreeMap<Word, Scalar> = e.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        let mut done = Element::zero();
        let mut steps = Vec::new();
        let mut count = 0usize;
        let mut r5_count = 0usize;
        while let Some((w, c)) = pending.pop_last() {
            if c.is_zero() {
                continue;
            }
            let mut rules = flags;
            if r5_count >= cfg.r5_cap {
                rules[4] = false;
            }
            let Some((rule, p, spec)) = find_rewrite(&w, &rules) else {
                done.add_term(w, c);
                continue;
            };
            if count >= cfg.max_steps {
                pending.insert(w, c);
                let mut rest = done;
                for (w, c) in pending {
                    rest.add_term(w, c);
                }
                return Ok(ReductionOutcome { status: Status::BudgetExhausted(rest), steps, step_count: count });
            }
            count += 1;
            if rule == Rule::R5 {
                r5_count += 1;
            }
            let rel = self.relation(&spec)?;
            let lead = w.slice(p, p + 2);
            let alpha = rel.coeff(&lead).cloned().ok_or_else(|| {
                Error::Domain(format!("relation {spec:?} does not contain the word {lead}"))
            })?;
            let factor = c.div_ref(&alpha)?;
            let left = w.slice(0, p);
            let right = w.slice(p + 2, w.len());
            for (u, d) in rel.terms() {
                if *u == lead {
                    continue;
                }
                let nw = left.concat(u).concat(&right);
                let add = -&(&factor * d);
                match pending.get_mut(&nw) {
                    Some(x) => *x = &*x + &add,
                    None => {
                        pending.insert(nw, add);
                    }
                }
            }
            if cfg.trace {
                steps.push(TraceStep { rule, position: p, left, coeff: factor, relation: spec, right });
            }
        }
        let status = if done.is_zero() { Status::ReducedToZero } else { Status::NormalForm(done) };
        Ok(ReductionOutcome { status, steps, step_count: count })
    }
}

pub fn reduce(alg: &DrinfeldAlgebra, e: &Element, cfg: &ReductionConfig) -> Result<ReductionOutcome> {
    Reducer::new(alg).reduce(e, cfg)
}

/// Mechanical soundness check: input − Σ trace = output.
pub fn verify_trace(alg: &DrinfeldAlgebra, input: &Element, outcome: &ReductionOutcome) -> Result<bool> {
    let sum = outcome.certificate().resum(alg, &|_| None)?;
    Ok(&(input - &sum) == &outcome.result())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Zero,
    NonZero,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ZeroCertification {
    pub verdict: Verdict,
    pub outcome: ReductionOutcome,
    /// Certificate for `input − residual` (R1–R5 trace plus span entries).
    pub certificate: Certificate,
    /// What is left after all certified steps (zero when the verdict is `Zero`).
    pub residual: Element,
}

/// True only when every term has at most one x⁻ and one x⁺: such normal
/// words are linearly independent in U.
fn is_definitely_nonzero(nf: &Element) -> bool {
    !nf.is_zero()
        && nf.terms().all(|(w, _)| {
            let m = w.syms().iter().filter(|g| g.class == SymClass::XMinus).count();
            let p = w.syms().iter().filter(|g| g.class == SymClass::XPlus).count();
            m <= 1 && p <= 1
        })
}

impl<'a> Reducer<'a> {
    pub fn certify_zero(&mut self, e: &Element, cfg: &ReductionConfig) -> Result<ZeroCertification> {
        let outcome = self.reduce(e, cfg)?;
        let mut certificate = outcome.certificate();
        let (verdict, residual) = match &outcome.status {
            Status::ReducedToZero => (Verdict::Zero, Element::zero()),
            Status::BudgetExhausted(r) => (Verdict::Inconclusive, r.clone()),
            Status::NormalForm(nf) => {
                if is_definitely_nonzero(nf) {
                    (Verdict::NonZero, nf.clone())
                } else if cfg.span {
                    let mut found = None;
                    for slack in 0..=cfg.window {
                        if let Some(c) = span::certify(self.alg, nf, slack)? {
                            found = Some(c);
                            break;
                        }
                    }
                    match found {
                        Some(c) => {
                            certificate.extend(c);
                            (Verdict::Zero, Element::zero())
                        }
                        None => (Verdict::Inconclusive, nf.clone()),
                    }
                } else {
                    (Verdict::Inconclusive, nf.clone())
                }
            }
        };
        Ok(ZeroCertification { verdict, outcome, certificate, residual })
    }
}

pub fn certify_zero(alg: &DrinfeldAlgebra, e: &Element, cfg: &ReductionConfig) -> Result<ZeroCertification> {
    Reducer::new(alg).certify_zero(e, cfg)
}
