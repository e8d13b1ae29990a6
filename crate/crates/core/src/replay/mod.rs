//! Derivation replay: every step of a scripted computation is checked by
//! expansion, and each step that uses the defining relations records the
//! instances it consumed.

pub mod corpus;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cartan::{affine_cartan, AffineType, CartanData};
use crate::drinfeld::{DrinfeldAlgebra, RelationSpec, Sign};
use crate::epsseq::builtin_sequence;
use crate::error::{Error, Result};
use crate::freealg::identities::{jacobi_right, jacobi_left, product_left, product_right, swap_sym, IdentityKind};
use crate::freealg::{parse_element_with, Element, Word};
use crate::isomap::{chevalley_images, goal_relations, ChevalleyImage};
use crate::reduce::{CertEntry, Certificate, Cited, Reducer, ReductionConfig, Verdict};
use crate::scalar::Scalar;

pub use corpus::{bundled_corpus, corpus_names};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Start {
    Goal(String),
    Expr(String),
}

/// A value as printed in the source computation, kept for comparison only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Printed {
    pub expr: String,
    pub citation: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    ApplyBracketIdentity,
    ApplySerre,
    ApplyDrinfeldRelation,
    ExpandDefinition,
    CollectTerms,
    SubstituteEqualByPriorGoal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub kind: StepKind,
    #[serde(default)]
    pub params: Value,
    /// Word-index path `[term, offset]` into the expanded input where the
    /// cited relation's leading word sits.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub position: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed: Option<Printed>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Derivation {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub start: Start,
    #[serde(default)]
    pub steps: Vec<Step>,
    pub expect: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed: Option<Printed>,
    /// Not spelled out in the source; written out here.
    #[serde(default)]
    pub reconstructed: bool,
    /// Derivations whose statements are cited by this one.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub requires: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Derivation {
    pub fn from_json(src: &str) -> Result<Derivation> {
        serde_json::from_str(src).map_err(|e| Error::parse(e.column(), format!("derivation: {e}")))
    }
}

#[derive(Deserialize)]
struct IdentityParams {
    identity: String,
    bindings: BTreeMap<String, String>,
    result: String,
}

#[derive(Deserialize)]
struct SerreParams {
    sign: Sign,
    i: usize,
    j: usize,
    modes: Vec<i64>,
    #[serde(default)]
    n: i64,
    /// Use the doubly-laced symmetric form (2 letters of x_i).
    #[serde(default)]
    double: bool,
    result: String,
}

#[derive(Deserialize)]
struct RelationParams {
    #[serde(default)]
    relations: Vec<RelationSpec>,
    /// Certify with the reducer instead of an explicit list.
    #[serde(default)]
    auto: bool,
    result: Option<String>,
}

#[derive(Deserialize)]
struct ResultParams {
    #[serde(default)]
    what: Option<String>,
    result: String,
}

#[derive(Deserialize)]
struct GoalParams {
    goal: String,
    result: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub derivation: String,
    /// `end` or `step <k>`.
    pub location: String,
    pub printed: String,
    pub computed: String,
    /// λ with printed = λ·computed, when one exists.
    pub ratio: Option<String>,
    pub citation: String,
}

#[derive(Clone, Debug)]
pub struct StepRecord {
    pub index: usize,
    pub kind: StepKind,
    /// How the step was checked: `expansion`, `division`, `span`, `reduce`.
    pub method: &'static str,
    pub certificate: Certificate,
    pub output: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReplayStatus {
    Certified,
    Failed { step: Option<usize>, message: String },
}

#[derive(Clone, Debug)]
pub struct ReplayResult {
    pub name: String,
    pub ty: String,
    pub status: ReplayStatus,
    pub steps: Vec<StepRecord>,
    pub certificate: Certificate,
    pub start: Element,
    pub end: Element,
    /// The concatenated certificate re-sums to start − end.
    pub resum_ok: bool,
    pub discrepancies: Vec<Discrepancy>,
    pub reconstructed: bool,
}

impl ReplayResult {
    pub fn certified(&self) -> bool {
        self.status == ReplayStatus::Certified && self.resum_ok
    }

    pub fn to_json(&self) -> Value {
        let status = match &self.status {
            ReplayStatus::Certified => json!("certified"),
            ReplayStatus::Failed { step, message } => json!({"failed": {"step": step, "message": message}}),
        };
        json!({
            "name": self.name,
            "type": self.ty,
            "status": status,
            "reconstructed": self.reconstructed,
            "resum_ok": self.resum_ok,
            "start": self.start.to_string(),
            "end": self.end.to_string(),
            "steps": self.steps.iter().map(|s| json!({
                "index": s.index,
                "kind": s.kind,
                "method": s.method,
                "entries": s.certificate.len(),
            })).collect::<Vec<_>>(),
            "certificate": self.certificate.to_json(),
            "discrepancies": self.discrepancies,
        })
    }
}

/// λ with a = λ·b, if a is a scalar multiple of b.
pub fn scalar_ratio(a: &Element, b: &Element) -> Option<Scalar> {
    let (w, c) = b.terms().next()?;
    let lambda = a.coeff(w)?.div_ref(c).ok()?;
    (b.scale(&lambda) == *a).then_some(lambda)
}

fn leading(e: &Element) -> Option<(&Word, &Scalar)> {
    e.terms().next_back()
}

fn find_sub(w: &Word, pat: &Word) -> Vec<usize> {
    let (ws, ps) = (w.syms(), pat.syms());
    if ps.len() > ws.len() {
        return Vec::new();
    }
    (0..=ws.len() - ps.len()).filter(|&p| &ws[p..p + ps.len()] == ps).collect()
}

/// Write `d` as Σ c·L·rel·R by repeatedly cancelling the leading word.
fn divide(d: &Element, rels: &[(Cited, Element)], max_rounds: usize) -> Option<Vec<CertEntry>> {
    let mut rest = d.clone();
    let mut out = Vec::new();
    for _ in 0..max_rounds {
        let Some((w, c)) = leading(&rest) else { return Some(out) };
        let (w, c) = (w.clone(), c.clone());
        let mut hit = None;
        'search: for (cited, rel) in rels {
            let (lw, lc) = leading(rel)?;
            if let Some(&p) = find_sub(&w, lw).first() {
                let left = w.slice(0, p);
                let right = w.slice(p + lw.len(), w.len());
                let coeff = c.div_ref(lc).ok()?;
                hit = Some((left, coeff, cited.clone(), right, rel.clone()));
                break 'search;
            }
        }
        let (left, coeff, cited, right, rel) = hit?;
        rest.add_scaled(&rel.sandwich(&left, &Scalar::one(), &right), &-&coeff);
        out.push(CertEntry { left, coeff, cited, right });
    }
    None
}

/// The algebra, images and certified statements for one run.
pub struct ReplayContext {
    pub cartan: CartanData,
    pub alg: DrinfeldAlgebra,
    pub img: ChevalleyImage,
    pub cfg: ReductionConfig,
}

impl ReplayContext {
    pub fn new(ty: &str) -> Result<ReplayContext> {
        let t: AffineType = ty.parse()?;
        let cartan = affine_cartan(t)?;
        let seq = builtin_sequence(&cartan)?;
        let img = chevalley_images(&seq.sequence, &cartan)?;
        let alg = DrinfeldAlgebra::new(&cartan);
        Ok(ReplayContext { cartan, alg, img, cfg: ReductionConfig::default() })
    }

    /// Parse an expression; `E<i>`, `F<i>`, `t<i>`, `Eb`, `Fb` (bracket parts
    /// of E_0, F_0), `psi<i>(m)` and `phi<i>(m)` are resolved.
    pub fn parse(&self, src: &str) -> Result<Element> {
        let img = &self.img;
        let alg = &self.alg;
        let n = alg.n;
        let resolver = |name: &str, index: Option<u32>, mode: Option<i64>| -> Option<Element> {
            let idx = index.map(|i| i as usize);
            match (name, idx, mode) {
                ("E", Some(i), None) if i <= n => Some(img.e[i].clone()),
                ("F", Some(i), None) if i <= n => Some(img.f[i].clone()),
                ("t", Some(i), None) if i <= n => Some(img.t[i].clone()),
                ("Eb", None, None) => Some(img.e0_bracket.clone()),
                ("Fb", None, None) => Some(img.f0_bracket.clone()),
                ("psi", Some(i), Some(m)) if (1..=n).contains(&i) => Some(alg.psi(i, m)),
                ("phi", Some(i), Some(m)) if (1..=n).contains(&i) => Some(alg.phi(i, m)),
                _ => None,
            }
        };
        parse_element_with(src, &resolver)
    }

    fn goal(&self, name: &str) -> Result<Element> {
        goal_relations(&self.img)?
            .into_iter()
            .find(|g| g.name == name)
            .map(|g| g.element)
            .ok_or_else(|| Error::InvalidParams(format!("no goal named {name}")))
    }
}

/// Replays derivations in order; finished ones become citable statements.
pub struct Replayer {
    contexts: BTreeMap<String, ReplayContext>,
    /// Every certified derivation or goal, by name.
    statements: BTreeMap<String, Statement>,
}

impl Default for Replayer {
    fn default() -> Self {
        Replayer::new()
    }
}

struct StepFailure(String);

struct Statement {
    ty: String,
    element: Element,
    certificate: Certificate,
}

impl Replayer {
    pub fn new() -> Self {
        Replayer { contexts: BTreeMap::new(), statements: BTreeMap::new() }
    }

    pub fn statement(&self, name: &str) -> Option<&Element> {
        self.statements.get(name).map(|s| &s.element)
    }

    fn context(&mut self, ty: &str) -> Result<&ReplayContext> {
        if !self.contexts.contains_key(ty) {
            self.contexts.insert(ty.to_string(), ReplayContext::new(ty)?);
        }
        Ok(&self.contexts[ty])
    }

    /// Certify a Chevalley goal of `ty` with the reducer so it can be cited.
    fn certify_goal(&mut self, ty: &str, name: &str) -> Result<Option<Element>> {
        let key = format!("{ty}:{name}");
        if let Some(s) = self.statements.get(&key) {
            return Ok(Some(s.element.clone()));
        }
        let ctx = self.context(ty)?;
        let Ok(el) = ctx.goal(name) else { return Ok(None) };
        let r = Reducer::new(&ctx.alg).certify_zero(&el, &ctx.cfg)?;
        if r.verdict != Verdict::Zero {
            return Ok(None);
        }
        self.statements.insert(key, Statement { ty: ty.to_string(), element: el.clone(), certificate: r.certificate });
        Ok(Some(el))
    }

    pub fn replay(&mut self, d: &Derivation) -> Result<ReplayResult> {
        for r in &d.requires {
            if !self.statements.contains_key(r) {
                return Err(Error::Precondition(format!("{} cites {r}, which has not been certified in this run", d.name)));
            }
        }
        if self.statements.contains_key(&d.name) {
            return Err(Error::Precondition(format!("{} was already replayed", d.name)));
        }
        self.context(&d.ty)?;
        let start = match &d.start {
            Start::Expr(s) => self.contexts[&d.ty].parse(s)?,
            Start::Goal(g) => self.contexts[&d.ty].goal(g)?,
        };
        let mut current = start.clone();
        let mut records = Vec::new();
        let mut discrepancies = Vec::new();
        let mut status = ReplayStatus::Certified;
        for (k, step) in d.steps.iter().enumerate() {
            match self.run_step(d, step, &current)? {
                Ok((method, cert, output)) => {
                    if let Some(p) = &step.printed {
                        let ctx = &self.contexts[&d.ty];
                        if let Some(rec) = compare(ctx, &d.name, &format!("step {}", k + 1), p, &output)? {
                            discrepancies.push(rec);
                        }
                    }
                    records.push(StepRecord { index: k + 1, kind: step.kind, method, certificate: cert, output: output.clone() });
                    current = output;
                }
                Err(StepFailure(message)) => {
                    status = ReplayStatus::Failed { step: Some(k + 1), message };
                    break;
                }
            }
        }
        let ctx = &self.contexts[&d.ty];
        let expect = ctx.parse(&d.expect)?;
        if status == ReplayStatus::Certified && current != expect {
            status = ReplayStatus::Failed {
                step: None,
                message: format!("final element differs from expected by {}", &current - &expect),
            };
        }
        if let Some(p) = &d.printed {
            if let Some(rec) = compare(ctx, &d.name, "end", p, &current)? {
                discrepancies.push(rec);
            }
        }
        let mut certificate = Certificate::new();
        for r in &records {
            certificate.extend(r.certificate.clone());
        }
        let statements = &self.statements;
        let lookup = |name: &str| statements.get(name).map(|s| s.element.clone());
        let resum_ok = certificate.resum(&ctx.alg, &lookup)? == &start - &current;
        let result = ReplayResult {
            name: d.name.clone(),
            ty: d.ty.clone(),
            status,
            steps: records,
            certificate,
            start: start.clone(),
            end: current.clone(),
            resum_ok,
            discrepancies,
            reconstructed: d.reconstructed,
        };
        if result.certified() {
            let st = Statement { ty: d.ty.clone(), element: &start - &current, certificate: result.certificate.clone() };
            self.statements.insert(d.name.clone(), st);
        }
        Ok(result)
    }

    #[allow(clippy::type_complexity)]
    fn run_step(&mut self, d: &Derivation, step: &Step, input: &Element) -> Result<std::result::Result<(&'static str, Certificate, Element), StepFailure>> {
        let bad = |m: String| Ok(Err(StepFailure(m)));
        let params = |v: &Value| v.clone();
        match step.kind {
            StepKind::ApplyBracketIdentity => {
                let p: IdentityParams = from_params(params(&step.params))?;
                let ctx = &self.contexts[&d.ty];
                let (lhs, rhs) = identity_instance(ctx, &p)?;
                if lhs != rhs {
                    return bad(format!("identity {} does not hold for the given bindings", p.identity));
                }
                let out = ctx.parse(&p.result)?;
                if &out != input {
                    return bad(format!("rewrite changes the element by {}", input - &out));
                }
                Ok(Ok(("expansion", Certificate::new(), out)))
            }
            StepKind::ExpandDefinition | StepKind::CollectTerms => {
                let p: ResultParams = from_params(params(&step.params))?;
                if step.kind == StepKind::ExpandDefinition {
                    let what = p.what.as_deref().unwrap_or("");
                    if !["psi", "phi", "bracket", "image"].contains(&what) {
                        return Err(Error::InvalidParams(format!("unknown definition {what:?}")));
                    }
                }
                let out = self.contexts[&d.ty].parse(&p.result)?;
                if &out != input {
                    return bad(format!("rewrite changes the element by {}", input - &out));
                }
                Ok(Ok(("expansion", Certificate::new(), out)))
            }
            StepKind::ApplySerre => {
                let p: SerreParams = from_params(params(&step.params))?;
                let ctx = &self.contexts[&d.ty];
                let spec = if p.double {
                    if p.modes.len() != 1 {
                        return Err(Error::InvalidParams("the symmetric form takes one mode for x_i".into()));
                    }
                    RelationSpec::SerreDouble { sign: p.sign, i: p.i, j: p.j, m: p.modes[0], n: p.n }
                } else {
                    RelationSpec::Serre { sign: p.sign, i: p.i, j: p.j, modes: p.modes.clone(), n: p.n }
                };
                let out = ctx.parse(&p.result)?;
                let diff = input - &out;
                let mut red = Reducer::new(&ctx.alg);
                let rel = red.relation(&spec)?.as_ref().clone();
                check_position(step, input, &rel)?;
                let rels = [(Cited::Relation { spec: spec.clone() }, rel)];
                if let Some(entries) = divide(&diff, &rels, 10_000) {
                    return Ok(Ok(("division", Certificate { entries }, out)));
                }
                let r = red.certify_zero(&diff, &ctx.cfg)?;
                let cites_serre = r.certificate.entries.iter().any(|e| {
                    matches!(&e.cited, Cited::Relation { spec: RelationSpec::Serre { i, j, .. } | RelationSpec::SerreDouble { i, j, .. } } if *i == p.i && *j == p.j)
                });
                if r.verdict == Verdict::Zero && cites_serre {
                    Ok(Ok(("span", r.certificate, out)))
                } else if r.verdict == Verdict::Zero {
                    bad(format!("step holds but does not use a Serre relation for ({}, {})", p.i, p.j))
                } else {
                    bad(format!("could not certify; residual {}", r.residual))
                }
            }
            StepKind::ApplyDrinfeldRelation => {
                let p: RelationParams = from_params(params(&step.params))?;
                let ctx = &self.contexts[&d.ty];
                let mut red = Reducer::new(&ctx.alg);
                if p.auto {
                    let out = match &p.result {
                        Some(s) => ctx.parse(s)?,
                        None => red.reduce(input, &ctx.cfg)?.result(),
                    };
                    let r = red.certify_zero(&(input - &out), &ctx.cfg)?;
                    return if r.verdict == Verdict::Zero {
                        Ok(Ok(("reduce", r.certificate, out)))
                    } else {
                        bad(format!("could not certify; residual {}", r.residual))
                    };
                }
                if p.relations.is_empty() {
                    return Err(Error::InvalidParams("no relations given".into()));
                }
                let Some(result) = &p.result else {
                    return Err(Error::InvalidParams("explicit relations need a result".into()));
                };
                let out = ctx.parse(result)?;
                let mut rels = Vec::new();
                for spec in &p.relations {
                    rels.push((Cited::Relation { spec: spec.clone() }, red.relation(spec)?.as_ref().clone()));
                }
                if let Some((_, first)) = rels.first() {
                    check_position(step, input, first)?;
                }
                match divide(&(input - &out), &rels, 10_000) {
                    Some(entries) => Ok(Ok(("division", Certificate { entries }, out))),
                    None => bad("the listed relations do not account for the rewrite".into()),
                }
            }
            StepKind::SubstituteEqualByPriorGoal => {
                let p: GoalParams = from_params(params(&step.params))?;
                if p.goal == d.name {
                    return Err(Error::Precondition(format!("{} cites itself", d.name)));
                }
                let stmt = match self.statements.get(&p.goal) {
                    Some(s) if s.ty != d.ty => {
                        // a statement from another algebra is usable only if its
                        // certificate re-sums to it with this algebra's relations
                        let statements = &self.statements;
                        let lookup = |name: &str| statements.get(name).map(|s| s.element.clone());
                        let alg = &self.contexts[&d.ty].alg;
                        if s.certificate.resum(alg, &lookup)? != s.element {
                            return bad(format!("{} ({}) does not transfer to {}", p.goal, s.ty, d.ty));
                        }
                        Some(s.element.clone())
                    }
                    Some(s) => Some(s.element.clone()),
                    None => self.certify_goal(&d.ty, &p.goal)?,
                };
                let Some(stmt) = stmt else {
                    return bad(format!("{} is not a statement certified in this run", p.goal));
                };
                let key = if self.statements.contains_key(&p.goal) { p.goal.clone() } else { format!("{}:{}", d.ty, p.goal) };
                let out = self.contexts[&d.ty].parse(&p.result)?;
                check_position(step, input, &stmt)?;
                match divide(&(input - &out), &[(Cited::Goal { name: key }, stmt)], 10_000) {
                    Some(entries) => Ok(Ok(("division", Certificate { entries }, out))),
                    None => bad(format!("the rewrite is not a multiple of {} in context", p.goal)),
                }
            }
        }
    }
}

fn from_params<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::InvalidParams(format!("step params: {e}")))
}

/// When a position is given, the leading word of `rel` must occur in the
/// addressed word of the input at the given offset.
fn check_position(step: &Step, input: &Element, rel: &Element) -> Result<()> {
    let [term, offset] = step.position[..] else {
        if step.position.is_empty() {
            return Ok(());
        }
        return Err(Error::InvalidParams("position is [term, offset]".into()));
    };
    let (w, _) = input
        .terms()
        .nth(term)
        .ok_or_else(|| Error::InvalidParams(format!("position term {term} out of range")))?;
    let (lw, _) = leading(rel).ok_or_else(|| Error::InvalidParams("cited element is zero".into()))?;
    if !find_sub(w, lw).contains(&offset) {
        return Err(Error::InvalidParams(format!("{lw} does not occur at offset {offset} of {w}")));
    }
    Ok(())
}

fn identity_instance(ctx: &ReplayContext, p: &IdentityParams) -> Result<(Element, Element)> {
    let kind = IdentityKind::from_name(&p.identity).ok_or_else(|| Error::InvalidParams(format!("unknown identity {}", p.identity)))?;
    let el = |k: &str| -> Result<Element> {
        let s = p.bindings.get(k).ok_or_else(|| Error::InvalidParams(format!("binding {k} missing")))?;
        ctx.parse(s)
    };
    let sc = |k: &str| -> Result<Scalar> {
        el(k)?.as_scalar().ok_or_else(|| Error::InvalidParams(format!("binding {k} must be a scalar")))
    };
    match kind {
        IdentityKind::JacobiRight => jacobi_right(&el("a")?, &el("b")?, &el("c")?, &sc("u")?, &sc("v")?, &sc("x")?),
        IdentityKind::JacobiLeft => jacobi_left(&el("a")?, &el("b")?, &el("c")?, &sc("u")?, &sc("v")?, &sc("x")?),
        IdentityKind::ProductLeft => product_left(&el("a")?, &el("b")?, &el("c")?, &sc("v")?, &sc("x")?),
        IdentityKind::ProductRight => product_right(&el("a")?, &el("b")?, &el("c")?, &sc("v")?, &sc("x")?),
        IdentityKind::SwapSym => {
            let (uv, vu, _) = swap_sym(&el("a")?, &el("b")?, &sc("u")?, &sc("v")?)?;
            Ok((uv, vu))
        }
        other => Err(Error::InvalidParams(format!("identity {} is not usable as a rewrite", other.name()))),
    }
}

fn compare(ctx: &ReplayContext, name: &str, location: &str, p: &Printed, computed: &Element) -> Result<Option<Discrepancy>> {
    let printed = ctx.parse(&p.expr)?;
    if printed == *computed {
        return Ok(None);
    }
    Ok(Some(Discrepancy {
        derivation: name.to_string(),
        location: location.to_string(),
        printed: p.expr.clone(),
        computed: computed.to_string(),
        ratio: scalar_ratio(&printed, computed).map(|s| s.to_string()),
        citation: p.citation.clone(),
    }))
}

/// Replay every bundled derivation in corpus order.
pub fn replay_all() -> Result<Vec<ReplayResult>> {
    let mut r = Replayer::new();
    bundled_corpus()?.iter().map(|d| r.replay(d)).collect()
}
