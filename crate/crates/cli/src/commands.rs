use std::collections::BTreeSet;
use std::path::Path;
use std::time::Instant;

use qaffine::cartan::{affine_cartan, AffineType, CartanData, Series};
use qaffine::drinfeld::RelationSpec;
use qaffine::drinfeld::twisted::{TwistedAlgebra, TwistedSpec};
use qaffine::drinfeld::{DrinfeldAlgebra, Sign};
use qaffine::epsseq::{builtin_sequence, epsilon_closed_form, theta_of, validate_sequence};
use qaffine::freealg::identities::run_identity_suite;
use qaffine::isomap::{bracket_checkpoint, chevalley_images, goal_relations, inverse_generators, printed_kappa, ChevalleyImage};
use qaffine::reduce::fold::check_twisted;
use qaffine::reduce::{Reducer, ReductionConfig, Verdict};
use qaffine::replay::corpus::bundled_corpus;
use qaffine::replay::{Derivation, ReplayContext, ReplayResult, Replayer};
use qaffine::{Error, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{DiscrepancyRecord, GoalRecord, Report, Status};

pub struct Opts {
    pub ty: Option<String>,
    pub seed: u64,
    pub budget: Option<usize>,
    pub window: i64,
}

impl Opts {
    pub fn cfg(&self) -> ReductionConfig {
        match self.budget {
            Some(n) => ReductionConfig::default().budget(n),
            None => ReductionConfig::default(),
        }
    }

    fn cartan(&self) -> Result<CartanData> {
        let ty = self.ty.as_deref().ok_or_else(|| Error::InvalidParams("--type is required".into()))?;
        affine_cartan(ty.parse::<AffineType>()?)
    }
}

fn verdict_status(v: Verdict) -> Status {
    match v {
        Verdict::Zero => Status::Certified,
        Verdict::NonZero => Status::Failed,
        Verdict::Inconclusive => Status::Inconclusive,
    }
}

fn check(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> GoalRecord {
    GoalRecord::new(name, if ok { Status::Certified } else { Status::Failed }, detail)
}

// identities

pub fn identities(report: &mut Report, instances: usize, seed: u64) -> Result<()> {
    let t = Instant::now();
    let runs = run_identity_suite(instances, seed)?;
    let per = t.elapsed() / runs.len().max(1) as u32;
    for r in runs {
        let detail = match &r.counterexample {
            Some(c) => format!("{}/{} failed; {c}", r.failures, r.instances),
            None => format!("{} instances", r.instances),
        };
        report.goals.push(check(format!("identity/{}", r.identity), r.failures == 0, detail).took(per));
    }
    report.set("identities", json!({"instances": instances, "seed": seed}));
    Ok(())
}

// cartan

// A root is maximal iff adding any simple root leaves the positive roots.
fn maximal_by_addition(roots: &[Vec<i64>]) -> Option<Vec<i64>> {
    let set: BTreeSet<&Vec<i64>> = roots.iter().collect();
    let maxes: Vec<&Vec<i64>> = roots
        .iter()
        .filter(|r| {
            (0..r.len()).all(|i| {
                let mut s = (*r).clone();
                s[i] += 1;
                !set.contains(&s)
            })
        })
        .collect();
    match maxes.as_slice() {
        [m] => Some((*m).clone()),
        _ => None,
    }
}

/// θ by brute force: the highest root, or for twisted types the highest short
/// root of the folded system, doubled for A_{2n}^{(2)}.
pub fn theta_oracle(c: &CartanData) -> Option<Vec<i64>> {
    let form = &c.finite;
    let pos = form.positive_roots();
    if !c.ty.is_twisted() {
        return maximal_by_addition(&pos);
    }
    let min = pos.iter().map(|r| form.pair(r, r)).min()?;
    let short: Vec<Vec<i64>> = pos.iter().filter(|r| form.pair(r, r) == min).cloned().collect();
    let th = maximal_by_addition(&short)?;
    let doubled = c.ty.series == Series::A && c.ty.n % 2 == 0;
    Some(if doubled { th.iter().map(|x| 2 * x).collect() } else { th })
}

pub fn cartan(report: &mut Report, c: &CartanData) -> Result<()> {
    let t = Instant::now();
    let inv = c.check_invariants();
    report.goals.push(check("cartan/invariants", inv.is_ok(), inv.err().map(|e| e.to_string()).unwrap_or_default()).took(t.elapsed()));
    let t = Instant::now();
    let oracle = theta_oracle(c);
    let detail = format!("theta {:?}, oracle {:?}", c.theta, oracle);
    report.goals.push(check("cartan/theta", oracle.as_ref() == Some(&c.theta), detail).took(t.elapsed()));
    let mut data = json!({
        "matrix": c.a,
        "d": c.d.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "theta": c.theta,
        "delta": c.delta,
        "h": c.h(),
        "finite_type": c.finite_type.to_string(),
    });
    if let Some(f) = &c.folding {
        data["orbits"] = json!((1..=c.rank()).map(|i| f.orbit(i)).collect::<Vec<_>>());
        data["base"] = json!(f.base.to_string());
    }
    report.set("cartan", data);
    Ok(())
}

// epsilon

pub fn epsilon(report: &mut Report, c: &CartanData) -> Result<()> {
    let t = Instant::now();
    let b = match builtin_sequence(c) {
        Ok(b) => b,
        Err(e) => {
            report.goals.push(GoalRecord::new("epsilon/sequence", Status::Failed, e.to_string()).took(t.elapsed()));
            return Ok(());
        }
    };
    let s = &b.sequence;
    let v = validate_sequence(&s.seq, Some(&s.labels), c);
    report.goals.push(check("epsilon/validate", v.is_ok(), v.err().map(|e| e.to_string()).unwrap_or_default()).took(t.elapsed()));
    let sum = theta_of(&s.seq, c.rank());
    report.goals.push(check("epsilon/theta", sum == c.theta, format!("sum {sum:?}")));
    let cf = epsilon_closed_form(c);
    report.goals.push(check("epsilon/closed-form", cf == s.epsilon, format!("epsilon {}, closed form {cf}", s.epsilon)));
    for d in &b.discrepancies {
        report.discrepancies.push(DiscrepancyRecord {
            source: "epsilon".into(),
            location: c.ty.to_string(),
            printed: d.printed.clone(),
            computed: d.computed.clone(),
            ratio: None,
            citation: d.citation.clone(),
        });
    }
    report.set(
        "epsilon",
        json!({
            "sequence": s.seq,
            "labels": s.labels.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "epsilon": s.epsilon.to_string(),
            "a": s.a.to_string(),
            "reconstructed": s.reconstructed,
        }),
    );
    Ok(())
}

// relations

fn with_kind(kind: &str, params: &str) -> Result<Value> {
    let mut v: Value = serde_json::from_str(params).map_err(|e| Error::InvalidParams(format!("--params: {e}")))?;
    let obj = v.as_object_mut().ok_or_else(|| Error::InvalidParams("--params must be a JSON object".into()))?;
    obj.insert("kind".into(), json!(kind));
    Ok(v)
}

fn spec_name(kind: &str, v: &Value) -> String {
    let mut v = v.clone();
    if let Some(o) = v.as_object_mut() {
        o.remove("kind");
    }
    format!("{kind}{v}")
}

pub fn relations(report: &mut Report, c: &CartanData, kind: &str, params: &str, opts: &Opts) -> Result<()> {
    let v = with_kind(kind, params)?;
    let cfg = opts.cfg();
    if c.ty.is_twisted() {
        let spec: TwistedSpec = serde_json::from_value(v).map_err(|e| Error::InvalidParams(format!("{kind}: {e}")))?;
        let alg = TwistedAlgebra::new(c)?;
        let specs = spec.window(opts.window)?;
        report.goals.extend(twisted_goals(&alg, &specs, &cfg)?);
        report.set("window", json!(opts.window));
    } else {
        let spec: RelationSpec = serde_json::from_value(v).map_err(|e| Error::InvalidParams(format!("{kind}: {e}")))?;
        let alg = DrinfeldAlgebra::new(c);
        let t = Instant::now();
        let inst = spec.build(&alg)?;
        let mut red = Reducer::new(&alg);
        let cert = red.certify_zero(&inst.element, &cfg)?;
        let name = spec_name(kind, &serde_json::to_value(&spec).expect("serializable"));
        let detail = if cert.verdict == Verdict::Zero { String::new() } else { format!("residual {}", cert.residual) };
        report.goals.push(GoalRecord::new(name, verdict_status(cert.verdict), detail).entries(cert.certificate.entries.len()).took(t.elapsed()));
        report.set("relation", json!(inst.element.to_string()));
    }
    Ok(())
}

fn twisted_goals(alg: &TwistedAlgebra, specs: &[TwistedSpec], cfg: &ReductionConfig) -> Result<Vec<GoalRecord>> {
    specs
        .par_iter()
        .map(|spec| {
            let t = Instant::now();
            let mut red = Reducer::new(&alg.base);
            let r = check_twisted(alg, &mut red, spec, cfg)?;
            let v = serde_json::to_value(spec).expect("serializable");
            let name = spec_name(spec.kind().name(), &v);
            let mut detail = String::new();
            if let Some(ratio) = &r.ratio {
                detail = format!("lhs = {ratio} * rhs after folding");
            } else if r.verdict != Verdict::Zero {
                detail = format!("residual {} + sqrt({})*({})", r.residual.rat, r.residual.r, r.residual.irr);
            }
            let n = r.certificates.iter().map(|c| c.entries.len()).sum();
            Ok(GoalRecord::new(name, verdict_status(r.verdict), detail).entries(n).took(t.elapsed()))
        })
        .collect()
}

/// Folding checks run by `suite` on a twisted type.
fn twisted_suite(report: &mut Report, c: &CartanData, cfg: &ReductionConfig) -> Result<()> {
    let alg = TwistedAlgebra::new(c)?;
    let n = alg.big_n;
    let mut specs = Vec::new();
    for i in 1..=n {
        for k in -2..=2 {
            specs.push(TwistedSpec::SigmaX { sign: Sign::Plus, i, k });
            specs.push(TwistedSpec::SigmaX { sign: Sign::Minus, i, k });
        }
        for j in 1..=n {
            for k in 1..=2 {
                specs.push(TwistedSpec::AA { i, k, j, l: -k });
            }
        }
    }
    report.goals.extend(twisted_goals(&alg, &specs, cfg)?);
    Ok(())
}

// map

fn images_json(img: &ChevalleyImage) -> Value {
    let strs = |v: &[qaffine::freealg::Element]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>();
    json!({
        "sequence": img.seq.seq,
        "E": strs(&img.e),
        "F": strs(&img.f),
        "t": strs(&img.t),
        "f0_constant": img.f0_constant.to_string(),
        "a": img.a.to_string(),
    })
}

/// Images under the map, or `None` (with an inconclusive goal) when the
/// image of E_0 is past the expansion limit.
pub fn map_images(report: &mut Report, c: &CartanData) -> Result<Option<ChevalleyImage>> {
    if c.ty.is_twisted() {
        return Err(Error::InvalidParams(format!(
            "map is defined for untwisted types; use `relations` for the folding checks of {}",
            c.ty
        )));
    }
    let b = builtin_sequence(c)?;
    // the bracket part of E_0 nests h−1 letters, so it has up to 2^(h−2) words
    let bound = 1usize.checked_shl(b.sequence.len().saturating_sub(1) as u32).unwrap_or(usize::MAX);
    if bound > MAX_E0_WORDS {
        let detail = format!("image of E0 has up to {bound} words, expansion limit is {MAX_E0_WORDS}");
        report.goals.push(GoalRecord::new("map/goals", Status::Inconclusive, detail));
        return Ok(None);
    }
    chevalley_images(&b.sequence, c).map(Some)
}

/// Goals are expanded in full; past this many words in the image of E_0 the
/// goals (Serre goals hold up to fourth powers of E_0) exhaust memory.
pub const MAX_E0_WORDS: usize = 32;

pub fn map_goals(report: &mut Report, c: &CartanData, img: &ChevalleyImage, cfg: &ReductionConfig) -> Result<()> {
    let alg = DrinfeldAlgebra::new(c);
    let goals = goal_relations(img)?;
    let records: Vec<GoalRecord> = goals
        .par_iter()
        .map(|g| {
            let t = Instant::now();
            let mut red = Reducer::new(&alg);
            let cert = red.certify_zero(&g.element, cfg)?;
            let status = match cert.verdict {
                Verdict::Zero => Status::Certified,
                _ if g.uses_unspecified => Status::UnspecifiedConstant,
                v => verdict_status(v),
            };
            let rec = GoalRecord::new(format!("map/{}", g.name), status, "").took(t.elapsed());
            Ok(if status == Status::Certified { rec.entries(cert.certificate.entries.len()) } else { rec })
        })
        .collect::<Result<_>>()?;
    report.goals.extend(records);

    let t = Instant::now();
    let mut red = Reducer::new(&alg);
    let cp = bracket_checkpoint(img, &mut red, cfg)?;
    let detail = match &cp.kappa {
        Some(k) => format!("kappa = {k}"),
        None => "no kappa".into(),
    };
    report.goals.push(GoalRecord::new("map/checkpoint", verdict_status(cp.verdict), detail).entries(cp.certificate.entries.len()).took(t.elapsed()));
    if let (Some(k), Some(p)) = (&cp.kappa, printed_kappa(c)?) {
        if p.value != *k {
            report.discrepancies.push(DiscrepancyRecord {
                source: "map".into(),
                location: "checkpoint".into(),
                printed: p.text.clone(),
                computed: k.to_string(),
                ratio: p.value.div_ref(k).ok().map(|r| r.to_string()),
                citation: p.citation.into(),
            });
        }
    }
    report.set(
        "checkpoint",
        json!({
            "kappa": cp.kappa.as_ref().map(|k| k.to_string()),
            "required_a": cp.required_a.as_ref().map(|a| a.to_string()),
        }),
    );
    Ok(())
}

pub fn map_inverse(report: &mut Report, c: &CartanData, img: &ChevalleyImage, cfg: &ReductionConfig) -> Result<()> {
    let alg = DrinfeldAlgebra::new(c);
    let t = Instant::now();
    let mut red = Reducer::new(&alg);
    let res = inverse_generators(img, &mut red, cfg)?;
    let per = t.elapsed() / res.formulas.len().max(1) as u32;
    let mut formulas = Vec::new();
    for f in &res.formulas {
        let variant = serde_json::to_value(f.variant).expect("serializable");
        let variant = variant.as_str().unwrap_or_default().to_string();
        let detail = f.constant.as_ref().map(|k| format!("constant {k}")).unwrap_or_default();
        report.goals.push(
            GoalRecord::new(format!("inverse/{}/{variant}", f.target), verdict_status(f.verdict), detail)
                .entries(f.certificate.entries.len())
                .took(per),
        );
        formulas.push(json!({
            "target": f.target,
            "variant": variant,
            "constant_name": f.constant_name,
            "constant": f.constant.as_ref().map(|k| k.to_string()),
            "expression": f.expression.to_string(),
        }));
    }
    report.set(
        "inverse",
        json!({
            "a": res.a.as_ref().map(|k| k.to_string()),
            "b": res.b.as_ref().map(|k| k.to_string()),
            "covers_all_nodes": res.covers_all_nodes,
            "formulas": formulas,
        }),
    );
    Ok(())
}

// reduce

pub fn reduce(report: &mut Report, ty: &str, expr: &str, cfg: &ReductionConfig) -> Result<Value> {
    let src = if Path::new(expr).is_file() {
        std::fs::read_to_string(expr).map_err(|e| Error::InvalidParams(format!("{expr}: {e}")))?
    } else {
        expr.to_string()
    };
    let ctx = ReplayContext::new(ty)?;
    let e = ctx.parse(src.trim())?;
    let mut red = Reducer::new(&ctx.alg);
    let out = red.reduce(&e, cfg)?;
    let v = json!({
        "status": out.status.name(),
        "steps": out.step_count,
        "normal_form": out.result().to_string(),
    });
    report.set("reduce", v.clone());
    Ok(v)
}

// replay

fn record_replay(report: &mut Report, r: &ReplayResult, took: std::time::Duration) {
    let detail = match &r.status {
        qaffine::replay::ReplayStatus::Certified if !r.resum_ok => "certificate does not re-sum".to_string(),
        qaffine::replay::ReplayStatus::Certified => {
            if r.reconstructed {
                "reconstructed".into()
            } else {
                String::new()
            }
        }
        qaffine::replay::ReplayStatus::Failed { step, message } => match step {
            Some(s) => format!("step {s}: {message}"),
            None => message.clone(),
        },
    };
    report.goals.push(check(format!("replay/{}", r.name), r.certified(), detail).entries(r.certificate.entries.len()).took(took));
    for d in &r.discrepancies {
        report.discrepancies.push(DiscrepancyRecord {
            source: d.derivation.clone(),
            location: d.location.clone(),
            printed: d.printed.clone(),
            computed: d.computed.clone(),
            ratio: d.ratio.clone(),
            citation: d.citation.clone(),
        });
    }
}

/// Replay `targets` after the bundled derivations they require, in corpus order.
fn replay_with_requirements(report: &mut Report, targets: &[Derivation]) -> Result<()> {
    let corpus = bundled_corpus()?;
    let mut needed: BTreeSet<String> = BTreeSet::new();
    let mut stack: Vec<String> = targets.iter().flat_map(|d| d.requires.clone()).collect();
    while let Some(n) = stack.pop() {
        if needed.insert(n.clone()) {
            let d = corpus.iter().find(|d| d.name == n).ok_or_else(|| Error::InvalidParams(format!("unknown derivation {n}")))?;
            stack.extend(d.requires.iter().cloned());
        }
    }
    let target_names: BTreeSet<&str> = targets.iter().map(|d| d.name.as_str()).collect();
    let mut rp = Replayer::new();
    for d in corpus.iter().filter(|d| needed.contains(&d.name) && !target_names.contains(d.name.as_str())) {
        let t = Instant::now();
        let r = rp.replay(d)?;
        record_replay(report, &r, t.elapsed());
    }
    for d in targets {
        let t = Instant::now();
        let r = rp.replay(d)?;
        record_replay(report, &r, t.elapsed());
    }
    Ok(())
}

pub fn replay_file(report: &mut Report, path: &Path) -> Result<()> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::InvalidParams(format!("{}: {e}", path.display())))?;
    let d = Derivation::from_json(&src)?;
    replay_with_requirements(report, &[d])
}

pub fn replay_all(report: &mut Report) -> Result<()> {
    replay_with_requirements(report, &bundled_corpus()?)
}

// suite

pub const SUITE_IDENTITY_INSTANCES: usize = 100;

pub fn suite(report: &mut Report, c: &CartanData, opts: &Opts) -> Result<()> {
    let cfg = opts.cfg();
    identities(report, SUITE_IDENTITY_INSTANCES, opts.seed)?;
    cartan(report, c)?;
    epsilon(report, c)?;
    if c.ty.is_twisted() {
        return twisted_suite(report, c, &cfg);
    }
    if let Some(img) = map_images(report, c)? {
        report.set("images", images_json(&img));
        map_goals(report, c, &img, &cfg)?;
    }
    let ty = c.ty.to_string();
    let own: Vec<Derivation> = bundled_corpus()?.into_iter().filter(|d| d.ty == ty).collect();
    replay_with_requirements(report, &own)
}

pub fn map(report: &mut Report, c: &CartanData, goals: bool, inverse: bool, cfg: &ReductionConfig) -> Result<()> {
    let Some(img) = map_images(report, c)? else { return Ok(()) };
    report.set("images", images_json(&img));
    if goals {
        map_goals(report, c, &img, cfg)?;
    }
    if inverse {
        map_inverse(report, c, &img, cfg)?;
    }
    Ok(())
}

pub fn cartan_of(opts: &Opts) -> Result<CartanData> {
    opts.cartan()
}
