//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process fails when a criterion's outcome differs from its recorded
//! expectation; criterion 7 is expected to fail (parts c and d).

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use qaffine::cartan::{affine_cartan, supported_types, AffineType, CartanData, Series};
use qaffine::drinfeld::twisted::{TwistedAlgebra, TwistedSpec};
use qaffine::drinfeld::{a, k_pow, DrinfeldAlgebra, Sign};
use qaffine::epsseq::{builtin_sequence, epsilon_closed_form, theta_of, validate_sequence};
use qaffine::freealg::identities::run_identity_suite;
use qaffine::freealg::{Element, Word};
use qaffine::isomap::{bracket_checkpoint, chevalley_images, goal_relations, inverse_generators, printed_kappa, Variant};
use qaffine::reduce::fold::check_twisted;
use qaffine::reduce::{Reducer, ReductionConfig, Verdict};
use qaffine::replay::{replay_all, ReplayContext, ReplayResult};
use qaffine::scalar::{rat_int, Scalar};
use serde_json::{json, Value};

struct Outcome {
    pass: bool,
    detail: String,
    data: Value,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into(), data: Value::Null }
}

fn cartan(t: &str) -> CartanData {
    affine_cartan(t.parse::<AffineType>().unwrap()).unwrap()
}

// 1

fn identities() -> Outcome {
    let runs = run_identity_suite(100, 20241017).unwrap();
    let want = ["jacobi-right", "jacobi-left", "product-left", "product-right", "swap-sym", "antimorphism-law"];
    let mut bad = Vec::new();
    for w in want {
        match runs.iter().find(|r| r.identity == w) {
            Some(r) if r.instances == 100 && r.failures == 0 => {}
            Some(r) => bad.push(format!("{w}: {}/{} failed", r.failures, r.instances)),
            None => bad.push(format!("{w}: missing")),
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "6 identities x 100 instances".into() } else { bad.join("; ") })
}

// 2

fn tables() -> Outcome {
    let types = [
        "A1^1", "A2^1", "A3^1", "A4^1", "A5^1", "A6^1", "C2^1", "C3^1", "C4^1", "D4^1", "D5^1", "E6^1", "E7^1", "E8^1", "F4^1",
        "G2^1", "A3^2", "A4^2", "D3^2", "D4^3", "E6^2",
    ];
    let mut bad = Vec::new();
    let mut e8 = String::new();
    for t in types {
        let c = cartan(t);
        let b = match builtin_sequence(&c) {
            Ok(b) => b,
            Err(e) => {
                bad.push(format!("{t}: {e}"));
                continue;
            }
        };
        let s = &b.sequence;
        if validate_sequence(&s.seq, Some(&s.labels), &c).is_err() {
            bad.push(format!("{t}: labels do not validate"));
        }
        if theta_of(&s.seq, c.rank()) != c.theta || s.len() + 1 != c.h() {
            bad.push(format!("{t}: sequence does not sum to theta"));
        }
        if s.epsilon != epsilon_closed_form(&c) {
            bad.push(format!("{t}: epsilon differs from the closed form"));
        }
        if b.printed.epsilon != s.epsilon && !b.discrepancies.iter().any(|d| d.printed == b.printed.epsilon.to_string()) {
            bad.push(format!("{t}: printed epsilon differs without a record"));
        }
        if b.discrepancies.iter().any(|d| d.citation.is_empty()) {
            bad.push(format!("{t}: discrepancy without citation"));
        }
        if t == "E8^1" {
            let ok = s.epsilon == rat_int(-28)
                && b.discrepancies.len() == 1
                && b.discrepancies[0].computed == "-28"
                && b.discrepancies[0].printed == "-16";
            if !ok {
                bad.push("E8^1: expected computed -28 with one discrepancy".into());
            }
            e8 = format!("E8 epsilon {} (printed {})", s.epsilon, b.printed.epsilon);
        }
    }
    let n = types.len();
    outcome(bad.is_empty(), if bad.is_empty() { format!("{n} types; {e8}") } else { bad.join("; ") })
}

// 3

/// Brute force: the unique positive root that no simple root can be added to.
fn maximal(roots: &[Vec<i64>]) -> Option<Vec<i64>> {
    let set: BTreeSet<&Vec<i64>> = roots.iter().collect();
    let top: Vec<&Vec<i64>> = roots
        .iter()
        .filter(|r| {
            (0..r.len()).all(|i| {
                let mut s = (*r).clone();
                s[i] += 1;
                !set.contains(&s)
            })
        })
        .collect();
    (top.len() == 1).then(|| top[0].clone())
}

fn theta() -> Outcome {
    let mut bad = Vec::new();
    let types = supported_types(8);
    for ty in &types {
        let c = affine_cartan(*ty).unwrap();
        let f = &c.finite;
        let pos = f.positive_roots();
        let want = if ty.is_twisted() {
            let min = pos.iter().map(|r| f.pair(r, r)).min().unwrap();
            let short: Vec<Vec<i64>> = pos.iter().filter(|r| f.pair(r, r) == min).cloned().collect();
            let th = maximal(&short);
            if ty.series == Series::A && ty.n % 2 == 0 {
                th.map(|v| v.iter().map(|x| 2 * x).collect())
            } else {
                th
            }
        } else {
            maximal(&pos)
        };
        if want.as_ref() != Some(&c.theta) {
            bad.push(format!("{ty}: theta {:?}, brute force {:?}", c.theta, want));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{} types", types.len()) } else { bad.join("; ") })
}

// 4

fn by_name<'a>(rs: &'a [ReplayResult], n: &str) -> &'a ReplayResult {
    rs.iter().find(|r| r.name == n).unwrap()
}

fn chains(replays: &[ReplayResult]) -> Outcome {
    let cfg = ReductionConfig::default();
    let mut bad = Vec::new();
    let mut notes = Vec::new();
    for (t, n) in [("A2^1", 2usize), ("A3^1", 3)] {
        let c = cartan(t);
        let img = chevalley_images(&builtin_sequence(&c).unwrap().sequence, &c).unwrap();
        let alg = DrinfeldAlgebra::new(&c);
        let mut red = Reducer::new(&alg);
        let goals = goal_relations(&img).unwrap();
        let mut wanted: Vec<String> = (1..=n).map(|i| format!("[E0,F{i}]")).collect();
        for s in ["+", "-"] {
            wanted.push(format!("serre{s}(0,1)"));
            wanted.push(format!("serre{s}(1,0)"));
        }
        wanted.push("[E0,F0]-(t0-t0^-1)/(q0-q0^-1)".into());
        for w in &wanted {
            let g = goals.iter().find(|g| &g.name == w).unwrap();
            let z = red.certify_zero(&g.element, &cfg).unwrap();
            if z.verdict != Verdict::Zero || !z.certificate.check(&alg, &g.element).unwrap() {
                bad.push(format!("{t} {w}: {:?}", z.verdict));
            }
        }
        // checkpoint: computed κ against the printed (−q)^{−n}
        let cp = bracket_checkpoint(&img, &mut red, &cfg).unwrap();
        let printed = printed_kappa(&c).unwrap().unwrap();
        match &cp.kappa {
            Some(k) if cp.verdict == Verdict::Zero => {
                let ratio = printed.value.div_ref(k).unwrap();
                if ratio != -&Scalar::q(-1) {
                    bad.push(format!("{t} checkpoint ratio {ratio}"));
                }
                notes.push(format!("{t} kappa {k} vs printed {} (ratio {ratio})", printed.text));
            }
            _ => bad.push(format!("{t} checkpoint not certified")),
        }
        let name = format!("an_e0f0_n{n}");
        let r = by_name(replays, &name);
        if !r.certified() || !r.discrepancies.iter().any(|d| d.location == "end" && d.ratio.as_deref() == Some("-q^-1")) {
            bad.push(format!("{name}: endpoint mismatch not reported"));
        }
        for d in [format!("an_serre_e0_f_n{n}"), format!("an_e1e0e0_n{n}")] {
            if !by_name(replays, &d).certified() {
                bad.push(format!("{d} not certified"));
            }
        }
    }
    // C2 endpoint against q^{-1}[2]_1
    let c2 = by_name(replays, "c2_e0f0");
    match c2.discrepancies.iter().find(|d| d.location == "end") {
        Some(d) if c2.certified() => notes.push(format!("C2 endpoint printed/computed = {}", d.ratio.as_deref().unwrap_or("none"))),
        _ => bad.push("c2_e0f0: endpoint comparison missing".into()),
    }
    let c = cartan("C2^1");
    let img = chevalley_images(&builtin_sequence(&c).unwrap().sequence, &c).unwrap();
    let alg = DrinfeldAlgebra::new(&c);
    let cp = bracket_checkpoint(&img, &mut Reducer::new(&alg), &cfg).unwrap();
    let printed = printed_kappa(&c).unwrap().unwrap();
    if cp.kappa.as_ref() == Some(&printed.value) || cp.kappa.is_none() {
        bad.push("C2 kappa should differ from the printed q^-1[2]_1".into());
    }
    outcome(bad.is_empty(), if bad.is_empty() { notes.join("; ") } else { bad.join("; ") })
}

// 5

fn corpus(replays: &[ReplayResult]) -> Outcome {
    let mut bad = Vec::new();
    let mut algs: HashMap<String, ReplayContext> = HashMap::new();
    for r in replays {
        let ctx = algs.entry(r.ty.clone()).or_insert_with(|| ReplayContext::new(&r.ty).unwrap());
        // cited statements are the start − end of earlier derivations, or map goals as `type:name`
        let lookup = |name: &str| -> Option<Element> {
            if let Some(p) = replays.iter().find(|p| p.name == name) {
                return Some(&p.start - &p.end);
            }
            let (ty, goal) = name.split_once(':')?;
            let ctx = ReplayContext::new(ty).ok()?;
            goal_relations(&ctx.img).ok()?.into_iter().find(|g| g.name == goal).map(|g| g.element)
        };
        let resums = r.certificate.resum(&ctx.alg, &lookup).map(|e| e == &r.start - &r.end).unwrap_or(false);
        if !r.certified() || !resums {
            bad.push(format!("{}: certified {} resums {resums}", r.name, r.certified()));
        }
    }
    let n = replays.len();
    outcome(bad.is_empty() && n > 0, if bad.is_empty() { format!("{n} derivations") } else { bad.join("; ") })
}

// 6

/// exp(c Σ_{k≥1} a_i(s k) z^k), degree m, by truncated series multiplication.
fn exp_oracle(i: usize, m: usize, c: &Scalar, s: i64) -> Element {
    let mut x = vec![Element::zero(); m + 1];
    for (k, xk) in x.iter_mut().enumerate().skip(1) {
        *xk = a(i, s * k as i64).scale(c);
    }
    let mut total = vec![Element::zero(); m + 1];
    total[0] = Element::one();
    let mut power = total.clone();
    let mut fact = Scalar::one();
    for n in 1..=m {
        let mut next = vec![Element::zero(); m + 1];
        for (d1, e1) in power.iter().enumerate() {
            for (d2, e2) in x.iter().enumerate() {
                if d1 + d2 <= m {
                    next[d1 + d2].add_assign(&e1.mul_ref(e2));
                }
            }
        }
        power = next;
        fact = &fact * &Scalar::from_i64(n as i64);
        let inv = fact.inv().unwrap();
        for d in 0..=m {
            total[d].add_scaled(&power[d], &inv);
        }
    }
    // the a_i commute; compare with words in sorted order
    let mut sorted = Element::zero();
    for (w, c) in total[m].terms() {
        let mut syms = w.syms().to_vec();
        syms.sort();
        sorted.add_term(Word::new(&syms), c.clone());
    }
    sorted
}

fn psi_modes() -> Outcome {
    let mut bad = Vec::new();
    let types = ["A1^1", "A2^1", "C2^1", "D4^1", "G2^1"];
    for t in types {
        let g = DrinfeldAlgebra::new(&cartan(t));
        for i in 1..=g.n {
            let c = g.q_i_diff(i);
            for m in 0..=4i64 {
                if g.psi(i, m) != k_pow(i, 1).mul_ref(&exp_oracle(i, m as usize, &c, 1)) {
                    bad.push(format!("{t} psi_{i}({m})"));
                }
                if g.phi(i, -m) != k_pow(i, -1).mul_ref(&exp_oracle(i, m as usize, &-&c, -1)) {
                    bad.push(format!("{t} phi_{i}({})", -m));
                }
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{} types, m = 0..4", types.len()) } else { bad.join("; ") })
}

// 7

#[derive(Default)]
struct Tally {
    zero: usize,
    nonzero: usize,
    inconclusive: usize,
    ratios: BTreeSet<String>,
}

impl Tally {
    fn all_zero(&self) -> bool {
        self.nonzero == 0 && self.inconclusive == 0
    }

    fn show(&self) -> String {
        let mut s = format!("{}/{} certified", self.zero, self.zero + self.nonzero + self.inconclusive);
        if !self.ratios.is_empty() {
            s += &format!(", ratios {:?}", self.ratios);
        }
        s
    }
}

fn run(t: &TwistedAlgebra, red: &mut Reducer<'_>, specs: &[TwistedSpec]) -> Tally {
    let cfg = ReductionConfig::default();
    let mut tally = Tally::default();
    for s in specs {
        let r = check_twisted(t, red, s, &cfg).unwrap();
        match r.verdict {
            Verdict::Zero => tally.zero += 1,
            Verdict::NonZero => tally.nonzero += 1,
            Verdict::Inconclusive => tally.inconclusive += 1,
        }
        if let Some(x) = r.ratio {
            tally.ratios.insert(x.to_string());
        }
    }
    tally
}

fn twisted() -> Outcome {
    let mut parts = Vec::new();
    let mut ab_ok = true;
    let mut cd_ok = true;
    let mut data = serde_json::Map::new();
    for ty in ["A3^2", "D4^3"] {
        let t = TwistedAlgebra::new(&cartan(ty)).unwrap();
        let mut red = Reducer::new(&t.base);
        let n = t.big_n;
        let nodes = 1..=n;
        let signs = [Sign::Plus, Sign::Minus];

        let mut sigma = Vec::new();
        for i in nodes.clone() {
            for k in -4..=4 {
                for sign in signs {
                    sigma.push(TwistedSpec::SigmaX { sign, i, k });
                }
                if k != 0 {
                    sigma.push(TwistedSpec::SigmaA { i, l: k });
                }
            }
        }
        let mut aa = Vec::new();
        let mut ax = Vec::new();
        let mut prod = Vec::new();
        for i in nodes.clone() {
            for j in nodes.clone() {
                for k in 1..=3 {
                    aa.push(TwistedSpec::AA { i, k, j, l: -k });
                }
                for k in [-2, -1, 1, 2] {
                    for l in -2..=2 {
                        for sign in signs {
                            ax.push(TwistedSpec::AX { i, k, sign, j, l });
                        }
                    }
                }
                for sign in signs {
                    prod.extend(TwistedSpec::XxProduct { sign, i, j, a: 0, b: 0 }.window(3).unwrap());
                }
            }
        }
        let (a, b, c, d) = (run(&t, &mut red, &sigma), run(&t, &mut red, &aa), run(&t, &mut red, &ax), run(&t, &mut red, &prod));
        ab_ok &= a.all_zero() && b.all_zero();
        cd_ok &= c.all_zero() && d.all_zero();
        parts.push(format!("{ty}: (a) {} (b) {} (c) {} (d) {}", a.show(), b.show(), c.show(), d.show()));
        data.insert(
            ty.into(),
            json!({"sigma": a.show(), "aa": b.show(), "ax": c.show(), "product": d.show(),
                   "ax_ratios": c.ratios.iter().collect::<Vec<_>>()}),
        );
    }
    let mut o = outcome(ab_ok && cd_ok, parts.join("; "));
    o.data = json!({"ab_pass": ab_ok, "cd_pass": cd_ok, "types": data});
    o
}

// 8

fn step2() -> Outcome {
    let c = cartan("A2^1");
    let img = chevalley_images(&builtin_sequence(&c).unwrap().sequence, &c).unwrap();
    let alg = DrinfeldAlgebra::new(&c);
    let mut red = Reducer::new(&alg);
    let cfg = ReductionConfig::default();
    let r = inverse_generators(&img, &mut red, &cfg).unwrap();
    let i1 = img.seq.seq[0];
    let mut bad = Vec::new();
    let el = |s: &str| qaffine::freealg::parse_element(s).unwrap();
    for target in [format!("a{i1}(1)"), format!("a{i1}(-1)")] {
        // exact formulas certify target − expression
        match r.formulas.iter().find(|f| f.target == target) {
            Some(f) if f.verdict == Verdict::Zero && f.certificate.check(&alg, &(&el(&target) - &f.expression)).unwrap() => {}
            _ => bad.push(format!("{target} not certified")),
        }
    }
    for f in r.formulas.iter().filter(|f| f.variant == Variant::Corrected) {
        // solved formulas certify expression − target / constant
        let ok = f.verdict == Verdict::Zero
            && f.constant.as_ref().is_some_and(|c| {
                let d = &f.expression - &el(&f.target).scale(&c.inv().unwrap());
                f.certificate.check(&alg, &d).unwrap()
            });
        if !ok {
            bad.push(format!("{} ({}) not certified", f.target, f.constant_name));
        }
    }
    let (Some(av), Some(bv)) = (&r.a, &r.b) else {
        return outcome(false, "a or b unresolved");
    };
    let mut o = outcome(bad.is_empty(), if bad.is_empty() { format!("a = {av}, b = {bv}") } else { bad.join("; ") });
    o.data = json!({"a": av.to_string(), "b": bv.to_string()});
    o
}

fn main() {
    let mut rows: Vec<(usize, &str, Duration, Outcome, bool, Duration)> = Vec::new();
    let mut time = |n: usize, name: &'static str, limit: u64, expect: bool, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        rows.push((n, name, t.elapsed(), o, expect, Duration::from_secs(limit)));
    };
    time(1, "identities", 10, true, &mut identities);
    time(2, "table fidelity", 5, true, &mut tables);
    time(3, "theta", 5, true, &mut theta);
    let mut replays = Vec::new();
    time(4, "A2/A3 chains via replay and reduce", 60, true, &mut || {
        replays = replay_all().unwrap();
        chains(&replays)
    });
    let replays = if replays.is_empty() { replay_all().unwrap() } else { replays };
    time(5, "replay corpus", 60, true, &mut || corpus(&replays));
    time(6, "psi modes", 10, true, &mut psi_modes);
    time(7, "twisted A3^2 and D4^3", 120, false, &mut twisted);
    time(8, "A2 step 2", 30, true, &mut step2);

    let mut unexpected = 0;
    let mut report = Vec::new();
    for (n, name, took, o, expect, limit) in &rows {
        let pass = o.pass && took <= limit;
        let tag = if pass { "PASS" } else { "FAIL" };
        let note = if pass != *expect { "  [UNEXPECTED]" } else if !pass { "  [known, see README]" } else { "" };
        println!("criterion {n} ({name}): {tag}  {:.2}s/{}s  {}{note}", took.as_secs_f64(), limit.as_secs(), o.detail);
        if pass != *expect {
            unexpected += 1;
        }
        report.push(json!({"criterion": n, "name": name, "pass": pass, "seconds": took.as_secs_f64(),
                           "limit_seconds": limit.as_secs(), "detail": o.detail, "data": o.data}));
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance.json");
    std::fs::write(&path, serde_json::to_string_pretty(&report).unwrap()).unwrap();
    println!("report: {}", path.display());
    if unexpected > 0 {
        eprintln!("{unexpected} criteria differ from their expected outcome");
        std::process::exit(1);
    }
}
