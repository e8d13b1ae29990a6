//! Same-sign certification. After R1–R4 a residual is a sum of words
//! P·u⁻·v⁺·Q with P, Q in the Cartan/Heisenberg part and u⁻, v⁺ words in
//! x⁻ resp. x⁺. Each u⁻ and v⁺ is reduced modulo the span of same-sign
//! relation instances (exchange, commutation, Serre) inside a bounded mode
//! window; if the reduced residual vanishes the reductions are turned into
//! an explicit certificate.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::{CertEntry, Certificate};
use crate::drinfeld::{DrinfeldAlgebra, RelationSpec, Sign};
use crate::error::Result;
use crate::freealg::{Element, GenSym, SymClass, Word};
use crate::scalar::Scalar;

/// Column budget per graded component.
const MAX_WORDS: usize = 6000;
/// Elimination budget per graded component, in scalar updates.
const MAX_WORK: usize = 200_000;

type Vector = BTreeMap<usize, Scalar>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Grade {
    sign: Sign,
    indices: Vec<u16>,
    total: i64,
}

fn grade_of(sign: Sign, syms: &[GenSym]) -> Grade {
    let mut indices: Vec<u16> = syms.iter().map(|g| g.index).collect();
    indices.sort();
    Grade { sign, indices, total: syms.iter().map(|g| g.mode as i64).sum() }
}

/// Split a normal word into (P, x⁻ block, x⁺ block, Q).
fn split(w: &Word) -> Option<(Word, Word, Word, Word)> {
    let s = w.syms();
    let mut p = 0;
    while p < s.len() && matches!(s[p].class, SymClass::Qd | SymClass::Gamma | SymClass::K | SymClass::ANeg) {
        p += 1;
    }
    let mut m = p;
    while m < s.len() && s[m].class == SymClass::XMinus {
        m += 1;
    }
    let mut x = m;
    while x < s.len() && s[x].class == SymClass::XPlus {
        x += 1;
    }
    if s[x..].iter().any(|g| g.class != SymClass::APos) {
        return None;
    }
    Some((w.slice(0, p), w.slice(p, m), w.slice(m, x), w.slice(x, s.len())))
}

fn inversions(s: &[GenSym]) -> usize {
    let mut n = 0;
    for a in 0..s.len() {
        for b in a + 1..s.len() {
            if (s[a].mode, s[a].index) > (s[b].mode, s[b].index) {
                n += 1;
            }
        }
    }
    n
}

struct Pivot {
    vec: Vector,
    combo: Vector,
}

/// Linear algebra for one graded component.
struct Component {
    sign: Sign,
    cols: HashMap<Word, usize>,
    instances: Vec<(Word, RelationSpec, Word)>,
    pivots: HashMap<usize, Pivot>,
    work: usize,
}

fn class_of(sign: Sign) -> SymClass {
    match sign {
        Sign::Plus => SymClass::XPlus,
        Sign::Minus => SymClass::XMinus,
    }
}

fn enumerate_words(grade: &Grade, lo: i64, hi: i64) -> Option<Vec<Vec<GenSym>>> {
    let n = grade.indices.len();
    let mut orders: Vec<Vec<u16>> = Vec::new();
    let mut idx = grade.indices.clone();
    // distinct permutations in lexicographic order
    loop {
        orders.push(idx.clone());
        if orders.len() > MAX_WORDS {
            return None;
        }
        let Some(k) = (0..n.saturating_sub(1)).rev().find(|&k| idx[k] < idx[k + 1]) else { break };
        let l = (k + 1..n).rev().find(|&l| idx[k] < idx[l]).expect("exists");
        idx.swap(k, l);
        idx[k + 1..].reverse();
    }
    let mut modes: Vec<Vec<i64>> = Vec::new();
    let cap = MAX_WORDS / orders.len();
    fn fill(pos: usize, n: usize, rest: i64, (lo, hi): (i64, i64), cap: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if out.len() > cap {
            return;
        }
        if pos == n {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let left = (n - pos - 1) as i64;
        for m in lo..=hi {
            let r = rest - m;
            if r < left * lo || r > left * hi {
                continue;
            }
            cur.push(m);
            fill(pos + 1, n, r, (lo, hi), cap, cur, out);
            cur.pop();
        }
    }
    fill(0, n, grade.total, (lo, hi), cap, &mut Vec::new(), &mut modes);
    if orders.len() * modes.len() > MAX_WORDS {
        return None;
    }
    let class = class_of(grade.sign);
    let mut out = Vec::new();
    for o in &orders {
        for m in &modes {
            out.push(o.iter().zip(m).map(|(&i, &k)| GenSym::new(class, i, k as i32)).collect());
        }
    }
    Some(out)
}

/// Relation instances whose words are the sub-word `sub` (length ≥ 2) up to reordering and mode redistribution.
fn local_specs(alg: &DrinfeldAlgebra, sign: Sign, sub: &[GenSym], lo: i64, hi: i64) -> Vec<RelationSpec> {
    let total: i64 = sub.iter().map(|g| g.mode as i64).sum();
    let mut out = Vec::new();
    let inside = |m: i64| lo <= m && m <= hi;
    if sub.len() == 2 {
        let (i, j) = (sub[0].index as usize, sub[1].index as usize);
        for k in lo..hi {
            let l = total - k - 1;
            if inside(l) && inside(l + 1) {
                out.push(RelationSpec::XxSame { sign, i, j, k, l });
            }
        }
        if i != j && alg.a[i][j] == 0 {
            let (i, j, l, n) = if i < j {
                (i, j, sub[0].mode as i64, sub[1].mode as i64)
            } else {
                (j, i, sub[1].mode as i64, sub[0].mode as i64)
            };
            out.push(RelationSpec::Serre { sign, i, j, modes: vec![l], n });
        }
        return out;
    }
    // Serre: m copies of i and one j with 1 − a_ij = m
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for g in sub {
        *counts.entry(g.index as usize).or_default() += 1;
    }
    if counts.len() != 2 {
        return out;
    }
    let v: Vec<(usize, usize)> = counts.into_iter().collect();
    let (i, j, m) = if v[0].1 == 1 { (v[1].0, v[0].0, v[1].1) } else if v[1].1 == 1 { (v[0].0, v[1].0, v[0].1) } else { return out };
    if 1 - alg.a[i][j] != m as i64 {
        return out;
    }
    for n in lo..=hi {
        let mut cur = Vec::new();
        fn multisets(pos: usize, m: usize, min: i64, rest: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if pos == m {
                if rest == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for x in min..=hi {
                if x * (m - pos) as i64 > rest {
                    break;
                }
                cur.push(x);
                multisets(pos + 1, m, x, rest - x, hi, cur, out);
                cur.pop();
            }
        }
        let mut ms = Vec::new();
        multisets(0, m, lo, total - n, hi, &mut cur, &mut ms);
        for modes in ms {
            out.push(RelationSpec::Serre { sign, i, j, modes, n });
        }
    }
    out
}

fn sub_vec(a: &mut Vector, b: &Vector, c: &Scalar) {
    for (k, v) in b {
        let d = c * v;
        let e = a.entry(*k).or_insert_with(Scalar::zero);
        *e = &*e - &d;
        if e.is_zero() {
            a.remove(k);
        }
    }
}

impl Component {
    fn build(alg: &DrinfeldAlgebra, grade: &Grade, lo: i64, hi: i64) -> Result<Option<Component>> {
        let Some(mut words) = enumerate_words(grade, lo, hi) else { return Ok(None) };
        words.sort_by(|a, b| inversions(a).cmp(&inversions(b)).then_with(|| a.cmp(b)));
        let words: Vec<Word> = words.iter().map(|w| Word::new(w)).collect();
        let cols: HashMap<Word, usize> = words.iter().enumerate().map(|(k, w)| (w.clone(), k)).collect();
        let mut comp = Component { sign: grade.sign, cols, instances: Vec::new(), pivots: HashMap::new(), work: 0 };
        let mut seen_ctx: HashSet<(Word, Word, Vec<u16>, i64)> = HashSet::new();
        let mut seen: HashSet<(Word, RelationSpec, Word)> = HashSet::new();
        let mut rel_cache: HashMap<RelationSpec, Element> = HashMap::new();
        let n = grade.indices.len();
        let max_len = (2..=n).filter(|&l| l <= 5).max().unwrap_or(0);
        for w in &words {
            let s = w.syms();
            for len in 2..=max_len {
                for p in 0..=n - len {
                    let sub = &s[p..p + len];
                    let g = grade_of(grade.sign, sub);
                    let left = w.slice(0, p);
                    let right = w.slice(p + len, n);
                    if !seen_ctx.insert((left.clone(), right.clone(), g.indices, g.total)) {
                        continue;
                    }
                    for spec in local_specs(alg, grade.sign, sub, lo, hi) {
                        if !seen.insert((left.clone(), spec.clone(), right.clone())) {
                            continue;
                        }
                        let rel = match rel_cache.get(&spec) {
                            Some(r) => r.clone(),
                            None => {
                                let r = spec.build(alg)?.element;
                                rel_cache.insert(spec.clone(), r.clone());
                                r
                            }
                        };
                        let mut vec = Vector::new();
                        let mut ok = true;
                        for (u, c) in rel.terms() {
                            match comp.cols.get(&left.concat(u).concat(&right)) {
                                Some(&k) => {
                                    vec.insert(k, c.clone());
                                }
                                None => {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                        if ok && !vec.is_empty() {
                            let id = comp.instances.len();
                            comp.instances.push((left.clone(), spec, right.clone()));
                            comp.insert(vec, id);
                            if comp.work > MAX_WORK {
                                return Ok(None);
                            }
                        }
                    }
                }
            }
        }
        Ok(Some(comp))
    }

    fn insert(&mut self, mut vec: Vector, id: usize) {
        let mut combo = Vector::new();
        combo.insert(id, Scalar::one());
        loop {
            let Some((&lead, c)) = vec.iter().next_back() else { return };
            let c = c.clone();
            match self.pivots.get(&lead) {
                Some(p) => {
                    self.work += p.vec.len() + p.combo.len();
                    sub_vec(&mut vec, &p.vec, &c);
                    sub_vec(&mut combo, &p.combo, &c);
                }
                None => {
                    let inv = c.inv().expect("nonzero lead");
                    let vec = vec.iter().map(|(k, v)| (*k, v * &inv)).collect();
                    let combo = combo.iter().map(|(k, v)| (*k, v * &inv)).collect();
                    self.pivots.insert(lead, Pivot { vec, combo });
                    return;
                }
            }
        }
    }

    /// (reduced vector, combination of instances equal to input − reduced).
    fn reduce(&self, w: &Word) -> Option<(Vector, Vector)> {
        let &k = self.cols.get(w)?;
        let mut vec = Vector::new();
        vec.insert(k, Scalar::one());
        let mut acc = Vector::new();
        loop {
            let next = vec.iter().rev().find(|(k, _)| self.pivots.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            let p = &self.pivots[&k];
            sub_vec(&mut vec, &p.vec, &c);
            let neg = -&c;
            sub_vec(&mut acc, &p.combo, &neg);
        }
        Some((vec, acc))
    }
}

/// Certificate that `residual` (in R1–R4 normal form) lies in the span of
/// same-sign relation instances; `None` when the windowed search fails.
pub fn certify(alg: &DrinfeldAlgebra, residual: &Element, slack: i64) -> Result<Option<Certificate>> {
    let mut parts = Vec::new();
    let mut ranges: BTreeMap<Grade, (i64, i64)> = BTreeMap::new();
    for (w, c) in residual.terms() {
        let Some((p, um, vp, q)) = split(w) else { return Ok(None) };
        for (sign, blk) in [(Sign::Minus, &um), (Sign::Plus, &vp)] {
            if blk.is_empty() {
                continue;
            }
            let g = grade_of(sign, blk.syms());
            let (mn, mx) = blk.syms().iter().fold((i64::MAX, i64::MIN), |(a, b), s| (a.min(s.mode as i64), b.max(s.mode as i64)));
            let e = ranges.entry(g).or_insert((mn, mx));
            e.0 = e.0.min(mn);
            e.1 = e.1.max(mx);
        }
        parts.push((p, um, vp, q, c.clone()));
    }
    let mut comps: BTreeMap<Grade, Component> = BTreeMap::new();
    for (g, (mn, mx)) in &ranges {
        if g.indices.len() < 2 {
            continue;
        }
        match Component::build(alg, g, mn - slack, mx + slack)? {
            Some(c) => {
                comps.insert(g.clone(), c);
            }
            None => return Ok(None),
        }
    }
    // reduced residual and certificate
    type Red = (Vec<(Word, Scalar)>, Vec<(Word, RelationSpec, Word, Scalar)>);
    let mut memo: HashMap<(Sign, Word), Red> = HashMap::new();
    let mut red = |sign: Sign, w: &Word| -> Red {
        if let Some(r) = memo.get(&(sign, w.clone())) {
            return r.clone();
        }
        let r = if w.len() < 2 {
            (vec![(w.clone(), Scalar::one())], Vec::new())
        } else {
            let comp = &comps[&grade_of(sign, w.syms())];
            let (vec, acc) = comp.reduce(w).expect("word inside its window");
            let mut by_col: Vec<Word> = vec![Word::empty(); comp.cols.len()];
            for (u, &k) in &comp.cols {
                by_col[k] = u.clone();
            }
            let words = vec.into_iter().map(|(k, c)| (by_col[k].clone(), c)).collect();
            let insts = acc
                .into_iter()
                .map(|(id, c)| {
                    let (l, s, r) = comp.instances[id].clone();
                    debug_assert_eq!(comp.sign, sign);
                    (l, s, r, c)
                })
                .collect();
            (words, insts)
        };
        memo.insert((sign, w.clone()), r.clone());
        r
    };
    let mut reduced = Element::zero();
    let mut cert = Certificate::new();
    for (p, um, vp, q, c) in &parts {
        let (ru, iu) = red(Sign::Minus, um);
        let (rv, iv) = red(Sign::Plus, vp);
        // u − red(u) = Σ iu
        let tail = vp.concat(q);
        for (l, s, r, d) in iu {
            cert.push(CertEntry::relation(p.concat(&l), c * &d, s, r.concat(&tail)));
        }
        for (u2, cu) in &ru {
            let head = p.concat(u2);
            for (l, s, r, d) in &iv {
                cert.push(CertEntry::relation(head.concat(l), &(c * cu) * d, s.clone(), r.concat(q)));
            }
            for (v2, cv) in &rv {
                reduced.add_term(p.concat(u2).concat(v2).concat(q), &(c * cu) * cv);
            }
        }
    }
    if reduced.is_zero() {
        Ok(Some(cert))
    } else {
        Ok(None)
    }
}
