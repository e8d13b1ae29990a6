//! Cartan data for untwisted and twisted affine types.
//!
//! Nodes are numbered 0..=n with 0 the affine node. The symmetric form is
//! `(α_i|α_j) = d_i a_ij`, normalized so that long roots of untwisted types
//! have squared length 2. Twisted types are produced by folding a
//! simply-laced diagram along a diagram automorphism.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{q_frac, rat_int, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    fn from_char(c: char) -> Option<Series> {
        Some(match c.to_ascii_uppercase() {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return None,
        })
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FiniteType {
    pub series: Series,
    pub rank: usize,
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

impl FromStr for FiniteType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let series = chars
            .next()
            .and_then(Series::from_char)
            .ok_or_else(|| Error::UnsupportedType(s.to_string()))?;
        let rank = chars.as_str().parse().map_err(|_| Error::UnsupportedType(s.to_string()))?;
        FiniteType::new(series, rank)
    }
}

pub type Matrix = Vec<Vec<i64>>;

impl FiniteType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 3,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok && rank <= 16 {
            Ok(FiniteType { series, rank })
        } else {
            Err(Error::UnsupportedType(format!("{series}{rank}")))
        }
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.series, Series::A | Series::D | Series::E)
    }

    /// Symmetrizing vector: d_i = (α_i|α_i)/2, long roots 1.
    pub fn d(&self) -> Vec<Q> {
        let n = self.rank;
        let one = Q::one();
        let half = q_frac(1, 2);
        match self.series {
            Series::A | Series::D | Series::E => vec![one; n],
            Series::B => (1..=n).map(|i| if i == n { half.clone() } else { one.clone() }).collect(),
            Series::C => (1..=n).map(|i| if i == n { one.clone() } else { half.clone() }).collect(),
            Series::F => vec![one.clone(), one, half.clone(), half],
            Series::G => vec![one, q_frac(1, 3)],
        }
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        let mut e: Vec<(usize, usize)> = Vec::new();
        match self.series {
            Series::A | Series::B | Series::C | Series::F | Series::G => {
                e.extend((1..n).map(|i| (i, i + 1)));
            }
            Series::D => {
                e.extend((1..n.saturating_sub(1)).map(|i| (i, i + 1)));
                e.push((n - 2, n));
                if n == 3 {
                    // D3: node 1 joined to both 2 and 3
                    e = vec![(1, 2), (1, 3)];
                }
            }
            Series::E => {
                // chain 1..n-1, node n attached to the branch point
                e.extend((1..n - 1).map(|i| (i, i + 1)));
                let branch = if n == 8 { 5 } else { 3 };
                e.push((branch, n));
            }
        }
        e
    }

    /// Finite Cartan matrix, indexed 0..rank (row k is node k+1).
    pub fn cartan(&self) -> Matrix {
        let n = self.rank;
        let d = self.d();
        let gram = self.gram_from(&d);
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = to_int(&(&gram[i][j] / &d[i])).expect("integral Cartan entry");
            }
        }
        a
    }

    fn gram_from(&self, d: &[Q]) -> Vec<Vec<Q>> {
        let n = self.rank;
        let mut g = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            g[i][i] = &d[i] * rat_int(2);
        }
        for (i, j) in self.edges() {
            // equal lengths: -d; a long/short bond: -max(d) (= -1 in every series)
            let (di, dj) = (&d[i - 1], &d[j - 1]);
            let v = if di == dj { -di.clone() } else { -di.clone().max(dj.clone()) };
            g[i - 1][j - 1] = v.clone();
            g[j - 1][i - 1] = v;
        }
        g
    }

    pub fn form(&self) -> RootForm {
        RootForm { gram: self.gram_from(&self.d()), d: self.d() }
    }

    /// Standard Coxeter number.
    pub fn coxeter_number(&self) -> i64 {
        let n = self.rank as i64;
        match self.series {
            Series::A => n + 1,
            Series::B | Series::C => 2 * n,
            Series::D => 2 * n - 2,
            Series::E => match n {
                6 => 12,
                7 => 18,
                _ => 30,
            },
            Series::F => 12,
            Series::G => 6,
        }
    }
}

pub(crate) fn to_int(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Symmetric bilinear form on the span of simple roots of a finite system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootForm {
    pub gram: Vec<Vec<Q>>,
    pub d: Vec<Q>,
}

impl RootForm {
    pub fn rank(&self) -> usize {
        self.d.len()
    }

    pub fn pair(&self, u: &[i64], v: &[i64]) -> Q {
        let mut acc = Q::zero();
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                if vj != 0 {
                    acc += &self.gram[i][j] * rat_int(ui * vj);
                }
            }
        }
        acc
    }

    fn reflect(&self, beta: &[i64], i: usize) -> Vec<i64> {
        let mut e = vec![0; beta.len()];
        e[i] = 1;
        let c = to_int(&(self.pair(beta, &e) / &self.d[i])).expect("integral coroot pairing");
        let mut out = beta.to_vec();
        out[i] -= c;
        out
    }

    /// All roots, by closing the simple roots under simple reflections.
    pub fn roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            if seen.insert(e.clone()) {
                queue.push_back(e);
            }
        }
        while let Some(b) = queue.pop_front() {
            for i in 0..n {
                let r = self.reflect(&b, i);
                if seen.insert(r.clone()) {
                    queue.push_back(r);
                }
            }
        }
        let mut out: Vec<Vec<i64>> = seen.into_iter().collect();
        out.sort();
        out
    }

    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        self.roots().into_iter().filter(|r| r.iter().all(|&c| c >= 0)).collect()
    }

    fn maximal(roots: &[Vec<i64>]) -> Result<Vec<i64>> {
        let maxes: Vec<&Vec<i64>> = roots
            .iter()
            .filter(|r| !roots.iter().any(|s| s != *r && s.iter().zip(r.iter()).all(|(a, b)| a >= b)))
            .collect();
        match maxes.as_slice() {
            [m] => Ok((*m).clone()),
            _ => Err(Error::Domain("no unique maximal root".into())),
        }
    }

    pub fn highest_root(&self) -> Vec<i64> {
        RootForm::maximal(&self.positive_roots()).expect("finite irreducible system has a highest root")
    }

    pub fn highest_short_root(&self) -> Vec<i64> {
        let pos = self.positive_roots();
        let min_len = pos.iter().map(|r| self.pair(r, r)).min().expect("nonempty");
        let short: Vec<Vec<i64>> = pos.into_iter().filter(|r| self.pair(r, r) == min_len).collect();
        RootForm::maximal(&short).expect("unique highest short root")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AffineType {
    pub series: Series,
    /// The rank printed in the type name (e.g. 3 in A3^2), not the twisted rank.
    pub n: usize,
    pub r: u8,
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}^{}", self.series, self.n, self.r)
    }
}

impl FromStr for AffineType {
    type Err = Error;
    /// Grammar: LETTER RANK "^" TWIST, e.g. "A3^1", "D4^3".
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnsupportedType(s.to_string());
        let (head, twist) = s.trim().split_once('^').ok_or_else(bad)?;
        let twist = twist.trim_start_matches('(').trim_end_matches(')');
        let r: u8 = twist.parse().map_err(|_| bad())?;
        let fin: FiniteType = head.parse()?;
        AffineType::new(fin.series, fin.rank, r)
    }
}

impl AffineType {
    pub fn new(series: Series, n: usize, r: u8) -> Result<Self> {
        let ty = AffineType { series, n, r };
        let ok = match r {
            1 => FiniteType::new(series, n).is_ok() && !(series == Series::D && n < 4),
            2 => match series {
                Series::A => n >= 2,
                Series::D => n >= 3,
                Series::E => n == 6,
                _ => false,
            },
            3 => series == Series::D && n == 4,
            _ => false,
        };
        if ok && n <= 16 {
            Ok(ty)
        } else {
            Err(Error::UnsupportedType(ty.to_string()))
        }
    }

    pub fn untwisted(series: Series, n: usize) -> Result<Self> {
        AffineType::new(series, n, 1)
    }

    /// Number of finite nodes of the (folded) diagram.
    pub fn rank(&self) -> usize {
        match (self.r, self.series) {
            (1, _) => self.n,
            (2, Series::A) => (self.n + 1) / 2,
            (2, Series::D) => self.n - 1,
            (2, Series::E) => 4,
            _ => 2,
        }
    }

    pub fn is_twisted(&self) -> bool {
        self.r > 1
    }
}

/// Diagram automorphism of the finite simply-laced type, as a permutation
/// of 1..=N (entry 0 unused).
pub fn diagram_automorphism(base: FiniteType, r: u8) -> Result<Vec<usize>> {
    let n = base.rank;
    let mut sigma: Vec<usize> = (0..=n).collect();
    match (base.series, r) {
        (Series::A, 2) if n >= 2 => {
            for i in 1..=n {
                sigma[i] = n + 1 - i;
            }
        }
        (Series::D, 2) if n >= 3 => {
            sigma[n - 1] = n;
            sigma[n] = n - 1;
            if n == 3 {
                sigma = vec![0, 1, 3, 2];
            }
        }
        (Series::E, 2) if n == 6 => {
            for i in 1..=5 {
                sigma[i] = 6 - i;
            }
        }
        (Series::D, 3) if n == 4 => {
            sigma = vec![0, 3, 2, 4, 1];
        }
        _ => return Err(Error::UnsupportedType(format!("no order-{r} automorphism of {base}"))),
    }
    Ok(sigma)
}

/// Apply σ^s to node i.
pub fn sigma_pow(sigma: &[usize], i: usize, s: usize) -> usize {
    (0..s).fold(i, |x, _| sigma[x])
}

/// Folding data for a twisted type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Folding {
    pub base: FiniteType,
    /// Simply-laced finite Cartan matrix of the base, indexed 1..=N (row/col 0 unused).
    pub base_cartan: Matrix,
    pub sigma: Vec<usize>,
    pub r: u8,
    /// reps[i] is the base node representing twisted node i (reps[0] = 0).
    pub reps: Vec<usize>,
    /// orbit_of[j] is the twisted node whose orbit contains base node j.
    pub orbit_of: Vec<usize>,
}

impl Folding {
    pub fn orbit(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.r as usize).map(|s| sigma_pow(&self.sigma, self.reps[i], s)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        let rep = self.reps[i];
        self.sigma[rep] == rep
    }

    /// a'_{ij} of the simply-laced base (nodes 1..=N).
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.base_cartan[i][j]
    }

    /// (α'_i|α'_j) in the normalization (α'_i|α'_i) = 2r.
    pub fn primed_form(&self, i: usize, j: usize) -> i64 {
        self.r as i64 * self.base_cartan[i][j]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    pub ty: AffineType,
    /// Affine Cartan matrix, (n+1)×(n+1), node 0 affine.
    pub a: Matrix,
    /// d_0..d_n.
    pub d: Vec<Q>,
    /// θ over finite nodes (entry k is the coefficient of α_{k+1}).
    pub theta: Vec<i64>,
    /// δ = α_0 + θ over all nodes.
    pub delta: Vec<i64>,
    /// Form restricted to finite nodes.
    pub finite: RootForm,
    /// Finite type of the (folded) finite diagram.
    pub finite_type: FiniteType,
    pub folding: Option<Folding>,
}

impl CartanData {
    pub fn rank(&self) -> usize {
        self.a.len() - 1
    }

    pub fn nodes(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.rank()
    }

    pub fn r(&self) -> u8 {
        self.ty.r
    }

    /// (α_i|α_j) = d_i a_ij.
    pub fn bilinear(&self, i: usize, j: usize) -> Q {
        &self.d[i] * rat_int(self.a[i][j])
    }

    /// Pairing of coefficient vectors over all nodes 0..=n.
    pub fn pair(&self, u: &[i64], v: &[i64]) -> Q {
        let mut acc = Q::zero();
        for (i, &ui) in u.iter().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                if ui != 0 && vj != 0 {
                    acc += self.bilinear(i, j) * rat_int(ui * vj);
                }
            }
        }
        acc
    }

    /// (θ|α_j) for a finite node j.
    pub fn theta_pair(&self, j: usize) -> Q {
        let mut e = vec![0; self.rank()];
        e[j - 1] = 1;
        self.finite.pair(&self.theta, &e)
    }

    /// 1 + ht(θ): the length of an ε-sequence plus one. Equals the Coxeter
    /// number for untwisted types.
    pub fn h(&self) -> usize {
        1 + self.theta.iter().sum::<i64>() as usize
    }

    pub fn coxeter_number(&self) -> i64 {
        self.finite_type.coxeter_number()
    }

    pub fn check_invariants(&self) -> Result<()> {
        let n = self.rank();
        let fail = |m: String| Err(Error::Domain(format!("{}: {m}", self.ty)));
        for i in 0..=n {
            if self.a[i][i] != 2 {
                return fail(format!("a_{i}{i} != 2"));
            }
            for j in 0..=n {
                if i != j && (self.a[i][j] > 0 || (self.a[i][j] == 0) != (self.a[j][i] == 0)) {
                    return fail(format!("bad off-diagonal a_{i}{j}"));
                }
                if self.bilinear(i, j) != self.bilinear(j, i) {
                    return fail(format!("not symmetrized at ({i},{j})"));
                }
            }
            if !self.pair(&self.delta, &unit(n + 1, i)).is_zero() {
                return fail(format!("(δ|α_{i}) != 0"));
            }
        }
        if let Some(f) = &self.folding {
            let nn = f.base.rank;
            if (1..=nn).any(|i| sigma_pow(&f.sigma, i, f.r as usize) != i) {
                return fail("σ^r != id".into());
            }
            for i in 1..=nn {
                for j in 1..=nn {
                    if f.a(f.sigma[i], f.sigma[j]) != f.a(i, j) {
                        return fail("σ does not preserve the base Cartan matrix".into());
                    }
                }
            }
            let orbits: BTreeSet<usize> = f.orbit_of[1..].iter().copied().collect();
            if orbits.len() != n {
                return fail("orbit count differs from twisted rank".into());
            }
        }
        Ok(())
    }
}

fn unit(len: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; len];
    e[i] = 1;
    e
}

/// Build the affine Cartan data of a type.
pub fn affine_cartan(ty: AffineType) -> Result<CartanData> {
    if ty.r == 1 {
        untwisted(ty)
    } else {
        twisted(ty)
    }
}

fn untwisted(ty: AffineType) -> Result<CartanData> {
    let fin = FiniteType::new(ty.series, ty.n)?;
    let form = fin.form();
    let theta = form.highest_root();
    let d0 = form.pair(&theta, &theta) / rat_int(2);
    Ok(attach_affine_node(ty, form, theta, d0, fin, None))
}

fn attach_affine_node(
    ty: AffineType,
    form: RootForm,
    theta: Vec<i64>,
    d0: Q,
    finite_type: FiniteType,
    folding: Option<Folding>,
) -> CartanData {
    let n = form.rank();
    let mut a = vec![vec![0i64; n + 1]; n + 1];
    let mut d = vec![d0.clone()];
    d.extend(form.d.iter().cloned());
    a[0][0] = 2;
    for j in 1..=n {
        let tj = form.pair(&theta, &unit(n, j - 1));
        a[0][j] = to_int(&(-&tj / &d0)).expect("integral a_0j");
        a[j][0] = to_int(&(-&tj / &d[j])).expect("integral a_j0");
        for i in 1..=n {
            a[i][j] = to_int(&(&form.gram[i - 1][j - 1] / &d[i])).expect("integral a_ij");
        }
    }
    let mut delta = vec![1];
    delta.extend(theta.iter().copied());
    CartanData { ty, a, d, theta, delta, finite: form, finite_type, folding }
}

fn twisted(ty: AffineType) -> Result<CartanData> {
    let n = ty.rank();
    let (base, reps, label): (FiniteType, Vec<usize>, FiniteType) = match (ty.series, ty.r) {
        (Series::A, 2) if ty.n % 2 == 1 => {
            (FiniteType::new(Series::A, ty.n)?, (0..=n).collect(), FiniteType::new(Series::C, n.max(2))?)
        }
        (Series::A, 2) => {
            let label = if n == 1 { FiniteType::new(Series::A, 1)? } else { FiniteType::new(Series::B, n)? };
            (FiniteType::new(Series::A, ty.n)?, (0..=n).collect(), label)
        }
        (Series::D, 2) => (FiniteType::new(Series::D, ty.n)?, (0..=n).collect(), FiniteType::new(Series::B, n)?),
        (Series::E, 2) => (FiniteType::new(Series::E, 6)?, vec![0, 1, 2, 3, 6], FiniteType::new(Series::F, 4)?),
        (Series::D, 3) => (FiniteType::new(Series::D, 4)?, vec![0, 1, 2], FiniteType::new(Series::G, 2)?),
        _ => return Err(Error::UnsupportedType(ty.to_string())),
    };
    let r = ty.r;
    let sigma = diagram_automorphism(base, r)?;
    let nn = base.rank;
    let fin = base.cartan();
    let mut base_cartan = vec![vec![0i64; nn + 1]; nn + 1];
    for i in 1..=nn {
        for j in 1..=nn {
            base_cartan[i][j] = fin[i - 1][j - 1];
        }
    }
    let mut orbit_of = vec![0usize; nn + 1];
    for (t, &rep) in reps.iter().enumerate().skip(1) {
        for s in 0..r as usize {
            orbit_of[sigma_pow(&sigma, rep, s)] = t;
        }
    }
    if orbit_of[1..].iter().any(|&t| t == 0) {
        return Err(Error::Domain(format!("{ty}: representatives do not cover every orbit")));
    }
    // B_ij = Σ_s a'_{σ^s(i), j} over representatives
    let mut gram = vec![vec![Q::zero(); n]; n];
    for i in 1..=n {
        for j in 1..=n {
            let b: i64 = (0..r as usize).map(|s| base_cartan[sigma_pow(&sigma, reps[i], s)][reps[j]]).sum();
            gram[i - 1][j - 1] = rat_int(b);
        }
    }
    let d: Vec<Q> = (0..n).map(|i| &gram[i][i] / rat_int(2)).collect();
    let form = RootForm { gram, d };
    let mut theta = form.highest_short_root();
    if ty.series == Series::A && ty.n % 2 == 0 {
        for c in theta.iter_mut() {
            *c *= 2;
        }
    }
    let d0 = form.pair(&theta, &theta) / rat_int(2);
    let folding = Folding { base, base_cartan, sigma, r, reps, orbit_of };
    Ok(attach_affine_node(ty, form, theta, d0, label, Some(folding)))
}

/// Highest root of a finite type.
pub fn highest_root(ft: FiniteType) -> Vec<i64> {
    ft.form().highest_root()
}

/// Every type this crate knows how to build, up to the given rank.
pub fn supported_types(max_rank: usize) -> Vec<AffineType> {
    let mut out = Vec::new();
    for n in 1..=max_rank {
        for (s, r) in [(Series::A, 1), (Series::B, 1), (Series::C, 1), (Series::D, 1), (Series::A, 2), (Series::D, 2)] {
            if let Ok(t) = AffineType::new(s, n, r) {
                out.push(t);
            }
        }
    }
    for (s, n, r) in [(Series::E, 6, 1), (Series::E, 7, 1), (Series::E, 8, 1), (Series::F, 4, 1), (Series::G, 2, 1), (Series::E, 6, 2), (Series::D, 4, 3)] {
        out.push(AffineType { series: s, n, r });
    }
    out
}
