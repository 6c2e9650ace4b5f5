//! Machine checks of algebraic claims about computed generator tables:
//! defining and parabolic relations, truncation, `m`-invariance, transfer
//! identities between path sums, agreement of the two construction routes,
//! PBW degree counts and the reindexing between pyramids with equal row
//! lengths.
//!
//! Every check produces [`Claim`]s collected in a [`CheckReport`]; a claim
//! either passes or carries the nonzero residue `lhs − rhs`.

use serde::{Deserialize, Serialize};
use std::borrow::Cow;

use crate::engine::{Algebra, Element};
use crate::error::{Result, YwError};
use crate::invariants::{compare_blocks, GeneratorTable, Invariants, Kind, PathSums};
use crate::json::{ElementJson, SCHEMA};
use crate::pyramid::{relative_length, Shape, ShiftMatrix};
use crate::rational::Rational;
use crate::series::Series;

/// Outcome of one claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Both sides agree.
    Pass,
    /// Both sides are empty by the empty-sum convention.
    PassVacuous,
    /// The sides differ; the residue is attached.
    Fail,
}

/// One checked instance of a claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    /// Claim identifier, e.g. `"r4"`.
    pub id: String,
    /// Index tuple of the instance.
    pub idx: Vec<i64>,
    /// Outcome.
    pub status: Status,
    /// `lhs − rhs` on failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue: Option<ElementJson>,
    /// Human-readable witness on failure (or a note on vacuous passes).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Claim {
    /// A passing claim.
    pub fn pass(id: &str, idx: Vec<i64>) -> Claim {
        Claim { id: id.into(), idx, status: Status::Pass, residue: None, witness: None }
    }

    /// A failing claim with a witness but no residue element.
    pub fn fail(id: &str, idx: Vec<i64>, witness: String) -> Claim {
        Claim { id: id.into(), idx, status: Status::Fail, residue: None, witness: Some(witness) }
    }

    /// Pass iff `cond`, otherwise fail with `witness`.
    pub fn check(id: &str, idx: Vec<i64>, cond: bool, witness: impl FnOnce() -> String) -> Claim {
        if cond {
            Claim::pass(id, idx)
        } else {
            Claim::fail(id, idx, witness())
        }
    }

    /// Pass iff `residue` vanishes.
    pub fn from_residue(id: &str, idx: Vec<i64>, alg: &Algebra, residue: &Element) -> Claim {
        if residue.is_zero() {
            Claim::pass(id, idx)
        } else {
            Claim {
                id: id.into(),
                idx,
                status: Status::Fail,
                residue: Some(ElementJson::encode(alg, residue)),
                witness: None,
            }
        }
    }

    /// True unless the claim failed.
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Claim counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    /// Passing claims, vacuous ones included.
    pub pass: usize,
    /// Failing claims.
    pub fail: usize,
    /// Vacuous passes.
    #[serde(default)]
    pub vacuous: usize,
}

/// A deterministic list of claims with summary counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    /// Schema tag.
    pub schema: String,
    /// Claims sorted by `(id, idx)`.
    pub claims: Vec<Claim>,
    /// Counts.
    pub summary: Summary,
}

impl Default for CheckReport {
    fn default() -> Self {
        CheckReport { schema: SCHEMA.into(), claims: Vec::new(), summary: Summary::default() }
    }
}

impl CheckReport {
    /// An empty report.
    pub fn new() -> CheckReport {
        CheckReport::default()
    }

    /// Builds a sorted report from claims.
    pub fn from_claims(claims: Vec<Claim>) -> CheckReport {
        let mut r = CheckReport { claims, ..CheckReport::default() };
        r.finish();
        r
    }

    /// Adds a claim (call [`CheckReport::finish`] afterwards).
    pub fn push(&mut self, c: Claim) {
        self.claims.push(c);
    }

    /// Merges another report.
    pub fn merge(&mut self, other: CheckReport) {
        self.claims.extend(other.claims);
        self.finish();
    }

    /// Sorts the claims and recomputes the summary.
    pub fn finish(&mut self) {
        self.claims.sort_by(|a, b| (&a.id, &a.idx).cmp(&(&b.id, &b.idx)));
        let mut s = Summary::default();
        for c in &self.claims {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::PassVacuous => {
                    s.pass += 1;
                    s.vacuous += 1
                }
                Status::Fail => s.fail += 1,
            }
        }
        self.summary = s;
    }

    /// True iff no claim failed.
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(Claim::passed)
    }

    /// The failing claims.
    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.passed())
    }
}

/// Evaluates relation instances on a generator table.
///
/// Only instances whose degree (`r + s − 1` for brackets of two generators,
/// `r + s` for the mixed-superscript relations and `r + s + t − 2` for the
/// Serre-type relations) is at most `bound` are generated; `bound` defaults
/// to the truncation order of the table so every term is available.
pub struct Relations<'a> {
    alg: &'a Algebra,
    tab: &'a GeneratorTable,
    bound: usize,
}

fn delta(a: usize, b: usize) -> i64 {
    (a == b) as i64
}

impl<'a> Relations<'a> {
    /// A checker; errors if `bound` exceeds the truncation order.
    pub fn new(alg: &'a Algebra, tab: &'a GeneratorTable, bound: Option<usize>) -> Result<Relations<'a>> {
        let bound = bound.unwrap_or(tab.order());
        if bound > tab.order() {
            return Err(YwError::RangeExceedsTruncation(format!(
                "relation degree bound {bound} exceeds the truncation order {}",
                tab.order()
            )));
        }
        Ok(Relations { alg, tab, bound })
    }

    fn g(&self, kind: Kind, a: usize, i: usize, j: usize, r: usize) -> Result<Cow<'a, Element>> {
        self.tab.value_cow(kind, a, i, j, r)
    }

    fn br(&self, x: &Element, y: &Element) -> Element {
        self.alg.bracket(x, y)
    }

    /// `Σ_{t=lo}^{hi} c · f(t)`, zero when `hi < lo`.
    fn sum(&self, lo: i64, hi: i64, mut f: impl FnMut(usize) -> Result<(Element, i64)>) -> Result<Element> {
        let mut acc = Element::zero();
        let mut t = lo;
        while t <= hi {
            let (x, c) = f(t as usize)?;
            if c != 0 {
                acc.add_scaled(&x, &Rational::int(c));
            }
            t += 1;
        }
        Ok(acc)
    }

    /// `c · x · y` accumulated into a fresh element.
    fn prod(&self, x: &Element, y: &Element) -> Element {
        self.alg.mul(x, y)
    }

    fn claim(&self, id: &str, idx: Vec<i64>, lhs: &Element, rhs: &Element, vacuous: bool) -> Claim {
        let res = lhs.sub(rhs);
        let mut c = Claim::from_residue(id, idx, self.alg, &res);
        if vacuous && c.passed() && lhs.is_zero() && rhs.is_zero() {
            c.status = Status::PassVacuous;
        }
        c
    }

    fn s(&self, a: usize, b: usize) -> usize {
        self.tab.rel_shift(a, b)
    }

    /// Relations (r2)–(r13) for a table over `ν = (1ⁿ)`.
    pub fn defining(&self) -> Result<CheckReport> {
        let nu = self.tab.shape();
        if nu.parts().iter().any(|&p| p != 1) {
            return Err(YwError::NotAdmissible(format!("defining relations need shape (1^n), got {nu}")));
        }
        let n = nu.len();
        let b = self.bound;
        let mut out = Vec::new();
        let d = |i: usize, r: usize| -> Result<Cow<'a, Element>> { self.g(Kind::D, i, 1, 1, r) };
        let dt = |i: usize, r: usize| -> Result<Cow<'a, Element>> { self.g(Kind::Dt, i, 1, 1, r) };
        let e = |i: usize, r: usize| -> Result<Cow<'a, Element>> { self.g(Kind::E, i, 1, 1, r) };
        let f = |i: usize, r: usize| -> Result<Cow<'a, Element>> { self.g(Kind::F, i, 1, 1, r) };
        let idx = |v: &[usize]| v.iter().map(|&x| x as i64).collect::<Vec<i64>>();
        let zero = Element::zero();
        // (r2)
        for i in 1..=n {
            for j in i..=n {
                for r in 1..=b {
                    for s in 1..=(b + 1 - r) {
                        if i == j && s < r {
                            continue;
                        }
                        let lhs = self.br(&*d(i, r)?, &*d(j, s)?);
                        out.push(self.claim("r2", idx(&[i, j, r, s]), &lhs, &zero, false));
                    }
                }
            }
        }
        for i in 1..n {
            for j in 1..n {
                // (r3)
                for r in self.s(i, i + 1) + 1..=b {
                    for s in self.s(j + 1, j) + 1..=b {
                        if r + s - 1 > b {
                            continue;
                        }
                        let lhs = self.br(&*e(i, r)?, &*f(j, s)?);
                        let rhs = if i == j {
                            let top = r + s - 1;
                            self.sum(0, top as i64, |t| Ok((self.prod(&*dt(i, t)?, &*d(i + 1, top - t)?), 1)))?
                        } else {
                            Element::zero()
                        };
                        out.push(self.claim("r3", idx(&[i, j, r, s]), &lhs, &rhs, false));
                    }
                }
            }
        }
        for i in 1..=n {
            for j in 1..n {
                // (r4)
                for r in 1..=b {
                    for s in self.s(j, j + 1) + 1..=b {
                        if r + s - 1 > b {
                            continue;
                        }
                        let lhs = self.br(&*d(i, r)?, &*e(j, s)?);
                        let c = delta(i, j) - delta(i, j + 1);
                        let rhs = if c == 0 {
                            Element::zero()
                        } else {
                            self.sum(0, r as i64 - 1, |t| Ok((self.prod(&*d(i, t)?, &*e(j, r + s - 1 - t)?), c)))?
                        };
                        out.push(self.claim("r4", idx(&[i, j, r, s]), &lhs, &rhs, false));
                    }
                }
                // (r5)
                for r in 1..=b {
                    for s in self.s(j + 1, j) + 1..=b {
                        if r + s - 1 > b {
                            continue;
                        }
                        let lhs = self.br(&*d(i, r)?, &*f(j, s)?);
                        let c = delta(i, j + 1) - delta(i, j);
                        let rhs = if c == 0 {
                            Element::zero()
                        } else {
                            self.sum(0, r as i64 - 1, |t| Ok((self.prod(&*f(j, r + s - 1 - t)?, &*d(i, t)?), c)))?
                        };
                        out.push(self.claim("r5", idx(&[i, j, r, s]), &lhs, &rhs, false));
                    }
                }
            }
        }
        for i in 1..n {
            // (r6)
            let se = self.s(i, i + 1);
            for r in se + 1..=b {
                for s in r..=b {
                    if r + s - 1 > b {
                        continue;
                    }
                    let lhs = self.br(&*e(i, r)?, &*e(i, s)?);
                    let term = |t: usize| -> Result<Element> { Ok(self.prod(&*e(i, t)?, &*e(i, r + s - 1 - t)?)) };
                    let rhs = self
                        .sum(se as i64 + 1, s as i64 - 1, |t| Ok((term(t)?, 1)))?
                        .sub(&self.sum(se as i64 + 1, r as i64 - 1, |t| Ok((term(t)?, 1)))?);
                    out.push(self.claim("r6", idx(&[i, r, s]), &lhs, &rhs, r == s));
                }
            }
            // (r7)
            let sf = self.s(i + 1, i);
            for r in sf + 1..=b {
                for s in r..=b {
                    if r + s - 1 > b {
                        continue;
                    }
                    let lhs = self.br(&*f(i, r)?, &*f(i, s)?);
                    let term = |t: usize| -> Result<Element> { Ok(self.prod(&*f(i, r + s - 1 - t)?, &*f(i, t)?)) };
                    let rhs = self
                        .sum(sf as i64 + 1, r as i64 - 1, |t| Ok((term(t)?, 1)))?
                        .sub(&self.sum(sf as i64 + 1, s as i64 - 1, |t| Ok((term(t)?, 1)))?);
                    out.push(self.claim("r7", idx(&[i, r, s]), &lhs, &rhs, r == s));
                }
            }
        }
        for i in 1..n.saturating_sub(1) {
            // (r8)
            for r in self.s(i, i + 1) + 1..=b {
                for s in self.s(i + 1, i + 2) + 1..=b {
                    if r + s > b {
                        continue;
                    }
                    let lhs = self.br(&*e(i, r)?, &*e(i + 1, s + 1)?).sub(&self.br(&*e(i, r + 1)?, &*e(i + 1, s)?));
                    let rhs = self.prod(&*e(i, r)?, &*e(i + 1, s)?).neg();
                    out.push(self.claim("r8", idx(&[i, r, s]), &lhs, &rhs, false));
                }
            }
            // (r9)
            for r in self.s(i + 1, i) + 1..=b {
                for s in self.s(i + 2, i + 1) + 1..=b {
                    if r + s > b {
                        continue;
                    }
                    let lhs = self.br(&*f(i, r + 1)?, &*f(i + 1, s)?).sub(&self.br(&*f(i, r)?, &*f(i + 1, s + 1)?));
                    let rhs = self.prod(&*f(i + 1, s)?, &*f(i, r)?).neg();
                    out.push(self.claim("r9", idx(&[i, r, s]), &lhs, &rhs, false));
                }
            }
        }
        for i in 1..n {
            for j in i + 2..n {
                // (r10)
                for r in self.s(i, i + 1) + 1..=b {
                    for s in self.s(j, j + 1) + 1..=b {
                        if r + s - 1 > b {
                            continue;
                        }
                        let lhs = self.br(&*e(i, r)?, &*e(j, s)?);
                        out.push(self.claim("r10", idx(&[i, j, r, s]), &lhs, &zero, false));
                    }
                }
                // (r11)
                for r in self.s(i + 1, i) + 1..=b {
                    for s in self.s(j + 1, j) + 1..=b {
                        if r + s - 1 > b {
                            continue;
                        }
                        let lhs = self.br(&*f(i, r)?, &*f(j, s)?);
                        out.push(self.claim("r11", idx(&[i, j, r, s]), &lhs, &zero, false));
                    }
                }
            }
        }
        for i in 1..n {
            for j in 1..n {
                if i.abs_diff(j) != 1 {
                    continue;
                }
                // (r12)
                for r in self.s(i, i + 1) + 1..=b {
                    for s in r..=b {
                        for t in self.s(j, j + 1) + 1..=b {
                            if r + s + t - 2 > b {
                                continue;
                            }
                            let (er, es, et) = (e(i, r)?, e(i, s)?, e(j, t)?);
                            let lhs = self.br(&er, &self.br(&es, &et)).add(&self.br(&es, &self.br(&er, &et)));
                            out.push(self.claim("r12", idx(&[i, j, r, s, t]), &lhs, &zero, false));
                        }
                    }
                }
                // (r13)
                for r in self.s(i + 1, i) + 1..=b {
                    for s in r..=b {
                        for t in self.s(j + 1, j) + 1..=b {
                            if r + s + t - 2 > b {
                                continue;
                            }
                            let (fr, fs, ft) = (f(i, r)?, f(i, s)?, f(j, t)?);
                            let lhs = self.br(&fr, &self.br(&fs, &ft)).add(&self.br(&fs, &self.br(&fr, &ft)));
                            out.push(self.claim("r13", idx(&[i, j, r, s, t]), &lhs, &zero, false));
                        }
                    }
                }
            }
        }
        Ok(CheckReport::from_claims(out))
    }

    /// Relations (pr3)–(pr14) for the shape of the table.
    pub fn parabolic(&self) -> Result<CheckReport> {
        let nu = self.tab.shape().clone();
        let m = nu.len();
        let w = |a: usize| nu.part(a);
        let b = self.bound;
        let mut out = Vec::new();
        let gd = |a: usize, i: usize, j: usize, r: usize| -> Result<Cow<'a, Element>> { self.g(Kind::D, a, i, j, r) };
        let gdt = |a: usize, i: usize, j: usize, r: usize| -> Result<Cow<'a, Element>> { self.g(Kind::Dt, a, i, j, r) };
        let ge = |a: usize, i: usize, j: usize, r: usize| -> Result<Cow<'a, Element>> { self.g(Kind::E, a, i, j, r) };
        let gf = |a: usize, i: usize, j: usize, r: usize| -> Result<Cow<'a, Element>> { self.g(Kind::F, a, i, j, r) };
        let idx = |v: &[usize]| v.iter().map(|&x| x as i64).collect::<Vec<i64>>();
        let zero = Element::zero();
        let pairs = |rows: usize, cols: usize| (1..=rows).flat_map(move |i| (1..=cols).map(move |j| (i, j)));

        // (pr3)
        for a in 1..=m {
            for bb in a..=m {
                for (i, j) in pairs(w(a), w(a)) {
                    for (h, k) in pairs(w(bb), w(bb)) {
                        for r in 1..=b {
                            for s in 1..=(b + 1 - r) {
                                if (a, i, j, r) > (bb, h, k, s) {
                                    continue;
                                }
                                let lhs = self.br(&*gd(a, i, j, r)?, &*gd(bb, h, k, s)?);
                                let rhs = if a == bb {
                                    let top = r + s - 1;
                                    self.sum(0, r.min(s) as i64 - 1, |t| {
                                        let x = self.prod(&*gd(a, i, k, top - t)?, &*gd(a, h, j, t)?);
                                        let y = self.prod(&*gd(a, i, k, t)?, &*gd(a, h, j, top - t)?);
                                        Ok((x.sub(&y), 1))
                                    })?
                                } else {
                                    Element::zero()
                                };
                                out.push(self.claim("pr3", idx(&[a, i, j, bb, h, k, r, s]), &lhs, &rhs, false));
                            }
                        }
                    }
                }
            }
        }
        // (pr4), (pr5)
        for a in 1..=m {
            for bb in 1..m {
                for (i, j) in pairs(w(a), w(a)) {
                    for (h, k) in pairs(w(bb), w(bb + 1)) {
                        for r in 1..=b {
                            for s in self.s(bb, bb + 1) + 1..=b {
                                if r + s - 1 > b {
                                    continue;
                                }
                                let top = r + s - 1;
                                let lhs = self.br(&*gd(a, i, j, r)?, &*ge(bb, h, k, s)?);
                                let mut rhs = Element::zero();
                                if a == bb && h == j {
                                    for g in 1..=w(a) {
                                        rhs = rhs.add(&self.sum(0, r as i64 - 1, |t| {
                                            Ok((self.prod(&*gd(a, i, g, t)?, &*ge(a, g, k, top - t)?), 1))
                                        })?);
                                    }
                                }
                                if a == bb + 1 {
                                    rhs = rhs.sub(&self.sum(0, r as i64 - 1, |t| {
                                        Ok((self.prod(&*gd(bb + 1, i, k, t)?, &*ge(bb, h, j, top - t)?), 1))
                                    })?);
                                }
                                out.push(self.claim("pr4", idx(&[a, i, j, bb, h, k, r, s]), &lhs, &rhs, false));
                            }
                        }
                    }
                    for (h, k) in pairs(w(bb + 1), w(bb)) {
                        for r in 1..=b {
                            for s in self.s(bb + 1, bb) + 1..=b {
                                if r + s - 1 > b {
                                    continue;
                                }
                                let top = r + s - 1;
                                let lhs = self.br(&*gd(a, i, j, r)?, &*gf(bb, h, k, s)?);
                                let mut rhs = Element::zero();
                                if a == bb + 1 {
                                    rhs = rhs.add(&self.sum(0, r as i64 - 1, |t| {
                                        Ok((self.prod(&*gf(bb, i, k, top - t)?, &*gd(bb + 1, h, j, t)?), 1))
                                    })?);
                                }
                                if a == bb && i == k {
                                    for g in 1..=w(a) {
                                        rhs = rhs.sub(&self.sum(0, r as i64 - 1, |t| {
                                            Ok((self.prod(&*gf(a, h, g, top - t)?, &*gd(a, g, j, t)?), 1))
                                        })?);
                                    }
                                }
                                out.push(self.claim("pr5", idx(&[a, i, j, bb, h, k, r, s]), &lhs, &rhs, false));
                            }
                        }
                    }
                }
            }
        }
        // (pr6)
        for a in 1..m {
            for bb in 1..m {
                for (i, j) in pairs(w(a), w(a + 1)) {
                    for (h, k) in pairs(w(bb + 1), w(bb)) {
                        for r in self.s(a, a + 1) + 1..=b {
                            for s in self.s(bb + 1, bb) + 1..=b {
                                if r + s - 1 > b {
                                    continue;
                                }
                                let top = r + s - 1;
                                let lhs = self.br(&*ge(a, i, j, r)?, &*gf(bb, h, k, s)?);
                                let rhs = if a == bb {
                                    self.sum(0, top as i64, |t| {
                                        Ok((self.prod(&*gdt(a, i, k, top - t)?, &*gd(a + 1, h, j, t)?), 1))
                                    })?
                                } else {
                                    Element::zero()
                                };
                                out.push(self.claim("pr6", idx(&[a, i, j, bb, h, k, r, s]), &lhs, &rhs, false));
                            }
                        }
                    }
                }
            }
        }
        // (pr7), (pr8)
        for a in 1..m {
            let se = self.s(a, a + 1);
            for (i, j) in pairs(w(a), w(a + 1)) {
                for (h, k) in pairs(w(a), w(a + 1)) {
                    for r in se + 1..=b {
                        for s in se + 1..=b {
                            if r + s - 1 > b {
                                continue;
                            }
                            let top = r + s - 1;
                            let lhs = self.br(&*ge(a, i, j, r)?, &*ge(a, h, k, s)?);
                            let term = |t: usize| -> Result<(Element, i64)> {
                                Ok((self.prod(&*ge(a, i, k, t)?, &*ge(a, h, j, top - t)?), 1))
                            };
                            let rhs = self
                                .sum(se as i64 + 1, s as i64 - 1, term)?
                                .sub(&self.sum(se as i64 + 1, r as i64 - 1, term)?);
                            let vac = r == s && (i, j) == (h, k);
                            out.push(self.claim("pr7", idx(&[a, i, j, h, k, r, s]), &lhs, &rhs, vac));
                        }
                    }
                }
            }
            let sf = self.s(a + 1, a);
            for (i, j) in pairs(w(a + 1), w(a)) {
                for (h, k) in pairs(w(a + 1), w(a)) {
                    for r in sf + 1..=b {
                        for s in sf + 1..=b {
                            if r + s - 1 > b {
                                continue;
                            }
                            let top = r + s - 1;
                            let lhs = self.br(&*gf(a, i, j, r)?, &*gf(a, h, k, s)?);
                            let term = |t: usize| -> Result<(Element, i64)> {
                                Ok((self.prod(&*gf(a, i, k, top - t)?, &*gf(a, h, j, t)?), 1))
                            };
                            let rhs = self
                                .sum(sf as i64 + 1, r as i64 - 1, term)?
                                .sub(&self.sum(sf as i64 + 1, s as i64 - 1, term)?);
                            let vac = r == s && (i, j) == (h, k);
                            out.push(self.claim("pr8", idx(&[a, i, j, h, k, r, s]), &lhs, &rhs, vac));
                        }
                    }
                }
            }
        }
        // (pr9), (pr10)
        for a in 1..m.saturating_sub(1) {
            for (i, j) in pairs(w(a), w(a + 1)) {
                for (h, k) in pairs(w(a + 1), w(a + 2)) {
                    for r in self.s(a, a + 1) + 1..=b {
                        for s in self.s(a + 1, a + 2) + 1..=b {
                            if r + s > b {
                                continue;
                            }
                            let lhs = self
                                .br(&*ge(a, i, j, r)?, &*ge(a + 1, h, k, s + 1)?)
                                .sub(&self.br(&*ge(a, i, j, r + 1)?, &*ge(a + 1, h, k, s)?));
                            let mut rhs = Element::zero();
                            if h == j {
                                for g in 1..=w(a + 1) {
                                    rhs = rhs.sub(&self.prod(&*ge(a, i, g, r)?, &*ge(a + 1, g, k, s)?));
                                }
                            }
                            out.push(self.claim("pr9", idx(&[a, i, j, h, k, r, s]), &lhs, &rhs, false));
                        }
                    }
                }
            }
            for (i, j) in pairs(w(a + 1), w(a)) {
                for (h, k) in pairs(w(a + 2), w(a + 1)) {
                    for r in self.s(a + 1, a) + 1..=b {
                        for s in self.s(a + 2, a + 1) + 1..=b {
                            if r + s > b {
                                continue;
                            }
                            let lhs = self
                                .br(&*gf(a, i, j, r + 1)?, &*gf(a + 1, h, k, s)?)
                                .sub(&self.br(&*gf(a, i, j, r)?, &*gf(a + 1, h, k, s + 1)?));
                            let mut rhs = Element::zero();
                            if i == k {
                                for g in 1..=w(a + 1) {
                                    rhs = rhs.sub(&self.prod(&*gf(a + 1, h, g, s)?, &*gf(a, g, j, r)?));
                                }
                            }
                            out.push(self.claim("pr10", idx(&[a, i, j, h, k, r, s]), &lhs, &rhs, false));
                        }
                    }
                }
            }
        }
        // (pr11), (pr12)
        for a in 1..m {
            for bb in a + 1..m {
                for (i, j) in pairs(w(a), w(a + 1)) {
                    for (h, k) in pairs(w(bb), w(bb + 1)) {
                        if bb == a + 1 && h == j {
                            continue;
                        }
                        for r in self.s(a, a + 1) + 1..=b {
                            for s in self.s(bb, bb + 1) + 1..=b {
                                if r + s - 1 > b {
                                    continue;
                                }
                                let lhs = self.br(&*ge(a, i, j, r)?, &*ge(bb, h, k, s)?);
                                out.push(self.claim("pr11", idx(&[a, i, j, bb, h, k, r, s]), &lhs, &zero, false));
                            }
                        }
                    }
                }
                for (i, j) in pairs(w(a + 1), w(a)) {
                    for (h, k) in pairs(w(bb + 1), w(bb)) {
                        if bb == a + 1 && i == k {
                            continue;
                        }
                        for r in self.s(a + 1, a) + 1..=b {
                            for s in self.s(bb + 1, bb) + 1..=b {
                                if r + s - 1 > b {
                                    continue;
                                }
                                let lhs = self.br(&*gf(a, i, j, r)?, &*gf(bb, h, k, s)?);
                                out.push(self.claim("pr12", idx(&[a, i, j, bb, h, k, r, s]), &lhs, &zero, false));
                            }
                        }
                    }
                }
            }
        }
        // (pr13), (pr14)
        for a in 1..m {
            for bb in 1..m {
                if a.abs_diff(bb) != 1 {
                    continue;
                }
                for (i, j) in pairs(w(a), w(a + 1)) {
                    for (h, k) in pairs(w(a), w(a + 1)) {
                        for (f, g) in pairs(w(bb), w(bb + 1)) {
                            for r in self.s(a, a + 1) + 1..=b {
                                for s in r..=b {
                                    for t in self.s(bb, bb + 1) + 1..=b {
                                        if r + s + t - 2 > b {
                                            continue;
                                        }
                                        let x = ge(bb, f, g, t)?;
                                        let lhs = self
                                            .br(&*ge(a, i, j, r)?, &self.br(&*ge(a, h, k, s)?, &x))
                                            .add(&self.br(&*ge(a, i, j, s)?, &self.br(&*ge(a, h, k, r)?, &x)));
                                        let id = idx(&[a, i, j, h, k, bb, f, g, r, s, t]);
                                        out.push(self.claim("pr13", id, &lhs, &zero, false));
                                    }
                                }
                            }
                        }
                    }
                }
                for (i, j) in pairs(w(a + 1), w(a)) {
                    for (h, k) in pairs(w(a + 1), w(a)) {
                        for (f, g) in pairs(w(bb + 1), w(bb)) {
                            for r in self.s(a + 1, a) + 1..=b {
                                for s in r..=b {
                                    for t in self.s(bb + 1, bb) + 1..=b {
                                        if r + s + t - 2 > b {
                                            continue;
                                        }
                                        let x = gf(bb, f, g, t)?;
                                        let lhs = self
                                            .br(&*gf(a, i, j, r)?, &self.br(&*gf(a, h, k, s)?, &x))
                                            .add(&self.br(&*gf(a, i, j, s)?, &self.br(&*gf(a, h, k, r)?, &x)));
                                        let id = idx(&[a, i, j, h, k, bb, f, g, r, s, t]);
                                        out.push(self.claim("pr14", id, &lhs, &zero, false));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(CheckReport::from_claims(out))
    }
}

fn kind_id(prefix: &str, kind: Kind) -> String {
    format!("{prefix}-{kind}")
}

/// `D_{1;i,j}^{(r)} = 0` for `p_1 < r ≤ K`.
pub fn check_truncation(alg: &Algebra, tab: &GeneratorTable, p1: usize) -> CheckReport {
    let mut out = Vec::new();
    let w = tab.shape().part(1);
    for i in 1..=w {
        for j in 1..=w {
            for r in p1 + 1..=tab.order() {
                let x = tab.value(Kind::D, 1, i, j, r).expect("D_1 entries are always stored");
                out.push(Claim::from_residue("trunc", vec![i as i64, j as i64, r as i64], alg, &x));
            }
        }
    }
    CheckReport::from_claims(out)
}

/// Twisted `m`-invariance of every stored generator.
pub fn check_invariance(alg: &Algebra, tab: &GeneratorTable) -> Result<CheckReport> {
    let mut out = Vec::new();
    for (key, x) in tab.entries() {
        let idx = vec![key.a as i64, key.i as i64, key.j as i64, key.r as i64];
        let id = kind_id("inv", key.kind);
        match alg.m_invariance_witness(x)? {
            None => out.push(Claim::pass(&id, idx)),
            Some(((f, g), res)) => {
                let mut c = Claim::from_residue(&id, idx, alg, &res);
                c.witness = Some(format!("twisted action of e_{f},{g} is nonzero"));
                out.push(c);
            }
        }
    }
    Ok(CheckReport::from_claims(out))
}

/// First coefficient where two series differ, if any.
fn series_residue(x: &Series, y: &Series) -> Option<(usize, Element)> {
    (0..=x.order()).find_map(|r| {
        let d = x.coeff(r).sub(y.coeff(r));
        (!d.is_zero()).then_some((r, d))
    })
}

fn series_claim(id: &str, idx: Vec<i64>, alg: &Algebra, x: &Series, y: &Series) -> Claim {
    match series_residue(x, y) {
        None => Claim::pass(id, idx),
        Some((r, d)) => {
            let mut c = Claim::from_residue(id, idx, alg, &d);
            c.witness = Some(format!("coefficient of u^-{r} differs"));
            c
        }
    }
}

/// The four transfer identities between `T_{·;x}(u)` and `T_{·;y}(u)` for
/// all `0 ≤ x < y ≤ n` and all valid `i, j`.
pub fn check_traninv(sums: &PathSums) -> Result<CheckReport> {
    let n = sums.pyramid().n();
    let k = sums.order();
    let alg = sums.algebra();
    let t: Vec<_> = (0..=n).map(|x| sums.t_matrix_x(x)).collect::<Result<_>>()?;
    let get = |i: usize, j: usize, x: usize| t[x].get(i - 1, j - 1);
    let mut out = Vec::new();
    for x in 0..n {
        for y in x + 1..=n {
            let id4 = |i, j| vec![i as i64, j as i64, x as i64, y as i64];
            // Σ_{k=x+1}^{y} T_{i,k;x} T_{k,j;y} and the mirror product
            let prod_xy = |i: usize, j: usize| {
                let mut acc = Series::zero(k);
                for m in x + 1..=y {
                    get(i, m, x).mul_acc(alg, get(m, j, y), &Rational::ONE, &mut acc);
                }
                acc
            };
            for i in x + 1..=y {
                for j in y + 1..=n {
                    out.push(series_claim("traninv-i", id4(i, j), alg, get(i, j, x), &prod_xy(i, j)));
                }
            }
            for i in y + 1..=n {
                for j in x + 1..=y {
                    let mut acc = Series::zero(k);
                    for m in x + 1..=y {
                        get(i, m, y).mul_acc(alg, get(m, j, x), &Rational::ONE, &mut acc);
                    }
                    out.push(series_claim("traninv-ii", id4(i, j), alg, get(i, j, x), &acc));
                }
            }
            for i in y + 1..=n {
                for j in y + 1..=n {
                    let mut acc = get(i, j, y).clone();
                    for a in x + 1..=y {
                        let left = get(i, a, y);
                        let mut mid = Series::zero(k);
                        for b in x + 1..=y {
                            get(a, b, x).mul_acc(alg, get(b, j, y), &Rational::ONE, &mut mid);
                        }
                        left.mul_acc(alg, &mid, &Rational::ONE, &mut acc);
                    }
                    out.push(series_claim("traninv-iii", id4(i, j), alg, get(i, j, x), &acc));
                }
            }
            for i in x + 1..=y {
                for j in x + 1..=y {
                    let want = Series::constant(Element::scalar(Rational::int(-((i == j) as i64))), k);
                    out.push(series_claim("traninv-iv", id4(i, j), alg, &prod_xy(i, j), &want));
                }
            }
        }
    }
    Ok(CheckReport::from_claims(out))
}

/// Both construction routes (closed path-sum formulas and Gauss
/// factorization) agree entrywise, `D_a D̃_a = −I`, and `F D E = T`.
pub fn check_construction(inv: &Invariants, nu: &Shape) -> Result<CheckReport> {
    let alg = inv.algebra();
    let direct = inv.direct_blocks(nu)?;
    let gauss = inv.gauss_blocks(nu)?;
    let mut out = Vec::new();
    let mism = compare_blocks(&direct, &gauss);
    let fams = [(Kind::D, &direct.d), (Kind::Dt, &direct.dt), (Kind::E, &direct.e), (Kind::F, &direct.f)];
    for (kind, blocks) in fams {
        for (a, blk) in blocks.iter().enumerate() {
            for i in 1..=blk.rows() {
                for j in 1..=blk.cols() {
                    let idx = vec![a as i64 + 1, i as i64, j as i64];
                    let bad = mism.iter().find(|(key, _)| key.kind == kind && key.a == a + 1 && key.i == i && key.j == j);
                    out.push(match bad {
                        None => Claim::pass(&kind_id("gauss", kind), idx),
                        Some((key, d)) => {
                            let mut c = Claim::from_residue(&kind_id("gauss", kind), idx, alg, d);
                            c.witness = Some(format!("coefficient of u^-{} differs", key.r));
                            c
                        }
                    });
                }
            }
        }
    }
    let k = inv.order();
    for (a, (d, dt)) in direct.d.iter().zip(&direct.dt).enumerate() {
        let prod = d.mul(alg, dt);
        let minus_i = crate::series::SeriesMatrix::identity(d.rows(), k).neg();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let idx = vec![a as i64 + 1, i as i64 + 1, j as i64 + 1];
                out.push(series_claim("dtilde", idx, alg, prod.get(i, j), minus_i.get(i, j)));
            }
        }
    }
    let t = inv.sums().t_matrix();
    let re = gauss.recompose(alg);
    for i in 0..t.rows() {
        for j in 0..t.cols() {
            out.push(series_claim("fde", vec![i as i64 + 1, j as i64 + 1], alg, re.get(i, j), t.get(i, j)));
        }
    }
    Ok(CheckReport::from_claims(out))
}

/// One index of the finite PBW generating set of the truncated algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PbwIndex {
    /// `D`, `E` or `F` (higher roots for `b > a + 1`).
    pub kind: Kind,
    /// Lower block.
    pub a: usize,
    /// Upper block (`a` for `D`).
    pub b: usize,
    /// Row.
    pub i: usize,
    /// Column.
    pub j: usize,
    /// Superscript, which is also the degree.
    pub r: usize,
}

/// The generating set whose ordered monomials form a PBW basis of the
/// truncated shifted Yangian: `D_{a;i,j}^{(r)}` with `r ≤ p_a(ν)` and the
/// root elements `E_{a,b}`, `F_{a,b}` with `s < r ≤ s + p_a(ν)`.
pub fn pbw_generators(sigma: &ShiftMatrix, p: &[usize], nu: &Shape) -> Vec<PbwIndex> {
    let m = nu.len();
    let mut out = Vec::new();
    for a in 1..=m {
        let pa = relative_length(p, nu, a);
        for i in 1..=nu.part(a) {
            for j in 1..=nu.part(a) {
                for r in 1..=pa {
                    out.push(PbwIndex { kind: Kind::D, a, b: a, i, j, r });
                }
            }
        }
        for b in a + 1..=m {
            let se = sigma.relative_shift(nu, a, b);
            let sf = sigma.relative_shift(nu, b, a);
            for i in 1..=nu.part(a) {
                for j in 1..=nu.part(b) {
                    for r in se + 1..=se + pa {
                        out.push(PbwIndex { kind: Kind::E, a, b, i, j, r });
                    }
                }
            }
            for i in 1..=nu.part(b) {
                for j in 1..=nu.part(a) {
                    for r in sf + 1..=sf + pa {
                        out.push(PbwIndex { kind: Kind::F, a, b, i, j, r });
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Number of monomials of total degree `≤ d` in commuting variables with the
/// given degrees, for `d = 0..=d_max`.
pub fn hilbert_counts(degrees: &[usize], d_max: usize) -> Vec<u128> {
    // exact[d] = number of monomials of degree exactly d
    let mut exact = vec![0u128; d_max + 1];
    exact[0] = 1;
    for &g in degrees {
        if g == 0 || g > d_max {
            continue;
        }
        for d in g..=d_max {
            exact[d] += exact[d - g];
        }
    }
    let mut cum = 0;
    exact
        .into_iter()
        .map(|x| {
            cum += x;
            cum
        })
        .collect()
}

/// Compares monomial counts by degree for the PBW generating set of shape ν
/// against the centralizer basis `c_{i,j}^{(r)}`, and the two degree
/// multisets themselves.
pub fn pbw_degree_audit(sigma: &ShiftMatrix, p: &[usize], nu: &Shape, d_max: usize) -> Result<CheckReport> {
    sigma.check_admissible(nu)?;
    let lhs: Vec<usize> = pbw_generators(sigma, p, nu).iter().map(|x| x.r).collect();
    let rhs: Vec<usize> = sigma.centralizer_index_set(p).iter().map(|&(_, _, r)| r).collect();
    Ok(audit_degrees(&lhs, &rhs, d_max))
}

/// The audit on explicit degree lists.
pub fn audit_degrees(lhs: &[usize], rhs: &[usize], d_max: usize) -> CheckReport {
    let a = hilbert_counts(lhs, d_max);
    let b = hilbert_counts(rhs, d_max);
    let mut out = Vec::new();
    for d in 0..=d_max {
        out.push(Claim::check("pbw", vec![d as i64], a[d] == b[d], || {
            format!("degree <= {d}: {} PBW monomials vs {} centralizer monomials", a[d], b[d])
        }));
    }
    let (mut x, mut y) = (lhs.to_vec(), rhs.to_vec());
    x.sort_unstable();
    y.sort_unstable();
    out.push(Claim::check("pbw-multiset", vec![], x == y, || {
        format!("generator degrees {x:?} vs centralizer degrees {y:?}")
    }));
    CheckReport::from_claims(out)
}

/// The reindexing between two pyramids with equal row lengths: `D` indices
/// are kept and `E_{a,b}`/`F_{a,b}` superscripts shift by `ṡ − s`; checks it
/// is a bijection between the PBW generating sets and between the generator
/// index sets up to the truncation order (after shifting the bound).
pub fn check_iota_reindex(
    sigma: &ShiftMatrix,
    p: &[usize],
    sigma_dot: &ShiftMatrix,
    p_dot: &[usize],
    nu: &Shape,
) -> Result<CheckReport> {
    if p != p_dot {
        return Err(YwError::RowLengthMismatch(p.to_vec(), p_dot.to_vec()));
    }
    sigma.check_admissible(nu)?;
    sigma_dot.check_admissible(nu)?;
    let shift = |s: &ShiftMatrix, x: &PbwIndex| match x.kind {
        Kind::E => s.relative_shift(nu, x.a, x.b) as i64,
        Kind::F => s.relative_shift(nu, x.b, x.a) as i64,
        _ => 0,
    };
    let src = pbw_generators(sigma, p, nu);
    let dst = pbw_generators(sigma_dot, p_dot, nu);
    let mut image: Vec<PbwIndex> = src
        .iter()
        .map(|x| {
            let r = x.r as i64 - shift(sigma, x) + shift(sigma_dot, x);
            PbwIndex { r: r as usize, ..*x }
        })
        .collect();
    image.sort();
    let mut out = vec![Claim::check("iota-card", vec![], src.len() == dst.len(), || {
        format!("{} vs {} generators", src.len(), dst.len())
    })];
    let mut dedup = image.clone();
    dedup.dedup();
    out.push(Claim::check("iota-bij", vec![], image == dst && dedup.len() == image.len(), || {
        let missing = dst.iter().find(|x| !image.contains(x));
        let extra = image.iter().find(|x| !dst.contains(x));
        format!("image differs from target: missing {missing:?}, extra {extra:?}")
    }));
    for kind in [Kind::D, Kind::E, Kind::F] {
        let a = src.iter().filter(|x| x.kind == kind).count();
        let b = dst.iter().filter(|x| x.kind == kind).count();
        out.push(Claim::check(&kind_id("iota-card", kind), vec![], a == b, || format!("{a} vs {b}")));
    }
    Ok(CheckReport::from_claims(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{GenKey, Invariants};
    use crate::pyramid::Pyramid;

    fn setup(q: &[usize], k: usize) -> (Invariants, GeneratorTable) {
        let inv = Invariants::new(Pyramid::from_heights(q).unwrap(), k).unwrap();
        let n = inv.sigma().n();
        let tab = inv.generators_direct(&Shape::ones(n)).unwrap();
        (inv, tab)
    }

    #[test]
    fn one_two_defining_relations() {
        let (inv, tab) = setup(&[1, 2], 6);
        let rel = Relations::new(inv.algebra(), &tab, None).unwrap();
        let rep = rel.defining().unwrap();
        assert!(rep.all_pass(), "{:?}", rep.failures().next());
        assert!(rep.claims.iter().any(|c| c.id == "r4" && c.idx == vec![1, 1, 1, 1]));
        assert!(rep.summary.vacuous > 0);
        let par = rel.parabolic().unwrap();
        assert!(par.all_pass(), "{:?}", par.failures().next());
        assert!(Relations::new(inv.algebra(), &tab, Some(7)).is_err());
    }

    #[test]
    fn rectangle_rtt_and_shapes() {
        let inv = Invariants::new(Pyramid::from_heights(&[2, 2]).unwrap(), 4).unwrap();
        for nu in inv.sigma().admissible_shapes() {
            let tab = inv.generators_direct(&nu).unwrap();
            let rep = Relations::new(inv.algebra(), &tab, None).unwrap().parabolic().unwrap();
            assert!(rep.all_pass(), "shape {nu}: {:?}", rep.failures().next());
            assert!(check_invariance(inv.algebra(), &tab).unwrap().all_pass());
            assert!(check_construction(&inv, &nu).unwrap().all_pass());
        }
    }

    #[test]
    fn corrupted_generator_is_caught() {
        let (inv, mut tab) = setup(&[1, 2], 4);
        let alg = inv.algebra();
        let key = GenKey::new(Kind::D, 1, 1, 1, 1);
        let bad = tab.get(&key).unwrap().add(&alg.e(1, 2));
        tab.entries_mut().insert(key, bad);
        let rep = check_invariance(alg, &tab).unwrap();
        let f: Vec<_> = rep.failures().collect();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].id, "inv-D");
        assert!(f[0].witness.as_ref().unwrap().contains("e_"));
        assert!(!Relations::new(alg, &tab, None).unwrap().defining().unwrap().all_pass());
    }

    #[test]
    fn truncation_and_traninv() {
        let (inv, tab) = setup(&[1, 2], 5);
        let p1 = inv.pyramid().p()[0];
        let rep = check_truncation(inv.algebra(), &tab, p1);
        assert_eq!(rep.summary.pass, 4);
        assert!(check_traninv(inv.sums()).unwrap().all_pass());
        let inv = Invariants::new(Pyramid::from_heights(&[1, 2, 1]).unwrap(), 4).unwrap();
        assert!(check_traninv(inv.sums()).unwrap().all_pass());
    }

    #[test]
    fn pbw_audit_counts() {
        let p = Pyramid::from_heights(&[2, 2, 3, 1]).unwrap();
        let s = p.shift_matrix().unwrap();
        let rep = pbw_degree_audit(&s, p.p(), &Shape::ones(3), 8).unwrap();
        assert!(rep.all_pass());
        let gens = pbw_generators(&s, p.p(), &Shape::ones(3));
        assert_eq!(gens.len(), 18);
        let c = hilbert_counts(&[1, 1, 2], 2);
        assert_eq!(c, vec![1, 3, 7]);
        let bad = audit_degrees(&[1, 2], &[1, 1], 3);
        assert!(!bad.all_pass());
    }

    #[test]
    fn iota_between_justifications() {
        let a = Pyramid::from_heights(&[1, 2]).unwrap();
        let b = Pyramid::from_heights(&[2, 1]).unwrap();
        let (sa, sb) = (a.shift_matrix().unwrap(), b.shift_matrix().unwrap());
        let nu = Shape::ones(2);
        let rep = check_iota_reindex(&sa, a.p(), &sb, b.p(), &nu).unwrap();
        assert!(rep.all_pass());
        let c = Pyramid::from_heights(&[1, 2, 1]).unwrap();
        assert!(matches!(
            check_iota_reindex(&sa, a.p(), &c.shift_matrix().unwrap(), c.p(), &nu),
            Err(YwError::RowLengthMismatch(..))
        ));
    }
}
