//! Exact arithmetic in U(gl_N) in PBW normal form.
//!
//! Generators are the matrix units `e_{i,j}`. They are totally ordered with
//! every parabolic generator (`col(i) ≤ col(j)`) before every generator of the
//! nilpotent layer `m` (`col(i) > col(j)`), and lexicographically by `(i, j)`
//! inside each class. A monomial is a nondecreasing sequence of generator ranks
//! in that order, and an [`Element`] is a finite sparse sum of monomials with
//! exact rational coefficients. Because the `m` layer comes last, the
//! projection `pr_χ` along `U(g)I_χ` is a substitution on the right tail of
//! each monomial.
//!
//! Straightening uses `[e_{i,j}, e_{h,k}] = δ_{h,j} e_{i,k} − δ_{i,k} e_{h,j}`
//! and memoises the normal form of `monomial · generator` and
//! `generator · monomial` in interior caches, so an [`Algebra`] is a
//! single-threaded context; build one per thread when fanning out.

use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use std::cell::RefCell;
use std::collections::hash_map::Entry;
use std::rc::Rc;

use crate::error::{Result, YwError};
use crate::pyramid::Pyramid;
use crate::rational::Rational;

/// Rank of a generator in the generator order.
pub type Gen = u8;
/// A PBW monomial: nondecreasing generator ranks.
pub type Mono = SmallVec<[Gen; 14]>;

type Terms = FxHashMap<Mono, Rational>;
type Cached = Rc<Vec<(Mono, Rational)>>;

/// A finite exact-rational combination of PBW monomials with no zero terms.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Element {
    terms: Terms,
}

impl Element {
    /// The zero element.
    pub fn zero() -> Element {
        Element::default()
    }

    /// The unit.
    pub fn one() -> Element {
        Element::scalar(Rational::ONE)
    }

    /// A scalar multiple of the unit.
    pub fn scalar(c: Rational) -> Element {
        let mut e = Element::zero();
        e.add_term(Mono::new(), c);
        e
    }

    /// A single monomial with coefficient `c`; the monomial must be sorted.
    pub fn monomial(m: Mono, c: Rational) -> Element {
        let mut e = Element::zero();
        e.add_term(m, c);
        e
    }

    /// True if there are no terms.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Same as [`Element::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterate over terms in arbitrary order.
    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    /// Terms sorted by monomial (the canonical order of the JSON format).
    pub fn sorted_terms(&self) -> Vec<(&Mono, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// Coefficient of a monomial.
    pub fn coeff(&self, m: &[Gen]) -> Rational {
        self.terms.get(m).cloned().unwrap_or(Rational::ZERO)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&[])
    }

    /// Adds `c · m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Mono, c: Rational) {
        add_into(&mut self.terms, m, &c);
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Element, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            add_into(&mut self.terms, m.clone(), &(v * c));
        }
    }

    /// `self + other`.
    pub fn add(&self, other: &Element) -> Element {
        let mut r = self.clone();
        r.add_scaled(other, &Rational::ONE);
        r
    }

    /// `self − other`.
    pub fn sub(&self, other: &Element) -> Element {
        let mut r = self.clone();
        r.add_scaled(other, &Rational::int(-1));
        r
    }

    /// `c · self`.
    pub fn scale(&self, c: &Rational) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// `−self`.
    pub fn neg(&self) -> Element {
        self.scale(&Rational::int(-1))
    }

    /// Applies a map to every monomial coefficient-wise (used by substitutions
    /// that keep monomials sorted).
    pub fn filter_map_monomials(&self, mut f: impl FnMut(&Mono) -> Option<Mono>) -> Element {
        let mut out = Terms::default();
        for (m, c) in &self.terms {
            if let Some(m2) = f(m) {
                add_into(&mut out, m2, c);
            }
        }
        Element { terms: out }
    }
}

impl std::fmt::Debug for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let t: Vec<String> =
            self.sorted_terms().iter().map(|(m, c)| format!("{c:?}*{:?}", m.as_slice())).collect();
        write!(f, "Element[{}]", t.join(" + "))
    }
}

fn add_into(map: &mut Terms, m: Mono, c: &Rational) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        Entry::Occupied(mut o) => {
            let v = o.get() + c;
            if v.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = v;
            }
        }
        Entry::Vacant(v) => {
            v.insert(c.clone());
        }
    }
}

/// The enveloping algebra U(gl_N) with the generator order induced by a
/// column assignment of the indices `1..=N`.
pub struct Algebra {
    big_n: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    rho: Vec<i64>,
    rank: Vec<Gen>,
    pair: Vec<(u8, u8)>,
    n_parabolic: usize,
    comm: Vec<SmallVec<[(Gen, i8); 2]>>,
    right_cache: RefCell<FxHashMap<(Mono, Gen), Cached>>,
    left_cache: RefCell<FxHashMap<(Gen, Mono), Cached>>,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Algebra(N={}, cols={:?})", self.big_n, self.cols)
    }
}

impl Algebra {
    /// Plain U(gl_N): one column, so every generator is parabolic and the
    /// order is lexicographic.
    pub fn gl(big_n: usize) -> Algebra {
        Algebra::build((1..=big_n).collect(), vec![1; big_n], vec![0])
    }

    /// U(gl_N) bound to a pyramid: generator classes, χ and ρ come from it.
    pub fn for_pyramid(p: &Pyramid) -> Algebra {
        let rows = (1..=p.big_n()).map(|b| p.row(b)).collect();
        let cols = (1..=p.big_n()).map(|b| p.col(b)).collect();
        let rho = (1..=p.l()).map(|c| p.rho(c)).collect();
        Algebra::build(rows, cols, rho)
    }

    fn build(rows: Vec<usize>, cols: Vec<usize>, rho: Vec<i64>) -> Algebra {
        let big_n = cols.len();
        assert!(big_n * big_n <= 256, "N = {big_n} exceeds the supported rank 16");
        let mut idx: Vec<(u8, u8)> = Vec::with_capacity(big_n * big_n);
        for i in 1..=big_n {
            for j in 1..=big_n {
                idx.push((i as u8, j as u8));
            }
        }
        let is_par = |&(i, j): &(u8, u8)| cols[i as usize - 1] <= cols[j as usize - 1];
        let mut pair: Vec<(u8, u8)> = idx.iter().copied().filter(is_par).collect();
        let n_parabolic = pair.len();
        pair.extend(idx.iter().copied().filter(|x| !is_par(x)));
        let mut rank = vec![0 as Gen; big_n * big_n];
        for (r, &(i, j)) in pair.iter().enumerate() {
            rank[(i as usize - 1) * big_n + (j as usize - 1)] = r as Gen;
        }
        let g = pair.len();
        let mut comm = vec![SmallVec::new(); g * g];
        for a in 0..g {
            for b in 0..g {
                let (i, j) = pair[a];
                let (h, k) = pair[b];
                let mut v: SmallVec<[(Gen, i8); 2]> = SmallVec::new();
                if h == j {
                    v.push((rank[(i as usize - 1) * big_n + (k as usize - 1)], 1));
                }
                if i == k {
                    let r = rank[(h as usize - 1) * big_n + (j as usize - 1)];
                    if let Some(pos) = v.iter().position(|x| x.0 == r) {
                        v.remove(pos);
                    } else {
                        v.push((r, -1));
                    }
                }
                comm[a * g + b] = v;
            }
        }
        Algebra {
            big_n,
            rows,
            cols,
            rho,
            rank,
            pair,
            n_parabolic,
            comm,
            right_cache: RefCell::default(),
            left_cache: RefCell::default(),
        }
    }

    /// The rank N.
    pub fn big_n(&self) -> usize {
        self.big_n
    }

    /// Number of generators `N²`.
    pub fn num_gens(&self) -> usize {
        self.pair.len()
    }

    /// Column of index `i`.
    pub fn col(&self, i: usize) -> usize {
        self.cols[i - 1]
    }

    /// Row of index `i`.
    pub fn row(&self, i: usize) -> usize {
        self.rows[i - 1]
    }

    /// Rank of `e_{i,j}`.
    pub fn gen(&self, i: usize, j: usize) -> Gen {
        assert!(i >= 1 && j >= 1 && i <= self.big_n && j <= self.big_n, "index ({i},{j}) out of range");
        self.rank[(i - 1) * self.big_n + (j - 1)]
    }

    /// The pair `(i, j)` of a rank.
    pub fn pair(&self, g: Gen) -> (usize, usize) {
        let (i, j) = self.pair[g as usize];
        (i as usize, j as usize)
    }

    /// True for generators of the parabolic `p`.
    pub fn is_parabolic_gen(&self, g: Gen) -> bool {
        (g as usize) < self.n_parabolic
    }

    /// Ranks of the `m`-layer generators, in generator order.
    pub fn m_gens(&self) -> Vec<Gen> {
        (self.n_parabolic..self.pair.len()).map(|g| g as Gen).collect()
    }

    /// Ranks of the parabolic generators, in generator order.
    pub fn p_gens(&self) -> Vec<Gen> {
        (0..self.n_parabolic).map(|g| g as Gen).collect()
    }

    /// Kazhdan degree `col(j) − col(i) + 1` of a generator.
    pub fn gen_degree(&self, g: Gen) -> i64 {
        let (i, j) = self.pair(g);
        self.col(j) as i64 - self.col(i) as i64 + 1
    }

    /// Kazhdan degree of a monomial.
    pub fn mono_degree(&self, m: &[Gen]) -> i64 {
        m.iter().map(|&g| self.gen_degree(g)).sum()
    }

    /// Kazhdan degree of an element (`None` for zero).
    pub fn degree(&self, x: &Element) -> Option<i64> {
        x.iter().map(|(m, _)| self.mono_degree(m)).max()
    }

    /// The matrix unit `e_{i,j}` as an element.
    pub fn e(&self, i: usize, j: usize) -> Element {
        Element::monomial(Mono::from_slice(&[self.gen(i, j)]), Rational::ONE)
    }

    /// `ẽ_{i,j} = (−1)^{col(j)−col(i)} (e_{i,j} + δ_{i,j} ρ_{col(i)})`.
    pub fn e_tilde(&self, i: usize, j: usize) -> Element {
        let sign = if (self.col(j) + self.col(i)) % 2 == 0 { 1 } else { -1 };
        let mut x = self.e(i, j).scale(&Rational::int(sign));
        if i == j {
            x.add_term(Mono::new(), Rational::int(self.rho[self.col(i) - 1]));
        }
        x
    }

    /// `χ(e_{f,g})`: 1 if `f`, `g` share a row and `col(f) = col(g) + 1`.
    pub fn chi(&self, g: Gen) -> i64 {
        let (f, h) = self.pair(g);
        (self.row(f) == self.row(h) && self.col(f) == self.col(h) + 1) as i64
    }

    /// True if every monomial uses parabolic generators only.
    pub fn is_parabolic(&self, x: &Element) -> bool {
        x.iter().all(|(m, _)| m.iter().all(|&g| self.is_parabolic_gen(g)))
    }

    /// Errors with a witness unless `x` lies in U(p).
    pub fn require_parabolic(&self, x: &Element) -> Result<()> {
        for (m, _) in x.iter() {
            if let Some(&g) = m.iter().find(|&&g| !self.is_parabolic_gen(g)) {
                let (i, j) = self.pair(g);
                return Err(YwError::NotInParabolic(format!("generator e_{i},{j} occurs")));
            }
        }
        Ok(())
    }

    /// Sorts an arbitrary word of generators into a normal-form element.
    pub fn word(&self, w: &[Gen]) -> Element {
        let mut cur = Element::one();
        for &g in w {
            cur = self.mul_gen_right(&cur, g);
        }
        cur
    }

    /// `[g, h]` as a short list of signed generators.
    pub fn gen_bracket(&self, g: Gen, h: Gen) -> &[(Gen, i8)] {
        &self.comm[g as usize * self.pair.len() + h as usize]
    }

    fn commutes(&self, g: Gen, h: Gen) -> bool {
        self.comm[g as usize * self.pair.len() + h as usize].is_empty()
    }

    /// Normal form of `m · g`, added to `out` with coefficient `c`.
    fn acc_mono_gen(&self, m: &[Gen], g: Gen, c: &Rational, out: &mut Terms) {
        let pos = m.partition_point(|&x| x <= g);
        if m[pos..].iter().all(|&y| self.commutes(y, g)) {
            let mut v = Mono::with_capacity(m.len() + 1);
            v.extend_from_slice(&m[..pos]);
            v.push(g);
            v.extend_from_slice(&m[pos..]);
            add_into(out, v, c);
            return;
        }
        let key = (Mono::from_slice(m), g);
        let cached = self.right_cache.borrow().get(&key).cloned();
        let terms = match cached {
            Some(t) => t,
            None => {
                let (last, rest) = m.split_last().unwrap();
                let mut acc = Terms::default();
                let mut first = Terms::default();
                self.acc_mono_gen(rest, g, &Rational::ONE, &mut first);
                for (m1, c1) in &first {
                    self.acc_mono_gen(m1, *last, c1, &mut acc);
                }
                for &(h, s) in self.gen_bracket(*last, g) {
                    self.acc_mono_gen(rest, h, &Rational::int(s as i64), &mut acc);
                }
                let t: Cached = Rc::new(acc.into_iter().collect());
                self.right_cache.borrow_mut().insert(key, t.clone());
                t
            }
        };
        for (m1, c1) in terms.iter() {
            add_into(out, m1.clone(), &(c1 * c));
        }
    }

    /// Normal form of `g · m`, added to `out` with coefficient `c`.
    fn acc_gen_mono(&self, g: Gen, m: &[Gen], c: &Rational, out: &mut Terms) {
        let pos = m.partition_point(|&x| x < g);
        if m[..pos].iter().all(|&y| self.commutes(g, y)) {
            let mut v = Mono::with_capacity(m.len() + 1);
            v.extend_from_slice(&m[..pos]);
            v.push(g);
            v.extend_from_slice(&m[pos..]);
            add_into(out, v, c);
            return;
        }
        let key = (g, Mono::from_slice(m));
        let cached = self.left_cache.borrow().get(&key).cloned();
        let terms = match cached {
            Some(t) => t,
            None => {
                let (first_gen, rest) = m.split_first().unwrap();
                let mut acc = Terms::default();
                let mut inner = Terms::default();
                self.acc_gen_mono(g, rest, &Rational::ONE, &mut inner);
                for (m1, c1) in &inner {
                    self.acc_gen_mono(*first_gen, m1, c1, &mut acc);
                }
                for &(h, s) in self.gen_bracket(g, *first_gen) {
                    self.acc_gen_mono(h, rest, &Rational::int(s as i64), &mut acc);
                }
                let t: Cached = Rc::new(acc.into_iter().collect());
                self.left_cache.borrow_mut().insert(key, t.clone());
                t
            }
        };
        for (m1, c1) in terms.iter() {
            add_into(out, m1.clone(), &(c1 * c));
        }
    }

    /// `x · g`.
    pub fn mul_gen_right(&self, x: &Element, g: Gen) -> Element {
        let mut out = Terms::default();
        for (m, c) in x.iter() {
            self.acc_mono_gen(m, g, c, &mut out);
        }
        Element { terms: out }
    }

    /// `g · x`.
    pub fn mul_gen_left(&self, g: Gen, x: &Element) -> Element {
        let mut out = Terms::default();
        for (m, c) in x.iter() {
            self.acc_gen_mono(g, m, c, &mut out);
        }
        Element { terms: out }
    }

    fn acc_mono_mono(&self, a: &[Gen], b: &[Gen], c: &Rational, out: &mut Terms) {
        if b.is_empty() {
            add_into(out, Mono::from_slice(a), c);
            return;
        }
        if a.is_empty() {
            add_into(out, Mono::from_slice(b), c);
            return;
        }
        if a.last() <= b.first() {
            let mut v = Mono::from_slice(a);
            v.extend_from_slice(b);
            add_into(out, v, c);
            return;
        }
        if a.len() <= b.len() {
            // peel generators of `a` off from the right, multiplying into `b`
            let mut cur = Terms::default();
            self.acc_gen_mono(a[a.len() - 1], b, &Rational::ONE, &mut cur);
            for &g in a[..a.len() - 1].iter().rev() {
                let mut next = Terms::default();
                for (m, v) in &cur {
                    self.acc_gen_mono(g, m, v, &mut next);
                }
                cur = next;
            }
            for (m, v) in cur {
                add_into(out, m, &(&v * c));
            }
        } else {
            let mut cur = Terms::default();
            self.acc_mono_gen(a, b[0], &Rational::ONE, &mut cur);
            for &g in &b[1..] {
                let mut next = Terms::default();
                for (m, v) in &cur {
                    self.acc_mono_gen(m, g, v, &mut next);
                }
                cur = next;
            }
            for (m, v) in cur {
                add_into(out, m, &(&v * c));
            }
        }
    }

    /// The product `a · b` in PBW normal form.
    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = Terms::default();
        for (mb, cb) in b.iter() {
            for (ma, ca) in a.iter() {
                self.acc_mono_mono(ma, mb, &(ca * cb), &mut out);
            }
        }
        Element { terms: out }
    }

    /// `out += c · a · b` without allocating an intermediate element.
    pub fn mul_acc(&self, a: &Element, b: &Element, c: &Rational, out: &mut Element) {
        for (mb, cb) in b.iter() {
            for (ma, ca) in a.iter() {
                self.acc_mono_mono(ma, mb, &(&(ca * cb) * c), &mut out.terms);
            }
        }
    }

    /// The commutator `[a, b] = ab − ba`.
    pub fn bracket(&self, a: &Element, b: &Element) -> Element {
        let mut r = self.mul(a, b);
        self.mul_acc(b, a, &Rational::int(-1), &mut r);
        r
    }

    /// `pr_χ`: replace the trailing `m`-layer factors of each monomial by
    /// their χ-values.
    pub fn project_chi(&self, x: &Element) -> Element {
        let mut out = Terms::default();
        for (m, c) in x.iter() {
            let cut = m.partition_point(|&g| self.is_parabolic_gen(g));
            let factor: i64 = m[cut..].iter().map(|&g| self.chi(g)).product();
            if factor != 0 {
                add_into(&mut out, Mono::from_slice(&m[..cut]), &(c * &Rational::int(factor)));
            }
        }
        Element { terms: out }
    }

    /// The twisted action `x · y = pr_χ([x, y])` of an `m`-layer element `x`
    /// on `y ∈ U(p)`.
    pub fn twisted_action(&self, x: &Element, y: &Element) -> Result<Element> {
        self.require_parabolic(y)?;
        for (m, _) in x.iter() {
            if m.len() != 1 || self.is_parabolic_gen(m[0]) {
                return Err(YwError::IndexOutOfRange(
                    "twisted action needs a combination of m-layer generators".into(),
                ));
            }
        }
        let mut out = Element::zero();
        for (m, c) in x.iter() {
            out.add_scaled(&self.twisted_gen(m[0], y), c);
        }
        Ok(out)
    }

    /// `pr_χ([g, y])` for a single `m`-layer generator `g` and `y ∈ U(p)`.
    pub fn twisted_gen(&self, g: Gen, y: &Element) -> Element {
        let gy = self.mul_gen_left(g, y);
        let mut r = self.project_chi(&gy);
        let chi = self.chi(g);
        if chi != 0 {
            r.add_scaled(y, &Rational::int(-chi));
        }
        r
    }

    /// Checks twisted `m`-invariance against every `m`-layer generator and
    /// returns the first violating `(f, g)` with its nonzero residue.
    pub fn m_invariance_witness(&self, y: &Element) -> Result<Option<((usize, usize), Element)>> {
        self.require_parabolic(y)?;
        for g in self.m_gens() {
            let r = self.twisted_gen(g, y);
            if !r.is_zero() {
                return Ok(Some((self.pair(g), r)));
            }
        }
        Ok(None)
    }

    /// True iff `y` is a twisted `m`-invariant.
    pub fn is_m_invariant(&self, y: &Element) -> Result<bool> {
        Ok(self.m_invariance_witness(y)?.is_none())
    }

    /// Converts an element to its `(pairs, coefficient)` terms sorted by monomial.
    pub fn readable_terms(&self, x: &Element) -> Vec<(Vec<(usize, usize)>, Rational)> {
        x.sorted_terms()
            .into_iter()
            .map(|(m, c)| (m.iter().map(|&g| self.pair(g)).collect(), c.clone()))
            .collect()
    }

    /// Builds an element from readable terms, normal-ordering each word.
    pub fn from_readable(&self, terms: &[(Vec<(usize, usize)>, Rational)]) -> Result<Element> {
        let mut out = Element::zero();
        for (w, c) in terms {
            let mut word = Vec::with_capacity(w.len());
            for &(i, j) in w {
                if i == 0 || j == 0 || i > self.big_n || j > self.big_n {
                    return Err(YwError::IndexOutOfRange(format!("e_{i},{j} with N = {}", self.big_n)));
                }
                word.push(self.gen(i, j));
            }
            out.add_scaled(&self.word(&word), c);
        }
        Ok(out)
    }

    /// Drops the memo tables (they only ever grow).
    pub fn clear_caches(&self) {
        self.right_cache.borrow_mut().clear();
        self.left_cache.borrow_mut().clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_produces_commutator() {
        let a = Algebra::gl(2);
        let x = a.mul(&a.e(1, 2), &a.e(2, 1));
        let expect = a.mul(&a.e(2, 1), &a.e(1, 2)).add(&a.e(1, 1)).sub(&a.e(2, 2));
        assert_eq!(x, expect);
        // e_12 e_21 is already sorted in the lexicographic order
        assert_eq!(x.len(), 1);
        let y = a.mul(&a.e(2, 1), &a.e(1, 2));
        assert_eq!(y.len(), 3);
    }

    #[test]
    fn unit_and_squares() {
        let a = Algebra::gl(3);
        let e = a.e(1, 3);
        assert_eq!(a.mul(&Element::one(), &e), e);
        let sq = a.mul(&e, &e);
        assert_eq!(sq.len(), 1);
        assert_eq!(sq.coeff(&[a.gen(1, 3), a.gen(1, 3)]), Rational::ONE);
    }

    #[test]
    fn chi_projection_small_pyramid() {
        let p = Pyramid::new(&[1, 2], 2).unwrap();
        let a = Algebra::for_pyramid(&p);
        let x = a.mul(&a.e(2, 3), &a.e(3, 1));
        assert_eq!(a.project_chi(&x), a.e(2, 3));
        assert_eq!(a.chi(a.gen(3, 1)), 1);
        // ẽ_{1,1} = e_{1,1} − 1
        assert_eq!(a.e_tilde(1, 1), a.e(1, 1).sub(&Element::one()));
        let t = a.e_tilde(3, 1);
        assert_eq!(a.project_chi(&t), Element::scalar(Rational::int(-1)));
    }

    #[test]
    fn invariance_of_simple_generators() {
        let p = Pyramid::new(&[1, 2], 2).unwrap();
        let a = Algebra::for_pyramid(&p);
        assert!(a.is_m_invariant(&a.e(2, 2)).unwrap());
        assert!(a.is_m_invariant(&a.e(2, 3)).unwrap());
        assert!(a.is_m_invariant(&Element::one()).unwrap());
        let bad = a.e(2, 2).add(&a.e(1, 2));
        assert!(!a.is_m_invariant(&bad).unwrap());
        assert!(a.twisted_gen(a.gen(3, 1), &a.e(2, 2)).is_zero());
    }
}
