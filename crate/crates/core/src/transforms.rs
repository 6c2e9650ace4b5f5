//! Miura transform, column removal, comultiplications and the rectangular
//! special case.
//!
//! Tensor products `U(p') ⊗ U(p'')` of two column blocks of a pyramid are
//! realised inside `U(gl_N)` of the full pyramid as the block-diagonal
//! subalgebra: generators of different blocks commute there, and the
//! generator order of the full pyramid restricts to the generator order of
//! each block, so PBW normal forms agree. [`TensorElement`] converts to the
//! explicit pair-of-monomials form.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;
use std::rc::Rc;

use crate::engine::{Algebra, Element, Gen, Mono};
use crate::error::{Result, YwError};
use crate::invariants::{higher_roots, GeneratorTable, Kind, PathSums, RootKey};
use crate::json::{TensorJson, TensorTermJson};
use crate::pyramid::{Pyramid, Shape};
use crate::rational::Rational;
use crate::relations::{hilbert_counts, pbw_generators, CheckReport, Claim, PbwIndex};

/// Image of one generator under a substitution homomorphism:
/// `gen + shift`, with `gen = None` meaning the scalar `shift` alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    /// Target generator, if any.
    pub gen: Option<Gen>,
    /// Additive scalar.
    pub shift: Rational,
}

impl Image {
    /// The generator `g` unchanged.
    pub fn gen(g: Gen) -> Image {
        Image { gen: Some(g), shift: Rational::ZERO }
    }

    /// `g + c`.
    pub fn shifted(g: Gen, c: i64) -> Image {
        Image { gen: Some(g), shift: Rational::int(c) }
    }

    /// Zero.
    pub fn zero() -> Image {
        Image { gen: None, shift: Rational::ZERO }
    }
}

/// Applies the algebra homomorphism `U(src) → U(dst)` determined by
/// `generator ↦ Image`. The generator part of the map must be
/// order-preserving, which every block embedding and projection in this
/// module is; the image of a normal-form monomial is then expanded by
/// choosing, per factor, either the generator or the scalar, and each
/// choice is already in normal form.
pub fn substitute(dst: &Algebra, x: &Element, map: impl Fn(Gen) -> Image) -> Element {
    let mut cache: BTreeMap<Gen, Image> = BTreeMap::new();
    let mut out = Element::zero();
    let mut partial: Vec<(Mono, Rational)> = Vec::new();
    let mut next: Vec<(Mono, Rational)> = Vec::new();
    for (m, c) in x.iter() {
        partial.clear();
        partial.push((Mono::new(), c.clone()));
        for &g in m.iter() {
            let img = cache.entry(g).or_insert_with(|| map(g)).clone();
            next.clear();
            for (pm, pc) in partial.drain(..) {
                if !img.shift.is_zero() {
                    next.push((pm.clone(), &pc * &img.shift));
                }
                if let Some(h) = img.gen {
                    debug_assert!(pm.last().map_or(true, |&l| l <= h), "substitution is not order-preserving");
                    let mut pm = pm;
                    pm.push(h);
                    next.push((pm, pc));
                }
            }
            std::mem::swap(&mut partial, &mut next);
            if partial.is_empty() {
                break;
            }
        }
        for (pm, pc) in partial.drain(..) {
            out.add_term(pm, pc);
        }
    }
    let _ = dst;
    out
}

/// Embeds an element of the algebra of a sub-pyramid occupying bricks
/// `offset + 1 ..` of `dst` (same columns up to a shift, same rows).
pub fn embed_block(src: &Algebra, dst: &Algebra, offset: usize, x: &Element) -> Element {
    substitute(dst, x, |g| {
        let (i, j) = src.pair(g);
        Image::gen(dst.gen(i + offset, j + offset))
    })
}

/// The substitution homomorphism of a comultiplication restricted to the
/// columns `first..=last` of `pyr`, cutting after column `cut`:
/// generators straddling the cut go to zero, generators left of the cut pick
/// up the diagonal shift by the number of bricks in columns `cut+1..=last`,
/// and all other generators are fixed.
pub fn split_segment(pyr: &Pyramid, alg: &Algebra, x: &Element, first: usize, last: usize, cut: usize) -> Element {
    let right: usize = pyr.q()[cut..last].iter().sum();
    substitute(alg, x, |g| {
        let (i, j) = alg.pair(g);
        let (ci, cj) = (alg.col(i), alg.col(j));
        let inside = |c: usize| c >= first && c <= last;
        if !inside(ci) || !inside(cj) {
            return Image::gen(g);
        }
        match (ci <= cut, cj <= cut) {
            (true, true) => Image::shifted(g, if i == j { right as i64 } else { 0 }),
            (false, false) => Image::gen(g),
            _ => Image::zero(),
        }
    })
}

/// A splitting `π = π' ⊗ π''` of a pyramid into its first `l'` and last
/// `l''` columns, both read with the height bound of `π`.
pub struct Split {
    pyr: Pyramid,
    alg: Rc<Algebra>,
    l1: usize,
    left: Option<Pyramid>,
    right: Option<Pyramid>,
}

impl Split {
    /// Errors with `BadSplit` unless `l1 + l2 = l`.
    pub fn new(pyr: &Pyramid, alg: Rc<Algebra>, l1: usize, l2: usize) -> Result<Split> {
        if l1 + l2 != pyr.l() {
            return Err(YwError::BadSplit(format!("{l1} + {l2} differs from the level {}", pyr.l())));
        }
        let left = (l1 > 0).then(|| pyr.sub_pyramid(&(1..=l1).collect::<Vec<_>>())).transpose()?;
        let right = (l2 > 0).then(|| pyr.sub_pyramid(&(l1 + 1..=pyr.l()).collect::<Vec<_>>())).transpose()?;
        Ok(Split { pyr: pyr.clone(), alg, l1, left, right })
    }

    /// Left factor `π'` (none when `l' = 0`).
    pub fn left(&self) -> Option<&Pyramid> {
        self.left.as_ref()
    }

    /// Right factor `π''` (none when `l'' = 0`).
    pub fn right(&self) -> Option<&Pyramid> {
        self.right.as_ref()
    }

    /// Number of bricks of `π'`.
    pub fn n1(&self) -> usize {
        self.left.as_ref().map_or(0, |p| p.big_n())
    }

    /// `Δ_{l',l''}(x)` for `x ∈ U(p)`.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.alg.require_parabolic(x)?;
        Ok(split_segment(&self.pyr, &self.alg, x, 1, self.pyr.l(), self.l1))
    }

    /// `y ⊗ 1` for `y` in the algebra of `π'`.
    pub fn embed_left(&self, src: &Algebra, y: &Element) -> Element {
        embed_block(src, &self.alg, 0, y)
    }

    /// `1 ⊗ y` for `y` in the algebra of `π''`.
    pub fn embed_right(&self, src: &Algebra, y: &Element) -> Element {
        embed_block(src, &self.alg, self.n1(), y)
    }

    /// Explicit tensor form of an element of the block-diagonal subalgebra.
    pub fn to_tensor(&self, x: &Element) -> Result<TensorElement> {
        TensorElement::from_block_diagonal(&self.alg, self.n1(), x)
    }
}

/// A finite sum of `c · m1 ⊗ m2` with `m1`, `m2` PBW monomials of the two
/// factors, written as lists of matrix-unit index pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorElement {
    /// Rank of the left factor.
    pub n1: usize,
    /// Rank of the right factor.
    pub n2: usize,
    /// Terms keyed by `(m1, m2)`.
    pub terms: BTreeMap<(Vec<(usize, usize)>, Vec<(usize, usize)>), Rational>,
}

impl TensorElement {
    /// Splits each monomial of a block-diagonal element of `alg` into its
    /// factors over the blocks `1..=n1` and `n1+1..=N`.
    pub fn from_block_diagonal(alg: &Algebra, n1: usize, x: &Element) -> Result<TensorElement> {
        let mut terms = BTreeMap::new();
        for (m, c) in x.iter() {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            for &g in m.iter() {
                let (i, j) = alg.pair(g);
                if i <= n1 && j <= n1 {
                    a.push((i, j));
                } else if i > n1 && j > n1 {
                    b.push((i - n1, j - n1));
                } else {
                    return Err(YwError::IndexOutOfRange(format!("e_{i},{j} straddles the tensor split at {n1}")));
                }
            }
            terms.insert((a, b), c.clone());
        }
        Ok(TensorElement { n1, n2: alg.big_n() - n1, terms })
    }

    /// Wire form.
    pub fn to_json(&self) -> TensorJson {
        let pairs = |v: &[(usize, usize)]| v.iter().map(|&(i, j)| [i, j]).collect();
        TensorJson {
            n1: self.n1,
            n2: self.n2,
            terms: self
                .terms
                .iter()
                .map(|((a, b), c)| TensorTermJson { c: c.clone(), m1: pairs(a), m2: pairs(b) })
                .collect(),
        }
    }
}

/// The minimal-shape data deciding which one-column removal applies.
fn baby_case(pyr: &Pyramid, right: bool) -> Result<(Shape, usize)> {
    let sigma = pyr.shift_matrix()?;
    let nu = sigma.minimal_shape();
    let n = sigma.n();
    let t = nu.part(nu.len());
    let ok = if right {
        t == n || sigma.get(n - t, n - t + 1) != 0
    } else {
        t == n || sigma.get(n - t + 1, n - t) != 0
    };
    if !ok || pyr.l() < 2 {
        let side = if right { "rightmost" } else { "leftmost" };
        return Err(YwError::CaseNotApplicable(format!(
            "removing the {side} column of {:?} (t = {t}) is not a baby comultiplication",
            pyr.q()
        )));
    }
    let height = if right { pyr.q()[pyr.l() - 1] } else { pyr.q()[0] };
    debug_assert_eq!(height, t);
    Ok((nu, t))
}

/// `φ_R = Δ_{l−1,1}`; errors with `CaseNotApplicable` unless the right baby
/// comultiplication is defined.
pub fn phi_right(pyr: &Pyramid, alg: Rc<Algebra>, x: &Element) -> Result<Element> {
    baby_case(pyr, true)?;
    Split::new(pyr, alg, pyr.l() - 1, 1)?.apply(x)
}

/// `φ_L = Δ_{1,l−1}`; errors with `CaseNotApplicable` unless the left baby
/// comultiplication is defined.
pub fn phi_left(pyr: &Pyramid, alg: Rc<Algebra>, x: &Element) -> Result<Element> {
    baby_case(pyr, false)?;
    Split::new(pyr, alg, 1, pyr.l() - 1)?.apply(x)
}

/// Miura transform `μ = η ∘ ξ`: drop every monomial containing a generator
/// of the nilradical, then shift `e_{i,i}` in column `c` by
/// `q_{c+1} + … + q_l`.
pub fn miura(pyr: &Pyramid, alg: &Algebra, x: &Element) -> Result<Element> {
    alg.require_parabolic(x)?;
    let mut tail = vec![0i64; pyr.l() + 1];
    for c in (1..pyr.l()).rev() {
        tail[c] = tail[c + 1] + pyr.q()[c] as i64;
    }
    Ok(substitute(alg, x, |g| {
        let (i, j) = alg.pair(g);
        if alg.col(i) != alg.col(j) {
            Image::zero()
        } else if i == j {
            Image::shifted(g, tail[alg.col(i)])
        } else {
            Image::gen(g)
        }
    }))
}

/// `ζ̂`: keeps the Levi blocks of the listed columns, renumbered into the
/// sub-pyramid `sub`, and kills the others.
///
/// A removed column of height `q_c` is killed in its shifted form
/// `e_{i,j} + δ_{i,j}(n − q_c)`, which is the image of `ẽ_{i,j}` under the
/// Miura transform. Killing the bare matrix units instead would leave the
/// constant `n − q_c` behind whenever a removed column is shorter than `n`,
/// and the square with the Miura transforms would not commute.
pub fn zeta_hat(pyr: &Pyramid, alg: &Algebra, sub_alg: &Algebra, cols: &[usize], x: &Element) -> Result<Element> {
    pyr.sub_pyramid(cols)?;
    let mut offset = vec![None; pyr.l() + 1];
    let mut acc = 0;
    for &c in cols {
        let start: usize = pyr.q()[..c - 1].iter().sum();
        offset[c] = Some((start, acc));
        acc += pyr.q()[c - 1];
    }
    for (m, _) in x.iter() {
        if let Some(&g) = m.iter().find(|&&g| {
            let (i, j) = alg.pair(g);
            alg.col(i) != alg.col(j)
        }) {
            let (i, j) = alg.pair(g);
            return Err(YwError::NotInLevi(format!("generator e_{i},{j} occurs")));
        }
    }
    Ok(substitute(sub_alg, x, |g| {
        let (i, j) = alg.pair(g);
        match offset[alg.col(i)] {
            Some((from, to)) => Image::gen(sub_alg.gen(i - from + to, j - from + to)),
            None if i == j => Image { gen: None, shift: Rational::int(pyr.q()[alg.col(i) - 1] as i64 - pyr.n() as i64) },
            None => Image::zero(),
        }
    }))
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

fn idx(v: &[usize]) -> Vec<i64> {
    v.iter().map(|&x| x as i64).collect()
}

fn diff_claim(id: &str, ix: Vec<i64>, alg: &Algebra, lhs: &Element, rhs: &Element) -> Claim {
    Claim::from_residue(id, ix, alg, &lhs.sub(rhs))
}

/// For every split `l' + l'' = l` with `l', l'' > 0` and all `i, j, r ≤ K`:
/// `Δ(T_{i,j;0}^{(r)}) = Σ_{s,k} T_{i,k;0}^{(s)} ⊗ T_{k,j;0}^{(r−s)}`; also
/// checks that every tensor term has Kazhdan degree at most `r`.
pub fn check_howithappens(sums: &PathSums) -> Result<CheckReport> {
    let pyr = sums.pyramid();
    let alg = sums.algebra_rc();
    let k = sums.order();
    let n = pyr.n();
    let mut out = Vec::new();
    for l1 in 1..pyr.l() {
        let split = Split::new(pyr, alg.clone(), l1, pyr.l() - l1)?;
        let (pl, pr) = (split.left().unwrap().clone(), split.right().unwrap().clone());
        let (sl, sr) = (PathSums::new(pl, k), PathSums::new(pr, k));
        let tl: Vec<Vec<Vec<Element>>> = (1..=n)
            .map(|i| (1..=n).map(|j| Ok(sl.t_series(i, j, 0)?.coeffs().iter().map(|x| split.embed_left(sl.algebra(), x)).collect())).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let tr: Vec<Vec<Vec<Element>>> = (1..=n)
            .map(|i| (1..=n).map(|j| Ok(sr.t_series(i, j, 0)?.coeffs().iter().map(|x| split.embed_right(sr.algebra(), x)).collect())).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        for i in 1..=n {
            for j in 1..=n {
                let t = sums.t_series(i, j, 0)?;
                for r in 1..=k {
                    let lhs = split.apply(t.coeff(r))?;
                    let mut rhs = Element::zero();
                    for s in 0..=r {
                        for kk in 0..n {
                            alg.mul_acc(&tl[i - 1][kk][s], &tr[kk][j - 1][r - s], &Rational::ONE, &mut rhs);
                        }
                    }
                    out.push(diff_claim("howithappens", idx(&[l1, i, j, r]), &alg, &lhs, &rhs));
                    let deg = alg.degree(&lhs).unwrap_or(0);
                    out.push(Claim::check("comult-filtered", idx(&[l1, i, j, r]), deg <= r as i64, || {
                        format!("image has Kazhdan degree {deg} > {r}")
                    }));
                }
            }
        }
    }
    Ok(CheckReport::from_claims(out))
}

/// Both bracketings of the double split of a pyramid with at least three
/// columns agree on every generator of `table`.
pub fn check_coassociativity(pyr: &Pyramid, alg: &Algebra, table: &GeneratorTable) -> Result<CheckReport> {
    let l = pyr.l();
    if l < 3 {
        return Err(YwError::BadSplit(format!("coassociativity needs at least 3 columns, got {l}")));
    }
    let mut out = Vec::new();
    for a in 1..l {
        for b in a + 1..l {
            // (Δ_{a,b−a} ⊗ 1) ∘ Δ_{b,l−b}  versus  (1 ⊗ Δ_{b−a,l−b}) ∘ Δ_{a,l−a}
            for (key, x) in table.entries() {
                let left = split_segment(pyr, alg, &split_segment(pyr, alg, x, 1, l, b), 1, b, a);
                let right = split_segment(pyr, alg, &split_segment(pyr, alg, x, 1, l, a), a + 1, l, b);
                let ix = vec![a as i64, b as i64, key.kind as i64, key.a as i64, key.i as i64, key.j as i64, key.r as i64];
                out.push(diff_claim("coass", ix, alg, &left, &right));
            }
        }
    }
    Ok(CheckReport::from_claims(out))
}

/// Splitting off every column in turn reproduces the Miura transform.
pub fn check_miura_iterate(pyr: &Pyramid, alg: &Algebra, table: &GeneratorTable) -> Result<CheckReport> {
    let mut out = Vec::new();
    for (key, x) in table.entries() {
        let mut y = x.clone();
        for cut in (1..pyr.l()).rev() {
            y = split_segment(pyr, alg, &y, 1, cut + 1, cut);
        }
        let ix = vec![key.kind as i64, key.a as i64, key.i as i64, key.j as i64, key.r as i64];
        out.push(diff_claim("miura-iterate", ix, alg, &y, &miura(pyr, alg, x)?));
    }
    Ok(CheckReport::from_claims(out))
}

/// Context for checking one-column removal: the pyramid, its generator
/// table at the minimal shape, and the table of the pyramid with the
/// rightmost (or leftmost) column removed at the same shape.
pub struct BabyData<'a> {
    /// The pyramid `π`.
    pub pyr: &'a Pyramid,
    /// `U(gl_N)` of `π`.
    pub alg: Rc<Algebra>,
    /// Generators of `π` at the minimal shape.
    pub table: &'a GeneratorTable,
    /// The pyramid with one column removed.
    pub small: &'a Pyramid,
    /// `U(gl_{N−t})` of the smaller pyramid.
    pub small_alg: &'a Algebra,
    /// Generators of the smaller pyramid at the same shape.
    pub small_table: &'a GeneratorTable,
}

impl BabyData<'_> {
    fn shape(&self) -> &Shape {
        self.table.shape()
    }

    /// `ẽ_{k,j}` of `U(gl_t)` placed on the bricks `first + 1 ..= first + t`
    /// of `π`: `e + δ_{k,j}(n − t)`.
    fn gl_t_tilde(&self, first: usize, k: usize, j: usize, t: usize) -> Element {
        let mut x = self.alg.e(first + k, first + j);
        if k == j {
            x.add_term(Mono::new(), Rational::int(self.pyr.n() as i64 - t as i64));
        }
        x
    }

    fn dot(&self, kind: Kind, a: usize, i: usize, j: usize, r: usize) -> Result<Element> {
        self.small_table.value(kind, a, i, j, r)
    }

    /// `φ_R` on every generator against the right-column baby formulas.
    pub fn check_right(&self) -> Result<CheckReport> {
        let (nu, t) = baby_case(self.pyr, true)?;
        if &nu != self.shape() || self.small_table.shape() != &nu {
            return Err(YwError::NotAdmissible("both tables must use the minimal shape".into()));
        }
        let m = nu.len();
        let big_n = self.pyr.big_n();
        let split = Split::new(self.pyr, self.alg.clone(), self.pyr.l() - 1, 1)?;
        let mut out = Vec::new();
        for (key, x) in self.table.entries() {
            if key.kind == Kind::Dt {
                continue;
            }
            let lhs = split.apply(x)?;
            let (a, i, j, r) = (key.a, key.i, key.j, key.r);
            let mut rhs = split.embed_left(self.small_alg, &self.dot(key.kind, a, i, j, r)?);
            let extra = match key.kind {
                Kind::D => a == m,
                Kind::E => a + 1 == m,
                _ => false,
            };
            if extra {
                for kk in 1..=t {
                    let y = split.embed_left(self.small_alg, &self.dot(key.kind, a, i, kk, r - 1)?);
                    self.alg.mul_acc(&y, &self.gl_t_tilde(big_n - t, kk, j, t), &Rational::ONE, &mut rhs);
                }
            }
            let ix = vec![a as i64, i as i64, j as i64, r as i64];
            out.push(diff_claim(&format!("phiR-{}", key.kind), ix, &self.alg, &lhs, &rhs));
        }
        Ok(CheckReport::from_claims(out))
    }

    /// `φ_L` on every generator against the left-column baby formulas.
    pub fn check_left(&self) -> Result<CheckReport> {
        let (nu, t) = baby_case(self.pyr, false)?;
        if &nu != self.shape() || self.small_table.shape() != &nu {
            return Err(YwError::NotAdmissible("both tables must use the minimal shape".into()));
        }
        let m = nu.len();
        let split = Split::new(self.pyr, self.alg.clone(), 1, self.pyr.l() - 1)?;
        let mut out = Vec::new();
        for (key, x) in self.table.entries() {
            if key.kind == Kind::Dt {
                continue;
            }
            let lhs = split.apply(x)?;
            let (a, i, j, r) = (key.a, key.i, key.j, key.r);
            let mut rhs = split.embed_right(self.small_alg, &self.dot(key.kind, a, i, j, r)?);
            let extra = match key.kind {
                Kind::D => a == m,
                Kind::F => a + 1 == m,
                _ => false,
            };
            if extra {
                for kk in 1..=t {
                    let y = split.embed_right(self.small_alg, &self.dot(key.kind, a, kk, j, r - 1)?);
                    self.alg.mul_acc(&self.gl_t_tilde(0, i, kk, t), &y, &Rational::ONE, &mut rhs);
                }
            }
            let ix = vec![a as i64, i as i64, j as i64, r as i64];
            out.push(diff_claim(&format!("phiL-{}", key.kind), ix, &self.alg, &lhs, &rhs));
        }
        Ok(CheckReport::from_claims(out))
    }

    /// The inductive descriptions of the generators of `π` through those of
    /// the smaller pyramid, inside `U(p)`, for every pivot `h ≤ t`.
    pub fn check_superbaby(&self, right: bool) -> Result<CheckReport> {
        let (nu, t) = baby_case(self.pyr, right)?;
        let m = nu.len();
        let alg = &*self.alg;
        let pyr = self.pyr;
        let big_n = pyr.big_n();
        let l = pyr.l();
        // embedding of the smaller pyramid: ẽ ↦ ẽ
        let embed = |y: &Element| -> Element {
            if right {
                substitute(alg, y, |g| {
                    let (i, j) = self.small_alg.pair(g);
                    Image::shifted(alg.gen(i, j), if i == j { -(t as i64) } else { 0 })
                })
            } else {
                embed_block(self.small_alg, alg, t, y)
            }
        };
        // brick of the removed column in position k, and its neighbour
        let outer = |k: usize| if right { big_n - t + k } else { k };
        let inner = |k: usize| {
            let b = outer(k);
            pyr.brick_at(pyr.row(b), if right { l - 1 } else { 2 }).expect("neighbouring column is tall enough")
        };
        let mut out = Vec::new();
        for (key, x) in self.table.entries() {
            if key.kind == Kind::Dt {
                continue;
            }
            let (a, i, j, r) = (key.a, key.i, key.j, key.r);
            let extra = match (key.kind, right) {
                (Kind::D, _) => a == m,
                (Kind::E, true) | (Kind::F, false) => a + 1 == m,
                _ => false,
            };
            let base = embed(&self.dot(key.kind, a, i, j, r)?);
            for h in 1..=t {
                let mut rhs = base.clone();
                if extra {
                    if right {
                        for kk in 1..=t {
                            let y = embed(&self.dot(key.kind, a, i, kk, r - 1)?);
                            alg.mul_acc(&y, &alg.e_tilde(outer(kk), outer(j)), &Rational::ONE, &mut rhs);
                        }
                        let y = embed(&self.dot(key.kind, a, i, h, r - 1)?);
                        rhs = rhs.add(&alg.bracket(&y, &alg.e_tilde(inner(h), outer(j))));
                    } else {
                        for kk in 1..=t {
                            let y = embed(&self.dot(key.kind, a, kk, j, r - 1)?);
                            alg.mul_acc(&alg.e_tilde(outer(i), outer(kk)), &y, &Rational::ONE, &mut rhs);
                        }
                        let y = embed(&self.dot(key.kind, a, h, j, r - 1)?);
                        rhs = rhs.add(&alg.bracket(&alg.e_tilde(outer(i), inner(h)), &y));
                    }
                }
                let side = if right { "R" } else { "L" };
                let ix = vec![a as i64, i as i64, j as i64, r as i64, h as i64];
                out.push(diff_claim(&format!("superbaby{side}-{}", key.kind), ix, alg, x, &rhs));
                if !extra {
                    break;
                }
            }
        }
        Ok(CheckReport::from_claims(out))
    }
}

/// `ζ̂ ∘ μ = μ̇ ∘ ζ` on `D_i^{(r)}`, `E_i^{(r)}`, `F_i^{(r)}` (shape `1ⁿ`) for
/// every nonempty column subset, with `r` up to the order of `sums`.
pub fn check_aftermu(sums: &PathSums) -> Result<CheckReport> {
    let pyr = sums.pyramid();
    let k = sums.order();
    let sigma = pyr.shift_matrix()?;
    let n = pyr.n();
    let alg = sums.algebra_rc();
    let l = pyr.l();
    let mut out = Vec::new();
    for mask in 1u32..(1 << l) {
        let cols: Vec<usize> = (1..=l).filter(|c| mask & (1 << (c - 1)) != 0).collect();
        let sub = pyr.sub_pyramid(&cols)?;
        let sub_sums = PathSums::new(sub.clone(), k);
        let sub_alg = sub_sums.algebra();
        // (kind, i, row, col, x, first r)
        let mut items = Vec::new();
        for i in 1..=n {
            items.push((Kind::D, i, i, i, i - 1, 1));
        }
        for i in 1..n {
            items.push((Kind::E, i, i, i + 1, i, sigma.get(i, i + 1) + 1));
            items.push((Kind::F, i, i + 1, i, i, sigma.get(i + 1, i) + 1));
        }
        for (kind, i, row, col, x, lo) in items {
            let big = sums.t_series(row, col, x)?;
            let small = sub_sums.t_series(row, col, x)?;
            for r in lo..=k {
                let lhs = zeta_hat(pyr, &alg, sub_alg, &cols, &miura(pyr, &alg, big.coeff(r))?)?;
                let rhs = miura(&sub, sub_alg, small.coeff(r))?;
                let ix = vec![mask as i64, kind as i64, i as i64, r as i64];
                out.push(diff_claim("aftermu", ix, sub_alg, &lhs, &rhs));
            }
        }
    }
    Ok(CheckReport::from_claims(out))
}

/// Index-level naturality of comultiplication and reindexing: for two
/// pyramids split at the same level whose left and right factors have equal
/// row lengths, the whole pyramids have equal row lengths, so reindexing is
/// defined on both sides of the square, and it is a bijection on each
/// corner's PBW generating set.
pub fn check_cube_structure(a: &Pyramid, b: &Pyramid, l1: usize) -> Result<CheckReport> {
    if a.l() != b.l() || a.n() != b.n() {
        return Err(YwError::BadSplit("pyramids of different level or height".into()));
    }
    let l = a.l();
    let parts = |p: &Pyramid| -> Result<(Pyramid, Pyramid)> {
        Ok((p.sub_pyramid(&(1..=l1).collect::<Vec<_>>())?, p.sub_pyramid(&(l1 + 1..=l).collect::<Vec<_>>())?))
    };
    let (a1, a2) = parts(a)?;
    let (b1, b2) = parts(b)?;
    if a1.p() != b1.p() || a2.p() != b2.p() {
        return Err(YwError::RowLengthMismatch(a1.p().to_vec(), b1.p().to_vec()));
    }
    let mut out = Vec::new();
    out.push(Claim::check("cube-rows", vec![l1 as i64], a.p() == b.p(), || {
        format!("row lengths {:?} vs {:?}", a.p(), b.p())
    }));
    for (x, y, tag) in [(a, b, 0), (&a1, &b1, 1), (&a2, &b2, 2)] {
        if x.n() != *x.q().iter().max().unwrap() || y.n() != *y.q().iter().max().unwrap() {
            continue; // the factor has empty rows; its shift matrix is not canonical
        }
        let (sx, sy) = (x.shift_matrix()?, y.shift_matrix()?);
        let nu = Shape::ones(x.n());
        let rep = crate::relations::check_iota_reindex(&sx, x.p(), &sy, y.p(), &nu)?;
        out.push(Claim::check("cube-iota", vec![l1 as i64, tag], rep.all_pass(), || {
            format!("reindexing is not a bijection for corner {tag}")
        }));
    }
    Ok(CheckReport::from_claims(out))
}

// ---------------------------------------------------------------------------
// Miura rank probe
// ---------------------------------------------------------------------------

/// Elements of the PBW generating set of the table's shape, with higher
/// roots built by nested brackets (pivot 1).
pub fn pbw_generator_elements(
    pyr: &Pyramid,
    alg: &Algebra,
    table: &GeneratorTable,
    d_max: usize,
) -> Result<Vec<(PbwIndex, Element)>> {
    let nu = table.shape();
    let gens = pbw_generators(table.sigma(), pyr.p(), nu);
    let roots = if nu.len() > 2 { Some(higher_roots(alg, table, 1, false)?) } else { None };
    let mut out = Vec::new();
    for g in gens.into_iter().filter(|g| g.r <= d_max) {
        let x = match g.kind {
            Kind::D => table.value(Kind::D, g.a, g.i, g.j, g.r)?,
            _ if g.b == g.a + 1 => table.value(g.kind, g.a, g.i, g.j, g.r)?,
            _ => {
                let key = RootKey { kind: g.kind, a: g.a, b: g.b, i: g.i, j: g.j, r: g.r };
                roots
                    .as_ref()
                    .and_then(|h| h.entries.get(&key))
                    .map(|v| v.0.clone())
                    .ok_or_else(|| YwError::MissingPrerequisite(format!("higher root {key:?}")))?
            }
        };
        out.push((g, x));
    }
    Ok(out)
}

/// Rank of a rational matrix given as sparse rows, by fraction-free
/// elimination over the integers.
pub fn exact_rank(rows: &[BTreeMap<usize, Rational>]) -> usize {
    let ncols = rows.iter().flat_map(|r| r.keys().copied()).max().map_or(0, |m| m + 1);
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let mut den = BigInt::one();
            for c in r.values() {
                let d = c.denom();
                den = num_integer::Integer::lcm(&den, &d);
            }
            let mut v = vec![BigInt::zero(); ncols];
            for (&j, c) in r {
                v[j] = c.numer() * (&den / c.denom());
            }
            v
        })
        .collect();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            let f = row[col].clone();
            for j in col..ncols {
                row[j] = (&pivot_row[col] * &row[j] - &f * &pivot_row[j]) / &prev;
            }
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

/// Ordered monomials in the PBW generating set of Kazhdan degree `≤ d` are
/// mapped by the Miura transform to linearly independent elements of
/// `U(h)`; also compares their number with the centralizer count.
pub fn miura_rank_probe(pyr: &Pyramid, alg: &Algebra, table: &GeneratorTable, d: usize) -> Result<CheckReport> {
    if d > table.order() {
        return Err(YwError::RangeExceedsTruncation(format!("d = {d} beyond K = {}", table.order())));
    }
    let gens = pbw_generator_elements(pyr, alg, table, d)?;
    let images: Vec<(usize, Element)> =
        gens.iter().map(|(g, x)| Ok((g.r, miura(pyr, alg, x)?))).collect::<Result<_>>()?;
    // enumerate nondecreasing index sequences with total degree ≤ d
    let mut monos: Vec<(usize, Element)> = Vec::new();
    fn rec(images: &[(usize, Element)], alg: &Algebra, start: usize, deg: usize, d: usize, cur: &Element, out: &mut Vec<(usize, Element)>) {
        out.push((deg, cur.clone()));
        for (k, (gd, x)) in images.iter().enumerate().skip(start) {
            if deg + gd <= d {
                let next = alg.mul(cur, x);
                rec(images, alg, k, deg + gd, d, &next, out);
            }
        }
    }
    rec(&images, alg, 0, 0, d, &Element::one(), &mut monos);
    let central = hilbert_counts(
        &table.sigma().centralizer_index_set(pyr.p()).iter().map(|x| x.2).collect::<Vec<_>>(),
        d,
    );
    let mut column: BTreeMap<Mono, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for dd in 0..=d {
        let rows: Vec<BTreeMap<usize, Rational>> = monos
            .iter()
            .filter(|(deg, _)| *deg <= dd)
            .map(|(_, x)| {
                x.iter()
                    .map(|(m, c)| {
                        let next = column.len();
                        (*column.entry(m.clone()).or_insert(next), c.clone())
                    })
                    .collect()
            })
            .collect();
        let rank = exact_rank(&rows);
        out.push(Claim::check("miura-rank", vec![dd as i64], rank == rows.len(), || {
            format!("rank {rank} of {} monomials", rows.len())
        }));
        out.push(Claim::check("miura-count", vec![dd as i64], rows.len() as u128 == central[dd], || {
            format!("{} monomials vs {} centralizer monomials", rows.len(), central[dd])
        }));
    }
    Ok(CheckReport::from_claims(out))
}

// ---------------------------------------------------------------------------
// Rectangles
// ---------------------------------------------------------------------------

/// A word in the matrix units of `gl_l`.
pub type Word = Vec<(usize, usize)>;

/// An element of `T(gl_l)[u]`: `(power of u, word) → coefficient`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreePoly {
    /// Terms with nonzero coefficients.
    pub terms: BTreeMap<(usize, Word), Rational>,
}

impl FreePoly {
    /// `c · u^p · w`.
    pub fn term(p: usize, w: Word, c: Rational) -> FreePoly {
        let mut f = FreePoly::default();
        f.add_term(p, w, c);
        f
    }

    fn add_term(&mut self, p: usize, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((p, w)).or_insert(Rational::ZERO);
        *e = &*e + &c;
        if e.is_zero() {
            let key = self.terms.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).unwrap();
            self.terms.remove(&key);
        }
    }

    /// Sum.
    pub fn add(&self, other: &FreePoly) -> FreePoly {
        let mut out = self.clone();
        for ((p, w), c) in &other.terms {
            out.add_term(*p, w.clone(), c.clone());
        }
        out
    }

    /// Product (u is central, words concatenate).
    pub fn mul(&self, other: &FreePoly) -> FreePoly {
        let mut out = FreePoly::default();
        for ((p, w), c) in &self.terms {
            for ((q, v), d) in &other.terms {
                let mut wv = w.clone();
                wv.extend_from_slice(v);
                out.add_term(p + q, wv, c * d);
            }
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Rational) -> FreePoly {
        let mut out = FreePoly::default();
        for ((p, w), d) in &self.terms {
            out.add_term(*p, w.clone(), c * d);
        }
        out
    }
}

/// The `l × l` matrix `Ω(u)`: `e_{r,r} + u + ρ_r` on the diagonal with
/// `ρ_r = −(l−r)n`, `e_{r,s}` above it, `1` just below it, `0` elsewhere.
pub fn rect_omega(n: usize, l: usize) -> Vec<Vec<FreePoly>> {
    (1..=l)
        .map(|r| {
            (1..=l)
                .map(|s| {
                    if s == r {
                        let rho = -((l - r) as i64) * n as i64;
                        FreePoly::term(0, vec![(r, r)], Rational::ONE)
                            .add(&FreePoly::term(1, vec![], Rational::ONE))
                            .add(&FreePoly::term(0, vec![], Rational::int(rho)))
                    } else if s > r {
                        FreePoly::term(0, vec![(r, s)], Rational::ONE)
                    } else if r == s + 1 {
                        FreePoly::term(0, vec![], Rational::ONE)
                    } else {
                        FreePoly::default()
                    }
                })
                .collect()
        })
        .collect()
}

fn permutations(l: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, i64)>) {
        let l = used.len();
        if cur.len() == l {
            let inv = (0..l).flat_map(|i| (i + 1..l).map(move |j| (i, j))).filter(|&(i, j)| cur[i] > cur[j]).count();
            out.push((cur.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for v in 0..l {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; l], &mut out);
    out
}

/// Row-ordered determinant `Σ_w sgn(w) a_{1,w1} ⋯ a_{l,wl}`.
pub fn rdet(a: &[Vec<FreePoly>]) -> FreePoly {
    let mut out = FreePoly::default();
    for (w, s) in permutations(a.len()) {
        let mut prod = FreePoly::term(0, vec![], Rational::int(s));
        for (r, &c) in w.iter().enumerate() {
            prod = prod.mul(&a[r][c]);
        }
        out = out.add(&prod);
    }
    out
}

/// Column-ordered determinant `Σ_w sgn(w) a_{w1,1} ⋯ a_{wl,l}`.
pub fn cdet(a: &[Vec<FreePoly>]) -> FreePoly {
    let mut out = FreePoly::default();
    for (w, s) in permutations(a.len()) {
        let mut prod = FreePoly::term(0, vec![], Rational::int(s));
        for (c, &r) in w.iter().enumerate() {
            prod = prod.mul(&a[r][c]);
        }
        out = out.add(&prod);
    }
    out
}

/// A rectangular pyramid of `n` rows and `l` columns with its algebra,
/// where brick `(r−1)n + i` sits in column `r`, row `i`.
pub struct Rectangle {
    /// The pyramid.
    pub pyr: Pyramid,
    /// Its `U(gl_{nl})`.
    pub alg: Rc<Algebra>,
}

impl Rectangle {
    /// Errors with `NotRectangle` unless all columns have equal height.
    pub fn new(pyr: &Pyramid) -> Result<Rectangle> {
        if !pyr.is_rectangle() || pyr.n() != pyr.q()[0] {
            return Err(YwError::NotRectangle(pyr.q().to_vec()));
        }
        Ok(Rectangle { pyr: pyr.clone(), alg: Rc::new(Algebra::for_pyramid(pyr)) })
    }

    /// `n`.
    pub fn n(&self) -> usize {
        self.pyr.n()
    }

    /// `l`.
    pub fn l(&self) -> usize {
        self.pyr.l()
    }

    /// `x ⊗ e_{i,j}` for a matrix `x ∈ gl_l`.
    fn slot(&self, x: &[Vec<Rational>], i: usize, j: usize) -> Element {
        let n = self.n();
        let mut out = Element::zero();
        for (r, row) in x.iter().enumerate() {
            for (s, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out.add_scaled(&self.alg.e(r * n + i, s * n + j), c);
                }
            }
        }
        out
    }

    /// `T_{i,j}(x_1 ⊗ ⋯ ⊗ x_s)` for matrices `x_t ∈ gl_l`.
    pub fn t_of_tensor(&self, i: usize, j: usize, xs: &[Vec<Vec<Rational>>]) -> Element {
        let n = self.n();
        let mut v: Vec<Element> = (1..=n).map(|k| if k == i { Element::one() } else { Element::zero() }).collect();
        for x in xs {
            let mut w = vec![Element::zero(); n];
            for (k, vk) in v.iter().enumerate() {
                if vk.is_zero() {
                    continue;
                }
                for (k2, wk) in w.iter_mut().enumerate() {
                    self.alg.mul_acc(vk, &self.slot(x, k + 1, k2 + 1), &Rational::ONE, wk);
                }
            }
            v = w;
        }
        v.swap_remove(j - 1)
    }

    fn unit(&self, r: usize, s: usize) -> Vec<Vec<Rational>> {
        let l = self.l();
        let mut m = vec![vec![Rational::ZERO; l]; l];
        m[r - 1][s - 1] = Rational::ONE;
        m
    }

    /// `T_{i,j}` applied to an element of the free tensor algebra, as a
    /// polynomial in `u` (index = power).
    pub fn t_of_poly(&self, i: usize, j: usize, f: &FreePoly) -> Vec<Element> {
        let deg = f.terms.keys().map(|(p, _)| *p).max().unwrap_or(0);
        let mut out = vec![Element::zero(); deg + 1];
        for ((p, w), c) in &f.terms {
            let xs: Vec<_> = w.iter().map(|&(r, s)| self.unit(r, s)).collect();
            out[*p].add_scaled(&self.t_of_tensor(i, j, &xs), c);
        }
        out
    }

    /// `T_{i,j}^{(r)}` for `r = 0..=l`: the `u^{l−r}` coefficient of
    /// `T_{i,j}(rdet Ω(u))`.
    pub fn rect_t(&self, i: usize, j: usize) -> Vec<Element> {
        let poly = self.t_of_poly(i, j, &rdet(&rect_omega(self.n(), self.l())));
        let l = self.l();
        (0..=l).map(|r| poly.get(l - r).cloned().unwrap_or_default()).collect()
    }

    /// The noncommutative elementary symmetric expression for `μ(T_{i,j}^{(r)})`.
    pub fn miura_image(&self, i: usize, j: usize, r: usize) -> Element {
        let (n, l) = (self.n(), self.l());
        let mut out = Element::zero();
        for mask in 0u32..(1 << l) {
            if mask.count_ones() as usize != r {
                continue;
            }
            let cols: Vec<usize> = (1..=l).filter(|c| mask & (1 << (c - 1)) != 0).collect();
            let mut v: Vec<Element> = (1..=n).map(|k| if k == i { Element::one() } else { Element::zero() }).collect();
            for &c in &cols {
                let mut w = vec![Element::zero(); n];
                for (k, vk) in v.iter().enumerate() {
                    for (k2, wk) in w.iter_mut().enumerate() {
                        let e = self.alg.e((c - 1) * n + k + 1, (c - 1) * n + k2 + 1);
                        self.alg.mul_acc(vk, &e, &Rational::ONE, wk);
                    }
                }
                v = w;
            }
            out = out.add(&v[j - 1]);
        }
        out
    }
}

/// The rectangle suite: determinant formula versus path sums (and their
/// vanishing beyond `l`), invariance of the determinant coefficients,
/// Miura images of the tensor generators, and `trials` random instances of the bracket identity
/// for `T_{i,j}(x)` against `T_{h,k}(y_1 ⊗ ⋯ ⊗ y_r)`, `r ≤ 3`.
pub fn check_rectangle(sums: &PathSums, trials: usize, seed: u64) -> Result<CheckReport> {
    let pyr = sums.pyramid();
    let rect = Rectangle::new(pyr)?;
    let (n, l) = (rect.n(), rect.l());
    if sums.order() < l {
        return Err(YwError::RangeExceedsTruncation(format!("the rectangle suite needs K >= l = {l}")));
    }
    let alg = sums.algebra();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let t = rect.rect_t(i, j);
            let path = sums.t_series(i, j, 0)?;
            for r in 0..=sums.order() {
                let want = if r <= l { t[r].clone() } else { Element::zero() };
                out.push(diff_claim("rect-rdet", idx(&[i, j, r]), alg, path.coeff(r), &want));
            }
            for r in 1..=l {
                let ok = alg.m_invariance_witness(&t[r])?;
                out.push(Claim::check("rect-inv", idx(&[i, j, r]), ok.is_none(), || {
                    let (f, g) = ok.as_ref().unwrap().0;
                    format!("twisted action of e_{f},{g} is nonzero")
                }));
                let mu = miura(pyr, alg, &t[r])?;
                out.push(diff_claim("rect-mim", idx(&[i, j, r]), alg, &mu, &rect.miura_image(i, j, r)));
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(seed);
    for trial in 0..trials {
        let rand_mat = |rng: &mut StdRng| -> Vec<Vec<Rational>> {
            (0..l).map(|_| (0..l).map(|_| Rational::int(rng.gen_range(-2..=2))).collect()).collect()
        };
        let x = rand_mat(&mut rng);
        let r = rng.gen_range(1..=3usize);
        let ys: Vec<_> = (0..r).map(|_| rand_mat(&mut rng)).collect();
        let mut pick = || rng.gen_range(1..=n);
        let (h, i, j, kk) = (pick(), pick(), pick(), pick());
        let lhs = alg.bracket(&rect.t_of_tensor(i, j, &[x.clone()]), &rect.t_of_tensor(h, kk, &ys));
        let mut rhs = Element::zero();
        for s in 0..r {
            let xy = mat_mul(&x, &ys[s]);
            let yx = mat_mul(&ys[s], &x);
            let mut tail1 = vec![xy];
            tail1.extend_from_slice(&ys[s + 1..]);
            alg.mul_acc(&rect.t_of_tensor(h, j, &ys[..s]), &rect.t_of_tensor(i, kk, &tail1), &Rational::ONE, &mut rhs);
            let mut head2 = ys[..s].to_vec();
            head2.push(yx);
            alg.mul_acc(&rect.t_of_tensor(h, j, &head2), &rect.t_of_tensor(i, kk, &ys[s + 1..]), &Rational::int(-1), &mut rhs);
        }
        out.push(diff_claim("rect-easy", idx(&[trial, r, h, i, j, kk]), alg, &lhs, &rhs));
    }
    Ok(CheckReport::from_claims(out))
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let l = a.len();
    (0..l)
        .map(|i| {
            (0..l)
                .map(|j| (0..l).fold(Rational::ZERO, |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::Invariants;

    fn setup(q: &[usize]) -> (Pyramid, Rc<Algebra>) {
        let p = Pyramid::from_heights(q).unwrap();
        let a = Rc::new(Algebra::for_pyramid(&p));
        (p, a)
    }

    #[test]
    fn miura_examples() {
        let (p, alg) = setup(&[1, 2]);
        // single column: η is the identity
        let (p1, a1) = setup(&[3]);
        let x = a1.mul(&a1.e(1, 2), &a1.e(2, 1));
        assert_eq!(miura(&p1, &a1, &x).unwrap(), x);
        // μ(e_{1,1} + e_{3,3} − 1) = e_{1,1} + 2 + e_{3,3} − 1
        let x = alg.e(1, 1).add(&alg.e(3, 3)).sub(&Element::one());
        let want = alg.e(1, 1).add(&alg.e(3, 3)).add(&Element::one());
        assert_eq!(miura(&p, &alg, &x).unwrap(), want);
        // nilradical generators die, m generators are refused
        assert!(miura(&p, &alg, &alg.e(1, 2)).unwrap().is_zero());
        assert!(matches!(miura(&p, &alg, &alg.e(2, 1)), Err(YwError::NotInParabolic(_))));
    }

    #[test]
    fn miura_d2_matches_table() {
        let (p, alg) = setup(&[1, 2]);
        let inv = Invariants::new(p.clone(), 4).unwrap();
        let tab = inv.generators_direct(&Shape::ones(2)).unwrap();
        let d2 = tab.value(Kind::D, 2, 1, 1, 1).unwrap();
        let mu = miura(&p, &alg, &d2).unwrap();
        assert_eq!(mu.constant_term(), Rational::int(1));
        assert!(check_miura_iterate(&p, &alg, &tab).unwrap().all_pass());
    }

    #[test]
    fn split_trivial_and_errors() {
        let (p, alg) = setup(&[1, 2, 1]);
        let s = Split::new(&p, alg.clone(), 3, 0).unwrap();
        let x = alg.mul(&alg.e(1, 2), &alg.e(3, 3));
        assert_eq!(s.apply(&x).unwrap(), x);
        assert!(matches!(Split::new(&p, alg.clone(), 1, 1), Err(YwError::BadSplit(_))));
        let s = Split::new(&p, alg.clone(), 1, 2).unwrap();
        let t = s.to_tensor(&s.apply(&alg.e(2, 3)).unwrap()).unwrap();
        assert_eq!(t.terms.len(), 1);
        assert_eq!(t.n1, 1);
        assert!(s.apply(&alg.e(1, 2)).unwrap().is_zero());
    }

    #[test]
    fn howithappens_small() {
        for q in [[1, 2].as_slice(), &[2, 2], &[1, 2, 1], &[2, 3, 1]] {
            let p = Pyramid::from_heights(q).unwrap();
            let rep = check_howithappens(&PathSums::new(p.clone(), p.l() + 1)).unwrap();
            assert!(rep.all_pass(), "{q:?}: {:?}", rep.failures().next());
        }
    }

    #[test]
    fn coassociativity_three_columns() {
        let (p, alg) = setup(&[1, 2, 1]);
        let inv = Invariants::new(p.clone(), 4).unwrap();
        let tab = inv.generators_direct(&Shape::ones(2)).unwrap();
        assert!(check_coassociativity(&p, &alg, &tab).unwrap().all_pass());
    }

    fn baby(q: &[usize], right: bool) -> CheckReport {
        let (p, alg) = setup(q);
        let inv = Invariants::new(p.clone(), 4).unwrap();
        let nu = inv.sigma().minimal_shape();
        let tab = inv.generators_direct(&nu).unwrap();
        let cols: Vec<usize> = if right { (1..p.l()).collect() } else { (2..=p.l()).collect() };
        let small = p.sub_pyramid(&cols).unwrap();
        let small_inv = Invariants::new(small.clone(), 4).unwrap();
        let small_tab = small_inv.generators_direct(&nu).unwrap();
        let data = BabyData {
            pyr: &p,
            alg,
            table: &tab,
            small: &small,
            small_alg: small_inv.algebra(),
            small_table: &small_tab,
        };
        let mut rep = if right { data.check_right().unwrap() } else { data.check_left().unwrap() };
        rep.merge(data.check_superbaby(right).unwrap());
        rep
    }

    #[test]
    fn baby_comultiplications() {
        for (q, right) in [(&[2, 1][..], true), (&[1, 2][..], false), (&[2, 2][..], true), (&[2, 2][..], false), (&[1, 2, 1][..], true), (&[2, 3, 1][..], true), (&[1, 3, 2][..], false)] {
            let rep = baby(q, right);
            assert!(rep.all_pass(), "{q:?} right={right}: {:?}", rep.failures().next());
            assert!(!rep.claims.is_empty());
        }
        let (p, alg) = setup(&[1, 2]);
        assert!(matches!(phi_right(&p, alg, &Element::one()), Err(YwError::CaseNotApplicable(_))));
    }

    #[test]
    fn aftermu_small() {
        for q in [[1, 2].as_slice(), &[2, 2], &[1, 2, 1]] {
            let p = Pyramid::from_heights(q).unwrap();
            let rep = check_aftermu(&PathSums::new(p, 4)).unwrap();
            assert!(rep.all_pass(), "{q:?}: {:?}", rep.failures().next());
        }
        let (p, alg) = setup(&[1, 2]);
        let sub = p.sub_pyramid(&[1, 2]).unwrap();
        let sa = Algebra::for_pyramid(&sub);
        let x = alg.mul(&alg.e(1, 1), &alg.e(2, 3));
        assert_eq!(zeta_hat(&p, &alg, &sa, &[1, 2], &x).unwrap(), x);
        let sub = p.sub_pyramid(&[2]).unwrap();
        let sa = Algebra::for_pyramid(&sub);
        let y = x.add(&Element::scalar(Rational::int(3)));
        let want = Element::scalar(Rational::int(3)).sub(&sa.e(1, 2));
        assert_eq!(zeta_hat(&p, &alg, &sa, &[2], &y).unwrap(), want);
        // the removed column has height 1 < n = 2: e_{1,1} goes to −1
        assert_eq!(zeta_hat(&p, &alg, &sa, &[2], &alg.e(1, 1)).unwrap(), Element::scalar(Rational::int(-1)));
        assert!(matches!(zeta_hat(&p, &alg, &sa, &[2, 1], &y), Err(YwError::BadColumnSet(_))));
    }

    #[test]
    fn rank_probe_and_bareiss() {
        let mut rows = vec![BTreeMap::new(), BTreeMap::new(), BTreeMap::new()];
        rows[0].insert(0, Rational::new(1, 2));
        rows[0].insert(1, Rational::int(1));
        rows[1].insert(0, Rational::int(1));
        rows[1].insert(1, Rational::int(2));
        rows[2].insert(2, Rational::int(-3));
        assert_eq!(exact_rank(&rows), 2);
        assert_eq!(exact_rank(&[]), 0);
        let (p, alg) = setup(&[1, 2]);
        let inv = Invariants::new(p.clone(), 4).unwrap();
        let tab = inv.generators_direct(&Shape::ones(2)).unwrap();
        let rep = miura_rank_probe(&p, &alg, &tab, 4).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.failures().next());
    }

    #[test]
    fn rectangle_small() {
        let p = Pyramid::from_heights(&[1]).unwrap();
        let r = Rectangle::new(&p).unwrap();
        let om = rdet(&rect_omega(1, 1));
        assert_eq!(om.terms.len(), 2);
        assert_eq!(r.rect_t(1, 1)[1], r.alg.e(1, 1));
        let p = Pyramid::from_heights(&[2, 2]).unwrap();
        let rep = check_rectangle(&PathSums::new(p, 4), 20, 7).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.failures().next());
        assert!(matches!(Rectangle::new(&Pyramid::from_heights(&[1, 2]).unwrap()), Err(YwError::NotRectangle(_))));
        let (x, y) = (FreePoly::term(0, vec![(1, 2)], Rational::ONE), FreePoly::term(0, vec![(2, 1)], Rational::ONE));
        let z = FreePoly::term(0, vec![(1, 1)], Rational::ONE);
        let a = vec![vec![x.clone(), y], vec![z, x]];
        assert_ne!(rdet(&a), cdet(&a));
        assert_eq!(rdet(&rect_omega(2, 3)), cdet(&rect_omega(2, 3)));
    }
}
