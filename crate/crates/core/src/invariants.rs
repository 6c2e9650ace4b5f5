//! The path-sum invariants `T_{i,j;σ}^{(r)}` of U(p), their generating
//! series, the block Gauss factorization of `T(u)`, and the generator tables
//! `D`, `D̃`, `E`, `F` with their higher-root companions.
//!
//! A path sum adds up products `ẽ_{i_1,j_1} ⋯ ẽ_{i_s,j_s}` along brick
//! sequences that hop between rows; with a sign attached to every row the
//! sign of `row(j_t)` decides whether the next factor must start strictly to
//! the right (`+`) or weakly to the left (`−`) of the column where the
//! previous factor ended. The sums are evaluated right to left by dynamic
//! programming over (starting brick, remaining Kazhdan degree).

use serde::{Deserialize, Serialize};
use std::borrow::Cow;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::engine::{Algebra, Element};
use crate::error::{Result, YwError};
use crate::pyramid::{Pyramid, Shape, ShiftMatrix};
use crate::rational::Rational;
use crate::series::{Series, SeriesMatrix};

/// One sign per row: `true` means `−`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignVector {
    minus: Vec<bool>,
}

impl SignVector {
    /// `σ_1 = … = σ_x = −`, `σ_{x+1} = … = σ_n = +`.
    pub fn for_x(n: usize, x: usize) -> SignVector {
        SignVector { minus: (1..=n).map(|r| r <= x).collect() }
    }

    /// Explicit signs, `true` for `−`.
    pub fn from_minus(minus: Vec<bool>) -> SignVector {
        SignVector { minus }
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.minus.len()
    }

    /// True for the empty vector.
    pub fn is_empty(&self) -> bool {
        self.minus.is_empty()
    }

    /// True if row `r` (1-based) carries `−`.
    pub fn is_minus(&self, r: usize) -> bool {
        self.minus[r - 1]
    }

    /// `σ_r` as ±1.
    pub fn value(&self, r: usize) -> i64 {
        if self.is_minus(r) {
            -1
        } else {
            1
        }
    }
}

/// Evaluates path sums for one pyramid up to a fixed truncation order.
///
/// Owns the enveloping algebra of the pyramid; results for each
/// `(target row, signs)` are cached for all source rows and degrees at once.
pub struct PathSums {
    pyr: Pyramid,
    alg: Rc<Algebra>,
    k: usize,
    cache: RefCell<HashMap<(usize, SignVector), Rc<Vec<Series>>>>,
    perturbations: Vec<Perturbation>,
}

/// An element added to one path-sum coefficient, used to build deliberately
/// corrupted inputs for negative controls.
#[derive(Clone, Debug)]
struct Perturbation {
    i: usize,
    j: usize,
    signs: SignVector,
    r: usize,
    delta: Element,
}

impl PathSums {
    /// Path sums on `pyr` up to `u^{-k}`.
    pub fn new(pyr: Pyramid, k: usize) -> PathSums {
        let alg = Rc::new(Algebra::for_pyramid(&pyr));
        PathSums::with_algebra(pyr, alg, k)
    }

    /// Path sums sharing an existing algebra of the same pyramid.
    pub fn with_algebra(pyr: Pyramid, alg: Rc<Algebra>, k: usize) -> PathSums {
        assert_eq!(alg.big_n(), pyr.big_n(), "algebra and pyramid disagree on N");
        PathSums { pyr, alg, k, cache: RefCell::default(), perturbations: Vec::new() }
    }

    /// Returns these path sums with `delta` added to `T_{i,j;x}^{(r)}`; every
    /// series, matrix and table derived afterwards sees the change.
    pub fn perturbed(mut self, i: usize, j: usize, x: usize, r: usize, delta: Element) -> Result<PathSums> {
        self.check_rows(i, j)?;
        let n = self.pyr.n();
        if x > n {
            return Err(YwError::IndexOutOfRange(format!("x = {x} with n = {n}")));
        }
        if r == 0 || r > self.k {
            return Err(YwError::RangeExceedsTruncation(format!("r = {r} outside 1..={}", self.k)));
        }
        self.alg.require_parabolic(&delta)?;
        self.cache.borrow_mut().clear();
        self.perturbations.push(Perturbation { i, j, signs: SignVector::for_x(n, x), r, delta });
        Ok(self)
    }

    /// The pyramid.
    pub fn pyramid(&self) -> &Pyramid {
        &self.pyr
    }

    /// The enveloping algebra.
    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    /// Shared handle to the enveloping algebra.
    pub fn algebra_rc(&self) -> Rc<Algebra> {
        self.alg.clone()
    }

    /// Truncation order.
    pub fn order(&self) -> usize {
        self.k
    }

    fn check_rows(&self, i: usize, j: usize) -> Result<()> {
        let n = self.pyr.n();
        if i == 0 || j == 0 || i > n || j > n {
            return Err(YwError::IndexOutOfRange(format!("row pair ({i}, {j}) with n = {n}")));
        }
        Ok(())
    }

    /// `T_{i,j;σ}^{(r)}`.
    pub fn path_invariant(&self, i: usize, j: usize, signs: &SignVector, r: usize) -> Result<Element> {
        self.check_rows(i, j)?;
        if signs.len() != self.pyr.n() {
            return Err(YwError::DimensionMismatch(signs.len(), self.pyr.n()));
        }
        if r > self.k {
            return Err(YwError::RangeExceedsTruncation(format!("r = {r} beyond K = {}", self.k)));
        }
        Ok(self.column(j, signs)[i - 1].coeff(r).clone())
    }

    /// `Σ_r T_{i,j;σ}^{(r)} u^{-r}` to order K.
    pub fn series(&self, i: usize, j: usize, signs: &SignVector) -> Result<Series> {
        self.check_rows(i, j)?;
        if signs.len() != self.pyr.n() {
            return Err(YwError::DimensionMismatch(signs.len(), self.pyr.n()));
        }
        Ok(self.column(j, signs)[i - 1].clone())
    }

    /// `T_{i,j;x}(u)`.
    pub fn t_series(&self, i: usize, j: usize, x: usize) -> Result<Series> {
        if x > self.pyr.n() {
            return Err(YwError::IndexOutOfRange(format!("x = {x} with n = {}", self.pyr.n())));
        }
        self.series(i, j, &SignVector::for_x(self.pyr.n(), x))
    }

    /// The matrix `(T_{i,j;x}(u))_{i,j}`.
    pub fn t_matrix_x(&self, x: usize) -> Result<SeriesMatrix> {
        let n = self.pyr.n();
        if x > n {
            return Err(YwError::IndexOutOfRange(format!("x = {x} with n = {n}")));
        }
        let signs = SignVector::for_x(n, x);
        let cols: Vec<Rc<Vec<Series>>> = (1..=n).map(|j| self.column(j, &signs)).collect();
        Ok(SeriesMatrix::from_fn(n, n, |i, j| cols[j][i].clone()))
    }

    /// `T(u) = (T_{i,j;0}(u))_{i,j}`, whose constant term is the identity.
    pub fn t_matrix(&self) -> SeriesMatrix {
        self.t_matrix_x(0).expect("x = 0 is always valid")
    }

    /// `ẽ_{b,k} · y`.
    fn etilde_times(&self, b: usize, k: usize, y: &Element, out: &mut Element) {
        let alg = &*self.alg;
        let sign = if (self.pyr.col(k) - self.pyr.col(b)) % 2 == 0 { 1 } else { -1 };
        let g = alg.gen(b, k);
        out.add_scaled(&alg.mul_gen_left(g, y), &Rational::int(sign));
        if b == k {
            out.add_scaled(y, &Rational::int(self.pyr.rho(self.pyr.col(b))));
        }
    }

    /// All `T_{i,j;σ}(u)` for `i = 1..n`, by dynamic programming.
    fn column(&self, j: usize, signs: &SignVector) -> Rc<Vec<Series>> {
        let key = (j, signs.clone());
        if let Some(v) = self.cache.borrow().get(&key) {
            return v.clone();
        }
        let p = &self.pyr;
        let big_n = p.big_n();
        let n = p.n();
        let k = self.k;
        // paths[b][d]: sum over sequences whose first factor starts at brick b,
        // of total degree d, ending in row j.
        let mut paths = vec![vec![Element::zero(); k + 1]; big_n + 1];
        // tails[c][d]: what may follow a factor ending at brick c with d
        // degrees still to spend (including the σ prefactor).
        let mut tails = vec![vec![Element::zero(); k + 1]; big_n + 1];
        for c in 1..=big_n {
            if p.row(c) == j {
                tails[c][0] = Element::one();
            }
        }
        for d in 1..=k {
            for b in 1..=big_n {
                let mut acc = Element::zero();
                let cb = p.col(b);
                for c in 1..=big_n {
                    let cc = p.col(c);
                    if cc < cb || cc - cb + 1 > d {
                        continue;
                    }
                    let rest = &tails[c][d - (cc - cb + 1)];
                    if !rest.is_zero() {
                        self.etilde_times(b, c, rest, &mut acc);
                    }
                }
                paths[b][d] = acc;
            }
            for c in 1..=big_n {
                let row = p.row(c);
                let cc = p.col(c);
                let minus = signs.is_minus(row);
                let mut acc = Element::zero();
                for b in p.row_bricks(row) {
                    let cb = p.col(b);
                    let ok = if minus { cc >= cb } else { cc < cb };
                    if ok {
                        acc.add_scaled(&paths[b][d], &Rational::ONE);
                    }
                }
                tails[c][d] = if minus { acc.neg() } else { acc };
            }
        }
        let out: Vec<Series> = (1..=n)
            .map(|i| {
                let mut coeffs = Vec::with_capacity(k + 1);
                coeffs.push(if i == j { Element::scalar(Rational::int(signs.value(i))) } else { Element::zero() });
                for d in 1..=k {
                    let mut acc = Element::zero();
                    for b in p.row_bricks(i) {
                        acc.add_scaled(&paths[b][d], &Rational::ONE);
                    }
                    coeffs.push(acc);
                }
                for pt in &self.perturbations {
                    if pt.i == i && pt.j == j && &pt.signs == signs {
                        coeffs[pt.r] = coeffs[pt.r].add(&pt.delta);
                    }
                }
                Series::from_coeffs(coeffs)
            })
            .collect();
        let out = Rc::new(out);
        self.cache.borrow_mut().insert(key, out.clone());
        out
    }
}

/// The four families of generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    /// `D_{a;i,j}^{(r)}`
    D,
    /// `D̃_{a;i,j}^{(r)}`
    Dt,
    /// `E_{a;i,j}^{(r)}`
    E,
    /// `F_{a;i,j}^{(r)}`
    F,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::D => "D",
            Kind::Dt => "Dt",
            Kind::E => "E",
            Kind::F => "F",
        })
    }
}

impl std::str::FromStr for Kind {
    type Err = YwError;
    fn from_str(s: &str) -> Result<Kind> {
        match s {
            "D" => Ok(Kind::D),
            "Dt" => Ok(Kind::Dt),
            "E" => Ok(Kind::E),
            "F" => Ok(Kind::F),
            _ => Err(YwError::Parse(format!("unknown generator kind {s:?}"))),
        }
    }
}

/// Index `(kind, a, i, j, r)` of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GenKey {
    /// Family.
    pub kind: Kind,
    /// Block index (1-based).
    pub a: usize,
    /// Row inside the block.
    pub i: usize,
    /// Column inside the block.
    pub j: usize,
    /// Superscript.
    pub r: usize,
}

impl GenKey {
    /// Convenience constructor.
    pub fn new(kind: Kind, a: usize, i: usize, j: usize, r: usize) -> GenKey {
        GenKey { kind, a, i, j, r }
    }
}

impl fmt::Display for GenKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}:{}", self.kind, self.a, self.i, self.j, self.r)
    }
}

impl std::str::FromStr for GenKey {
    type Err = YwError;
    /// Parses `KIND:a:i:j:r`.
    fn from_str(s: &str) -> Result<GenKey> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 5 {
            return Err(YwError::Parse(format!("expected KIND:a:i:j:r, got {s:?}")));
        }
        let num = |t: &str| t.trim().parse::<usize>().map_err(|e| YwError::Parse(format!("{t:?}: {e}")));
        Ok(GenKey {
            kind: parts[0].trim().parse()?,
            a: num(parts[1])?,
            i: num(parts[2])?,
            j: num(parts[3])?,
            r: num(parts[4])?,
        })
    }
}

/// The generators of W(π) for one pyramid and one admissible shape, up to a
/// truncation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorTable {
    shape: Shape,
    sigma: ShiftMatrix,
    k: usize,
    entries: BTreeMap<GenKey, Element>,
}

impl GeneratorTable {
    /// Assembles a table from entries; used by the builders and decoders.
    pub fn from_entries(shape: Shape, sigma: ShiftMatrix, k: usize, entries: BTreeMap<GenKey, Element>) -> GeneratorTable {
        GeneratorTable { shape, sigma, k, entries }
    }

    /// The shape ν.
    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// The shift matrix σ.
    pub fn sigma(&self) -> &ShiftMatrix {
        &self.sigma
    }

    /// Truncation order.
    pub fn order(&self) -> usize {
        self.k
    }

    /// Stored entries in `(kind, a, i, j, r)` order.
    pub fn entries(&self) -> &BTreeMap<GenKey, Element> {
        &self.entries
    }

    /// Mutable entries (used for negative controls).
    pub fn entries_mut(&mut self) -> &mut BTreeMap<GenKey, Element> {
        &mut self.entries
    }

    /// `s_{a,b}(ν)`.
    pub fn rel_shift(&self, a: usize, b: usize) -> usize {
        self.sigma.relative_shift(&self.shape, a, b)
    }

    /// The superscript range `lo..=K` of the generators of `kind` in block `a`
    /// listed as generators of W(π).
    pub fn range(&self, kind: Kind, a: usize) -> std::ops::RangeInclusive<usize> {
        let lo = match kind {
            Kind::D | Kind::Dt => 1,
            Kind::E => self.rel_shift(a, a + 1) + 1,
            Kind::F => self.rel_shift(a + 1, a) + 1,
        };
        lo..=self.k
    }

    /// Every key of the generator index set, in order.
    pub fn index_set(shape: &Shape, sigma: &ShiftMatrix, k: usize) -> Vec<GenKey> {
        let m = shape.len();
        let mut out = Vec::new();
        for kind in [Kind::D, Kind::Dt, Kind::E, Kind::F] {
            for a in 1..=m {
                let (rows, cols, lo) = match kind {
                    Kind::D | Kind::Dt => (shape.part(a), shape.part(a), 1),
                    Kind::E if a < m => (shape.part(a), shape.part(a + 1), sigma.relative_shift(shape, a, a + 1) + 1),
                    Kind::F if a < m => (shape.part(a + 1), shape.part(a), sigma.relative_shift(shape, a + 1, a) + 1),
                    _ => continue,
                };
                for i in 1..=rows {
                    for j in 1..=cols {
                        for r in lo..=k {
                            out.push(GenKey::new(kind, a, i, j, r));
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// A stored generator.
    pub fn get(&self, key: &GenKey) -> Option<&Element> {
        self.entries.get(key)
    }

    /// The value of a generator, including the conventions
    /// `D^{(0)}_{a;i,j} = δ_{i,j}` and `D̃^{(0)}_{a;i,j} = −δ_{i,j}`.
    pub fn value(&self, kind: Kind, a: usize, i: usize, j: usize, r: usize) -> Result<Element> {
        self.value_cow(kind, a, i, j, r).map(Cow::into_owned)
    }

    /// Borrowing form of [`GeneratorTable::value`].
    pub fn value_cow(&self, kind: Kind, a: usize, i: usize, j: usize, r: usize) -> Result<Cow<'_, Element>> {
        if r > self.k {
            return Err(YwError::RangeExceedsTruncation(format!("{kind}:{a}:{i}:{j}:{r} beyond K = {}", self.k)));
        }
        if r == 0 {
            let delta = |c: i64| Cow::Owned(if i == j { Element::scalar(Rational::int(c)) } else { Element::zero() });
            match kind {
                Kind::D => return Ok(delta(1)),
                Kind::Dt => return Ok(delta(-1)),
                _ => {}
            }
        }
        self.entries
            .get(&GenKey::new(kind, a, i, j, r))
            .map(Cow::Borrowed)
            .ok_or_else(|| YwError::MissingPrerequisite(format!("{kind}:{a}:{i}:{j}:{r} is not in the table")))
    }
}

/// Block factors of `T(u) = F(u) D(u) E(u)` for a shape ν.
#[derive(Clone, Debug)]
pub struct GaussFactors {
    /// `D_a(u)`, `ν_a × ν_a`.
    pub d: Vec<SeriesMatrix>,
    /// `D̃_a(u) = −D_a(u)^{-1}`.
    pub dt: Vec<SeriesMatrix>,
    /// `E_a(u)`, `ν_a × ν_{a+1}`: the superdiagonal blocks of `E(u)`.
    pub e: Vec<SeriesMatrix>,
    /// `F_a(u)`, `ν_{a+1} × ν_a`: the subdiagonal blocks of `F(u)`.
    pub f: Vec<SeriesMatrix>,
    /// The full block-upper-unitriangular `E(u)`.
    pub e_full: SeriesMatrix,
    /// The full block-lower-unitriangular `F(u)`.
    pub f_full: SeriesMatrix,
}

/// Block Gauss factorization by recursive 2-block Schur complements, always
/// splitting off the first part of ν.
pub fn gauss_factorize(alg: &Algebra, t: &SeriesMatrix, nu: &Shape) -> Result<GaussFactors> {
    let n = t.rows();
    if t.cols() != n || nu.total() != n {
        return Err(YwError::NotAdmissible(format!("shape {nu} does not partition a {}×{} matrix", n, t.cols())));
    }
    let k = t.order();
    let mut out = GaussFactors {
        d: Vec::new(),
        dt: Vec::new(),
        e: Vec::new(),
        f: Vec::new(),
        e_full: SeriesMatrix::identity(n, k),
        f_full: SeriesMatrix::identity(n, k),
    };
    let mut cur = t.clone();
    let mut off = 0;
    for a in 1..=nu.len() {
        let w = nu.part(a);
        let size = cur.rows();
        let blk = cur.block(0, w, 0, w);
        let inv = blk.inverse(alg)?;
        out.dt.push(inv.neg());
        if a < nu.len() {
            let next = nu.part(a + 1);
            let upper = inv.mul(alg, &cur.block(0, w, w, size));
            let lower = cur.block(w, size, 0, w).mul(alg, &inv);
            out.e.push(upper.block(0, w, 0, next));
            out.f.push(lower.block(0, next, 0, w));
            for i in 0..w {
                for j in 0..size - w {
                    *out.e_full.get_mut(off + i, off + w + j) = upper.get(i, j).clone();
                    *out.f_full.get_mut(off + w + j, off + i) = lower.get(j, i).clone();
                }
            }
            let schur = cur.block(w, size, w, size).sub(&lower.mul(alg, &cur.block(0, w, w, size)));
            out.d.push(blk);
            cur = schur;
        } else {
            out.d.push(blk);
        }
        off += w;
    }
    Ok(out)
}

impl GaussFactors {
    /// `F(u) · diag(D_1(u), …, D_m(u)) · E(u)`.
    pub fn recompose(&self, alg: &Algebra) -> SeriesMatrix {
        let n = self.e_full.rows();
        let k = self.e_full.order();
        let mut diag = SeriesMatrix::zero(n, n, k);
        let mut off = 0;
        for d in &self.d {
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    *diag.get_mut(off + i, off + j) = d.get(i, j).clone();
                }
            }
            off += d.rows();
        }
        self.f_full.mul(alg, &diag).mul(alg, &self.e_full)
    }
}

/// Builds generator tables for one pyramid (with `n` equal to its height).
pub struct Invariants {
    sums: PathSums,
    sigma: ShiftMatrix,
}

impl Invariants {
    /// Generators of W(π) up to `u^{-k}`.
    pub fn new(pyr: Pyramid, k: usize) -> Result<Invariants> {
        Invariants::from_sums(PathSums::new(pyr, k))
    }

    /// Generators built from existing (possibly perturbed) path sums.
    pub fn from_sums(sums: PathSums) -> Result<Invariants> {
        let sigma = sums.pyramid().shift_matrix()?;
        Ok(Invariants { sums, sigma })
    }

    /// The default truncation order `2l + 2`.
    pub fn default_order(pyr: &Pyramid) -> usize {
        2 * pyr.l() + 2
    }

    /// Path sums of the pyramid.
    pub fn sums(&self) -> &PathSums {
        &self.sums
    }

    /// The pyramid.
    pub fn pyramid(&self) -> &Pyramid {
        self.sums.pyramid()
    }

    /// The enveloping algebra.
    pub fn algebra(&self) -> &Algebra {
        self.sums.algebra()
    }

    /// The shift matrix.
    pub fn sigma(&self) -> &ShiftMatrix {
        &self.sigma
    }

    /// Truncation order.
    pub fn order(&self) -> usize {
        self.sums.order()
    }

    /// The generator blocks of `T(u)` read off directly from path sums:
    /// `D_a` at cut `c_{a−1}`, `D̃_a` at cut `c_a`, `E_a` and `F_a` at cut `c_a`,
    /// where `c_a = ν_1 + … + ν_a`.
    pub fn direct_blocks(&self, nu: &Shape) -> Result<GaussFactors> {
        self.sigma.check_admissible(nu)?;
        let n = self.sigma.n();
        let k = self.order();
        let m = nu.len();
        let s = &self.sums;
        let mut out = GaussFactors {
            d: Vec::new(),
            dt: Vec::new(),
            e: Vec::new(),
            f: Vec::new(),
            e_full: SeriesMatrix::identity(n, k),
            f_full: SeriesMatrix::identity(n, k),
        };
        for a in 1..=m {
            let (c0, c1, w) = (nu.cut(a - 1), nu.cut(a), nu.part(a));
            let d_at = s.t_matrix_x(c0)?;
            let at = s.t_matrix_x(c1)?;
            out.d.push(d_at.block(c0, c0 + w, c0, c0 + w));
            out.dt.push(at.block(c0, c0 + w, c0, c0 + w));
            if a < m {
                let next = nu.part(a + 1);
                out.e.push(at.block(c0, c0 + w, c1, c1 + next));
                out.f.push(at.block(c1, c1 + next, c0, c0 + w));
            }
        }
        Ok(out)
    }

    /// The generator blocks from the Gauss factorization of `T(u)`.
    pub fn gauss_blocks(&self, nu: &Shape) -> Result<GaussFactors> {
        self.sigma.check_admissible(nu)?;
        gauss_factorize(self.algebra(), &self.sums.t_matrix(), nu)
    }

    fn table_from_blocks(&self, nu: &Shape, blocks: &GaussFactors) -> GeneratorTable {
        let k = self.order();
        let mut entries = BTreeMap::new();
        for key in GeneratorTable::index_set(nu, &self.sigma, k) {
            let a = key.a - 1;
            let m = match key.kind {
                Kind::D => &blocks.d[a],
                Kind::Dt => &blocks.dt[a],
                Kind::E => &blocks.e[a],
                Kind::F => &blocks.f[a],
            };
            entries.insert(key, m.get(key.i - 1, key.j - 1).coeff(key.r).clone());
        }
        GeneratorTable::from_entries(nu.clone(), self.sigma.clone(), k, entries)
    }

    /// The generator table from the closed path-sum formulas.
    pub fn generators_direct(&self, nu: &Shape) -> Result<GeneratorTable> {
        let blocks = self.direct_blocks(nu)?;
        Ok(self.table_from_blocks(nu, &blocks))
    }

    /// The generator table from the Gauss factorization of `T(u)`.
    pub fn generators_gauss(&self, nu: &Shape) -> Result<GeneratorTable> {
        let blocks = self.gauss_blocks(nu)?;
        Ok(self.table_from_blocks(nu, &blocks))
    }
}

/// Every coefficient where the two block families differ, as
/// `(kind, a, i, j, r, difference)`; empty when the routes agree.
pub fn compare_blocks(x: &GaussFactors, y: &GaussFactors) -> Vec<(GenKey, Element)> {
    let mut out = Vec::new();
    let fams = [(Kind::D, &x.d, &y.d), (Kind::Dt, &x.dt, &y.dt), (Kind::E, &x.e, &y.e), (Kind::F, &x.f, &y.f)];
    for (kind, xs, ys) in fams {
        for (a, (mx, my)) in xs.iter().zip(ys.iter()).enumerate() {
            for i in 0..mx.rows() {
                for j in 0..mx.cols() {
                    for r in 0..=mx.order() {
                        let diff = mx.get(i, j).coeff(r).sub(my.get(i, j).coeff(r));
                        if !diff.is_zero() {
                            out.push((GenKey::new(kind, a + 1, i + 1, j + 1, r), diff));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Key of a higher root element `E_{a,b;i,j}^{(r)}` or `F_{a,b;i,j}^{(r)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootKey {
    /// [`Kind::E`] or [`Kind::F`].
    pub kind: Kind,
    /// Lower block.
    pub a: usize,
    /// Upper block.
    pub b: usize,
    /// Row index.
    pub i: usize,
    /// Column index.
    pub j: usize,
    /// Superscript.
    pub r: usize,
}

/// Higher root elements with the pivot used for each.
#[derive(Clone, Debug, Default)]
pub struct HigherRoots {
    /// `key → (element, pivot k)`; pivot 0 marks the adjacent base case.
    pub entries: BTreeMap<RootKey, (Element, usize)>,
    /// Pivot-independence failures `(key, other pivot, difference)`.
    pub pivot_failures: Vec<(RootKey, usize, Element)>,
}

/// Computes `E_{a,b;i,j}^{(r)}` and `F_{a,b;i,j}^{(r)}` for all `a < b` and
/// `s_{a,b}(ν) < r ≤ K` by iterated commutators with pivot `k = pivot`;
/// with `audit`, every other pivot is tried and compared.
pub fn higher_roots(alg: &Algebra, table: &GeneratorTable, pivot: usize, audit: bool) -> Result<HigherRoots> {
    let nu = table.shape().clone();
    let m = nu.len();
    let k = table.order();
    let mut out = HigherRoots::default();
    for a in 1..m {
        for (kind, rows, cols) in [(Kind::E, nu.part(a), nu.part(a + 1)), (Kind::F, nu.part(a + 1), nu.part(a))] {
            for i in 1..=rows {
                for j in 1..=cols {
                    for r in table.range(kind, a) {
                        let x = table.value(kind, a, i, j, r)?;
                        out.entries.insert(RootKey { kind, a, b: a + 1, i, j, r }, (x, 0));
                    }
                }
            }
        }
    }
    for span in 2..m {
        for a in 1..=(m - span) {
            let b = a + span;
            let w = nu.part(b - 1);
            if pivot == 0 || pivot > w {
                return Err(YwError::IndexOutOfRange(format!("pivot {pivot} outside 1..={w}")));
            }
            // E_{a,b;i,j}^{(r)} = [E_{a,b−1;i,k}^{(r−s)}, E_{b−1;k,j}^{(s+1)}], s = s_{b−1,b}
            let se = table.rel_shift(b - 1, b);
            let sf = table.rel_shift(b, b - 1);
            let lo_e = table.rel_shift(a, b) + 1;
            let lo_f = table.rel_shift(b, a) + 1;
            let root_e = |i: usize, j: usize, r: usize, kk: usize, out: &HigherRoots| -> Result<Element> {
                let left = out
                    .entries
                    .get(&RootKey { kind: Kind::E, a, b: b - 1, i, j: kk, r: r - se })
                    .ok_or_else(|| YwError::MissingPrerequisite(format!("E_{{{a},{}}}", b - 1)))?;
                let right = table.value(Kind::E, b - 1, kk, j, se + 1)?;
                Ok(alg.bracket(&left.0, &right))
            };
            let root_f = |i: usize, j: usize, r: usize, kk: usize, out: &HigherRoots| -> Result<Element> {
                let left = table.value(Kind::F, b - 1, i, kk, sf + 1)?;
                let right = out
                    .entries
                    .get(&RootKey { kind: Kind::F, a, b: b - 1, i: kk, j, r: r - sf })
                    .ok_or_else(|| YwError::MissingPrerequisite(format!("F_{{{a},{}}}", b - 1)))?;
                Ok(alg.bracket(&left, &right.0))
            };
            let mut new = Vec::new();
            for i in 1..=nu.part(a) {
                for j in 1..=nu.part(b) {
                    for r in lo_e..=k {
                        let x = root_e(i, j, r, pivot, &out)?;
                        if audit {
                            for kk in (1..=w).filter(|&kk| kk != pivot) {
                                let y = root_e(i, j, r, kk, &out)?;
                                let d = x.sub(&y);
                                if !d.is_zero() {
                                    out.pivot_failures.push((RootKey { kind: Kind::E, a, b, i, j, r }, kk, d));
                                }
                            }
                        }
                        new.push((RootKey { kind: Kind::E, a, b, i, j, r }, (x, pivot)));
                    }
                }
            }
            for i in 1..=nu.part(b) {
                for j in 1..=nu.part(a) {
                    for r in lo_f..=k {
                        let x = root_f(i, j, r, pivot, &out)?;
                        if audit {
                            for kk in (1..=w).filter(|&kk| kk != pivot) {
                                let y = root_f(i, j, r, kk, &out)?;
                                let d = x.sub(&y);
                                if !d.is_zero() {
                                    out.pivot_failures.push((RootKey { kind: Kind::F, a, b, i, j, r }, kk, d));
                                }
                            }
                        }
                        new.push((RootKey { kind: Kind::F, a, b, i, j, r }, (x, pivot)));
                    }
                }
            }
            out.entries.extend(new);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: enumerate every factor sequence of the definition
    /// and multiply the factors out directly.
    fn brute_force(p: &Pyramid, alg: &Algebra, i: usize, j: usize, signs: &SignVector, r: usize) -> Element {
        if r == 0 {
            return if i == j { Element::scalar(Rational::int(signs.value(i))) } else { Element::zero() };
        }
        let big_n = p.big_n();
        let mut total = Element::zero();
        // stack of (factors so far, degree so far)
        fn rec(
            p: &Pyramid,
            alg: &Algebra,
            j: usize,
            signs: &SignVector,
            r: usize,
            big_n: usize,
            seq: &mut Vec<(usize, usize)>,
            deg: usize,
            total: &mut Element,
        ) {
            if deg == r {
                let &(_, last) = seq.last().unwrap();
                if p.row(last) != j {
                    return;
                }
                let mut sign = 1i64;
                let mut prod = Element::one();
                for (t, &(a, b)) in seq.iter().enumerate() {
                    if t + 1 < seq.len() {
                        sign *= signs.value(p.row(b));
                    }
                    prod = alg.mul(&prod, &alg.e_tilde(a, b));
                }
                total.add_scaled(&prod, &Rational::int(sign));
                return;
            }
            let candidates: Vec<usize> = match seq.last() {
                None => unreachable!(),
                Some(&(_, prev)) => (1..=big_n)
                    .filter(|&h| p.row(h) == p.row(prev))
                    .filter(|&h| {
                        if signs.is_minus(p.row(prev)) {
                            p.col(prev) >= p.col(h)
                        } else {
                            p.col(prev) < p.col(h)
                        }
                    })
                    .collect(),
            };
            for h in candidates {
                for k in 1..=big_n {
                    if p.col(h) <= p.col(k) {
                        let dd = p.col(k) - p.col(h) + 1;
                        if deg + dd <= r {
                            seq.push((h, k));
                            rec(p, alg, j, signs, r, big_n, seq, deg + dd, total);
                            seq.pop();
                        }
                    }
                }
            }
        }
        for h in p.row_bricks(i) {
            for k in 1..=big_n {
                if p.col(h) <= p.col(k) {
                    let dd = p.col(k) - p.col(h) + 1;
                    if dd <= r {
                        let mut seq = vec![(h, k)];
                        rec(p, alg, j, signs, r, big_n, &mut seq, dd, &mut total);
                    }
                }
            }
        }
        total
    }

    fn el(alg: &Algebra, terms: &[(&[(usize, usize)], i64)]) -> Element {
        let t: Vec<_> = terms.iter().map(|(w, c)| (w.to_vec(), Rational::int(*c))).collect();
        alg.from_readable(&t).unwrap()
    }

    #[test]
    fn small_examples() {
        let p = Pyramid::from_heights(&[1, 2]).unwrap();
        let s = PathSums::new(p, 4);
        let alg = s.algebra_rc();
        let x0 = SignVector::for_x(2, 0);
        let x1 = SignVector::for_x(2, 1);
        assert_eq!(s.path_invariant(1, 1, &x0, 1).unwrap(), alg.e(2, 2));
        assert!(s.path_invariant(1, 1, &x0, 2).unwrap().is_zero());
        let expect = el(&alg, &[(&[(1, 2)], -1), (&[(1, 1), (3, 2)], 1), (&[(3, 2)], -1), (&[(3, 2), (2, 2)], -1)]);
        assert_eq!(s.path_invariant(2, 1, &x1, 2).unwrap(), expect);
        // T_{1,1;0}(u) = 1 + e_{2,2} u^{-1}
        let t11 = s.t_series(1, 1, 0).unwrap();
        assert_eq!(t11.coeff(0), &Element::one());
        assert!((2..=4).all(|r| t11.coeff(r).is_zero()));
        assert_eq!(s.t_series(2, 2, 2).unwrap().coeff(0), &Element::scalar(Rational::int(-1)));
    }

    #[test]
    fn degree_one_and_two_formulas() {
        let p = Pyramid::from_heights(&[2, 2, 3, 1]).unwrap();
        let s = PathSums::new(p.clone(), 2);
        let alg = s.algebra_rc();
        for x in 0..=3 {
            let sv = SignVector::for_x(3, x);
            for i in 1..=3 {
                for j in 1..=3 {
                    let mut one = Element::zero();
                    let mut two = Element::zero();
                    for h in p.row_bricks(i) {
                        for k in p.row_bricks(j) {
                            if p.col(h) == p.col(k) {
                                one = one.add(&alg.e_tilde(h, k));
                            }
                            if p.col(h) + 1 == p.col(k) {
                                two = two.add(&alg.e_tilde(h, k));
                            }
                        }
                    }
                    for mid in 1..=3 {
                        for h1 in p.row_bricks(i) {
                            for k1 in p.row_bricks(mid) {
                                for h2 in p.row_bricks(mid) {
                                    for k2 in p.row_bricks(j) {
                                        if p.col(h1) != p.col(k1) || p.col(h2) != p.col(k2) {
                                            continue;
                                        }
                                        let prod = alg.mul(&alg.e_tilde(h1, k1), &alg.e_tilde(h2, k2));
                                        if mid <= x && p.col(k1) >= p.col(h2) {
                                            two = two.sub(&prod);
                                        }
                                        if mid > x && p.col(k1) < p.col(h2) {
                                            two = two.add(&prod);
                                        }
                                    }
                                }
                            }
                        }
                    }
                    assert_eq!(s.path_invariant(i, j, &sv, 1).unwrap(), one, "r=1 {i} {j} {x}");
                    assert_eq!(s.path_invariant(i, j, &sv, 2).unwrap(), two, "r=2 {i} {j} {x}");
                }
            }
        }
    }

    #[test]
    fn dynamic_programming_matches_enumeration() {
        let cases: &[&[usize]] = &[&[1, 2], &[2, 1], &[1, 2, 1], &[2, 2], &[1, 1, 1], &[2, 3], &[1, 3, 2], &[3, 1, 1]];
        for q in cases {
            let p = Pyramid::from_heights(q).unwrap();
            let n = p.n();
            let k = (p.l() + 2).min(5);
            let s = PathSums::new(p.clone(), k);
            let alg = s.algebra_rc();
            for mask in 0..(1u32 << n) {
                let sv = SignVector::from_minus((0..n).map(|b| mask >> b & 1 == 1).collect());
                for i in 1..=n {
                    for j in 1..=n {
                        for r in 0..=k {
                            let got = s.path_invariant(i, j, &sv, r).unwrap();
                            let want = brute_force(&p, &alg, i, j, &sv, r);
                            assert_eq!(got, want, "q={q:?} signs={mask:b} i={i} j={j} r={r}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn vanishing_and_degree_bounds() {
        let p = Pyramid::from_heights(&[1, 2, 2]).unwrap();
        let l = p.l();
        let s = PathSums::new(p, 2 * l + 2);
        let alg = s.algebra_rc();
        let t = s.t_matrix();
        for i in 0..2 {
            for j in 0..2 {
                for r in 0..=2 * l + 2 {
                    let c = t.get(i, j).coeff(r);
                    if r > l {
                        assert!(c.is_zero());
                    }
                    assert!(alg.degree(c).map_or(true, |d| d <= r as i64));
                    assert!(alg.is_parabolic(c));
                }
            }
        }
    }

    #[test]
    fn single_column_generators() {
        let p = Pyramid::from_heights(&[3]).unwrap();
        let inv = Invariants::new(p, 4).unwrap();
        let alg = inv.algebra();
        let tab = inv.generators_direct(&Shape::single(3)).unwrap();
        for i in 1..=3 {
            for j in 1..=3 {
                assert_eq!(tab.value(Kind::D, 1, i, j, 1).unwrap(), alg.e_tilde(i, j));
                for r in 2..=4 {
                    assert!(tab.value(Kind::D, 1, i, j, r).unwrap().is_zero());
                }
            }
        }
        assert!(tab.entries().keys().all(|k| matches!(k.kind, Kind::D | Kind::Dt)));
    }

    #[test]
    fn one_two_generators_and_routes() {
        let p = Pyramid::from_heights(&[1, 2]).unwrap();
        let inv = Invariants::new(p, 3).unwrap();
        let alg = inv.algebra();
        let nu = Shape::ones(2);
        let tab = inv.generators_direct(&nu).unwrap();
        assert_eq!(tab.value(Kind::E, 1, 1, 1, 1).unwrap(), alg.e(2, 3));
        assert_eq!(tab.value(Kind::D, 2, 1, 1, 1).unwrap(), el(alg, &[(&[(1, 1)], 1), (&[(3, 3)], 1), (&[], -1)]));
        assert!(tab.get(&GenKey::new(Kind::F, 1, 1, 1, 1)).is_none());
        let f2 = tab.value(Kind::F, 1, 1, 1, 2).unwrap();
        assert_eq!(f2, inv.sums().t_series(2, 1, 1).unwrap().coeff(2).clone());
        let direct = inv.direct_blocks(&nu).unwrap();
        let gauss = inv.gauss_blocks(&nu).unwrap();
        assert!(compare_blocks(&direct, &gauss).is_empty());
        assert_eq!(gauss.recompose(alg), inv.sums().t_matrix());
    }

    #[test]
    fn dtilde_contract_and_single_block() {
        let p = Pyramid::from_heights(&[2, 3, 1]).unwrap();
        let inv = Invariants::new(p, 4).unwrap();
        let alg = inv.algebra();
        for nu in inv.sigma().admissible_shapes() {
            let g = inv.gauss_blocks(&nu).unwrap();
            for (d, dt) in g.d.iter().zip(&g.dt) {
                let prod = d.mul(alg, dt);
                assert_eq!(prod, SeriesMatrix::identity(d.rows(), 4).neg());
            }
            assert_eq!(g.recompose(alg), inv.sums().t_matrix());
            assert!(compare_blocks(&g, &inv.direct_blocks(&nu).unwrap()).is_empty(), "shape {nu}");
        }
        let one = Invariants::new(Pyramid::from_heights(&[2, 2]).unwrap(), 3).unwrap();
        let g = one.gauss_blocks(&Shape::single(2)).unwrap();
        assert_eq!(g.d[0], one.sums().t_matrix());
        assert!(g.e.is_empty() && g.f.is_empty());
    }

    #[test]
    fn higher_roots_pivot_independence() {
        let p = Pyramid::from_heights(&[2, 2, 3, 1]).unwrap();
        let inv = Invariants::new(p, 3).unwrap();
        let nu = Shape::ones(3);
        let tab = inv.generators_direct(&nu).unwrap();
        let roots = higher_roots(inv.algebra(), &tab, 1, true).unwrap();
        assert!(roots.pivot_failures.is_empty());
        let s13 = inv.sigma().get(1, 3);
        let first = (1..=3)
            .find(|&r| roots.entries.get(&RootKey { kind: Kind::E, a: 1, b: 3, i: 1, j: 1, r }).is_some_and(|x| !x.0.is_zero()));
        assert_eq!(first, Some(s13 + 1));
    }

    #[test]
    fn genkey_parse() {
        let k: GenKey = "Dt:2:1:1:3".parse().unwrap();
        assert_eq!(k, GenKey::new(Kind::Dt, 2, 1, 1, 3));
        assert_eq!(k.to_string(), "Dt:2:1:1:3");
        assert!("X:1:1:1:1".parse::<GenKey>().is_err());
    }
}
