//! Pyramid combinatorics: brick numbering, shift matrices, shapes and the
//! centralizer index set.
//!
//! A pyramid is a row of brick columns of heights `q_1, …, q_l` that are
//! bottom-aligned inside a strip of height `n`. Rows are numbered `1..=n` from
//! top to bottom, columns `1..=l` from left to right, and bricks `1..=N` down
//! each column, columns taken from left to right. All indices exposed by this
//! module are 1-based, matching the usual matrix-unit conventions.

use serde::{Deserialize, Serialize};

use crate::error::{Result, YwError};

/// A unimodal sequence of column heights together with a height bound `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pyramid {
    q: Vec<usize>,
    n: usize,
    big_n: usize,
    row_of: Vec<usize>,
    col_of: Vec<usize>,
    /// `brick[r-1][c-1]` is the brick in row `r` and column `c`, or 0.
    brick: Vec<Vec<usize>>,
    p: Vec<usize>,
}

/// JSON form of a pyramid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PyramidSpec {
    pub q: Vec<usize>,
    pub n: usize,
}

impl Pyramid {
    /// Validates `q` and the height bound `n` and derives the brick table.
    pub fn new(q: &[usize], n: usize) -> Result<Pyramid> {
        if q.is_empty() {
            return Err(YwError::EmptyColumn("no columns given".into()));
        }
        if let Some(c) = q.iter().position(|&h| h == 0) {
            return Err(YwError::EmptyColumn(format!("column {} has height 0", c + 1)));
        }
        if let Some(index) = unimodality_violation(q) {
            return Err(YwError::NotUnimodal { q: q.to_vec(), index });
        }
        let max = *q.iter().max().unwrap();
        if n < max {
            return Err(YwError::HeightTooSmall { n, max });
        }
        let l = q.len();
        let big_n: usize = q.iter().sum();
        let mut row_of = Vec::with_capacity(big_n);
        let mut col_of = Vec::with_capacity(big_n);
        let mut brick = vec![vec![0; l]; n];
        for (c, &h) in q.iter().enumerate() {
            for r in (n - h + 1)..=n {
                row_of.push(r);
                col_of.push(c + 1);
                brick[r - 1][c] = row_of.len();
            }
        }
        let p = (1..=n)
            .map(|r| q.iter().filter(|&&h| h >= n - r + 1).count())
            .collect();
        Ok(Pyramid { q: q.to_vec(), n, big_n, row_of, col_of, brick, p })
    }

    /// The pyramid of height exactly `max(q)`.
    pub fn from_heights(q: &[usize]) -> Result<Pyramid> {
        let n = q.iter().copied().max().unwrap_or(0);
        Pyramid::new(q, n)
    }

    /// Column heights.
    pub fn q(&self) -> &[usize] {
        &self.q
    }
    /// Height bound.
    pub fn n(&self) -> usize {
        self.n
    }
    /// Number of columns (the level).
    pub fn l(&self) -> usize {
        self.q.len()
    }
    /// Number of bricks.
    pub fn big_n(&self) -> usize {
        self.big_n
    }
    /// Row lengths `p_1 ≤ … ≤ p_n`.
    pub fn p(&self) -> &[usize] {
        &self.p
    }
    /// Row of brick `b` (1-based).
    pub fn row(&self, b: usize) -> usize {
        self.row_of[b - 1]
    }
    /// Column of brick `b` (1-based).
    pub fn col(&self, b: usize) -> usize {
        self.col_of[b - 1]
    }
    /// The brick in row `r`, column `c`, if any.
    pub fn brick_at(&self, r: usize, c: usize) -> Option<usize> {
        if r == 0 || c == 0 || r > self.n || c > self.l() {
            return None;
        }
        match self.brick[r - 1][c - 1] {
            0 => None,
            b => Some(b),
        }
    }
    /// Bricks of row `r`, left to right.
    pub fn row_bricks(&self, r: usize) -> Vec<usize> {
        (1..=self.l()).filter_map(|c| self.brick_at(r, c)).collect()
    }
    /// Bricks of column `c`, top to bottom.
    pub fn column_bricks(&self, c: usize) -> std::ops::RangeInclusive<usize> {
        let start: usize = self.q[..c - 1].iter().sum();
        (start + 1)..=(start + self.q[c - 1])
    }
    /// True if all columns have the same height.
    pub fn is_rectangle(&self) -> bool {
        self.q.iter().all(|&h| h == self.q[0])
    }

    /// The diagonal shift `ρ_c = n − q_c − q_{c+1} − … − q_l`.
    pub fn rho(&self, c: usize) -> i64 {
        self.n as i64 - self.q[c - 1..].iter().sum::<usize>() as i64
    }

    /// All split points `k` (0..=l) with `q_1 ≤ … ≤ q_k` and `q_{k+1} ≥ … ≥ q_l`.
    pub fn split_points(&self) -> Vec<usize> {
        split_points(&self.q)
    }

    /// Shift matrix read off with the largest split point.
    ///
    /// Refuses `n > max(q)`: the count then depends on the split point.
    pub fn shift_matrix(&self) -> Result<ShiftMatrix> {
        let max = *self.q.iter().max().unwrap();
        if self.n != max {
            return Err(YwError::HeightAmbiguous { n: self.n, max });
        }
        let k = *self.split_points().last().unwrap();
        Ok(self.shift_matrix_with_split(k))
    }

    /// Shift matrix read off with an explicit split point `k`.
    pub fn shift_matrix_with_split(&self, k: usize) -> ShiftMatrix {
        let n = self.n;
        let mut s = vec![vec![0usize; n]; n];
        for i in 1..=n {
            for j in 1..=n {
                let v = if i >= j {
                    (0..k).filter(|&c| i > n - self.q[c] && n - self.q[c] >= j).count()
                } else {
                    (k..self.l()).filter(|&c| i <= n - self.q[c] && n - self.q[c] < j).count()
                };
                s[i - 1][j - 1] = v;
            }
        }
        ShiftMatrix { s }
    }

    /// JSON form.
    pub fn spec(&self) -> PyramidSpec {
        PyramidSpec { q: self.q.clone(), n: self.n }
    }

    /// Pyramid made of a subset of the columns (1-based, increasing), same `n`.
    pub fn sub_pyramid(&self, cols: &[usize]) -> Result<Pyramid> {
        if cols.is_empty() || cols.windows(2).any(|w| w[0] >= w[1]) || cols.iter().any(|&c| c == 0 || c > self.l()) {
            return Err(YwError::BadColumnSet(format!("{cols:?} is not an increasing subset of 1..={}", self.l())));
        }
        let q: Vec<usize> = cols.iter().map(|&c| self.q[c - 1]).collect();
        Pyramid::new(&q, self.n)
    }
}

/// First 1-based column index at which heights rise after having fallen.
fn unimodality_violation(q: &[usize]) -> Option<usize> {
    let mut fallen = false;
    for c in 1..q.len() {
        if q[c] < q[c - 1] {
            fallen = true;
        } else if q[c] > q[c - 1] && fallen {
            return Some(c + 1);
        }
    }
    None
}

fn split_points(q: &[usize]) -> Vec<usize> {
    (0..=q.len())
        .filter(|&k| {
            q[..k].windows(2).all(|w| w[0] <= w[1]) && q[k..].windows(2).all(|w| w[0] >= w[1])
        })
        .collect()
}

/// An `n × n` matrix of non-negative integers with zero diagonal satisfying
/// `s_ij + s_jk = s_ik` whenever `|i−j| + |j−k| = |i−k|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct ShiftMatrix {
    s: Vec<Vec<usize>>,
}

impl TryFrom<Vec<Vec<usize>>> for ShiftMatrix {
    type Error = YwError;
    fn try_from(rows: Vec<Vec<usize>>) -> Result<Self> {
        ShiftMatrix::new(rows)
    }
}

impl From<ShiftMatrix> for Vec<Vec<usize>> {
    fn from(s: ShiftMatrix) -> Self {
        s.s
    }
}

impl ShiftMatrix {
    /// Validates squareness, the zero diagonal and additivity.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<ShiftMatrix> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(YwError::NotShiftMatrix("not a nonempty square matrix".into()));
        }
        let m = ShiftMatrix { s: rows };
        if let Some((i, j, k)) = m.additivity_violation() {
            return Err(YwError::NotShiftMatrix(format!(
                "s_{i},{j} + s_{j},{k} != s_{i},{k}"
            )));
        }
        Ok(m)
    }

    /// The zero matrix (the unshifted case).
    pub fn zero(n: usize) -> ShiftMatrix {
        ShiftMatrix { s: vec![vec![0; n]; n] }
    }

    /// Size.
    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// Entry `s_{i,j}` (1-based).
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.s[i - 1][j - 1]
    }

    /// Rows of the matrix.
    pub fn rows(&self) -> &[Vec<usize>] {
        &self.s
    }

    /// A triple violating the additivity law (the diagonal counts as `i=j=k`).
    pub fn additivity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n();
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    let aligned = i.abs_diff(j) + j.abs_diff(k) == i.abs_diff(k);
                    if aligned && self.get(i, j) + self.get(j, k) != self.get(i, k) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Row lengths `p_i = l − s_{i,n} − s_{n,i}` at level `l`.
    pub fn row_lengths(&self, l: usize) -> Result<Vec<usize>> {
        let n = self.n();
        let need = self.get(1, n) + self.get(n, 1);
        if l < need {
            return Err(YwError::LevelTooSmall { l, need });
        }
        Ok((1..=n).map(|i| l - self.get(i, n) - self.get(n, i)).collect())
    }

    /// The pyramid with `p_i` bricks in row `i`, indented `s_{n,i}` from the left.
    pub fn pyramid_of(&self, l: usize) -> Result<Pyramid> {
        let n = self.n();
        let p = self.row_lengths(l)?;
        let q: Vec<usize> = (1..=l)
            .map(|c| {
                (1..=n)
                    .filter(|&i| {
                        let left = self.get(n, i);
                        c > left && c <= left + p[i - 1]
                    })
                    .count()
            })
            .collect();
        if q.contains(&0) {
            return Err(YwError::EmptyColumn(format!("level {l} leaves an empty column")));
        }
        let pyr = Pyramid::new(&q, n)?;
        if pyr.p() != p.as_slice() {
            return Err(YwError::NotShiftMatrix("rows do not stack into a pyramid".into()));
        }
        Ok(pyr)
    }

    /// Triples `(i, j, r)` with `s_{i,j} < r ≤ s_{i,j} + p_{min(i,j)}`, ordered
    /// by `(i, j, r)`; `r` is the Kazhdan degree of the basis vector.
    pub fn centralizer_index_set(&self, p: &[usize]) -> Vec<(usize, usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                let s = self.get(i, j);
                for r in (s + 1)..=(s + p[i.min(j) - 1]) {
                    out.push((i, j, r));
                }
            }
        }
        out
    }

    /// True if every diagonal block of `nu` is zero.
    pub fn is_admissible(&self, nu: &Shape) -> bool {
        nu.total() == self.n()
            && (1..=nu.len()).all(|a| {
                let (lo, hi) = (nu.cut(a - 1) + 1, nu.cut(a));
                self.get(lo, hi) == 0 && self.get(hi, lo) == 0
            })
    }

    /// Checks admissibility with a descriptive error.
    pub fn check_admissible(&self, nu: &Shape) -> Result<()> {
        if nu.total() != self.n() {
            return Err(YwError::NotAdmissible(format!(
                "shape {nu} is not a composition of {}",
                self.n()
            )));
        }
        for a in 1..=nu.len() {
            let (lo, hi) = (nu.cut(a - 1) + 1, nu.cut(a));
            if self.get(lo, hi) != 0 || self.get(hi, lo) != 0 {
                return Err(YwError::NotAdmissible(format!(
                    "shape {nu}: diagonal block {a} (rows {lo}..={hi}) of the shift matrix is nonzero"
                )));
            }
        }
        Ok(())
    }

    /// The admissible shape of smallest length (blocks grown greedily).
    pub fn minimal_shape(&self) -> Shape {
        let n = self.n();
        let mut parts = Vec::new();
        let mut lo = 1;
        while lo <= n {
            let mut hi = lo;
            while hi < n && self.get(lo, hi + 1) == 0 && self.get(hi + 1, lo) == 0 {
                hi += 1;
            }
            parts.push(hi - lo + 1);
            lo = hi + 1;
        }
        Shape { parts }
    }

    /// All admissible shapes, in lexicographic order of their parts.
    pub fn admissible_shapes(&self) -> Vec<Shape> {
        Shape::compositions(self.n()).into_iter().filter(|nu| self.is_admissible(nu)).collect()
    }

    /// `s_{a,b}(ν) = s_{ν_1+…+ν_a, ν_1+…+ν_b}`.
    pub fn relative_shift(&self, nu: &Shape, a: usize, b: usize) -> usize {
        self.get(nu.cut(a), nu.cut(b))
    }
}

/// `p_a(ν) = p_{ν_1+…+ν_a}`.
pub fn relative_length(p: &[usize], nu: &Shape, a: usize) -> usize {
    p[nu.cut(a) - 1]
}

/// A composition `ν = (ν_1, …, ν_m)` of `n` with positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Shape {
    parts: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Shape {
    type Error = YwError;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Shape::new(parts)
    }
}

impl From<Shape> for Vec<usize> {
    fn from(s: Shape) -> Self {
        s.parts
    }
}

impl Shape {
    /// Rejects empty shapes and zero parts.
    pub fn new(parts: Vec<usize>) -> Result<Shape> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(YwError::NotAdmissible(format!("{parts:?} has an empty part")));
        }
        Ok(Shape { parts })
    }
    /// `(1, 1, …, 1)`.
    pub fn ones(n: usize) -> Shape {
        Shape { parts: vec![1; n] }
    }
    /// `(n)`.
    pub fn single(n: usize) -> Shape {
        Shape { parts: vec![n] }
    }
    /// Number of parts `m`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }
    /// Never true for a valid shape; provided for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
    /// Parts.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }
    /// Part `ν_a` (1-based).
    pub fn part(&self, a: usize) -> usize {
        self.parts[a - 1]
    }
    /// Partial sum `ν_1 + … + ν_a` (0 for `a = 0`).
    pub fn cut(&self, a: usize) -> usize {
        self.parts[..a].iter().sum()
    }
    /// Sum of the parts.
    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }
    /// All compositions of `n`.
    pub fn compositions(n: usize) -> Vec<Shape> {
        fn rec(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Shape>) {
            if rest == 0 {
                out.push(Shape { parts: cur.clone() });
                return;
            }
            for k in 1..=rest {
                cur.push(k);
                rec(rest - k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl std::str::FromStr for Shape {
    type Err = YwError;
    fn from_str(s: &str) -> Result<Shape> {
        let parts = parse_list(s)?;
        Shape::new(parts)
    }
}

/// Parses `"2,2,3,1"` (brackets and spaces tolerated).
pub fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.trim()
        .trim_start_matches(['(', '['])
        .trim_end_matches([')', ']'])
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| YwError::Parse(format!("`{t}` is not a non-negative integer in `{s}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sm(rows: &[&[usize]]) -> ShiftMatrix {
        ShiftMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn running_example() {
        let p = Pyramid::new(&[2, 2, 3, 1], 3).unwrap();
        assert_eq!(p.p(), &[1, 3, 4]);
        assert_eq!(p.big_n(), 8);
        assert_eq!(p.shift_matrix().unwrap(), sm(&[&[0, 0, 1], &[2, 0, 1], &[2, 0, 0]]));
        // bricks down columns: column 3 holds bricks 5,6,7 in rows 1,2,3
        assert_eq!((p.row(5), p.col(5)), (1, 3));
        assert_eq!((p.row(8), p.col(8)), (3, 4));
        assert_eq!(p.brick_at(2, 1), Some(1));
        assert_eq!(p.brick_at(1, 1), None);
    }

    #[test]
    fn not_unimodal_names_column() {
        match Pyramid::new(&[4, 2, 3, 3], 4) {
            Err(YwError::NotUnimodal { index, .. }) => assert_eq!(index, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(Pyramid::new(&[2, 3], 2), Err(YwError::HeightTooSmall { .. })));
    }

    #[test]
    fn single_column_and_rectangle() {
        let p = Pyramid::new(&[3], 3).unwrap();
        assert_eq!(p.p(), &[1, 1, 1]);
        assert_eq!(p.shift_matrix().unwrap(), ShiftMatrix::zero(3));
        let s = p.shift_matrix().unwrap();
        assert_eq!(s.centralizer_index_set(p.p()).len(), 9);
        let r = Pyramid::new(&[2, 2, 2], 2).unwrap();
        assert_eq!(r.shift_matrix().unwrap(), ShiftMatrix::zero(2));
        assert_eq!(ShiftMatrix::zero(2).pyramid_of(3).unwrap().q(), &[2, 2, 2]);
    }

    #[test]
    fn small_left_justified() {
        let p = Pyramid::new(&[1, 2], 2).unwrap();
        let s = p.shift_matrix().unwrap();
        assert_eq!(s, sm(&[&[0, 0], &[1, 0]]));
        assert_eq!(s.pyramid_of(2).unwrap().q(), &[1, 2]);
        assert_eq!(
            s.centralizer_index_set(p.p()),
            vec![(1, 1, 1), (1, 2, 1), (2, 1, 2), (2, 2, 1), (2, 2, 2)]
        );
        assert_eq!(p.rho(1), -1);
    }

    #[test]
    fn seven_column_example_from_shift_matrix() {
        let s = sm(&[&[0, 1, 1, 3], &[0, 0, 0, 2], &[1, 1, 0, 2], &[2, 2, 1, 0]]);
        let p = s.pyramid_of(7).unwrap();
        assert_eq!(p.q(), &[1, 2, 4, 4, 3, 1, 1]);
        assert_eq!(p.shift_matrix().unwrap(), s);
    }

    #[test]
    fn shapes() {
        let s = sm(&[&[0, 0, 1], &[2, 0, 1], &[2, 0, 0]]);
        // both two-block shapes contain a nonzero diagonal entry
        assert_eq!(s.minimal_shape(), Shape::ones(3));
        assert!(!s.is_admissible(&Shape::new(vec![2, 1]).unwrap()));
        assert!(!s.is_admissible(&Shape::new(vec![1, 2]).unwrap()));
        let nu = Shape::ones(3);
        assert_eq!(s.relative_shift(&nu, 1, 3), 1);
        assert_eq!(s.relative_shift(&nu, 3, 1), 2);
        // in the seven-column example s_12 = 1 already separates rows 1 and 2
        let t = sm(&[&[0, 1, 1, 3], &[0, 0, 0, 2], &[1, 1, 0, 2], &[2, 2, 1, 0]]);
        assert_eq!(t.minimal_shape(), Shape::ones(4));
        let u = ShiftMatrix::new(vec![vec![0, 0, 1], vec![0, 0, 1], vec![0, 0, 0]]).unwrap();
        assert_eq!(u.minimal_shape().parts(), &[2, 1]);
        assert_eq!(u.relative_shift(&u.minimal_shape(), 1, 2), 1);
        assert_eq!(ShiftMatrix::zero(4).minimal_shape(), Shape::single(4));
        assert_eq!(Shape::compositions(4).len(), 8);
    }

    #[test]
    fn level_too_small() {
        let s = sm(&[&[0, 0, 1], &[2, 0, 1], &[2, 0, 0]]);
        assert!(matches!(s.pyramid_of(2), Err(YwError::LevelTooSmall { .. })));
    }

    #[test]
    fn larger_height_bound_is_refused_for_shift_matrix() {
        let p = Pyramid::new(&[1, 2], 3).unwrap();
        assert!(matches!(p.shift_matrix(), Err(YwError::HeightAmbiguous { .. })));
        assert_eq!(p.p(), &[0, 1, 2]);
    }
}
