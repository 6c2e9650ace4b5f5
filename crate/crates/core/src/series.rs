//! Truncated power series in `u⁻¹` with enveloping-algebra coefficients, and
//! matrices of such series.
//!
//! A [`Series`] of order `K` stores the coefficients `c_0, …, c_K` of
//! `Σ_r c_r u^{-r}`; products never read or produce terms beyond `K`.

use crate::engine::{Algebra, Element};
use crate::error::{Result, YwError};
use crate::rational::Rational;

/// `Σ_{r=0}^{K} c_r u^{-r}` with [`Element`] coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Element>,
}

impl Series {
    /// The zero series of order `k`.
    pub fn zero(k: usize) -> Series {
        Series { coeffs: vec![Element::zero(); k + 1] }
    }

    /// The constant series `c`.
    pub fn constant(c: Element, k: usize) -> Series {
        let mut s = Series::zero(k);
        s.coeffs[0] = c;
        s
    }

    /// Builds a series from its coefficients `c_0, …, c_K`.
    pub fn from_coeffs(coeffs: Vec<Element>) -> Series {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        Series { coeffs }
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `u^{-r}` (zero beyond the truncation).
    pub fn coeff(&self, r: usize) -> &Element {
        &self.coeffs[r]
    }

    /// All coefficients.
    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    /// Mutable coefficient access.
    pub fn coeff_mut(&mut self, r: usize) -> &mut Element {
        &mut self.coeffs[r]
    }

    /// True if every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Element::is_zero)
    }

    /// `self + other`.
    pub fn add(&self, other: &Series) -> Series {
        self.zip(other, |a, b| a.add(b))
    }

    /// `self − other`.
    pub fn sub(&self, other: &Series) -> Series {
        self.zip(other, |a, b| a.sub(b))
    }

    /// `−self`.
    pub fn neg(&self) -> Series {
        Series { coeffs: self.coeffs.iter().map(Element::neg).collect() }
    }

    fn zip(&self, other: &Series, f: impl Fn(&Element, &Element) -> Element) -> Series {
        assert_eq!(self.order(), other.order(), "series of different truncation order");
        Series { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect() }
    }

    /// `out += c · self · other`, truncated.
    pub fn mul_acc(&self, alg: &Algebra, other: &Series, c: &Rational, out: &mut Series) {
        let k = self.order();
        for r in 0..=k {
            if self.coeffs[r].is_zero() {
                continue;
            }
            for s in 0..=(k - r) {
                if other.coeffs[s].is_zero() {
                    continue;
                }
                alg.mul_acc(&self.coeffs[r], &other.coeffs[s], c, &mut out.coeffs[r + s]);
            }
        }
    }

    /// `self · other`, truncated.
    pub fn mul(&self, alg: &Algebra, other: &Series) -> Series {
        let mut out = Series::zero(self.order());
        self.mul_acc(alg, other, &Rational::ONE, &mut out);
        out
    }
}

/// A rectangular matrix of [`Series`] of a common order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Series>,
}

impl SeriesMatrix {
    /// The zero matrix.
    pub fn zero(rows: usize, cols: usize, k: usize) -> SeriesMatrix {
        SeriesMatrix { rows, cols, entries: vec![Series::zero(k); rows * cols] }
    }

    /// The identity matrix.
    pub fn identity(n: usize, k: usize) -> SeriesMatrix {
        let mut m = SeriesMatrix::zero(n, n, k);
        for i in 0..n {
            *m.get_mut(i, i).coeff_mut(0) = Element::one();
        }
        m
    }

    /// Builds a matrix from a generator of 0-based entries.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Series) -> SeriesMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        SeriesMatrix { rows, cols, entries }
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }
    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }
    /// Truncation order.
    pub fn order(&self) -> usize {
        self.entries.first().map_or(0, Series::order)
    }
    /// Entry `(i, j)`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> &Series {
        &self.entries[i * self.cols + j]
    }
    /// Mutable entry `(i, j)`, 0-based.
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Series {
        &mut self.entries[i * self.cols + j]
    }

    /// The sub-block with rows `r0..r1` and columns `c0..c1` (0-based, half open).
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> SeriesMatrix {
        SeriesMatrix::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// `self + other`.
    pub fn add(&self, other: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        SeriesMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(other.get(i, j)))
    }

    /// `self − other`.
    pub fn sub(&self, other: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        SeriesMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    /// `−self`.
    pub fn neg(&self) -> SeriesMatrix {
        SeriesMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).neg())
    }

    /// Matrix product, truncated.
    pub fn mul(&self, alg: &Algebra, other: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let k = self.order();
        SeriesMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Series::zero(k);
            for l in 0..self.cols {
                self.get(i, l).mul_acc(alg, other.get(l, j), &Rational::ONE, &mut acc);
            }
            acc
        })
    }

    /// The constant-term matrix, provided every constant term is a scalar.
    fn scalar_constant_term(&self) -> Option<Vec<Vec<Rational>>> {
        let mut out = vec![vec![Rational::ZERO; self.cols]; self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let c = self.get(i, j).coeff(0);
                if c.iter().any(|(m, _)| !m.is_empty()) {
                    return None;
                }
                out[i][j] = c.constant_term();
            }
        }
        Some(out)
    }

    /// Inverse of a square series matrix whose constant term is an invertible
    /// scalar matrix `C`: writing `M = C(I + X)` with `X` of positive order,
    /// `M⁻¹ = (I − X + X² − …) C⁻¹`, evaluated degree by degree.
    pub fn inverse(&self, alg: &Algebra) -> Result<SeriesMatrix> {
        if self.rows != self.cols {
            return Err(YwError::NotInvertible(format!("{}×{} matrix is not square", self.rows, self.cols)));
        }
        let n = self.rows;
        let k = self.order();
        let c = self
            .scalar_constant_term()
            .ok_or_else(|| YwError::NotInvertible("constant term is not a scalar matrix".into()))?;
        let cinv = invert_rational(&c)
            .ok_or_else(|| YwError::NotInvertible("constant term matrix is singular".into()))?;
        // X = C⁻¹ (M − C), coefficientwise
        let x = SeriesMatrix::from_fn(n, n, |i, j| {
            let mut s = Series::zero(k);
            for r in 1..=k {
                let mut acc = Element::zero();
                for l in 0..n {
                    acc.add_scaled(self.get(l, j).coeff(r), &cinv[i][l]);
                }
                s.coeffs[r] = acc;
            }
            s
        });
        // B = (I + X)⁻¹: B_0 = I, B_r = −Σ_{s=1}^{r} X_s B_{r−s}
        let mut b = SeriesMatrix::identity(n, k);
        for r in 1..=k {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Element::zero();
                    for s in 1..=r {
                        for l in 0..n {
                            let xs = x.get(i, l).coeff(s);
                            if xs.is_zero() {
                                continue;
                            }
                            alg.mul_acc(xs, b.get(l, j).coeff(r - s), &Rational::int(-1), &mut acc);
                        }
                    }
                    b.get_mut(i, j).coeffs[r] = acc;
                }
            }
        }
        // M⁻¹ = B C⁻¹
        Ok(SeriesMatrix::from_fn(n, n, |i, j| {
            let mut s = Series::zero(k);
            for r in 0..=k {
                let mut acc = Element::zero();
                for l in 0..n {
                    acc.add_scaled(b.get(i, l).coeff(r), &cinv[l][j]);
                }
                s.coeffs[r] = acc;
            }
            s
        }))
    }
}

/// Inverse of a square rational matrix by Gauss–Jordan elimination.
pub fn invert_rational(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::ONE } else { Rational::ZERO }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip()?;
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let d = &a[col][c] * &f;
                    a[r][c] -= &d;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_inverse() {
        let alg = Algebra::gl(2);
        let c = alg.e(1, 2);
        let k = 4;
        let mut s = Series::constant(Element::one(), k);
        *s.coeff_mut(1) = c.clone();
        let m = SeriesMatrix::from_fn(1, 1, |_, _| s.clone());
        let inv = m.inverse(&alg).unwrap();
        let neg = inv.get(0, 0).neg();
        // −(1 + c u⁻¹)⁻¹ = −1 + c u⁻¹ − c² u⁻² + …
        let mut pow = Element::one();
        for r in 0..=k {
            let sign = if r % 2 == 0 { -1 } else { 1 };
            assert_eq!(neg.coeff(r), &pow.scale(&Rational::int(sign)));
            pow = alg.mul(&pow, &c);
        }
        let prod = m.mul(&alg, &inv);
        assert_eq!(prod, SeriesMatrix::identity(1, k));
    }

    #[test]
    fn singular_constant_term() {
        let alg = Algebra::gl(1);
        let m = SeriesMatrix::zero(1, 1, 2);
        assert!(matches!(m.inverse(&alg), Err(YwError::NotInvertible(_))));
    }

    #[test]
    fn rational_inverse() {
        let m = vec![vec![Rational::int(0), Rational::int(-1)], vec![Rational::int(2), Rational::int(3)]];
        let inv = invert_rational(&m).unwrap();
        assert_eq!(inv[0][0], Rational::new(3, 2));
        assert_eq!(inv[0][1], Rational::new(1, 2));
        assert_eq!(inv[1][0], Rational::int(-1));
        assert_eq!(inv[1][1], Rational::ZERO);
    }
}
