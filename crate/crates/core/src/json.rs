//! JSON exchange formats.
//!
//! * Element: `{"N": …, "terms": [{"c": "num/den", "m": [[i, j], …]}, …]}`
//!   with terms sorted by their monomial, read as a list of index pairs.
//! * Generator table: `{"schema": "yw-1", "pyramid": {…}, "shape": […],
//!   "K": …, "generators": [{"kind", "a", "i", "j", "r", "elem"}, …]}` sorted
//!   by `(kind, a, i, j, r)`.
//! * Report: `{"schema": "yw-1", "claims": […], "summary": {"pass", "fail"}}`.
//! * Tensor element: `{"N1", "N2", "terms": [{"c", "m1", "m2"}, …]}` sorted by
//!   `(m1, m2)`.
//!
//! Every document is plain data; decoding validates indices against the
//! target algebra.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::engine::{Algebra, Element};
use crate::error::{Result, YwError};
use crate::invariants::{GenKey, GeneratorTable, Kind};
use crate::pyramid::{PyramidSpec, Shape, ShiftMatrix};
use crate::rational::Rational;

/// Schema tag of every top-level document.
pub const SCHEMA: &str = "yw-1";

/// One term of an [`ElementJson`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    /// Coefficient.
    pub c: Rational,
    /// Monomial as `[i, j]` pairs, in PBW order.
    pub m: Vec<[usize; 2]>,
}

/// Wire form of an [`Element`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    /// Rank of the enveloping algebra.
    #[serde(rename = "N")]
    pub n: usize,
    /// Terms sorted by monomial.
    pub terms: Vec<TermJson>,
}

impl ElementJson {
    /// Encodes an element of `alg`.
    pub fn encode(alg: &Algebra, x: &Element) -> ElementJson {
        let mut terms: Vec<TermJson> = alg
            .readable_terms(x)
            .into_iter()
            .map(|(m, c)| TermJson { c, m: m.into_iter().map(|(i, j)| [i, j]).collect() })
            .collect();
        terms.sort_by(|a, b| a.m.cmp(&b.m));
        ElementJson { n: alg.big_n(), terms }
    }

    /// Decodes into `alg`, normal-ordering each monomial.
    pub fn decode(&self, alg: &Algebra) -> Result<Element> {
        if self.n != alg.big_n() {
            return Err(YwError::DimensionMismatch(self.n, alg.big_n()));
        }
        let terms: Vec<(Vec<(usize, usize)>, Rational)> =
            self.terms.iter().map(|t| (t.m.iter().map(|p| (p[0], p[1])).collect(), t.c.clone())).collect();
        alg.from_readable(&terms)
    }
}

/// One entry of a [`TableJson`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    /// `"D"`, `"Dt"`, `"E"` or `"F"`.
    pub kind: Kind,
    /// Block.
    pub a: usize,
    /// Row in the block.
    pub i: usize,
    /// Column in the block.
    pub j: usize,
    /// Superscript.
    pub r: usize,
    /// The element of U(p).
    pub elem: ElementJson,
}

/// Wire form of a [`GeneratorTable`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    /// Always [`SCHEMA`].
    pub schema: String,
    /// Column heights and height bound.
    pub pyramid: PyramidSpec,
    /// Shift matrix.
    pub sigma: ShiftMatrix,
    /// Shape ν.
    pub shape: Shape,
    /// Truncation order.
    #[serde(rename = "K")]
    pub k: usize,
    /// Entries sorted by `(kind, a, i, j, r)`.
    pub generators: Vec<GeneratorJson>,
}

impl TableJson {
    /// Encodes a table of the pyramid `spec`.
    pub fn encode(alg: &Algebra, spec: PyramidSpec, table: &GeneratorTable) -> TableJson {
        let generators = table
            .entries()
            .iter()
            .map(|(k, x)| GeneratorJson { kind: k.kind, a: k.a, i: k.i, j: k.j, r: k.r, elem: ElementJson::encode(alg, x) })
            .collect();
        TableJson {
            schema: SCHEMA.into(),
            pyramid: spec,
            sigma: table.sigma().clone(),
            shape: table.shape().clone(),
            k: table.order(),
            generators,
        }
    }

    /// Decodes into `alg`.
    pub fn decode(&self, alg: &Algebra) -> Result<GeneratorTable> {
        check_schema(&self.schema)?;
        let mut entries = BTreeMap::new();
        for g in &self.generators {
            entries.insert(GenKey::new(g.kind, g.a, g.i, g.j, g.r), g.elem.decode(alg)?);
        }
        Ok(GeneratorTable::from_entries(self.shape.clone(), self.sigma.clone(), self.k, entries))
    }
}

/// One term of a [`TensorJson`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorTermJson {
    /// Coefficient.
    pub c: Rational,
    /// Left monomial.
    pub m1: Vec<[usize; 2]>,
    /// Right monomial.
    pub m2: Vec<[usize; 2]>,
}

/// Wire form of a tensor element, terms sorted by `(m1, m2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorJson {
    /// Rank of the left factor.
    #[serde(rename = "N1")]
    pub n1: usize,
    /// Rank of the right factor.
    #[serde(rename = "N2")]
    pub n2: usize,
    /// Terms.
    pub terms: Vec<TensorTermJson>,
}

/// Errors unless `s` is the supported schema tag.
pub fn check_schema(s: &str) -> Result<()> {
    if s == SCHEMA {
        Ok(())
    } else {
        Err(YwError::Parse(format!("unsupported schema {s:?}, expected {SCHEMA:?}")))
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data always serializes");
    s.push('\n');
    s
}

/// Parses a JSON document.
pub fn from_str<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| YwError::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::Invariants;
    use crate::pyramid::Pyramid;

    #[test]
    fn element_roundtrip_and_order() {
        let p = Pyramid::from_heights(&[1, 2]).unwrap();
        let alg = Algebra::for_pyramid(&p);
        let x = alg.mul(&alg.e_tilde(1, 1), &alg.e(3, 2)).add(&alg.e(2, 3).scale(&Rational::new(-1, 2)));
        let j = ElementJson::encode(&alg, &x);
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(
            s,
            r#"{"N":3,"terms":[{"c":"1/1","m":[[1,1],[3,2]]},{"c":"-1/2","m":[[2,3]]},{"c":"-1/1","m":[[3,2]]}]}"#
        );
        let back: ElementJson = from_str(&s).unwrap();
        assert_eq!(back.decode(&alg).unwrap(), x);
        assert!(back.decode(&Algebra::gl(2)).is_err());
    }

    #[test]
    fn table_roundtrip() {
        let p = Pyramid::from_heights(&[1, 2]).unwrap();
        let inv = Invariants::new(p.clone(), 3).unwrap();
        let tab = inv.generators_direct(&Shape::ones(2)).unwrap();
        let j = TableJson::encode(inv.algebra(), p.spec(), &tab);
        let s = to_pretty(&j);
        let back: TableJson = from_str(&s).unwrap();
        assert_eq!(back.decode(inv.algebra()).unwrap(), tab);
        assert!(s.contains("\"schema\": \"yw-1\""));
        let mut bad = back.clone();
        bad.schema = "yw-0".into();
        assert!(bad.decode(inv.algebra()).is_err());
    }
}
