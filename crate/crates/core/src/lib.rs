//! Exact construction of finite W-algebras of type A and their shifted
//! Yangian generators.
//!
//! The crate is organised bottom-up:
//!
//! * [`pyramid`] — pyramids, brick numbering, shift matrices, shapes and the
//!   centralizer index set;
//! * [`engine`] — PBW-normal-form arithmetic in U(gl_N), the projection
//!   `pr_χ`, the twisted `m`-action and invariance tests;
//! * [`series`] and [`invariants`] — truncated power series in `u⁻¹`, the
//!   path-sum invariants `T_{i,j;x}^{(r)}`, block Gauss factorisation and the
//!   generator tables `D`, `D̃`, `E`, `F`;
//! * [`relations`] — machine checks of the defining relations, parabolic
//!   relations, truncation, invariance and PBW degree counts;
//! * [`transforms`] — Miura transform, column removal, comultiplications and
//!   the rectangular row-determinant picture;
//! * [`json`] — the exchange formats.

pub mod engine;
pub mod error;
pub mod invariants;
pub mod json;
pub mod pyramid;
pub mod rational;
pub mod relations;
pub mod series;
pub mod transforms;

pub use engine::{Algebra, Element, Gen, Mono};
pub use error::{Result, YwError};
pub use invariants::{GenKey, GeneratorTable, Invariants, Kind, PathSums, SignVector};
pub use pyramid::{Pyramid, Shape, ShiftMatrix};
pub use rational::Rational;
pub use relations::{CheckReport, Claim, Relations, Status};
pub use series::{Series, SeriesMatrix};
