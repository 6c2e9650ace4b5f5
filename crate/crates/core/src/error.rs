//! Error type shared by every module of the library.

use thiserror::Error;

/// Everything that can go wrong when building pyramids, elements, generator
/// tables or verification runs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum YwError {
    /// The column heights are not unimodal; `index` is the 1-based column at
    /// which a rise follows a fall.
    #[error("NotUnimodal: column heights {q:?} rise again at column {index}")]
    NotUnimodal { q: Vec<usize>, index: usize },
    /// A column of height zero, or no columns at all.
    #[error("EmptyColumn: {0}")]
    EmptyColumn(String),
    /// The height bound `n` is smaller than the tallest column.
    #[error("HeightTooSmall: n = {n} but the tallest column has height {max}")]
    HeightTooSmall { n: usize, max: usize },
    /// The shift matrix of a pyramid is only defined when `n` equals its height.
    #[error("HeightAmbiguous: the shift matrix depends on the split point when n = {n} exceeds the pyramid height {max}")]
    HeightAmbiguous { n: usize, max: usize },
    /// The level is too small for the shift matrix.
    #[error("LevelTooSmall: level {l} is below s_1n + s_n1 = {need}")]
    LevelTooSmall { l: usize, need: usize },
    /// A matrix that was supposed to be a shift matrix is not one.
    #[error("NotShiftMatrix: {0}")]
    NotShiftMatrix(String),
    /// A shape is not a composition of `n` or has a nonzero diagonal block.
    #[error("NotAdmissible: {0}")]
    NotAdmissible(String),
    /// An index lies outside its allowed range.
    #[error("IndexOutOfRange: {0}")]
    IndexOutOfRange(String),
    /// Two elements belong to enveloping algebras of different rank.
    #[error("DimensionMismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    /// An element expected in U(p) has support outside the parabolic.
    #[error("NotInParabolic: {0}")]
    NotInParabolic(String),
    /// A constant term block of a series matrix is singular.
    #[error("NotInvertible: {0}")]
    NotInvertible(String),
    /// A generator needed for a recursive construction is absent.
    #[error("MissingPrerequisite: {0}")]
    MissingPrerequisite(String),
    /// A requested check needs coefficients beyond the truncation order.
    #[error("RangeExceedsTruncation: {0}")]
    RangeExceedsTruncation(String),
    /// The two pyramids do not have the same row lengths.
    #[error("RowLengthMismatch: {0:?} vs {1:?}")]
    RowLengthMismatch(Vec<usize>, Vec<usize>),
    /// An element claimed to live in the Levi subalgebra does not.
    #[error("NotInLevi: {0}")]
    NotInLevi(String),
    /// The kept columns are not an increasing subsequence of 1..l.
    #[error("BadColumnSet: {0}")]
    BadColumnSet(String),
    /// The split l' + l'' does not equal the level.
    #[error("BadSplit: {0}")]
    BadSplit(String),
    /// A one-column removal map was requested where it is not defined.
    #[error("CaseNotApplicable: {0}")]
    CaseNotApplicable(String),
    /// A rectangle was required.
    #[error("NotRectangle: column heights {0:?}")]
    NotRectangle(Vec<usize>),
    /// Malformed textual or JSON input.
    #[error("Parse: {0}")]
    Parse(String),
}

/// Library result alias.
pub type Result<T> = std::result::Result<T, YwError>;
