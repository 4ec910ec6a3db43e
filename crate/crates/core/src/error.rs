use thiserror::Error;

use crate::coeffs::ConditionReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet size q = {0} is not supported (need 3 <= q <= 36)")]
    AlphabetSize(usize),

    #[error("dimension n = {0} is not supported (need 1 <= n <= 64)")]
    Dimension(usize),

    #[error("q^n = {q}^{n} exceeds the enumeration cap of {cap} states")]
    TooManyStates { q: usize, n: usize, cap: usize },

    #[error("invalid word {text:?}: {reason}")]
    InvalidWord { text: String, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("{name} = {value} is out of range [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("{lambda} is not an eigenvalue of the {q}-ary {n}-dimensional hypercube")]
    NotAnEigenvalue { q: usize, n: usize, lambda: i64 },

    #[error("no transfer formula for |I| = {k} at h = {h}, n = {n} (needs k <= min(h, n-h) or n-h < k <= h)")]
    UnsupportedRegime { n: usize, h: usize, k: usize },

    #[error("eigenspace projection stayed numerically zero after {0} attempts")]
    DegenerateProjection(usize),

    #[error("origin is undefined for the sigma/delta split (anchor must be nonzero)")]
    ZeroAnchor,

    #[error("P_{d}(h;n) = 0: the origin value cannot be recovered from this sphere")]
    OriginCondition { d: usize },

    #[error("layer operator for |I| = {k} is singular (eigen-sum {l} vanishes)")]
    SingularLayer { k: usize, l: usize },

    #[error("reconstruction conditions fail")]
    ConditionFailure(Box<ConditionReport>),

    #[error("missing value for word {0} (weight outside the known region)")]
    MissingValue(String),

    #[error("input is not the restriction of an eigenfunction: {check} residual {residual:e} exceeds {threshold:e}")]
    InconsistentData {
        check: &'static str,
        residual: f64,
        threshold: f64,
    },

    #[error("malformed function data: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
