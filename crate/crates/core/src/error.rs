use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("degree {0} is outside the supported range 1..={max}", max = crate::MAX_DEGREE)]
    UnsupportedDegree(usize),

    #[error("image {image} of point {point} is out of range for degree {degree}")]
    ImageOutOfRange {
        point: usize,
        image: usize,
        degree: usize,
    },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("group is not transitive")]
    Intransitive,

    #[error("too large: {what} has size {size}, cap is {cap}")]
    TooLarge { what: String, size: String, cap: u64 },

    #[error("oracle unavailable: closure was truncated at {cap} elements")]
    OracleUnavailable { cap: usize },

    #[error("the instance does not synchronize")]
    NotSynchronizing,

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("internal inconsistency (theorem violated): {0}")]
    TheoremViolation(String),

    #[error("degree {degree} is beyond the exhaustive regime (max {max})")]
    BeyondExhaustiveRegime { degree: usize, max: usize },

    #[error("catalog entry {name}: declared {field} = {declared}, computed {computed}")]
    CatalogMismatch {
        name: String,
        field: &'static str,
        declared: String,
        computed: String,
    },

    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),

    #[error("unknown theorem id {0:?}")]
    UnknownTheorem(String),
}
