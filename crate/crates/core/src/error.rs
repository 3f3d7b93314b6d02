//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{name}` has arity {arity}, got {got} children")]
    ChildCountMismatch { name: String, arity: usize, got: usize },
    #[error("leaf label {0} repeated")]
    RepeatedLeafLabel(u32),
    #[error("leaf labels must be exactly 1..={expected}, found {found:?}")]
    BadLeafLabels { expected: usize, found: Vec<u32> },
    #[error("tree violates the shuffle condition at an internal vertex")]
    ShuffleCondition,
    #[error("generator `{0}` without symmetry must be binary (arity 2)")]
    UnsupportedNoSymmetryArity(String),
    #[error("generator name `{0}` is reserved or malformed")]
    BadGeneratorName(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("leaf index {index} out of range for arity {arity}")]
    InvalidLeafIndex { index: usize, arity: usize },
    #[error("relabeling is not a shuffle: {0}")]
    BadRelabeling(String),
    #[error("permutation is not a bijection on 1..={0}")]
    BadPermutation(usize),
    #[error("unary generators make per-arity components infinite; `{0}` cannot be enumerated")]
    UnaryEnumeration(String),
    #[error("pattern is the identity leaf")]
    IdentityPattern,
    #[error("occurrence does not match the given host")]
    StaleOccurrence,
    #[error("generator `{0}` is not classified for the augmented order")]
    UnclassifiedGenerator(String),
    #[error("generator `{0}` missing from weight assignment")]
    MissingWeight(String),
    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },
    #[error("term {term} uses argument set {found:?}, expected a1..a{arity} exactly once each")]
    NotMultilinear { term: usize, arity: usize, found: Vec<usize> },
    #[error("zero relation rejected")]
    ZeroRelation,
    #[error("relation arity {arity} exceeds truncation arity {max}")]
    ArityAboveTruncation { arity: usize, max: usize },
    #[error("step limit of {0} one-step rewrites exceeded")]
    StepLimitExceeded(u64),
    #[error("inter-reduction did not stabilise within {0} sweeps")]
    InterReductionDiverged(usize),
    #[error("right-hand side for {key} has a term whose root `{root}` is not a left-class generator")]
    RhsRootNotInX { key: String, root: String },
    #[error("right-hand side for {key} has arity {got}, expected {expected}")]
    RhsArityMismatch { key: String, expected: usize, got: usize },
    #[error("presentation `{0}` has no unique antisymmetric bracket generator")]
    NoBracketGenerator(String),
    #[error("generator names collide between the two presentations: `{0}`")]
    GeneratorClash(String),
    #[error("series: {0}")]
    Series(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("check `{0}` is not defined")]
    UnknownCheck(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
