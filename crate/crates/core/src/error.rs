//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by frame, potential and tree operations.
///
/// `Contradiction` is the one variant that callers are expected to branch
/// on: it marks the `k = 0` normalization failures that the CLI maps to a
/// dedicated exit code.
#[derive(Debug, Error)]
pub enum FcfError {
    #[error("universe must contain at least one atom")]
    EmptyUniverse,

    #[error("duplicate atom identifier {0:?} in universe")]
    DuplicateAtom(String),

    #[error("unknown atom {0:?}")]
    UnknownAtom(String),

    #[error("block {index} is empty")]
    EmptyBlock { index: usize },

    #[error("blocks {first} and {second} overlap on atom {atom:?}")]
    OverlappingBlocks {
        first: usize,
        second: usize,
        atom: String,
    },

    #[error("blocks do not cover the universe: atom {atom:?} is unassigned")]
    UncoveredAtom { atom: String },

    #[error("frames are defined over different universes")]
    UniverseMismatch,

    #[error("frame is not a coarsening of the target frame")]
    NotARefinement,

    #[error("element index {index} out of range for frame with {len} elements")]
    ElementOutOfRange { index: usize, len: usize },

    #[error("unknown variable {0:?}")]
    UnknownVariable(String),

    #[error("unknown frame id {0:?}")]
    UnknownFrameId(String),

    #[error("frames are not a commutative pair (not conditionally independent given their meet)")]
    NotCommutativePair,

    #[error("frame containment violated: {0}")]
    FrameContainment(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("contradiction: {0}")]
    Contradiction(String),

    #[error("assumption weights must be nonnegative and sum to one (sum = {0})")]
    InvalidWeights(f64),

    #[error("assumption {0:?} has an empty image")]
    EmptyImage(String),

    #[error("negative value {value} at position {index}")]
    NegativeValue { index: usize, value: f64 },

    #[error("value vector has length {got}, frame has {want} elements")]
    LengthMismatch { got: usize, want: usize },

    #[error("duplicate node id {0:?}")]
    DuplicateNode(String),

    #[error("edge references unknown node {0:?}")]
    UnknownNode(String),

    #[error("factor label of node {0:?} does not match the node frame")]
    FactorLabelMismatch(String),

    #[error("edges do not form a tree over the nodes")]
    NotATree,

    #[error("tree is empty")]
    EmptyTree,

    #[error("tree does not satisfy the Markov property at node {0:?}")]
    MarkovViolation(String),

    #[error("architecture requires a commutative pair of frames on edge {0:?} -- {1:?}")]
    NonCommutativeEdge(String, String),

    #[error("join frame size {size} exceeds the oracle cap {cap}")]
    OracleCapExceeded { size: usize, cap: usize },

    #[error("duplicate frame id {0:?} with different structure")]
    ConflictingFrameId(String),
}

pub type Result<T> = std::result::Result<T, FcfError>;
