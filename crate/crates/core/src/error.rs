use thiserror::Error;

use crate::combinatorics::Element;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element {element} is outside the ground set of size {ground}")]
    OutOfRange { element: Element, ground: usize },

    #[error("subset elements are not strictly increasing: {0:?}")]
    NotCanonical(Vec<Element>),

    #[error("block {block} is empty")]
    EmptyBlock { block: usize },

    #[error("block {block} overlaps an earlier block at element {element}")]
    Overlap { block: usize, element: Element },

    #[error("element {element} is not covered by any block")]
    Uncovered { element: Element },

    #[error("components {first} and {second} share element {element}")]
    NotDisjoint {
        first: usize,
        second: usize,
        element: Element,
    },

    #[error("sequence repeats element {0} but is flagged injective")]
    NotInjective(Element),

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("tuple profile {found:?} does not match family profile {expected:?}")]
    ProfileMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("profile pair invalid at component {index}: lower {lower} exceeds upper {upper}")]
    ProfileOrder {
        index: usize,
        lower: usize,
        upper: usize,
    },

    #[error("join collision: element {element} lands in components {first} and {second}")]
    JoinCollision {
        element: Element,
        first: usize,
        second: usize,
    },

    #[error("ground set of size {ground} is smaller than the required {required}")]
    GroundTooSmall { ground: usize, required: usize },

    #[error("budget exceeded: {what} needs {required}, limit is {limit}")]
    Budget {
        what: &'static str,
        required: String,
        limit: u128,
    },

    #[error("size signature contract violated: {0}")]
    Signature(String),

    #[error("invalid coding configuration: {0}")]
    Config(String),

    #[error("decode failed for slot j={j} profile {profile:?} k={k}: {reason}")]
    Decode {
        j: usize,
        profile: Vec<usize>,
        k: usize,
        reason: String,
    },

    #[error("invalid Ramsey query: {0}")]
    Ramsey(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}
