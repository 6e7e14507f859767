//! Finite-scale constructions around finitary partitions: disjoint-tuple
//! spaces and their canonical maps, the `γ/α/δ` closure operators on tuple
//! families, a polarized Ramsey engine, the partition coding scheme with its
//! decoder, and a permutation-symmetry toolkit.
//!
//! Counting code is generic over the integer type (see [`counting`]); the
//! crate-level aliases below fix the types used by the rest of the API.

pub mod coding;
pub mod combinatorics;
pub mod counting;
pub mod error;
pub mod maps;
pub mod operators;
pub mod ramsey;
pub mod symmetry;

pub use combinatorics::{
    canonicalize_partition, enum_b_fin, enum_b_n, enum_disjoint_tuples, enum_fin, enum_k_subsets,
    enum_o_n, DisjointTuple, Element, ElementSequence, FinitaryPartition, FiniteSubset, GroundSet,
    SizeProfile,
};
pub use error::{Error, Result};

/// Arbitrary-precision count.
pub type Count = num_bigint::BigUint;

/// Machine-word count, for cross-checks on small spaces.
pub type SmallCount = u64;

/// Bitmask over the canonical enumeration of a tuple space.
pub type FamilyMask = fixedbitset::FixedBitSet;
