//! Explicit maps between the tuple, subset-sequence and partition spaces.
//!
//! The subset-index bijection `h` is fixed to the binary-indicator choice:
//! position `i` (1-based, `1 <= i < 2^n`) of a `(2^n - 1)`-tuple corresponds to
//! the set `{k < n : bit k of i is 1}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::combinatorics::{DisjointTuple, Element, FinitaryPartition, FiniteSubset};
use crate::error::{Error, Result};

/// The binary-indicator bijection between `{1, .., 2^n - 1}` and the
/// non-empty subsets of `{0, .., n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsetIndexBijection {
    arity: usize,
}

impl SubsetIndexBijection {
    pub fn new(arity: usize) -> Result<Self> {
        if arity == 0 || arity >= usize::BITS as usize {
            return Err(Error::Invalid(format!("subset-index arity {arity} out of range")));
        }
        Ok(SubsetIndexBijection { arity })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `2^n - 1`.
    pub fn image_len(&self) -> usize {
        (1usize << self.arity) - 1
    }

    /// `h(i)` for `1 <= i < 2^n`.
    pub fn subset(&self, i: usize) -> FiniteSubset {
        assert!(i >= 1 && i <= self.image_len(), "index {i} outside 1..2^n");
        FiniteSubset::from_sorted_unchecked((0..self.arity).filter(|k| i >> k & 1 == 1).collect())
    }

    /// `h^{-1}(s)` for a non-empty `s ⊆ {0..n-1}`.
    pub fn index(&self, s: &FiniteSubset) -> Option<usize> {
        if s.is_empty() || s.max().is_some_and(|k| k >= self.arity) {
            return None;
        }
        Some(s.iter().map(|k| 1usize << k).sum())
    }
}

/// Classes of the relation "belongs to exactly the same sets".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureClasses {
    /// signature (1-based indices of the sets containing the element) → class
    pub inside: BTreeMap<FiniteSubset, FiniteSubset>,
    /// elements in none of the sets
    pub outside: FiniteSubset,
}

impl SignatureClasses {
    /// All classes, inside ones first (by signature), then the outside class
    /// when non-empty.
    pub fn classes(&self) -> impl Iterator<Item = &FiniteSubset> {
        self.inside
            .values()
            .chain(std::iter::once(&self.outside).filter(|c| !c.is_empty()))
    }
}

/// Partitions `{0..a-1}` by membership signature with respect to `sets`.
/// The sets need not be disjoint.
pub fn signature_classes(a: usize, sets: &[FiniteSubset]) -> Result<SignatureClasses> {
    signature_classes_on(&(0..a).collect::<Vec<_>>(), a, sets)
}

/// Same as [`signature_classes`] but restricted to the elements of `domain`.
pub fn signature_classes_on(
    domain: &[Element],
    a: usize,
    sets: &[FiniteSubset],
) -> Result<SignatureClasses> {
    for s in sets {
        s.check_within(a)?;
    }
    let mut inside: BTreeMap<FiniteSubset, Vec<Element>> = BTreeMap::new();
    let mut outside = Vec::new();
    for &x in domain {
        let sig: Vec<usize> = sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains(x))
            .map(|(i, _)| i + 1)
            .collect();
        if sig.is_empty() {
            outside.push(x);
        } else {
            inside
                .entry(FiniteSubset::from_sorted_unchecked(sig))
                .or_default()
                .push(x);
        }
    }
    Ok(SignatureClasses {
        inside: inside
            .into_iter()
            .map(|(k, v)| (k, FiniteSubset::from_elements(v)))
            .collect(),
        outside: FiniteSubset::from_elements(outside),
    })
}

/// Non-empty components become blocks, every other element a singleton. The
/// flag reports whether the result has exactly `arity(p)` non-singleton
/// blocks, i.e. lies in `B_n(A)` for `n = arity(p)`.
pub fn tuple_to_partition(a: usize, p: &DisjointTuple) -> Result<(FinitaryPartition, bool)> {
    p.check_within(a)?;
    let mut blocks: Vec<FiniteSubset> = p.components().iter().filter(|c| !c.is_empty()).cloned().collect();
    let support = p.support();
    blocks.extend(
        (0..a)
            .filter(|e| !support.contains(*e))
            .map(|e| FiniteSubset::from_sorted_unchecked(vec![e])),
    );
    let part = FinitaryPartition::from_blocks_unchecked(blocks);
    let lands = part.ns_count() == p.arity();
    Ok((part, lands))
}

/// `fin(A)^n → O_{2^n-1}(A)`: component `i` holds the elements lying in
/// exactly the sets indexed by `h(i)`.
pub fn fin_to_disjoint(s: &[FiniteSubset]) -> Result<DisjointTuple> {
    let h = SubsetIndexBijection::new(s.len())?;
    let mut comps: Vec<Vec<Element>> = vec![Vec::new(); h.image_len()];
    let all = s.iter().fold(FiniteSubset::empty(), |acc, x| acc.union(x));
    for e in all.iter() {
        let sig: usize = s
            .iter()
            .enumerate()
            .filter(|(_, x)| x.contains(e))
            .map(|(k, _)| 1usize << k)
            .sum();
        comps[sig - 1].push(e);
    }
    Ok(DisjointTuple::from_components_unchecked(
        comps.into_iter().map(FiniteSubset::from_sorted_unchecked).collect(),
    ))
}

/// Inverse of [`fin_to_disjoint`]: `s(k)` is the union of the components
/// whose index set contains `k`.
pub fn disjoint_to_fin(q: &DisjointTuple, n: usize) -> Result<Vec<FiniteSubset>> {
    let h = SubsetIndexBijection::new(n)?;
    if q.arity() != h.image_len() {
        return Err(Error::ArityMismatch {
            expected: h.image_len(),
            found: q.arity(),
        });
    }
    Ok((0..n)
        .map(|k| {
            FiniteSubset::from_elements(
                (1..=h.image_len())
                    .filter(|i| i >> k & 1 == 1)
                    .flat_map(|i| q.component(i - 1).iter()),
            )
        })
        .collect())
}

/// Why [`bfin_map`] is undefined on an input.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BfinUndefined {
    #[error("no sets given")]
    NoSets,
    #[error("sets are not pairwise distinct")]
    Repeated,
    #[error("signature class {0} is empty")]
    MissingClass(FiniteSubset),
    #[error("signature class {signature} is the singleton {{{element}}}")]
    SingletonClass {
        signature: FiniteSubset,
        element: Element,
    },
}

/// JSON-facing image of [`bfin_map`]: a partition, or `{"undefined": reason}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BfinImage {
    Defined(FinitaryPartition),
    Undefined { undefined: String },
}

impl From<std::result::Result<FinitaryPartition, BfinUndefined>> for BfinImage {
    fn from(r: std::result::Result<FinitaryPartition, BfinUndefined>) -> Self {
        match r {
            Ok(p) => BfinImage::Defined(p),
            Err(e) => BfinImage::Undefined {
                undefined: e.to_string(),
            },
        }
    }
}

/// Partial map from `n` distinct finite sets to `B_{2^n-1}(A)`.
///
/// Defined iff all `2^n - 1` inside signature classes are non-empty with at
/// least two elements each; the outside class is split into singletons.
pub fn bfin_map(
    a: usize,
    s: &[FiniteSubset],
) -> Result<std::result::Result<FinitaryPartition, BfinUndefined>> {
    if s.is_empty() {
        return Ok(Err(BfinUndefined::NoSets));
    }
    if s.iter().collect::<BTreeSet<_>>().len() != s.len() {
        return Ok(Err(BfinUndefined::Repeated));
    }
    let classes = signature_classes(a, s)?;
    let h = SubsetIndexBijection::new(s.len())?;
    for i in 1..=h.image_len() {
        // h is over 0-based set indices; signatures are 1-based
        let sig = FiniteSubset::from_sorted_unchecked(h.subset(i).iter().map(|k| k + 1).collect());
        match classes.inside.get(&sig) {
            None => return Ok(Err(BfinUndefined::MissingClass(sig))),
            Some(c) if c.len() < 2 => {
                return Ok(Err(BfinUndefined::SingletonClass {
                    signature: sig,
                    element: c.elements()[0],
                }))
            }
            Some(_) => {}
        }
    }
    let blocks: Vec<FiniteSubset> = classes.inside.into_values().collect();
    Ok(Ok(FinitaryPartition::with_ns_blocks(a, &blocks)?))
}

/// `P ↦ ns(P)`.
pub fn ns_injection(p: &FinitaryPartition) -> BTreeSet<FiniteSubset> {
    p.ns().cloned().collect()
}
