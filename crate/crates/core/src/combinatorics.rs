//! Canonical finite representations of subsets, sequences, disjoint tuples
//! and finitary partitions over the ground set `{0, .., a-1}`, together with
//! lazy enumerators for each space.
//!
//! Canonical forms:
//! * a subset is a strictly increasing element list;
//! * a disjoint tuple is a list of canonical subsets (empty components allowed);
//! * a partition lists its blocks ordered by least element.
//!
//! All enumerators are deterministic. Orders are documented on each function.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Element = usize;

/// The ground set `{0, .., size-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroundSet {
    size: usize,
}

impl GroundSet {
    pub fn new(size: usize) -> Self {
        GroundSet { size }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, e: Element) -> bool {
        e < self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        0..self.size
    }

    pub fn as_subset(&self) -> FiniteSubset {
        FiniteSubset((0..self.size).collect())
    }
}

/// A finite subset in canonical (strictly increasing) form.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Element>", into = "Vec<Element>")]
pub struct FiniteSubset(Vec<Element>);

impl FiniteSubset {
    pub fn empty() -> Self {
        FiniteSubset(Vec::new())
    }

    /// Builds a subset from arbitrary elements, sorting and deduplicating.
    pub fn from_elements<I: IntoIterator<Item = Element>>(items: I) -> Self {
        let mut v: Vec<Element> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        FiniteSubset(v)
    }

    /// Accepts only an already canonical list.
    pub fn from_sorted(v: Vec<Element>) -> Result<Self> {
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotCanonical(v));
        }
        Ok(FiniteSubset(v))
    }

    pub(crate) fn from_sorted_unchecked(v: Vec<Element>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        FiniteSubset(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.0.iter().copied()
    }

    pub fn min(&self) -> Option<Element> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<Element> {
        self.0.last().copied()
    }

    pub fn contains(&self, e: Element) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn is_subset(&self, other: &FiniteSubset) -> bool {
        let mut it = other.0.iter();
        'outer: for x in &self.0 {
            for y in it.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_disjoint(&self, other: &FiniteSubset) -> bool {
        self.common_element(other).is_none()
    }

    /// Least element shared with `other`, if any.
    pub fn common_element(&self, other: &FiniteSubset) -> Option<Element> {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Some(self.0[i]),
            }
        }
        None
    }

    pub fn union(&self, other: &FiniteSubset) -> FiniteSubset {
        FiniteSubset::from_elements(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &FiniteSubset) -> FiniteSubset {
        FiniteSubset(self.iter().filter(|e| other.contains(*e)).collect())
    }

    pub fn difference(&self, other: &FiniteSubset) -> FiniteSubset {
        FiniteSubset(self.iter().filter(|e| !other.contains(*e)).collect())
    }

    pub fn check_within(&self, ground: usize) -> Result<()> {
        match self.max() {
            Some(e) if e >= ground => Err(Error::OutOfRange { element: e, ground }),
            _ => Ok(()),
        }
    }
}

impl TryFrom<Vec<Element>> for FiniteSubset {
    type Error = Error;

    fn try_from(v: Vec<Element>) -> Result<Self> {
        FiniteSubset::from_sorted(v)
    }
}

impl From<FiniteSubset> for Vec<Element> {
    fn from(s: FiniteSubset) -> Self {
        s.0
    }
}

impl fmt::Debug for FiniteSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for FiniteSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A finite sequence of ground-set elements; `injective` marks members of
/// the injective-sequence space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElementSequence {
    entries: Vec<Element>,
    injective: bool,
}

impl ElementSequence {
    /// Any function `{0..k-1} -> A`.
    pub fn any(entries: Vec<Element>) -> Self {
        ElementSequence {
            entries,
            injective: false,
        }
    }

    pub fn injective(entries: Vec<Element>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &e in &entries {
            if !seen.insert(e) {
                return Err(Error::NotInjective(e));
            }
        }
        Ok(ElementSequence {
            entries,
            injective: true,
        })
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The size profile `(m_1, .., m_n)` of a disjoint tuple.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SizeProfile(Vec<usize>);

impl SizeProfile {
    pub fn new(sizes: Vec<usize>) -> Self {
        SizeProfile(sizes)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn max_component(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Componentwise `<=`; false on arity mismatch.
    pub fn le(&self, other: &SizeProfile) -> bool {
        self.arity() == other.arity() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Adds `delta` to every component.
    pub fn shifted(&self, delta: usize) -> SizeProfile {
        SizeProfile(self.0.iter().map(|m| m + delta).collect())
    }
}

impl From<Vec<usize>> for SizeProfile {
    fn from(v: Vec<usize>) -> Self {
        SizeProfile(v)
    }
}

impl fmt::Display for SizeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

/// An ordered tuple of pairwise disjoint finite subsets.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<FiniteSubset>", into = "Vec<FiniteSubset>")]
pub struct DisjointTuple(Vec<FiniteSubset>);

impl DisjointTuple {
    pub fn new(components: Vec<FiniteSubset>) -> Result<Self> {
        let mut owner: std::collections::BTreeMap<Element, usize> = Default::default();
        for (i, c) in components.iter().enumerate() {
            for e in c.iter() {
                if let Some(&first) = owner.get(&e) {
                    return Err(Error::NotDisjoint {
                        first,
                        second: i,
                        element: e,
                    });
                }
                owner.insert(e, i);
            }
        }
        Ok(DisjointTuple(components))
    }

    pub(crate) fn from_components_unchecked(components: Vec<FiniteSubset>) -> Self {
        DisjointTuple(components)
    }

    /// Convenience constructor from element lists (each list is canonicalised).
    pub fn from_lists(lists: &[&[Element]]) -> Result<Self> {
        DisjointTuple::new(
            lists
                .iter()
                .map(|l| FiniteSubset::from_elements(l.iter().copied()))
                .collect(),
        )
    }

    pub fn empty(arity: usize) -> Self {
        DisjointTuple(vec![FiniteSubset::empty(); arity])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[FiniteSubset] {
        &self.0
    }

    pub fn component(&self, i: usize) -> &FiniteSubset {
        &self.0[i]
    }

    pub fn profile(&self) -> SizeProfile {
        SizeProfile(self.0.iter().map(FiniteSubset::len).collect())
    }

    /// Union of all components.
    pub fn support(&self) -> FiniteSubset {
        FiniteSubset::from_elements(self.0.iter().flat_map(|c| c.iter()))
    }

    pub fn check_within(&self, ground: usize) -> Result<()> {
        self.0.iter().try_for_each(|c| c.check_within(ground))
    }

    /// `self ⊑ other`: componentwise inclusion.
    pub fn extends_to(&self, other: &DisjointTuple) -> Result<bool> {
        self.same_arity(other)?;
        Ok(self.0.iter().zip(&other.0).all(|(x, y)| x.is_subset(y)))
    }

    /// Componentwise union; errors if the result would not be disjoint.
    pub fn join(&self, other: &DisjointTuple) -> Result<DisjointTuple> {
        self.same_arity(other)?;
        let comps: Vec<FiniteSubset> = self.0.iter().zip(&other.0).map(|(x, y)| x.union(y)).collect();
        DisjointTuple::new(comps).map_err(|e| match e {
            Error::NotDisjoint {
                first,
                second,
                element,
            } => Error::JoinCollision {
                element,
                first,
                second,
            },
            other => other,
        })
    }

    /// Componentwise intersection.
    pub fn meet(&self, other: &DisjointTuple) -> Result<DisjointTuple> {
        self.same_arity(other)?;
        Ok(DisjointTuple(
            self.0.iter().zip(&other.0).map(|(x, y)| x.intersection(y)).collect(),
        ))
    }

    fn same_arity(&self, other: &DisjointTuple) -> Result<()> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: other.arity(),
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<FiniteSubset>> for DisjointTuple {
    type Error = Error;

    fn try_from(v: Vec<FiniteSubset>) -> Result<Self> {
        DisjointTuple::new(v)
    }
}

impl From<DisjointTuple> for Vec<FiniteSubset> {
    fn from(t: DisjointTuple) -> Self {
        t.0
    }
}

impl fmt::Debug for DisjointTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "⟩")
    }
}

/// A partition of the ground set with blocks ordered by least element.
///
/// The ground size is implied: blocks cover `{0, .., a-1}` exactly.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<FiniteSubset>", into = "Vec<FiniteSubset>")]
pub struct FinitaryPartition {
    blocks: Vec<FiniteSubset>,
}

impl FinitaryPartition {
    /// The partition into singletons.
    pub fn discrete(a: usize) -> Self {
        FinitaryPartition {
            blocks: (0..a).map(|e| FiniteSubset(vec![e])).collect(),
        }
    }

    pub(crate) fn from_blocks_unchecked(mut blocks: Vec<FiniteSubset>) -> Self {
        blocks.sort_unstable_by_key(|b| b.min());
        FinitaryPartition { blocks }
    }

    /// Partition of `{0..a-1}` whose non-singleton blocks are `blocks`; every
    /// other element becomes a singleton. Blocks must be disjoint.
    pub fn with_ns_blocks(a: usize, blocks: &[FiniteSubset]) -> Result<Self> {
        let mut all: Vec<FiniteSubset> = blocks.to_vec();
        let mut covered = vec![false; a];
        for b in blocks {
            b.check_within(a)?;
            for e in b.iter() {
                covered[e] = true;
            }
        }
        for (e, c) in covered.iter().enumerate() {
            if !c {
                all.push(FiniteSubset(vec![e]));
            }
        }
        canonicalize_partition(a, all)
    }

    pub fn blocks(&self) -> &[FiniteSubset] {
        &self.blocks
    }

    pub fn ground_size(&self) -> usize {
        self.blocks.iter().map(FiniteSubset::len).sum()
    }

    /// Non-singleton blocks, in canonical order.
    pub fn ns(&self) -> impl Iterator<Item = &FiniteSubset> {
        self.blocks.iter().filter(|b| b.len() >= 2)
    }

    pub fn ns_count(&self) -> usize {
        self.ns().count()
    }

    /// The block containing `e`.
    pub fn block_of(&self, e: Element) -> Option<&FiniteSubset> {
        self.blocks.iter().find(|b| b.contains(e))
    }
}

impl TryFrom<Vec<FiniteSubset>> for FinitaryPartition {
    type Error = Error;

    fn try_from(blocks: Vec<FiniteSubset>) -> Result<Self> {
        let a = blocks.iter().map(FiniteSubset::len).sum();
        canonicalize_partition(a, blocks)
    }
}

impl From<FinitaryPartition> for Vec<FiniteSubset> {
    fn from(p: FinitaryPartition) -> Self {
        p.blocks
    }
}

impl fmt::Debug for FinitaryPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            for e in b.iter() {
                write!(f, "{e}")?;
                if b.max() != Some(e) {
                    write!(f, ",")?;
                }
            }
        }
        Ok(())
    }
}

/// Validates the partition axioms over `{0..a-1}` and returns the canonical
/// form. Errors name the offending block (by input position) or element.
pub fn canonicalize_partition(a: usize, blocks: Vec<FiniteSubset>) -> Result<FinitaryPartition> {
    let mut covered = vec![false; a];
    for (i, b) in blocks.iter().enumerate() {
        if b.is_empty() {
            return Err(Error::EmptyBlock { block: i });
        }
        for e in b.iter() {
            if e >= a {
                return Err(Error::OutOfRange { element: e, ground: a });
            }
            if covered[e] {
                return Err(Error::Overlap { block: i, element: e });
            }
            covered[e] = true;
        }
    }
    if let Some(e) = covered.iter().position(|c| !c) {
        return Err(Error::Uncovered { element: e });
    }
    Ok(FinitaryPartition::from_blocks_unchecked(blocks))
}

// ---------------------------------------------------------------------------
// Enumeration

/// Advances `idx` to the next `k`-combination of `0..pool` in lexicographic
/// order. Returns false when exhausted.
fn next_combination(idx: &mut [usize], pool: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < pool - k + i {
            idx[i] += 1;
            for t in i + 1..k {
                idx[t] = idx[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All `k`-subsets of `{0..a-1}` in lexicographic order.
pub fn enum_k_subsets(a: usize, k: usize) -> impl Iterator<Item = FiniteSubset> + Clone {
    subsets_of(&(0..a).collect::<Vec<_>>(), k)
}

/// All `k`-subsets of the given (sorted) pool, in lexicographic order.
pub fn subsets_of(pool: &[Element], k: usize) -> impl Iterator<Item = FiniteSubset> + Clone {
    let pool = pool.to_vec();
    let mut idx: Option<Vec<usize>> = if k <= pool.len() {
        Some((0..k).collect())
    } else {
        None
    };
    std::iter::from_fn(move || {
        let cur = idx.as_mut()?;
        let out = FiniteSubset(cur.iter().map(|&i| pool[i]).collect());
        if !next_combination(cur, pool.len()) {
            idx = None;
        }
        Some(out)
    })
}

/// All of `fin(A)`: every subset, ordered by size then lexicographically.
pub fn enum_fin(a: usize) -> impl Iterator<Item = FiniteSubset> {
    (0..=a).flat_map(move |k| enum_k_subsets(a, k))
}

/// `O_m(A)`: tuples of pairwise disjoint subsets with sizes `m`, in
/// lexicographic order of the concatenated components. Empty if `sum m > a`.
pub fn enum_disjoint_tuples(a: usize, profile: &SizeProfile) -> DisjointTuples {
    DisjointTuples::new(a, profile.sizes().to_vec())
}

/// Lazy iterator behind [`enum_disjoint_tuples`].
#[derive(Clone, Debug)]
pub struct DisjointTuples {
    a: usize,
    sizes: Vec<usize>,
    // per level: the pool of elements still free, and a combination into it
    pools: Vec<Vec<Element>>,
    idx: Vec<Vec<usize>>,
    done: bool,
}

impl DisjointTuples {
    fn new(a: usize, sizes: Vec<usize>) -> Self {
        let mut it = DisjointTuples {
            a,
            done: sizes.iter().sum::<usize>() > a,
            pools: Vec::with_capacity(sizes.len()),
            idx: Vec::with_capacity(sizes.len()),
            sizes,
        };
        if !it.done {
            it.rebuild_from(0);
        }
        it
    }

    /// Resets levels `from..` to their first combinations.
    fn rebuild_from(&mut self, from: usize) {
        self.pools.truncate(from);
        self.idx.truncate(from);
        for lvl in from..self.sizes.len() {
            let pool: Vec<Element> = if lvl == 0 {
                (0..self.a).collect()
            } else {
                let prev_pool = &self.pools[lvl - 1];
                let taken = &self.idx[lvl - 1];
                let mut t = 0;
                prev_pool
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| {
                        if t < taken.len() && taken[t] == *i {
                            t += 1;
                            false
                        } else {
                            true
                        }
                    })
                    .map(|(_, &e)| e)
                    .collect()
            };
            self.idx.push((0..self.sizes[lvl]).collect());
            self.pools.push(pool);
        }
    }

    fn current(&self) -> DisjointTuple {
        DisjointTuple(
            self.idx
                .iter()
                .zip(&self.pools)
                .map(|(ix, pool)| FiniteSubset(ix.iter().map(|&i| pool[i]).collect()))
                .collect(),
        )
    }

    fn advance(&mut self) {
        let mut lvl = self.sizes.len();
        while lvl > 0 {
            lvl -= 1;
            let pool_len = self.pools[lvl].len();
            if next_combination(&mut self.idx[lvl], pool_len) {
                self.rebuild_from(lvl + 1);
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for DisjointTuples {
    type Item = DisjointTuple;

    fn next(&mut self) -> Option<DisjointTuple> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}

/// `O_n(A)`: all `n`-tuples of pairwise disjoint subsets (components may be
/// empty), optionally with every component of size at most `cap`.
///
/// Each element carries a label in `0..=n` (0 = in no component, `i` = in
/// component `i`); tuples are produced in lexicographic order of the label
/// vector `(label(0), .., label(a-1))`. Without a cap there are `(n+1)^a`.
pub fn enum_o_n(a: usize, n: usize, cap: Option<usize>) -> impl Iterator<Item = DisjointTuple> {
    let mut labels: Option<Vec<usize>> = Some(vec![0; a]);
    std::iter::from_fn(move || loop {
        let cur = labels.as_mut()?;
        let mut comps = vec![Vec::new(); n];
        for (e, &l) in cur.iter().enumerate() {
            if l > 0 {
                comps[l - 1].push(e);
            }
        }
        // odometer with element a-1 least significant
        let mut i = a;
        let mut carried_out = true;
        while i > 0 {
            i -= 1;
            if cur[i] < n {
                cur[i] += 1;
                carried_out = false;
                break;
            }
            cur[i] = 0;
        }
        if carried_out {
            labels = None;
        }
        if cap.is_some_and(|c| comps.iter().any(|v| v.len() > c)) {
            labels.as_ref()?;
            continue;
        }
        return Some(DisjointTuple(comps.into_iter().map(FiniteSubset).collect()));
    })
}

/// `B_n(A)`: partitions of `{0..a-1}` with exactly `n` non-singleton blocks,
/// in lexicographic order of their canonical block lists.
pub fn enum_b_n(a: usize, n: usize) -> PartitionsWithNs {
    PartitionsWithNs::new(a, Some(n))
}

/// `B_fin(A)`: every partition of `{0..a-1}`, in lexicographic order of the
/// canonical block lists.
pub fn enum_b_fin(a: usize) -> PartitionsWithNs {
    PartitionsWithNs::new(a, None)
}

#[derive(Clone, Debug)]
struct BlockFrame {
    /// least uncovered element, which opens this block
    head: Element,
    /// uncovered elements greater than `head` when the frame was opened
    pool: Vec<Element>,
    /// current choice of companions (indices into `pool`), in lexicographic DFS
    choice: Vec<usize>,
    /// false until the frame's first choice (the singleton) has been used
    started: bool,
}

/// Lazy depth-first generator of canonical partitions.
///
/// Each block is opened by the least uncovered element; its companions range
/// over subsets of the remaining uncovered elements in lexicographic order.
#[derive(Clone, Debug)]
pub struct PartitionsWithNs {
    a: usize,
    target: Option<usize>,
    covered: Vec<bool>,
    stack: Vec<BlockFrame>,
    ns_so_far: usize,
    exhausted: bool,
}

impl PartitionsWithNs {
    fn new(a: usize, target: Option<usize>) -> Self {
        let exhausted = target.is_some_and(|n| 2 * n > a);
        PartitionsWithNs {
            a,
            target,
            covered: vec![false; a],
            stack: Vec::new(),
            ns_so_far: 0,
            exhausted,
        }
    }

    fn uncovered_count(&self) -> usize {
        self.covered.iter().filter(|c| !**c).count()
    }

    fn open_frame(&mut self) -> bool {
        let Some(head) = self.covered.iter().position(|c| !c) else {
            return false;
        };
        let pool = (head + 1..self.a).filter(|&e| !self.covered[e]).collect();
        self.covered[head] = true;
        self.stack.push(BlockFrame {
            head,
            pool,
            choice: Vec::new(),
            started: false,
        });
        true
    }

    fn set_choice_cover(&mut self, on: bool) {
        let f = self.stack.last().unwrap();
        let elems: Vec<Element> = f.choice.iter().map(|&i| f.pool[i]).collect();
        let ns = !f.choice.is_empty();
        for e in elems {
            self.covered[e] = on;
        }
        if ns {
            if on {
                self.ns_so_far += 1;
            } else {
                self.ns_so_far -= 1;
            }
        }
    }

    /// Moves the top frame to its next companion set. False when exhausted.
    fn step_top(&mut self) -> bool {
        let f = self.stack.last_mut().unwrap();
        let p = f.pool.len();
        if !f.started {
            f.started = true;
            return true;
        }
        match f.choice.last().copied() {
            None if p > 0 => f.choice.push(0),
            Some(last) if last + 1 < p => f.choice.push(last + 1),
            _ => {
                f.choice.pop();
                match f.choice.last_mut() {
                    Some(last) => *last += 1,
                    None => return false,
                }
            }
        }
        true
    }

    fn feasible(&self) -> bool {
        match self.target {
            None => true,
            Some(n) => {
                self.ns_so_far <= n && self.uncovered_count() >= 2 * (n - self.ns_so_far)
            }
        }
    }

    fn current(&self) -> FinitaryPartition {
        let blocks = self
            .stack
            .iter()
            .map(|f| {
                let mut v = vec![f.head];
                v.extend(f.choice.iter().map(|&i| f.pool[i]));
                FiniteSubset(v)
            })
            .collect();
        FinitaryPartition { blocks }
    }
}

impl Iterator for PartitionsWithNs {
    type Item = FinitaryPartition;

    fn next(&mut self) -> Option<FinitaryPartition> {
        if self.exhausted {
            return None;
        }
        if self.stack.is_empty() && !self.open_frame() {
            // empty ground set: exactly one (empty) partition
            self.exhausted = true;
            return match self.target {
                None | Some(0) => Some(FinitaryPartition { blocks: Vec::new() }),
                Some(_) => None,
            };
        }
        loop {
            let Some(top) = self.stack.last() else {
                self.exhausted = true;
                return None;
            };
            if top.started {
                self.set_choice_cover(false);
            }
            if !self.step_top() {
                let f = self.stack.pop().unwrap();
                self.covered[f.head] = false;
                continue;
            }
            self.set_choice_cover(true);
            if !self.feasible() {
                continue;
            }
            if self.open_frame() {
                continue;
            }
            // all covered
            if self.target.is_none_or(|n| n == self.ns_so_far) {
                return Some(self.current());
            }
        }
    }
}
