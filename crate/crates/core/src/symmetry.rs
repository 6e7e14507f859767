//! Permutations of the ground set acting on nested objects, finite supports,
//! even and odd half-orbits of injective sequences, and the projection
//! `P ↦ P_E` with its refinement preorder.
//!
//! On a finite ground set the pointwise stabilizer of `E` is generated by the
//! transpositions of two elements outside `E`, so [`is_support`] only tries
//! those. That shortcut is a finite-scale fact and says nothing about
//! infinite ground sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Mul;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    canonicalize_partition, enum_b_n, DisjointTuple, Element, ElementSequence, FinitaryPartition,
    FiniteSubset,
};
use crate::counting::count_b_n;
use crate::error::{Error, Result};
use crate::maps::signature_classes_on;
use crate::operators::{TupleFamily, TupleSpace};
use crate::FamilyMask;

/// A bijection of `{0..len-1}`; elements `>= len` are fixed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Element>", into = "Vec<Element>")]
pub struct Permutation {
    image: Vec<Element>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Mul for Parity {
    type Output = Parity;

    fn mul(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl Permutation {
    pub fn identity(a: usize) -> Self {
        Permutation {
            image: (0..a).collect(),
        }
    }

    pub fn from_images(image: Vec<Element>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &y in &image {
            if y >= image.len() {
                return Err(Error::OutOfRange {
                    element: y,
                    ground: image.len(),
                });
            }
            if std::mem::replace(&mut seen[y], true) {
                return Err(Error::NotInjective(y));
            }
        }
        Ok(Permutation { image })
    }

    pub fn transposition(a: usize, x: Element, y: Element) -> Result<Self> {
        Self::from_cycles(a, &[&[x, y]])
    }

    /// Product of disjoint cycles, e.g. `&[&[0, 1, 2]]` maps `0→1→2→0`.
    pub fn from_cycles(a: usize, cycles: &[&[Element]]) -> Result<Self> {
        let mut image: Vec<Element> = (0..a).collect();
        let mut moved = BTreeSet::new();
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                if x >= a {
                    return Err(Error::OutOfRange {
                        element: x,
                        ground: a,
                    });
                }
                if !moved.insert(x) {
                    return Err(Error::NotInjective(x));
                }
                image[x] = c[(i + 1) % c.len()];
            }
        }
        Ok(Permutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn images(&self) -> &[Element] {
        &self.image
    }

    pub fn apply(&self, x: Element) -> Element {
        self.image.get(x).copied().unwrap_or(x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let n = self.len().max(other.len());
        Permutation {
            image: (0..n).map(|x| self.apply(other.apply(x))).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { image: inv }
    }

    /// Cycles of length at least 2, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<Element>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut x = self.image[start];
            while x != start {
                seen[x] = true;
                c.push(x);
                x = self.image[x];
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    pub fn parity(&self) -> Parity {
        // a k-cycle is a product of k-1 transpositions
        let t: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if t.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn fixes_pointwise(&self, e: &FiniteSubset) -> bool {
        e.iter().all(|x| self.apply(x) == x)
    }
}

impl TryFrom<Vec<Element>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<Element>) -> Result<Self> {
        Permutation::from_images(v)
    }
}

impl From<Permutation> for Vec<Element> {
    fn from(p: Permutation) -> Self {
        p.image
    }
}

pub fn parity(pi: &Permutation) -> Parity {
    pi.parity()
}

/// Structural action of ground-set permutations.
///
/// Implementations restore canonical form. The permutation must map the
/// object's ground set onto itself.
pub trait Permutable: Sized {
    fn permute(&self, pi: &Permutation) -> Self;
}

impl Permutable for Element {
    fn permute(&self, pi: &Permutation) -> Self {
        pi.apply(*self)
    }
}

impl Permutable for FiniteSubset {
    fn permute(&self, pi: &Permutation) -> Self {
        FiniteSubset::from_elements(self.iter().map(|x| pi.apply(x)))
    }
}

impl Permutable for ElementSequence {
    fn permute(&self, pi: &Permutation) -> Self {
        let entries = self.entries().iter().map(|&x| pi.apply(x)).collect();
        if self.is_injective() {
            ElementSequence::injective(entries).expect("permutations preserve injectivity")
        } else {
            ElementSequence::any(entries)
        }
    }
}

impl Permutable for DisjointTuple {
    fn permute(&self, pi: &Permutation) -> Self {
        DisjointTuple::new(self.components().iter().map(|c| c.permute(pi)).collect())
            .expect("permutations preserve disjointness")
    }
}

impl Permutable for FinitaryPartition {
    fn permute(&self, pi: &Permutation) -> Self {
        let blocks = self.blocks().iter().map(|b| b.permute(pi)).collect();
        canonicalize_partition(self.ground_size(), blocks)
            .expect("permutation must map the ground set onto itself")
    }
}

impl Permutable for TupleFamily {
    fn permute(&self, pi: &Permutation) -> Self {
        TupleFamily::new(
            self.ground(),
            self.profile().clone(),
            self.members().iter().map(|t| t.permute(pi)),
        )
        .expect("permutation must map the ground set onto itself")
    }
}

impl<T: Permutable + Ord> Permutable for BTreeSet<T> {
    fn permute(&self, pi: &Permutation) -> Self {
        self.iter().map(|x| x.permute(pi)).collect()
    }
}

/// Function graphs: `(x, f(x)) ↦ (π x, π f(x))`.
impl<K: Permutable + Ord, V: Permutable> Permutable for BTreeMap<K, V> {
    fn permute(&self, pi: &Permutation) -> Self {
        self.iter().map(|(k, v)| (k.permute(pi), v.permute(pi))).collect()
    }
}

impl<T: Permutable> Permutable for Vec<T> {
    fn permute(&self, pi: &Permutation) -> Self {
        self.iter().map(|x| x.permute(pi)).collect()
    }
}

impl<A: Permutable, B: Permutable> Permutable for (A, B) {
    fn permute(&self, pi: &Permutation) -> Self {
        (self.0.permute(pi), self.1.permute(pi))
    }
}

impl Permutable for bool {
    fn permute(&self, _: &Permutation) -> Self {
        *self
    }
}

pub fn apply_perm<T: Permutable>(pi: &Permutation, x: &T) -> T {
    x.permute(pi)
}

/// Whether every permutation of `{0..a-1}` fixing `e` pointwise fixes `x`.
pub fn is_support<T: Permutable + PartialEq>(a: usize, e: &FiniteSubset, x: &T) -> bool {
    let outside: Vec<Element> = (0..a).filter(|&u| !e.contains(u)).collect();
    outside.iter().tuple_combinations().all(|(&u, &v)| {
        let t = Permutation::transposition(a, u, v).expect("u, v < a");
        &x.permute(&t) == x
    })
}

/// Two halves of the orbit of an injective sequence under `Sym(B)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPair {
    pub base: FiniteSubset,
    pub seed: ElementSequence,
    /// images under even permutations of `B`
    pub xi: BTreeSet<ElementSequence>,
    /// images under odd permutations of `B`
    pub theta: BTreeSet<ElementSequence>,
}

/// Even and odd images of `s` under permutations of `b`, where
/// `|b| = |s| + 1` and `s` is injective over `b`.
pub fn even_odd_orbits(b: &FiniteSubset, s: &ElementSequence) -> Result<OrbitPair> {
    if b.len() != s.len() + 1 {
        return Err(Error::Invalid(format!(
            "base has {} elements, needs |s| + 1 = {}",
            b.len(),
            s.len() + 1
        )));
    }
    let seed = ElementSequence::injective(s.entries().to_vec())?;
    if let Some(&x) = s.entries().iter().find(|&&x| !b.contains(x)) {
        return Err(Error::Invalid(format!("sequence entry {x} is not in the base")));
    }
    let a = b.max().map_or(0, |m| m + 1);
    let mut xi = BTreeSet::new();
    let mut theta = BTreeSet::new();
    for img in b.iter().permutations(b.len()) {
        let mut table: Vec<Element> = (0..a).collect();
        for (x, y) in b.iter().zip(img) {
            table[x] = y;
        }
        let pi = Permutation { image: table };
        let t = seed.permute(&pi);
        match pi.parity() {
            Parity::Even => xi.insert(t),
            Parity::Odd => theta.insert(t),
        };
    }
    Ok(OrbitPair {
        base: b.clone(),
        seed,
        xi,
        theta,
    })
}

/// A transposition of two elements of `b` in the same class of "belongs to
/// the same component of `p`, or to none". Picks the class with the least
/// smallest element and swaps its two smallest members. `None` only when
/// every class meets `b` at most once, which cannot happen for
/// `|b| = arity(p) + 2`.
pub fn find_fixing_transposition(p: &DisjointTuple, b: &FiniteSubset) -> Option<(Element, Element)> {
    let support = p.support();
    let a = FiniteSubset::max(&support)
        .into_iter()
        .chain(FiniteSubset::max(b))
        .max()
        .map_or(0, |m| m + 1);
    let classes = signature_classes_on(b.elements(), a, p.components()).ok()?;
    classes
        .classes()
        .filter(|c| c.len() >= 2)
        .min_by_key(|c| FiniteSubset::min(c))
        .map(|c| (c.elements()[0], c.elements()[1]))
}

/// `P_E = {p \ E : p ∈ ns(P), p ⊄ E}`.
pub fn restrict_outside(p: &FinitaryPartition, e: &FiniteSubset) -> BTreeSet<FiniteSubset> {
    p.ns()
        .map(|b| b.difference(e))
        .filter(|b| !b.is_empty())
        .collect()
}

/// `Q ⊑ P`: every block of `Q_E` is a union of blocks of `P_E`.
pub fn preceq(q: &FinitaryPartition, p: &FinitaryPartition, e: &FiniteSubset) -> bool {
    preceq_projected(&restrict_outside(q, e), &restrict_outside(p, e))
}

fn preceq_projected(qe: &BTreeSet<FiniteSubset>, pe: &BTreeSet<FiniteSubset>) -> bool {
    qe.iter().all(|qb| {
        let covered = pe
            .iter()
            .filter(|pb| pb.is_subset(qb))
            .fold(FiniteSubset::empty(), |acc, pb| acc.union(pb));
        &covered == qb
    })
}

/// `(n+1)^|E|`.
pub fn fiber_bound(n: usize, e_size: usize) -> u128 {
    (n as u128 + 1).pow(e_size as u32)
}

/// Cap on `|B_n(A)|` for exhaustive sweeps in this module.
pub const DEFAULT_SWEEP_LIMIT: u128 = 5_000_000;

fn check_sweep(a: usize, n: usize, limit: u128) -> Result<()> {
    let total: u128 = count_b_n(a, n);
    if total > limit {
        return Err(Error::Budget {
            what: "partitions in B_n(A)",
            required: total.to_string(),
            limit,
        });
    }
    Ok(())
}

/// All `Q ∈ B_n(A)` with `Q_E = P_E`.
pub fn fiber_of(p: &FinitaryPartition, e: &FiniteSubset, n: usize) -> Result<Vec<FinitaryPartition>> {
    fiber_of_with_limit(p, e, n, DEFAULT_SWEEP_LIMIT)
}

pub fn fiber_of_with_limit(
    p: &FinitaryPartition,
    e: &FiniteSubset,
    n: usize,
    limit: u128,
) -> Result<Vec<FinitaryPartition>> {
    let a = p.ground_size();
    check_sweep(a, n, limit)?;
    let pe = restrict_outside(p, e);
    Ok(enum_b_n(a, n)
        .filter(|q| restrict_outside(q, e) == pe)
        .collect())
}

/// A longest strictly `⊑`-decreasing chain in `B_n(A)`, greatest first.
///
/// `⊑` depends on `P` only through `P_E`, and on those projections it is a
/// partial order, so the search runs over distinct projections with one
/// representative each.
pub fn longest_chain(a: usize, n: usize, e: &FiniteSubset, limit: u128) -> Result<Vec<FinitaryPartition>> {
    check_sweep(a, n, limit)?;
    let mut reps: BTreeMap<BTreeSet<FiniteSubset>, FinitaryPartition> = BTreeMap::new();
    for p in enum_b_n(a, n) {
        reps.entry(restrict_outside(&p, e)).or_insert(p);
    }
    let keys: Vec<&BTreeSet<FiniteSubset>> = reps.keys().collect();
    // below[i]: indices strictly below i
    let below: Vec<Vec<usize>> = keys
        .iter()
        .map(|pk| {
            (0..keys.len())
                .filter(|&j| keys[j] != *pk && preceq_projected(keys[j], pk))
                .collect()
        })
        .collect();
    let mut memo: HashMap<usize, (usize, Option<usize>)> = HashMap::new();
    fn depth(i: usize, below: &[Vec<usize>], memo: &mut HashMap<usize, (usize, Option<usize>)>) -> usize {
        if let Some(&(d, _)) = memo.get(&i) {
            return d;
        }
        let mut best = (1, None);
        for &j in &below[i] {
            let d = depth(j, below, memo) + 1;
            if d > best.0 {
                best = (d, Some(j));
            }
        }
        memo.insert(i, best);
        best.0
    }
    let Some(top) = (0..keys.len()).max_by_key(|&i| (depth(i, &below, &mut memo), std::cmp::Reverse(i))) else {
        return Ok(Vec::new());
    };
    let mut chain = vec![reps[keys[top]].clone()];
    let mut cur = top;
    while let Some(next) = memo[&cur].1 {
        chain.push(reps[keys[next]].clone());
        cur = next;
    }
    Ok(chain)
}

/// `(n+1)^(|E|+1)`.
pub fn chain_bound(n: usize, e_size: usize) -> u128 {
    fiber_bound(n, e_size + 1)
}

/// Orbits of the pointwise stabilizer of `e` on a tuple space.
///
/// Two tuples share an orbit iff each component meets `e` in the same set
/// and has the same number of elements outside `e`. Unions of orbits are
/// exactly the families supported by `e`.
pub fn stabilizer_orbits(space: &TupleSpace, e: &FiniteSubset) -> Vec<FamilyMask> {
    let mut orbits: BTreeMap<(Vec<FiniteSubset>, Vec<usize>), FamilyMask> = BTreeMap::new();
    for (i, t) in space.tuples().iter().enumerate() {
        let key = (
            t.components().iter().map(|c| c.intersection(e)).collect(),
            t.components().iter().map(|c| c.difference(e).len()).collect(),
        );
        orbits
            .entry(key)
            .or_insert_with(|| space.empty_mask())
            .insert(i);
    }
    orbits.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> FiniteSubset {
        FiniteSubset::from_elements(v.iter().copied())
    }

    fn part(a: usize, ns: &[&[usize]]) -> FinitaryPartition {
        FinitaryPartition::with_ns_blocks(a, &ns.iter().map(|b| set(b)).collect::<Vec<_>>()).unwrap()
    }

    fn seq(v: &[usize]) -> ElementSequence {
        ElementSequence::injective(v.to_vec()).unwrap()
    }

    #[test]
    fn action_examples() {
        let t = Permutation::transposition(4, 0, 1).unwrap();
        assert_eq!(part(4, &[&[0, 2]]).permute(&t), part(4, &[&[1, 2]]));
        let c = Permutation::from_cycles(4, &[&[0, 1, 2]]).unwrap();
        let p = DisjointTuple::from_lists(&[&[0], &[1, 3]]).unwrap();
        assert_eq!(p.permute(&c), DisjointTuple::from_lists(&[&[1], &[2, 3]]).unwrap());
        assert_eq!(p.permute(&Permutation::identity(4)), p);
    }

    #[test]
    fn parity_examples() {
        assert_eq!(Permutation::identity(3).parity(), Parity::Even);
        assert_eq!(Permutation::transposition(3, 0, 1).unwrap().parity(), Parity::Odd);
        assert_eq!(Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap().parity(), Parity::Even);
    }

    #[test]
    fn compose_applies_right_first() {
        let s = Permutation::transposition(3, 0, 1).unwrap();
        let t = Permutation::transposition(3, 1, 2).unwrap();
        // s∘t: 1 → 2 → 2, 2 → 1 → 0
        let st = s.compose(&t);
        assert_eq!(st.images(), &[1, 2, 0]);
        assert_eq!(st.compose(&st.inverse()), Permutation::identity(3));
    }

    #[test]
    fn support_examples() {
        let p = part(4, &[&[0, 1]]);
        let ns = set(&[0, 1]);
        assert!(is_support(4, &ns, &p));
        assert!(!is_support(4, &set(&[0]), &p));
        let full = set(&[0, 1, 2, 3]);
        assert!(is_support(4, &FiniteSubset::empty(), &full));
    }

    #[test]
    fn orbit_example() {
        let o = even_odd_orbits(&set(&[0, 1, 2]), &seq(&[0, 1])).unwrap();
        let xi: BTreeSet<_> = [seq(&[0, 1]), seq(&[1, 2]), seq(&[2, 0])].into();
        let theta: BTreeSet<_> = [seq(&[1, 0]), seq(&[0, 2]), seq(&[2, 1])].into();
        assert_eq!(o.xi, xi);
        assert_eq!(o.theta, theta);
        assert!(even_odd_orbits(&set(&[0, 1]), &seq(&[0, 1])).is_err());
        assert!(even_odd_orbits(&set(&[0, 1, 2]), &seq(&[0, 5])).is_err());
    }

    #[test]
    fn fixing_transposition_examples() {
        let b = set(&[0, 1, 2, 3]);
        let p = DisjointTuple::from_lists(&[&[0], &[1]]).unwrap();
        assert_eq!(find_fixing_transposition(&p, &b), Some((2, 3)));
        let p = DisjointTuple::from_lists(&[&[0, 1], &[2, 3]]).unwrap();
        assert_eq!(find_fixing_transposition(&p, &b), Some((0, 1)));
        let p = DisjointTuple::from_lists(&[&[5]]).unwrap();
        let (x, y) = find_fixing_transposition(&p, &set(&[0, 1, 2])).unwrap();
        assert!(x < y && y <= 2);
    }

    #[test]
    fn projection_examples() {
        let p = part(6, &[&[0, 1, 4], &[2, 3]]);
        assert_eq!(restrict_outside(&p, &set(&[4, 5])), [set(&[0, 1]), set(&[2, 3])].into());
        assert_eq!(restrict_outside(&p, &FiniteSubset::empty()), p.ns().cloned().collect());
        let q = part(6, &[&[0, 1]]);
        assert!(restrict_outside(&q, &set(&[0, 1])).is_empty());
    }

    #[test]
    fn preceq_examples() {
        let e = FiniteSubset::empty();
        let p = part(4, &[&[0, 2], &[1, 3]]);
        let q = part(4, &[&[0, 1, 2, 3]]);
        assert!(preceq(&q, &p, &e));
        assert!(preceq(&p, &p, &e));
        assert!(!preceq(&part(4, &[&[0, 2]]), &part(4, &[&[0, 1]]), &e));
    }

    #[test]
    fn fiber_examples() {
        let p = part(5, &[&[1, 2]]);
        let f = fiber_of(&p, &set(&[0]), 1).unwrap();
        assert_eq!(f, vec![part(5, &[&[1, 2]]), part(5, &[&[0, 1, 2]])]);
        assert!(f.len() as u128 <= fiber_bound(1, 1));
        assert_eq!(fiber_of(&p, &FiniteSubset::empty(), 1).unwrap(), vec![p]);
    }

    #[test]
    fn chain_within_bound() {
        for e in [FiniteSubset::empty(), set(&[0])] {
            let c = longest_chain(5, 2, &e, DEFAULT_SWEEP_LIMIT).unwrap();
            assert!(c.len() as u128 <= chain_bound(2, e.len()));
            for w in c.windows(2) {
                assert!(preceq(&w[1], &w[0], &e) && !preceq(&w[0], &w[1], &e));
            }
        }
    }

    #[test]
    fn stabilizer_orbits_are_supported() {
        let space = TupleSpace::new(5, vec![1, 1].into());
        let e = set(&[0]);
        let orbits = stabilizer_orbits(&space, &e);
        // ({0},{x}), ({x},{0}), ({x},{y}) with x, y outside e
        assert_eq!(orbits.len(), 3);
        for o in &orbits {
            assert!(is_support(5, &e, &space.family_of(o)));
        }
    }
}
