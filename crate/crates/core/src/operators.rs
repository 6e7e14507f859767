//! The closure operators on families of disjoint tuples.
//!
//! For profiles `m <= l` (componentwise) and a family `X ⊆ O_m(A)`:
//!
//! * `γ_l(X)`: every `q ∈ O_l(A)` extending some member of `X`;
//! * `α_l(X)`: every `p ∈ O_m(A)` all of whose `l`-extensions lie in `γ_l(X)`
//!   (a `p` without extensions is accepted vacuously);
//! * `δ_l(X) = α_l(X) \ X`.
//!
//! Families are bitmasks over the canonical enumeration of `O_m(A)`
//! ([`TupleSpace`]). Two engines compute `α`:
//!
//! * [`ExplicitClosure`] enumerates `O_l(A)` once and stores, per domain tuple,
//!   the mask of its extensions; `γ` is a union and `α` a subset test.
//! * [`ImplicitClosure`] never enumerates `O_l(A)`: it decides membership in
//!   `α` by searching for an `l`-extension that avoids every member of `X`.
//!   Elements outside the members' supports are interchangeable, so only the
//!   relevant elements are branched on.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    enum_disjoint_tuples, subsets_of, DisjointTuple, FiniteSubset, SizeProfile,
};
use crate::counting::count_disjoint_tuples;
use crate::error::{Error, Result};
use crate::FamilyMask;

/// A pair of profiles `m <= l` of equal arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProfilePair {
    lower: SizeProfile,
    upper: SizeProfile,
}

impl ProfilePair {
    pub fn new(lower: SizeProfile, upper: SizeProfile) -> Result<Self> {
        if lower.arity() != upper.arity() {
            return Err(Error::ArityMismatch {
                expected: lower.arity(),
                found: upper.arity(),
            });
        }
        if let Some((index, (&m, &l))) = lower
            .sizes()
            .iter()
            .zip(upper.sizes())
            .enumerate()
            .find(|(_, (m, l))| m > l)
        {
            return Err(Error::ProfileOrder {
                index,
                lower: m,
                upper: l,
            });
        }
        Ok(ProfilePair { lower, upper })
    }

    pub fn lower(&self) -> &SizeProfile {
        &self.lower
    }

    pub fn upper(&self) -> &SizeProfile {
        &self.upper
    }

    pub fn arity(&self) -> usize {
        self.lower.arity()
    }

    /// `m_1 + .. + m_n + 1`, the nilpotency bound for `δ`.
    pub fn nilpotency_bound(&self) -> usize {
        self.lower.total() + 1
    }
}

/// A set of tuples from one space `O_m(A)`, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TupleFamily {
    ground: usize,
    profile: SizeProfile,
    members: BTreeSet<DisjointTuple>,
}

impl TupleFamily {
    pub fn new(
        ground: usize,
        profile: SizeProfile,
        members: impl IntoIterator<Item = DisjointTuple>,
    ) -> Result<Self> {
        let members: BTreeSet<DisjointTuple> = members.into_iter().collect();
        for t in &members {
            t.check_within(ground)?;
            if t.profile() != profile {
                return Err(Error::ProfileMismatch {
                    expected: profile.sizes().to_vec(),
                    found: t.profile().sizes().to_vec(),
                });
            }
        }
        Ok(TupleFamily {
            ground,
            profile,
            members,
        })
    }

    pub fn empty(ground: usize, profile: SizeProfile) -> Self {
        TupleFamily {
            ground,
            profile,
            members: BTreeSet::new(),
        }
    }

    /// All of `O_m(A)`.
    pub fn full(ground: usize, profile: SizeProfile) -> Self {
        let members = enum_disjoint_tuples(ground, &profile).collect();
        TupleFamily {
            ground,
            profile,
            members,
        }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn profile(&self) -> &SizeProfile {
        &self.profile
    }

    pub fn members(&self) -> &BTreeSet<DisjointTuple> {
        &self.members
    }

    pub fn into_members(self) -> BTreeSet<DisjointTuple> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, t: &DisjointTuple) -> bool {
        self.members.contains(t)
    }

    pub fn is_subset(&self, other: &TupleFamily) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn difference(&self, other: &TupleFamily) -> TupleFamily {
        TupleFamily {
            ground: self.ground,
            profile: self.profile.clone(),
            members: self.members.difference(&other.members).cloned().collect(),
        }
    }
}

/// `O_m(A)` enumerated once, with reverse lookup.
#[derive(Clone, Debug)]
pub struct TupleSpace {
    ground: usize,
    profile: SizeProfile,
    tuples: Vec<DisjointTuple>,
    index: HashMap<DisjointTuple, usize>,
}

impl TupleSpace {
    pub fn new(ground: usize, profile: SizeProfile) -> Self {
        let tuples: Vec<DisjointTuple> = enum_disjoint_tuples(ground, &profile).collect();
        let index = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        TupleSpace {
            ground,
            profile,
            tuples,
            index,
        }
    }

    /// Like [`TupleSpace::new`] but refuses spaces larger than `limit`.
    pub fn with_limit(ground: usize, profile: SizeProfile, limit: u128) -> Result<Self> {
        let size: u128 = count_disjoint_tuples(ground, profile.sizes());
        if size > limit {
            return Err(Error::Budget {
                what: "tuple space enumeration",
                required: size.to_string(),
                limit,
            });
        }
        Ok(TupleSpace::new(ground, profile))
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn profile(&self) -> &SizeProfile {
        &self.profile
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[DisjointTuple] {
        &self.tuples
    }

    pub fn index_of(&self, t: &DisjointTuple) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn empty_mask(&self) -> FamilyMask {
        FamilyMask::with_capacity(self.len())
    }

    pub fn full_mask(&self) -> FamilyMask {
        let mut m = self.empty_mask();
        m.insert_range(..);
        m
    }

    pub fn mask_of(&self, family: &TupleFamily) -> Result<FamilyMask> {
        if family.ground != self.ground || family.profile != self.profile {
            return Err(Error::ProfileMismatch {
                expected: self.profile.sizes().to_vec(),
                found: family.profile.sizes().to_vec(),
            });
        }
        let mut m = self.empty_mask();
        for t in &family.members {
            m.insert(self.index[t]);
        }
        Ok(m)
    }

    /// Builds a mask from tuples, which must all lie in the space.
    pub fn mask_from<'a>(&self, tuples: impl IntoIterator<Item = &'a DisjointTuple>) -> Result<FamilyMask> {
        let mut m = self.empty_mask();
        for t in tuples {
            let i = self.index_of(t).ok_or_else(|| Error::ProfileMismatch {
                expected: self.profile.sizes().to_vec(),
                found: t.profile().sizes().to_vec(),
            })?;
            m.insert(i);
        }
        Ok(m)
    }

    pub fn family_of(&self, mask: &FamilyMask) -> TupleFamily {
        TupleFamily {
            ground: self.ground,
            profile: self.profile.clone(),
            members: mask.ones().map(|i| self.tuples[i].clone()).collect(),
        }
    }

    /// Members of a mask as tuples, in canonical order.
    pub fn tuples_of<'a>(&'a self, mask: &'a FamilyMask) -> impl Iterator<Item = &'a DisjointTuple> + 'a {
        mask.ones().map(move |i| &self.tuples[i])
    }
}

/// Result of iterating `δ` until the family empties or repeats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    /// least `k` with `δ^(k)(X) = ∅`
    Index(usize),
    /// the sequence `δ^(k)(X)` revisits a non-empty family
    Cycle(CycleReport),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleReport {
    /// first `k` whose family recurs
    pub start: usize,
    pub period: usize,
    pub family: FamilyMask,
}

/// Operations shared by both `α` engines.
pub trait ClosureEngine: Sync {
    fn pair(&self) -> &ProfilePair;

    fn domain(&self) -> &TupleSpace;

    /// True when `O_l(A)` is empty, so `α` accepts everything vacuously.
    fn extension_space_empty(&self) -> bool;

    fn alpha(&self, x: &FamilyMask) -> FamilyMask;

    fn delta(&self, x: &FamilyMask) -> FamilyMask {
        let mut a = self.alpha(x);
        a.difference_with(x);
        a
    }

    fn delta_power(&self, x: &FamilyMask, k: usize) -> FamilyMask {
        let mut cur = x.clone();
        for _ in 0..k {
            if cur.is_clear() && !self.extension_space_empty() {
                break;
            }
            cur = self.delta(&cur);
        }
        cur
    }

    /// Iterates `δ` with cycle detection; always terminates because the
    /// family space is finite.
    fn nilpotency(&self, x: &FamilyMask) -> Nilpotency {
        let mut seen: HashMap<FamilyMask, usize> = HashMap::new();
        let mut cur = x.clone();
        let mut k = 0;
        loop {
            if cur.is_clear() {
                return Nilpotency::Index(k);
            }
            if let Some(&start) = seen.get(&cur) {
                return Nilpotency::Cycle(CycleReport {
                    start,
                    period: k - start,
                    family: cur,
                });
            }
            let next = self.delta(&cur);
            seen.insert(cur, k);
            cur = next;
            k += 1;
        }
    }
}

/// `α` via a precomputed extension table over an enumerated `O_l(A)`.
#[derive(Clone, Debug)]
pub struct ExplicitClosure {
    pair: ProfilePair,
    domain: TupleSpace,
    codomain: TupleSpace,
    /// per domain index: mask over the codomain of its extensions
    extensions: Vec<FamilyMask>,
}

/// Default cap on the number of (extension, sub-tuple) incidences an
/// [`ExplicitClosure`] may materialise.
pub const DEFAULT_EXPLICIT_LIMIT: u128 = 50_000_000;

impl ExplicitClosure {
    pub fn new(ground: usize, pair: ProfilePair) -> Result<Self> {
        Self::with_limit(ground, pair, DEFAULT_EXPLICIT_LIMIT)
    }

    pub fn with_limit(ground: usize, pair: ProfilePair, limit: u128) -> Result<Self> {
        let codomain_size: u128 = count_disjoint_tuples(ground, pair.upper().sizes());
        let per_q: u128 = pair
            .lower()
            .sizes()
            .iter()
            .zip(pair.upper().sizes())
            .map(|(&m, &l)| crate::counting::binomial::<u128>(l, m))
            .product();
        let work = codomain_size.saturating_mul(per_q);
        if work > limit {
            return Err(Error::Budget {
                what: "explicit extension table",
                required: work.to_string(),
                limit,
            });
        }
        let domain = TupleSpace::new(ground, pair.lower().clone());
        let codomain = TupleSpace::new(ground, pair.upper().clone());
        let mut extensions = vec![FamilyMask::with_capacity(codomain.len()); domain.len()];
        for (qi, q) in codomain.tuples().iter().enumerate() {
            for p in sub_tuples(q, pair.lower()) {
                extensions[domain.index[&p]].insert(qi);
            }
        }
        Ok(ExplicitClosure {
            pair,
            domain,
            codomain,
            extensions,
        })
    }

    pub fn codomain(&self) -> &TupleSpace {
        &self.codomain
    }

    /// Extensions of domain tuple `i`, as a mask over the codomain.
    pub fn extensions_of(&self, i: usize) -> &FamilyMask {
        &self.extensions[i]
    }

    pub fn gamma(&self, x: &FamilyMask) -> FamilyMask {
        let mut g = self.codomain.empty_mask();
        for i in x.ones() {
            g.union_with(&self.extensions[i]);
        }
        g
    }

    /// `{p : every l-extension of p lies in z}` for `z ⊆ O_l(A)`.
    pub fn pullback(&self, z: &FamilyMask) -> FamilyMask {
        let mut out = self.domain.empty_mask();
        for (i, ext) in self.extensions.iter().enumerate() {
            if ext.is_subset(z) {
                out.insert(i);
            }
        }
        out
    }
}

impl ClosureEngine for ExplicitClosure {
    fn pair(&self) -> &ProfilePair {
        &self.pair
    }

    fn domain(&self) -> &TupleSpace {
        &self.domain
    }

    fn extension_space_empty(&self) -> bool {
        self.codomain.is_empty()
    }

    fn alpha(&self, x: &FamilyMask) -> FamilyMask {
        self.pullback(&self.gamma(x))
    }
}

/// All `p ⊑ q` with profile `lower`.
fn sub_tuples<'a>(q: &'a DisjointTuple, lower: &'a SizeProfile) -> impl Iterator<Item = DisjointTuple> + 'a {
    q.components()
        .iter()
        .zip(lower.sizes())
        .map(|(c, &m)| subsets_of(c.elements(), m).collect::<Vec<FiniteSubset>>())
        .multi_cartesian_product()
        .map(DisjointTuple::from_components_unchecked)
        // multi_cartesian_product yields nothing for arity 0
        .chain(std::iter::once(DisjointTuple::empty(0)).filter(move |_| lower.arity() == 0))
}

/// `α` by search for an avoiding extension; never enumerates `O_l(A)`.
#[derive(Clone, Debug)]
pub struct ImplicitClosure {
    pair: ProfilePair,
    domain: TupleSpace,
    extension_space_empty: bool,
}

impl ImplicitClosure {
    pub fn new(ground: usize, pair: ProfilePair) -> Self {
        let domain = TupleSpace::new(ground, pair.lower().clone());
        let extension_space_empty = pair.upper().total() > ground;
        ImplicitClosure {
            pair,
            domain,
            extension_space_empty,
        }
    }

    pub fn with_domain_limit(ground: usize, pair: ProfilePair, limit: u128) -> Result<Self> {
        let domain = TupleSpace::with_limit(ground, pair.lower().clone(), limit)?;
        let extension_space_empty = pair.upper().total() > ground;
        Ok(ImplicitClosure {
            pair,
            domain,
            extension_space_empty,
        })
    }

    /// Whether some `l`-extension of `p` contains no member of `members`.
    pub fn has_avoiding_extension(&self, p: &DisjointTuple, members: &[&DisjointTuple]) -> bool {
        avoiding_extension_exists(self.domain.ground(), self.pair.upper(), p, members)
    }
}

impl ClosureEngine for ImplicitClosure {
    fn pair(&self) -> &ProfilePair {
        &self.pair
    }

    fn domain(&self) -> &TupleSpace {
        &self.domain
    }

    fn extension_space_empty(&self) -> bool {
        self.extension_space_empty
    }

    fn alpha(&self, x: &FamilyMask) -> FamilyMask {
        let members: Vec<&DisjointTuple> = self.domain.tuples_of(x).collect();
        let mut out = self.domain.empty_mask();
        for (i, p) in self.domain.tuples().iter().enumerate() {
            if x.contains(i) || !self.has_avoiding_extension(p, &members) {
                out.insert(i);
            }
        }
        out
    }
}

/// Search state for [`avoiding_extension_exists`].
struct AvoidSearch {
    /// per relevant element: (member id, component the member needs it in)
    occurrences: Vec<Vec<(usize, usize)>>,
    /// per member: number of residual requirements
    required: Vec<usize>,
    satisfied: Vec<usize>,
    /// per member: number of requirements already violated
    violated: Vec<usize>,
    alive: usize,
    need: Vec<usize>,
    need_total: usize,
    free: usize,
}

impl AvoidSearch {
    fn run(&mut self, t: usize) -> bool {
        let unassigned = self.occurrences.len() - t;
        if self.need_total > self.free + unassigned {
            return false;
        }
        if self.alive == 0 || t == self.occurrences.len() {
            // remaining relevant elements act as free ones
            return true;
        }
        // try leaving the element out first, then each component with room
        for choice in std::iter::once(None).chain((0..self.need.len()).map(Some)) {
            if let Some(c) = choice {
                if self.need[c] == 0 {
                    continue;
                }
            }
            if self.assign(t, choice)
                && self.run(t + 1) {
                    return true;
                }
            self.unassign(t, choice);
        }
        false
    }

    /// Applies a choice; returns false if it completes some member.
    fn assign(&mut self, t: usize, choice: Option<usize>) -> bool {
        if let Some(c) = choice {
            self.need[c] -= 1;
            self.need_total -= 1;
        }
        let mut ok = true;
        for &(x, comp) in &self.occurrences[t] {
            if choice == Some(comp) {
                self.satisfied[x] += 1;
                if self.violated[x] == 0 && self.satisfied[x] == self.required[x] {
                    ok = false;
                }
            } else {
                if self.violated[x] == 0 {
                    self.alive -= 1;
                }
                self.violated[x] += 1;
            }
        }
        ok
    }

    fn unassign(&mut self, t: usize, choice: Option<usize>) {
        if let Some(c) = choice {
            self.need[c] += 1;
            self.need_total += 1;
        }
        for &(x, comp) in &self.occurrences[t] {
            if choice == Some(comp) {
                self.satisfied[x] -= 1;
            } else {
                self.violated[x] -= 1;
                if self.violated[x] == 0 {
                    self.alive += 1;
                }
            }
        }
    }
}

/// Decides whether some `q ∈ O_upper(A)` with `p ⊑ q` contains no member of
/// `members` (componentwise).
pub fn avoiding_extension_exists(
    ground: usize,
    upper: &SizeProfile,
    p: &DisjointTuple,
    members: &[&DisjointTuple],
) -> bool {
    let support = p.support();
    if upper.total() > ground || !p.profile().le(upper) {
        return false;
    }
    // residual requirements of each member that can still end up below q
    let mut residuals: Vec<Vec<(usize, usize)>> = Vec::new();
    for x in members {
        let mut res = Vec::new();
        let mut possible = true;
        for (i, xi) in x.components().iter().enumerate() {
            for e in xi.iter() {
                if p.component(i).contains(e) {
                    continue;
                }
                if support.contains(e) {
                    possible = false;
                    break;
                }
                res.push((e, i));
            }
            if !possible {
                break;
            }
        }
        if !possible {
            continue;
        }
        if res.is_empty() {
            // x ⊑ p ⊑ q for every extension q
            return false;
        }
        residuals.push(res);
    }
    let mut elems: Vec<usize> = residuals.iter().flatten().map(|&(e, _)| e).collect();
    elems.sort_unstable();
    elems.dedup();
    let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut occurrences = vec![Vec::new(); elems.len()];
    for (x, res) in residuals.iter().enumerate() {
        for &(e, comp) in res {
            occurrences[pos[&e]].push((x, comp));
        }
    }
    let need: Vec<usize> = upper
        .sizes()
        .iter()
        .zip(p.components())
        .map(|(&l, c)| l - c.len())
        .collect();
    let mut search = AvoidSearch {
        required: residuals.iter().map(Vec::len).collect(),
        satisfied: vec![0; residuals.len()],
        violated: vec![0; residuals.len()],
        alive: residuals.len(),
        need_total: need.iter().sum(),
        need,
        free: ground - support.len() - elems.len(),
        occurrences,
    };
    search.run(0)
}

// ---------------------------------------------------------------------------
// Family-level API

fn explicit_for(x: &TupleFamily, upper: &SizeProfile) -> Result<ExplicitClosure> {
    let pair = ProfilePair::new(x.profile().clone(), upper.clone())?;
    ExplicitClosure::new(x.ground(), pair)
}

/// `γ_l(X)` as a family over `O_l(A)`.
pub fn gamma(x: &TupleFamily, upper: &SizeProfile) -> Result<TupleFamily> {
    let eng = explicit_for(x, upper)?;
    let m = eng.domain().mask_of(x)?;
    Ok(eng.codomain().family_of(&eng.gamma(&m)))
}

pub fn alpha(x: &TupleFamily, upper: &SizeProfile) -> Result<TupleFamily> {
    let eng = explicit_for(x, upper)?;
    let m = eng.domain().mask_of(x)?;
    Ok(eng.domain().family_of(&eng.alpha(&m)))
}

pub fn delta(x: &TupleFamily, upper: &SizeProfile) -> Result<TupleFamily> {
    delta_power(x, upper, 1)
}

/// `δ^(k)(X)`; `k = 0` returns `X`.
pub fn delta_power(x: &TupleFamily, upper: &SizeProfile, k: usize) -> Result<TupleFamily> {
    let eng = explicit_for(x, upper)?;
    let m = eng.domain().mask_of(x)?;
    Ok(eng.domain().family_of(&eng.delta_power(&m, k)))
}

/// Least `k` with `δ^(k)(X) = ∅`, or the detected cycle.
pub fn nilpotency_index(x: &TupleFamily, upper: &SizeProfile) -> Result<Nilpotency> {
    let eng = explicit_for(x, upper)?;
    let m = eng.domain().mask_of(x)?;
    Ok(eng.nilpotency(&m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(v: &[usize]) -> DisjointTuple {
        DisjointTuple::from_lists(&[v]).unwrap()
    }

    fn fam(a: usize, m: &[usize], tuples: Vec<DisjointTuple>) -> TupleFamily {
        TupleFamily::new(a, m.to_vec().into(), tuples).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let g = gamma(&fam(3, &[1], vec![single(&[0])]), &vec![2].into()).unwrap();
        assert_eq!(
            g.members().iter().cloned().collect::<Vec<_>>(),
            vec![single(&[0, 1]), single(&[0, 2])]
        );
        assert!(gamma(&fam(3, &[1], vec![]), &vec![2].into()).unwrap().is_empty());
        assert!(gamma(&fam(2, &[1], vec![single(&[0])]), &vec![3].into())
            .unwrap()
            .is_empty());
        assert!(matches!(
            gamma(&fam(3, &[2], vec![]), &vec![1].into()),
            Err(Error::ProfileOrder { index: 0, lower: 2, upper: 1 })
        ));
    }

    #[test]
    fn alpha_examples() {
        let x = fam(3, &[1], vec![single(&[0]), single(&[1])]);
        assert_eq!(alpha(&x, &vec![2].into()).unwrap(), TupleFamily::full(3, vec![1].into()));
        let x = fam(3, &[1], vec![single(&[0])]);
        assert_eq!(alpha(&x, &vec![2].into()).unwrap(), x);
        assert!(alpha(&fam(4, &[1], vec![]), &vec![2].into()).unwrap().is_empty());
    }

    #[test]
    fn delta_examples() {
        let x = fam(3, &[1], vec![single(&[0]), single(&[1])]);
        let l: SizeProfile = vec![2].into();
        assert_eq!(delta(&x, &l).unwrap(), fam(3, &[1], vec![single(&[2])]));
        assert!(delta_power(&x, &l, 2).unwrap().is_empty());
        assert_eq!(delta_power(&x, &l, 0).unwrap(), x);
        assert_eq!(nilpotency_index(&x, &l).unwrap(), Nilpotency::Index(2));

        let empty = fam(3, &[1], vec![]);
        assert_eq!(nilpotency_index(&empty, &l).unwrap(), Nilpotency::Index(0));

        let x = fam(2, &[1], vec![single(&[0])]);
        match nilpotency_index(&x, &vec![3].into()).unwrap() {
            Nilpotency::Cycle(c) => {
                assert_eq!(c.start, 0);
                assert_eq!(c.period, 2);
            }
            other => panic!("expected a cycle, got {other:?}"),
        }
    }

    #[test]
    fn engines_agree_on_small_spaces() {
        for (a, m, l) in [
            (5usize, vec![1usize], vec![2usize]),
            (5, vec![1], vec![3]),
            (5, vec![2], vec![3]),
            (5, vec![1, 1], vec![2, 1]),
            (6, vec![1, 0], vec![2, 2]),
            (3, vec![1], vec![3]),
            (2, vec![1], vec![3]),
        ] {
            let pair = ProfilePair::new(m.into(), l.into()).unwrap();
            let ex = ExplicitClosure::new(a, pair.clone()).unwrap();
            let im = ImplicitClosure::new(a, pair);
            let n = ex.domain().len();
            let families: Box<dyn Iterator<Item = u64>> = if n <= 10 {
                Box::new(0..(1u64 << n))
            } else {
                Box::new((0..300u64).map(|i| i.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> (64 - n.min(63))))
            };
            for bits in families {
                let mut x = ex.domain().empty_mask();
                for i in 0..n.min(64) {
                    if bits >> i & 1 == 1 {
                        x.insert(i);
                    }
                }
                assert_eq!(ex.alpha(&x), im.alpha(&x), "a={a} bits={bits:b}");
            }
        }
    }

    #[test]
    fn arity_zero_profiles() {
        let pair = ProfilePair::new(SizeProfile::default(), SizeProfile::default()).unwrap();
        let ex = ExplicitClosure::new(3, pair).unwrap();
        assert_eq!(ex.domain().len(), 1);
        let mut x = ex.domain().empty_mask();
        x.insert(0);
        assert_eq!(ex.alpha(&x), x);
        assert!(ex.delta(&x).is_clear());
    }
}
