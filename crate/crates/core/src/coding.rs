//! Coding an indexed family of tuple families as a set of finitary partitions,
//! and decoding it back.
//!
//! A *slot* is a pair `(j, m)`: index `j` of the family and a size profile
//! `m` of arity `n`. For each slot the encoder fixes a size signature
//! `f(j, m, k)` for `0 <= k <= Σm` and writes `g(j, m) = f(j, m, Σm)`. With
//! `X_{j,m}` the members of `X(j)` of profile `m`, the book stores
//!
//! ```text
//! Y_{j,m,k} = α_g(δ_g^(k)(X_{j,m}))
//! ```
//!
//! and the coded set is the union over keys of the partitions induced by the
//! tuples in `Z_{j,m,k} = γ_{f(j,m,k)}(Y_{j,m,k})`. Block sizes are pairwise
//! distinct, so the component order of a tuple can be read off its partition.
//! Decoding pulls each slice back to `Y` and recovers
//! `X_{j,m} = Y_0 \ (Y_1 \ (… \ Y_{Σm}))`.
//!
//! The recovered family equals the input exactly when `δ_g^(Σm+1)(X_{j,m})`
//! is empty. On an infinite ground set that always holds; on a finite one it
//! depends on the ground size and on the family, which is why
//! [`encode_traced`] reports the residual.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{DisjointTuple, FinitaryPartition, FiniteSubset, SizeProfile};
use crate::counting::count_disjoint_tuples;
use crate::error::{Error, Result};
use crate::maps::{disjoint_to_fin, fin_to_disjoint, tuple_to_partition};
use crate::operators::{
    ClosureEngine, ExplicitClosure, ImplicitClosure, ProfilePair, TupleFamily, TupleSpace,
};
use crate::FamilyMask;

/// Incidence budget under which a slot gets an [`ExplicitClosure`].
pub const DEFAULT_ENGINE_LIMIT: u128 = 40_000_000;

/// Default cap on the number of partitions [`Coder::materialize`] may emit.
pub const DEFAULT_MATERIALIZE_LIMIT: u128 = 2_000_000;

/// An admissible pair `(j, m)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub j: usize,
    pub profile: SizeProfile,
}

impl Slot {
    pub fn new(j: usize, profile: impl Into<SizeProfile>) -> Self {
        Slot {
            j,
            profile: profile.into(),
        }
    }

    /// Largest `k` used by the slot, `Σm`.
    pub fn k_max(&self) -> usize {
        self.profile.total()
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.j, self.profile)
    }
}

/// Key of one book entry.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CodeKey {
    pub j: usize,
    pub profile: SizeProfile,
    pub k: usize,
}

/// How block sizes are assigned to `(j, m, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SizeSignature {
    /// `l_i = 2^i · 3^j · 5^{m_1} ⋯ p_{n+1}^{m_n} · p_{n+2}^k`, primes indexed
    /// from `p_0 = 2`.
    #[serde(rename = "prime-power")]
    PrimePower,
    /// `l_i = B + i + (n+1)·(slot·(K+1) + k)` where `slot` is the position of
    /// `(j, m)` in the slot table, `B` exceeds every component of every
    /// admissible profile and `K` is the largest `Σm`.
    Compact {
        /// Defaults to one more than the largest admissible component.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<usize>,
    },
}

/// The `i`-th prime, `p_0 = 2`.
pub fn nth_prime(i: usize) -> u128 {
    let mut found = 0;
    let mut c: u128 = 1;
    loop {
        c += 1;
        if (2..).take_while(|d: &u128| d * d <= c).all(|d| !c.is_multiple_of(d)) {
            if found == i {
                return c;
            }
            found += 1;
        }
    }
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Block sizes assigned to `(j, m, k)`.
///
/// `slots` is the slot table (needed by the compact kind). The per-value
/// clauses of the contract are checked here: every `l_i >= max(m_i, 2)` and
/// the sizes strictly increase. Monotonicity in `k` and injectivity are
/// properties of the whole table; see [`check_signature_contract`].
pub fn block_sizes(
    sig: &SizeSignature,
    slots: &[Slot],
    j: usize,
    m: &SizeProfile,
    k: usize,
) -> Result<SizeProfile> {
    let n = m.arity();
    if k > m.total() {
        return Err(Error::Signature(format!(
            "k = {k} exceeds Σm = {} for profile {m}",
            m.total()
        )));
    }
    let sizes: Vec<usize> = match sig {
        SizeSignature::PrimePower => {
            let overflow = || Error::Signature(format!("size for ({j}, {m}, {k}) overflows"));
            let mut common = checked_pow(3, j).ok_or_else(overflow)?;
            for (t, &mi) in m.sizes().iter().enumerate() {
                let f = checked_pow(nth_prime(t + 2), mi).ok_or_else(overflow)?;
                common = common.checked_mul(f).ok_or_else(overflow)?;
            }
            let f = checked_pow(nth_prime(n + 2), k).ok_or_else(overflow)?;
            common = common.checked_mul(f).ok_or_else(overflow)?;
            (1..=n)
                .map(|i| {
                    checked_pow(2, i)
                        .and_then(|p| p.checked_mul(common))
                        .and_then(|v| usize::try_from(v).ok())
                        .ok_or_else(overflow)
                })
                .collect::<Result<_>>()?
        }
        SizeSignature::Compact { base } => {
            let slot = slots
                .iter()
                .position(|s| s.j == j && &s.profile == m)
                .ok_or_else(|| {
                    Error::Signature(format!("slot ({j}, {m}) is not in the slot table"))
                })?;
            let b = base.unwrap_or_else(|| default_base(slots));
            let kk = slots.iter().map(Slot::k_max).max().unwrap_or(0);
            (1..=n)
                .map(|i| b + i + (n + 1) * (slot * (kk + 1) + k))
                .collect()
        }
    };
    for (i, (&l, &mi)) in sizes.iter().zip(m.sizes()).enumerate() {
        if l < mi.max(2) {
            return Err(Error::Signature(format!(
                "component {i} of ({j}, {m}, {k}) has size {l} < max(m_i, 2)"
            )));
        }
    }
    if let Some(i) = (1..sizes.len()).find(|&i| sizes[i - 1] >= sizes[i]) {
        return Err(Error::Signature(format!(
            "sizes of ({j}, {m}, {k}) not strictly increasing at component {i}: {sizes:?}"
        )));
    }
    Ok(SizeProfile::new(sizes))
}

fn default_base(slots: &[Slot]) -> usize {
    slots
        .iter()
        .map(|s| s.profile.max_component())
        .max()
        .unwrap_or(0)
        + 1
}

/// Checks every clause of the signature contract over `slots × 0..=Σm`.
pub fn check_signature_contract(sig: &SizeSignature, slots: &[Slot]) -> Result<()> {
    let mut seen: BTreeMap<SizeProfile, CodeKey> = BTreeMap::new();
    for s in slots {
        let mut prev: Option<SizeProfile> = None;
        for k in 0..=s.k_max() {
            let l = block_sizes(sig, slots, s.j, &s.profile, k)?;
            if let Some(p) = &prev {
                if !p.le(&l) {
                    return Err(Error::Signature(format!(
                        "slot {s} is not monotone in k: {p} then {l}"
                    )));
                }
            }
            let key = CodeKey {
                j: s.j,
                profile: s.profile.clone(),
                k,
            };
            if let Some(other) = seen.insert(l.clone(), key) {
                return Err(Error::Signature(format!(
                    "sizes {l} assigned to both ({}, {}, {}) and ({}, {}, {k})",
                    other.j, other.profile, other.k, s.j, s.profile
                )));
            }
            prev = Some(l);
        }
    }
    Ok(())
}

/// A coding configuration: ground size, arity, signature and slot table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodingConfig {
    pub ground: usize,
    pub arity: usize,
    pub signature: SizeSignature,
    pub slots: Vec<Slot>,
    /// Cap on [`Coder::materialize`] output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub materialize_limit: Option<u128>,
    /// Free text; used to record how the ground size was validated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CodingConfig {
    pub fn new(ground: usize, arity: usize, signature: SizeSignature, slots: Vec<Slot>) -> Self {
        CodingConfig {
            ground,
            arity,
            signature,
            slots,
            materialize_limit: None,
            note: None,
        }
    }

    /// Compact signature with the default base.
    pub fn compact(ground: usize, arity: usize, slots: Vec<Slot>) -> Self {
        Self::new(ground, arity, SizeSignature::Compact { base: None }, slots)
    }

    pub fn sizes(&self, slot: &Slot, k: usize) -> Result<SizeProfile> {
        block_sizes(&self.signature, &self.slots, slot.j, &slot.profile, k)
    }

    /// `g(j, m) = f(j, m, Σm)`.
    pub fn top_sizes(&self, slot: &Slot) -> Result<SizeProfile> {
        self.sizes(slot, slot.k_max())
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for s in &self.slots {
            if s.profile.arity() != self.arity {
                return Err(Error::Config(format!(
                    "slot {s} has arity {}, config arity is {}",
                    s.profile.arity(),
                    self.arity
                )));
            }
            if !seen.insert(s.clone()) {
                return Err(Error::Config(format!("slot {s} listed twice")));
            }
        }
        check_signature_contract(&self.signature, &self.slots)?;
        for s in &self.slots {
            let g = self.top_sizes(s)?;
            if g.total() > self.ground {
                return Err(Error::Config(format!(
                    "ground size {} is below Σg = {} for slot {s} (g = {g})",
                    self.ground,
                    g.total()
                )));
            }
        }
        Ok(())
    }

    fn admits(&self, j: usize, profile: &SizeProfile) -> bool {
        self.slots.iter().any(|s| s.j == j && &s.profile == profile)
    }

    /// Slot whose size signature matches the multiset of block sizes.
    fn key_for_sizes(&self, sizes: &[usize]) -> Option<(Slot, usize, SizeProfile)> {
        self.slots.iter().find_map(|s| {
            (0..=s.k_max()).find_map(|k| {
                let f = self.sizes(s, k).ok()?;
                (f.sizes() == sizes).then(|| (s.clone(), k, f))
            })
        })
    }
}

/// `j ↦ X(j)`, each `X(j)` a set of `n`-tuples of mixed profiles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedFamily {
    pub ground: usize,
    pub arity: usize,
    pub members: BTreeMap<usize, BTreeSet<DisjointTuple>>,
}

impl IndexedFamily {
    pub fn empty(ground: usize, arity: usize) -> Self {
        IndexedFamily {
            ground,
            arity,
            members: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, j: usize, t: DisjointTuple) {
        self.members.entry(j).or_default().insert(t);
    }

    /// Sets `X_{j,m}`, replacing previous members of that profile.
    pub fn set_slice(&mut self, j: usize, profile: &SizeProfile, tuples: impl IntoIterator<Item = DisjointTuple>) {
        let e = self.members.entry(j).or_default();
        e.retain(|t| &t.profile() != profile);
        e.extend(tuples);
        if e.is_empty() {
            self.members.remove(&j);
        }
    }

    /// `X_{j,m}`.
    pub fn slice<'a>(&'a self, j: usize, profile: &'a SizeProfile) -> impl Iterator<Item = &'a DisjointTuple> + 'a {
        self.members
            .get(&j)
            .into_iter()
            .flatten()
            .filter(move |t| &t.profile() == profile)
    }

    pub fn len(&self) -> usize {
        self.members.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops empty index entries so equal families compare equal.
    pub fn normalized(mut self) -> Self {
        self.members.retain(|_, v| !v.is_empty());
        self
    }

    pub fn conforms(&self, cfg: &CodingConfig) -> Result<()> {
        if self.ground != cfg.ground {
            return Err(Error::Config(format!(
                "family ground {} differs from config ground {}",
                self.ground, cfg.ground
            )));
        }
        if self.arity != cfg.arity {
            return Err(Error::ArityMismatch {
                expected: cfg.arity,
                found: self.arity,
            });
        }
        for (&j, ts) in &self.members {
            for t in ts {
                if t.arity() != cfg.arity {
                    return Err(Error::ArityMismatch {
                        expected: cfg.arity,
                        found: t.arity(),
                    });
                }
                t.check_within(cfg.ground)?;
                if !cfg.admits(j, &t.profile()) {
                    return Err(Error::Config(format!(
                        "member {t:?} of X({j}) has profile {} outside the slot table",
                        t.profile()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Symbolic form of the coded set: `(j, m, k) ↦ Y_{j,m,k}`.
///
/// Two families have the same coded set exactly when their books are equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "BookRepr", try_from = "BookRepr")]
pub struct CodeBook {
    ground: usize,
    arity: usize,
    entries: BTreeMap<CodeKey, BTreeSet<DisjointTuple>>,
}

#[derive(Serialize, Deserialize)]
struct BookRepr {
    ground: usize,
    arity: usize,
    entries: Vec<BookEntry>,
}

#[derive(Serialize, Deserialize)]
struct BookEntry {
    j: usize,
    profile: SizeProfile,
    k: usize,
    tuples: Vec<DisjointTuple>,
}

impl From<CodeBook> for BookRepr {
    fn from(b: CodeBook) -> Self {
        BookRepr {
            ground: b.ground,
            arity: b.arity,
            entries: b
                .entries
                .into_iter()
                .map(|(key, ts)| BookEntry {
                    j: key.j,
                    profile: key.profile,
                    k: key.k,
                    tuples: ts.into_iter().collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<BookRepr> for CodeBook {
    type Error = Error;

    fn try_from(r: BookRepr) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for e in r.entries {
            let fam = TupleFamily::new(r.ground, e.profile.clone(), e.tuples)?;
            let key = CodeKey {
                j: e.j,
                profile: e.profile,
                k: e.k,
            };
            if entries.contains_key(&key) {
                return Err(Error::Invalid(format!(
                    "duplicate book key ({}, {}, {})",
                    key.j, key.profile, key.k
                )));
            }
            entries.insert(key, fam.into_members());
        }
        Ok(CodeBook {
            ground: r.ground,
            arity: r.arity,
            entries,
        })
    }
}

impl CodeBook {
    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, key: &CodeKey) -> Option<&BTreeSet<DisjointTuple>> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&CodeKey, &BTreeSet<DisjointTuple>)> {
        self.entries.iter()
    }

    /// True when every `Y` is empty, i.e. the coded set is empty.
    pub fn is_empty(&self) -> bool {
        self.entries.values().all(BTreeSet::is_empty)
    }
}

/// Per-slot record of the `δ` chain computed during encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotTrace {
    pub slot: Slot,
    pub g: SizeProfile,
    /// `|δ^(k)(X_{j,m})|` for `k = 0..=Σm+1`
    pub delta_sizes: Vec<usize>,
    /// `|Y_{j,m,k}|` for `k = 0..=Σm`
    pub y_sizes: Vec<usize>,
}

impl SlotTrace {
    /// Size of `δ^(Σm+1)(X_{j,m})`; decoding is exact iff this is zero.
    pub fn residual(&self) -> usize {
        *self.delta_sizes.last().unwrap_or(&0)
    }
}

type Engine = Box<dyn ClosureEngine + Send>;

fn engine(ground: usize, pair: ProfilePair, limit: u128) -> Engine {
    match ExplicitClosure::with_limit(ground, pair.clone(), limit) {
        Ok(e) => Box::new(e),
        Err(_) => Box::new(ImplicitClosure::new(ground, pair)),
    }
}

struct SlotEngines {
    slot: Slot,
    g: SizeProfile,
    /// `α_g`
    top: Engine,
    /// `f(k)` for each `k`, with an `α_{f(k)}` engine unless `f(k) = g`
    per_k: Vec<(SizeProfile, Option<Engine>)>,
}

impl SlotEngines {
    fn at(&self, k: usize) -> &dyn ClosureEngine {
        match &self.per_k[k].1 {
            Some(e) => e.as_ref(),
            None => self.top.as_ref(),
        }
    }
}

/// A validated configuration with closure engines prepared for each slot.
///
/// Building the engines dominates the cost on small ground sets, so reuse a
/// `Coder` across many families.
pub struct Coder {
    cfg: CodingConfig,
    slots: Vec<SlotEngines>,
}

impl Coder {
    pub fn new(cfg: CodingConfig) -> Result<Self> {
        Self::with_engine_limit(cfg, DEFAULT_ENGINE_LIMIT)
    }

    /// `limit` caps the explicit table of each engine; larger spaces use
    /// the search-based engine.
    pub fn with_engine_limit(cfg: CodingConfig, limit: u128) -> Result<Self> {
        cfg.validate()?;
        let mut slots = Vec::with_capacity(cfg.slots.len());
        for s in &cfg.slots {
            let g = cfg.top_sizes(s)?;
            let top = engine(cfg.ground, ProfilePair::new(s.profile.clone(), g.clone())?, limit);
            let mut per_k = Vec::new();
            for k in 0..=s.k_max() {
                let f = cfg.sizes(s, k)?;
                let e = if f == g {
                    None
                } else {
                    Some(engine(cfg.ground, ProfilePair::new(s.profile.clone(), f.clone())?, limit))
                };
                per_k.push((f, e));
            }
            slots.push(SlotEngines {
                slot: s.clone(),
                g,
                top,
                per_k,
            });
        }
        Ok(Coder { cfg, slots })
    }

    pub fn config(&self) -> &CodingConfig {
        &self.cfg
    }

    /// Book of `x` together with the per-slot `δ` chains.
    pub fn encode_traced(&self, x: &IndexedFamily) -> Result<(CodeBook, Vec<SlotTrace>)> {
        x.conforms(&self.cfg)?;
        let mut entries = BTreeMap::new();
        let mut traces = Vec::with_capacity(self.slots.len());
        for se in &self.slots {
            let dom = se.top.domain();
            let mut d = dom.mask_from(x.slice(se.slot.j, &se.slot.profile))?;
            let mut delta_sizes = vec![d.count_ones(..)];
            let mut y_sizes = Vec::new();
            for k in 0..=se.slot.k_max() {
                let y = se.top.alpha(&d);
                let mut next = y.clone();
                next.difference_with(&d);
                // δ^(k) = Y_k \ δ^(k+1)
                let mut check = y.clone();
                check.difference_with(&next);
                if check != d {
                    return Err(Error::Invalid(format!(
                        "nesting identity fails for slot {} at k = {k}",
                        se.slot
                    )));
                }
                y_sizes.push(y.count_ones(..));
                delta_sizes.push(next.count_ones(..));
                entries.insert(
                    CodeKey {
                        j: se.slot.j,
                        profile: se.slot.profile.clone(),
                        k,
                    },
                    dom.tuples_of(&y).cloned().collect(),
                );
                d = next;
            }
            traces.push(SlotTrace {
                slot: se.slot.clone(),
                g: se.g.clone(),
                delta_sizes,
                y_sizes,
            });
        }
        let book = CodeBook {
            ground: self.cfg.ground,
            arity: self.cfg.arity,
            entries,
        };
        Ok((book, traces))
    }

    pub fn encode(&self, x: &IndexedFamily) -> Result<CodeBook> {
        Ok(self.encode_traced(x)?.0)
    }

    fn check_book_shape(&self, book: &CodeBook) -> Result<()> {
        if book.ground != self.cfg.ground || book.arity != self.cfg.arity {
            return Err(Error::Config(format!(
                "book over (ground {}, arity {}) does not match config (ground {}, arity {})",
                book.ground, book.arity, self.cfg.ground, self.cfg.arity
            )));
        }
        Ok(())
    }

    /// Recovers the family from its book.
    ///
    /// Each `Y_k` is first passed through the slice it induces: the pullback
    /// of `γ_{f(k)}(Y_k)` is `α_{f(k)}(Y_k)`. The pullback must be
    /// `α_g`-closed; otherwise the ground set is too small for this slot and
    /// an error names the key.
    pub fn decode_book(&self, book: &CodeBook) -> Result<IndexedFamily> {
        self.check_book_shape(book)?;
        let mut out = IndexedFamily::empty(self.cfg.ground, self.cfg.arity);
        for se in &self.slots {
            let dom = se.top.domain();
            let mut ys = Vec::with_capacity(se.per_k.len());
            for k in 0..se.per_k.len() {
                let key = CodeKey {
                    j: se.slot.j,
                    profile: se.slot.profile.clone(),
                    k,
                };
                let y = match book.get(&key) {
                    Some(ts) => dom.mask_from(ts)?,
                    None => dom.empty_mask(),
                };
                ys.push(self.checked_closure(se, k, se.at(k).alpha(&y))?);
            }
            let x = alternating(&ys);
            out.set_slice(se.slot.j, &se.slot.profile, dom.tuples_of(&x).cloned());
        }
        Ok(out.normalized())
    }

    fn checked_closure(&self, se: &SlotEngines, k: usize, y: FamilyMask) -> Result<FamilyMask> {
        if se.top.alpha(&y) != y {
            return Err(Error::Decode {
                j: se.slot.j,
                profile: se.slot.profile.sizes().to_vec(),
                k,
                reason: format!(
                    "pullback is not α-closed for g = {}; ground size {} is too small",
                    se.g, self.cfg.ground
                ),
            });
        }
        Ok(y)
    }

    /// Exact number of partitions in the coded set, when each slice can be
    /// enumerated within `limit` incidences.
    pub fn partition_count(&self, book: &CodeBook, limit: u128) -> Result<u128> {
        self.check_book_shape(book)?;
        let mut total = 0u128;
        for se in &self.slots {
            for (k, (f, _)) in se.per_k.iter().enumerate() {
                let key = CodeKey {
                    j: se.slot.j,
                    profile: se.slot.profile.clone(),
                    k,
                };
                let Some(ys) = book.get(&key) else { continue };
                if ys.is_empty() {
                    continue;
                }
                let eng = ExplicitClosure::with_limit(
                    self.cfg.ground,
                    ProfilePair::new(se.slot.profile.clone(), f.clone())?,
                    limit,
                )?;
                let y = eng.domain().mask_from(ys)?;
                // distinct keys have distinct size signatures, hence
                // disjoint partition sets
                total += eng.gamma(&y).count_ones(..) as u128;
            }
        }
        Ok(total)
    }

    /// The coded set as explicit partitions.
    ///
    /// Fails with [`Error::Budget`] carrying the exact count when it exceeds
    /// the configured limit.
    pub fn materialize(&self, book: &CodeBook) -> Result<BTreeSet<FinitaryPartition>> {
        let limit = self.cfg.materialize_limit.unwrap_or(DEFAULT_MATERIALIZE_LIMIT);
        let count = self.partition_count(book, DEFAULT_ENGINE_LIMIT)?;
        if count > limit {
            return Err(Error::Budget {
                what: "materialized partitions",
                required: count.to_string(),
                limit,
            });
        }
        let mut out = BTreeSet::new();
        for (key, ys) in book.entries() {
            if ys.is_empty() {
                continue;
            }
            let slot = Slot::new(key.j, key.profile.clone());
            let f = self.cfg.sizes(&slot, key.k)?;
            let eng = ExplicitClosure::new(
                self.cfg.ground,
                ProfilePair::new(key.profile.clone(), f)?,
            )?;
            let y = eng.domain().mask_from(ys)?;
            for q in eng.codomain().tuples_of(&eng.gamma(&y)) {
                out.insert(tuple_to_partition(self.cfg.ground, q)?.0);
            }
        }
        Ok(out)
    }

    /// Recovers the family from an explicit partition set.
    pub fn decode_partitions(&self, h: &BTreeSet<FinitaryPartition>) -> Result<IndexedFamily> {
        let mut out = IndexedFamily::empty(self.cfg.ground, self.cfg.arity);
        let mut slices: BTreeMap<(Slot, usize), Vec<DisjointTuple>> = BTreeMap::new();
        for p in h {
            if p.ground_size() != self.cfg.ground {
                return Err(Error::Invalid(format!(
                    "partition over {} elements, config ground is {}",
                    p.ground_size(),
                    self.cfg.ground
                )));
            }
            if let Some((slot, k, q)) = self.tuple_of_partition(p) {
                slices.entry((slot, k)).or_default().push(q);
            }
        }
        for se in &self.slots {
            let mut ys = Vec::with_capacity(se.per_k.len());
            for (k, (f, _)) in se.per_k.iter().enumerate() {
                let z = TupleFamily::new(
                    self.cfg.ground,
                    f.clone(),
                    slices.remove(&(se.slot.clone(), k)).unwrap_or_default(),
                )?;
                let y = pullback_y(&z, &se.slot.profile)?;
                let y = se.top.domain().mask_of(&y)?;
                ys.push(self.checked_closure(se, k, y)?);
            }
            let x = alternating(&ys);
            out.set_slice(
                se.slot.j,
                &se.slot.profile,
                se.top.domain().tuples_of(&x).cloned(),
            );
        }
        Ok(out.normalized())
    }

    /// Reads a partition as a tuple ordered by ascending block size, if its
    /// block sizes match some key.
    fn tuple_of_partition(&self, p: &FinitaryPartition) -> Option<(Slot, usize, DisjointTuple)> {
        let mut ns: Vec<&FiniteSubset> = p.ns().collect();
        if ns.len() != self.cfg.arity {
            return None;
        }
        ns.sort_by_key(|b| b.len());
        let sizes: Vec<usize> = ns.iter().map(|b| b.len()).collect();
        let (slot, k, _) = self.cfg.key_for_sizes(&sizes)?;
        let q = DisjointTuple::new(ns.into_iter().cloned().collect()).ok()?;
        Some((slot, k, q))
    }

    /// The `(j, m, k)` slice of an explicit partition set.
    pub fn extract_slice(
        &self,
        h: &BTreeSet<FinitaryPartition>,
        j: usize,
        profile: &SizeProfile,
        k: usize,
    ) -> Result<TupleFamily> {
        let slot = Slot::new(j, profile.clone());
        let f = self.cfg.sizes(&slot, k)?;
        let tuples = h.iter().filter_map(|p| {
            let (s, kk, q) = self.tuple_of_partition(p)?;
            (s == slot && kk == k).then_some(q)
        });
        TupleFamily::new(self.cfg.ground, f, tuples)
    }
}

/// `Y_0 \ (Y_1 \ (… \ Y_last))`.
fn alternating(ys: &[FamilyMask]) -> FamilyMask {
    let mut acc = ys.last().cloned().expect("at least one k");
    for y in ys.iter().rev().skip(1) {
        let mut t = y.clone();
        t.difference_with(&acc);
        acc = t;
    }
    acc
}

/// `{p ∈ O_m(A) : every l-extension of p lies in z}` for `z ⊆ O_l(A)`.
pub fn pullback_y(z: &TupleFamily, lower: &SizeProfile) -> Result<TupleFamily> {
    let upper = z.profile().clone();
    if upper.total() > z.ground() {
        return Err(Error::GroundTooSmall {
            ground: z.ground(),
            required: upper.total(),
        });
    }
    let eng = ExplicitClosure::new(z.ground(), ProfilePair::new(lower.clone(), upper)?)?;
    let zm = eng.codomain().mask_of(z)?;
    Ok(eng.domain().family_of(&eng.pullback(&zm)))
}

pub fn encode(x: &IndexedFamily, cfg: &CodingConfig) -> Result<CodeBook> {
    Coder::new(cfg.clone())?.encode(x)
}

pub fn encode_traced(x: &IndexedFamily, cfg: &CodingConfig) -> Result<(CodeBook, Vec<SlotTrace>)> {
    Coder::new(cfg.clone())?.encode_traced(x)
}

pub fn decode(book: &CodeBook, cfg: &CodingConfig) -> Result<IndexedFamily> {
    Coder::new(cfg.clone())?.decode_book(book)
}

pub fn materialize(book: &CodeBook, cfg: &CodingConfig) -> Result<BTreeSet<FinitaryPartition>> {
    Coder::new(cfg.clone())?.materialize(book)
}

pub fn decode_partitions(h: &BTreeSet<FinitaryPartition>, cfg: &CodingConfig) -> Result<IndexedFamily> {
    Coder::new(cfg.clone())?.decode_partitions(h)
}

// ---------------------------------------------------------------------------
// Sequences of finite sets

/// A fixed-arity sequence of finite subsets, `s ∈ fin(A)^n`.
pub type FinSequence = Vec<FiniteSubset>;

/// Per-arity coding configurations for sequences over `fin(A)`.
///
/// The arity-`n` slice is sent through the bijection `fin(A)^n → O_{2^n-1}(A)`
/// and coded at `j = 0` by `configs[n]`, whose arity must be `2^n - 1`. The
/// empty sequence (arity 0) is coded by the discrete partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqCodingConfig {
    pub ground: usize,
    pub configs: BTreeMap<usize, CodingConfig>,
}

impl SeqCodingConfig {
    pub fn validate(&self) -> Result<()> {
        for (&n, cfg) in &self.configs {
            if n == 0 {
                return Err(Error::Config("arity 0 needs no coding configuration".into()));
            }
            let expected = (1usize << n) - 1;
            if cfg.arity != expected {
                return Err(Error::Config(format!(
                    "sequences of arity {n} need a config of arity {expected}, got {}",
                    cfg.arity
                )));
            }
            if cfg.ground != self.ground {
                return Err(Error::Config(format!(
                    "arity {n} config has ground {}, expected {}",
                    cfg.ground, self.ground
                )));
            }
            cfg.validate()?;
        }
        Ok(())
    }
}

/// Symbolic code of a set of sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqCode {
    /// whether the empty sequence is present (coded by the discrete partition)
    pub empty_sequence: bool,
    pub books: BTreeMap<usize, CodeBook>,
}

pub fn encode_seq_family(w: &BTreeSet<FinSequence>, cfg: &SeqCodingConfig) -> Result<SeqCode> {
    cfg.validate()?;
    let mut per_arity: BTreeMap<usize, IndexedFamily> = BTreeMap::new();
    let mut empty_sequence = false;
    for s in w {
        for c in s {
            c.check_within(cfg.ground)?;
        }
        if s.is_empty() {
            empty_sequence = true;
            continue;
        }
        let c = cfg.configs.get(&s.len()).ok_or_else(|| {
            Error::Config(format!("no configuration for sequences of arity {}", s.len()))
        })?;
        per_arity
            .entry(s.len())
            .or_insert_with(|| IndexedFamily::empty(cfg.ground, c.arity))
            .insert(0, fin_to_disjoint(s)?);
    }
    let mut books = BTreeMap::new();
    for (&n, c) in &cfg.configs {
        let x = per_arity
            .remove(&n)
            .unwrap_or_else(|| IndexedFamily::empty(cfg.ground, c.arity));
        books.insert(n, encode(&x, c)?);
    }
    Ok(SeqCode {
        empty_sequence,
        books,
    })
}

pub fn decode_seq_family(code: &SeqCode, cfg: &SeqCodingConfig) -> Result<BTreeSet<FinSequence>> {
    cfg.validate()?;
    let mut out = BTreeSet::new();
    if code.empty_sequence {
        out.insert(Vec::new());
    }
    for (&n, book) in &code.books {
        let c = cfg
            .configs
            .get(&n)
            .ok_or_else(|| Error::Config(format!("no configuration for arity {n}")))?;
        let x = decode(book, c)?;
        for ts in x.members.values() {
            for t in ts {
                out.insert(disjoint_to_fin(t, n)?);
            }
        }
    }
    Ok(out)
}

/// The code as explicit partitions. Arities stay apart: the arity-`n` part
/// has exactly `2^n - 1` non-singleton blocks, the marker has none.
pub fn materialize_seq(code: &SeqCode, cfg: &SeqCodingConfig) -> Result<BTreeSet<FinitaryPartition>> {
    let mut out = BTreeSet::new();
    if code.empty_sequence {
        out.insert(FinitaryPartition::discrete(cfg.ground));
    }
    for (&n, book) in &code.books {
        let c = cfg
            .configs
            .get(&n)
            .ok_or_else(|| Error::Config(format!("no configuration for arity {n}")))?;
        out.extend(materialize(book, c)?);
    }
    Ok(out)
}

/// Inverse of [`materialize_seq`], splitting by the number of
/// non-singleton blocks.
pub fn decode_seq_partitions(
    h: &BTreeSet<FinitaryPartition>,
    cfg: &SeqCodingConfig,
) -> Result<BTreeSet<FinSequence>> {
    cfg.validate()?;
    let mut out = BTreeSet::new();
    let mut split: BTreeMap<usize, BTreeSet<FinitaryPartition>> = BTreeMap::new();
    for p in h {
        split.entry(p.ns_count()).or_default().insert(p.clone());
    }
    if split.remove(&0).is_some() {
        out.insert(Vec::new());
    }
    for (&n, c) in &cfg.configs {
        let part = split.remove(&c.arity).unwrap_or_default();
        let x = decode_partitions(&part, c)?;
        for ts in x.members.values() {
            for t in ts {
                out.insert(disjoint_to_fin(t, n)?);
            }
        }
    }
    Ok(out)
}

/// Tuple space of one slot, for building families against a config.
pub fn slot_space(cfg: &CodingConfig, slot: &Slot) -> TupleSpace {
    TupleSpace::new(cfg.ground, slot.profile.clone())
}

/// Number of tuples in `O_m(A)` for a slot.
pub fn slot_space_size(cfg: &CodingConfig, slot: &Slot) -> u128 {
    count_disjoint_tuples(cfg.ground, slot.profile.sizes())
}
