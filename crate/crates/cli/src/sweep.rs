//! Indexed sweeps that merge the same way serially and in parallel.

use std::collections::BTreeMap;

use clap::ValueEnum;
use finpart::operators::TupleSpace;
use finpart::symmetry::stabilizer_orbits;
use finpart::{FamilyMask, FiniteSubset};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::report::{RunReport, Witness};

/// Witnesses kept per report; the rest are only counted.
pub const MAX_WITNESSES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Random,
}

/// How random families are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Sampler {
    /// each tuple independently with probability 1/2
    Uniform,
    /// a random union of orbits of the pointwise stabilizer of a random
    /// small set `E`
    Supported,
}

/// Counters and witnesses of part of a sweep.
#[derive(Debug, Default)]
pub struct Partial {
    pub sums: BTreeMap<String, u64>,
    pub maxes: BTreeMap<String, u64>,
    pub violations: u64,
    /// `(item index, witness)`, sorted, at most [`MAX_WITNESSES`]
    pub witnesses: Vec<(u64, Witness)>,
}

impl Partial {
    pub fn bump(&mut self, key: &str, by: u64) {
        *self.sums.entry(key.to_string()).or_default() += by;
    }

    pub fn max(&mut self, key: &str, v: u64) {
        let e = self.maxes.entry(key.to_string()).or_default();
        *e = (*e).max(v);
    }

    pub fn violate(&mut self, idx: u64, w: Witness) {
        self.violations += 1;
        self.witnesses.push((idx, w));
        self.witnesses.sort_by_key(|(i, _)| *i);
        self.witnesses.truncate(MAX_WITNESSES);
    }

    pub fn merge(mut self, other: Partial) -> Partial {
        for (k, v) in other.sums {
            *self.sums.entry(k).or_default() += v;
        }
        for (k, v) in other.maxes {
            let e = self.maxes.entry(k).or_default();
            *e = (*e).max(v);
        }
        self.violations += other.violations;
        self.witnesses.extend(other.witnesses);
        // stable: equal indices keep their order within one item
        self.witnesses.sort_by_key(|(i, _)| *i);
        self.witnesses.truncate(MAX_WITNESSES);
        self
    }

    /// Folds into `report`; counter names get `prefix` when non-empty.
    pub fn into_report(self, report: &mut RunReport, prefix: &str) {
        let name = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        for (k, v) in self.sums {
            report.bump(&name(&k), v);
        }
        for (k, v) in self.maxes {
            report.max(&name(&k), v);
        }
        report.bump(&name("violations"), self.violations);
        for (_, w) in self.witnesses {
            if report.witnesses.len() < MAX_WITNESSES {
                report.violate(w);
            } else {
                report.outcome = crate::report::Outcome::Violation;
            }
        }
    }
}

/// Runs `f` on `0..n` and merges the partials in index order.
pub fn sweep<F>(n: u64, parallel: bool, f: F) -> Partial
where
    F: Fn(u64, &mut Partial) + Sync + Send,
{
    let one = |i: u64| {
        let mut p = Partial::default();
        f(i, &mut p);
        p
    };
    if parallel {
        (0..n)
            .into_par_iter()
            .map(one)
            .reduce(Partial::default, Partial::merge)
    } else {
        (0..n).map(one).fold(Partial::default(), Partial::merge)
    }
}

/// Independent stream `i` of the run seed, so sample `i` does not depend on
/// how the sweep is scheduled.
pub fn sample_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

/// Family of the tuples whose index bit is set in `bits`.
pub fn mask_from_bits(len: usize, bits: u64) -> FamilyMask {
    let mut m = FamilyMask::with_capacity(len);
    for i in (0..len).filter(|i| bits >> i & 1 == 1) {
        m.insert(i);
    }
    m
}

pub fn uniform_mask<R: Rng>(len: usize, rng: &mut R) -> FamilyMask {
    let mut m = FamilyMask::with_capacity(len);
    for i in 0..len {
        if rng.gen_bool(0.5) {
            m.insert(i);
        }
    }
    m
}

/// A random set of at most `e_max` elements of `{0..a-1}`.
pub fn random_small_set<R: Rng>(a: usize, e_max: usize, rng: &mut R) -> FiniteSubset {
    let mut pool: Vec<usize> = (0..a).collect();
    pool.shuffle(rng);
    let k = rng.gen_range(0..=e_max.min(a));
    FiniteSubset::from_elements(pool[..k].iter().copied())
}

/// A union of stabilizer orbits of `e`, each kept with probability 1/2.
pub fn supported_mask<R: Rng>(space: &TupleSpace, e: &FiniteSubset, rng: &mut R) -> FamilyMask {
    let mut m = space.empty_mask();
    for orbit in stabilizer_orbits(space, e) {
        if rng.gen_bool(0.5) {
            m.union_with(&orbit);
        }
    }
    m
}

pub fn draw<R: Rng>(space: &TupleSpace, sampler: Sampler, e_max: usize, rng: &mut R) -> FamilyMask {
    match sampler {
        Sampler::Uniform => uniform_mask(space.len(), rng),
        Sampler::Supported => {
            let e = random_small_set(space.ground(), e_max, rng);
            supported_mask(space, &e, rng)
        }
    }
}

/// Tuples of a family as JSON.
pub fn family_json(space: &TupleSpace, m: &FamilyMask) -> serde_json::Value {
    serde_json::to_value(space.tuples_of(m).collect::<Vec<_>>()).expect("tuples serialize")
}
