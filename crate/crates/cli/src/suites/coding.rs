//! Encode/decode round trips over families of tuples.

use std::collections::BTreeSet;

use finpart::coding::{slot_space, Coder, CodingConfig, IndexedFamily, Slot};
use finpart::operators::TupleSpace;
use finpart::FamilyMask;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::report::{RunReport, Witness};
use crate::suites::{Exec, SuiteError};
use crate::sweep::{draw, mask_from_bits, sample_rng, sweep, Mode, Partial, Sampler};

/// Largest total slot space swept exhaustively.
pub const MAX_EXHAUSTIVE_BITS: usize = 20;

/// Named configurations used by the acceptance run.
pub fn preset(name: &str) -> Option<CodingConfig> {
    let mut cfg = match name {
        "compact12" => CodingConfig::compact(12, 1, vec![Slot::new(0, vec![1])]),
        "two-slot" => CodingConfig::compact(24, 1, vec![Slot::new(0, vec![2]), Slot::new(1, vec![1])]),
        "two-component" => CodingConfig::compact(22, 2, vec![Slot::new(0, vec![1, 1])]),
        _ => return None,
    };
    cfg.note = Some(match name {
        "compact12" => "every family of singletons round-trips at this size".into(),
        "two-slot" => "supported families with |E| <= 3 round-trip; uniform ones do not".into(),
        _ => "supported families with |E| <= 3 round-trip".into(),
    });
    Some(cfg)
}

pub const PRESETS: [&str; 3] = ["compact12", "two-slot", "two-component"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodingParams {
    pub config: CodingConfig,
    pub mode: Mode,
    pub samples: u64,
    pub seed: u64,
    pub sampler: Sampler,
    pub e_max: usize,
    /// also round-trip through explicit partitions when within the limit
    pub materialize: bool,
    pub materialize_limit: u128,
}

impl CodingParams {
    pub fn new(config: CodingConfig) -> Self {
        CodingParams {
            config,
            mode: Mode::Random,
            samples: 100,
            seed: 0,
            sampler: Sampler::Supported,
            e_max: 3,
            materialize: false,
            materialize_limit: 200_000,
        }
    }
}

struct Spaces(Vec<(Slot, TupleSpace)>);

impl Spaces {
    fn new(cfg: &CodingConfig) -> Self {
        Spaces(cfg.slots.iter().map(|s| (s.clone(), slot_space(cfg, s))).collect())
    }

    fn bits(&self) -> usize {
        self.0.iter().map(|(_, sp)| sp.len()).sum()
    }

    fn family(&self, cfg: &CodingConfig, masks: &[FamilyMask]) -> IndexedFamily {
        let mut x = IndexedFamily::empty(cfg.ground, cfg.arity);
        for ((slot, space), m) in self.0.iter().zip(masks) {
            x.set_slice(slot.j, &slot.profile, space.tuples_of(m).cloned());
        }
        x
    }

    fn family_at(&self, cfg: &CodingConfig, mut bits: u64) -> IndexedFamily {
        let masks: Vec<FamilyMask> = self
            .0
            .iter()
            .map(|(_, sp)| {
                let m = mask_from_bits(sp.len(), bits);
                bits >>= sp.len();
                m
            })
            .collect();
        self.family(cfg, &masks)
    }
}

fn differing(x: &IndexedFamily, y: &IndexedFamily) -> serde_json::Value {
    let flat = |f: &IndexedFamily| -> BTreeSet<(usize, finpart::DisjointTuple)> {
        f.members.iter().flat_map(|(&j, ts)| ts.iter().map(move |t| (j, t.clone()))).collect()
    };
    let (a, b) = (flat(x), flat(y));
    json!({
        "missing": a.difference(&b).collect::<Vec<_>>(),
        "extra": b.difference(&a).collect::<Vec<_>>(),
    })
}

/// One round trip; violations name the stage that failed.
pub fn check_family(coder: &Coder, p: &CodingParams, idx: u64, x: &IndexedFamily, part: &mut Partial) {
    let fail = |part: &mut Partial, law: &str, detail: serde_json::Value| {
        part.violate(idx, Witness { law: law.into(), input: json!(x), detail });
    };
    part.bump("families", 1);
    part.bump("members", x.len() as u64);
    let (book, traces) = match coder.encode_traced(x) {
        Ok(v) => v,
        Err(e) => return fail(part, "encode", json!(e.to_string())),
    };
    for t in &traces {
        part.max("max_chain", t.delta_sizes.iter().rposition(|&d| d > 0).map_or(0, |k| k + 1) as u64);
        if t.residual() > 0 {
            fail(part, "nilpotency", json!(t));
        }
    }
    match coder.decode_book(&book) {
        Ok(y) if &y == x => part.bump("round_trips", 1),
        Ok(y) => fail(part, "round trip", differing(x, &y)),
        Err(e) => fail(part, "decode", json!(e.to_string())),
    }
    if !p.materialize {
        return;
    }
    let count = match coder.partition_count(&book, finpart::coding::DEFAULT_ENGINE_LIMIT) {
        Ok(c) => c,
        Err(_) => {
            part.bump("materialize_skipped", 1);
            return;
        }
    };
    if count > p.materialize_limit {
        part.bump("materialize_skipped", 1);
        return;
    }
    let h = match coder.materialize(&book) {
        Ok(h) => h,
        Err(e) => return fail(part, "materialize", json!(e.to_string())),
    };
    part.bump("partitions", h.len() as u64);
    for q in &h {
        let sizes: Vec<usize> = q.ns().map(|b| b.len()).collect();
        let distinct: BTreeSet<usize> = sizes.iter().copied().collect();
        if sizes.len() != p.config.arity || distinct.len() != sizes.len() {
            fail(part, "partition shape", json!({ "partition": q, "ns_sizes": sizes }));
            return;
        }
    }
    match coder.decode_partitions(&h) {
        Ok(y) if &y == x => part.bump("partition_round_trips", 1),
        Ok(y) => fail(part, "partition round trip", differing(x, &y)),
        Err(e) => fail(part, "partition decode", json!(e.to_string())),
    }
}

pub fn run_coding(p: &CodingParams, exec: Exec) -> Result<RunReport, SuiteError> {
    let mut report = RunReport::new("coding", serde_json::to_value(p)?);
    let cfg = &p.config;
    let coder = match Coder::new(cfg.clone()) {
        Ok(c) => c,
        Err(e @ (finpart::Error::Config(_) | finpart::Error::Signature(_))) => {
            return Err(SuiteError::Invalid(e.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    let spaces = Spaces::new(cfg);
    let part = match p.mode {
        Mode::Exhaustive => {
            let bits = spaces.bits();
            if bits > MAX_EXHAUSTIVE_BITS {
                report.infeasible(format!("2^{bits} families exceed 2^{MAX_EXHAUSTIVE_BITS}"));
                return Ok(report);
            }
            sweep(1u64 << bits, exec.parallel, |i, part| {
                check_family(&coder, p, i, &spaces.family_at(cfg, i), part)
            })
        }
        Mode::Random => sweep(p.samples, exec.parallel, |i, part| {
            let mut rng = sample_rng(p.seed, i);
            let masks: Vec<FamilyMask> =
                spaces.0.iter().map(|(_, sp)| draw(sp, p.sampler, p.e_max, &mut rng)).collect();
            check_family(&coder, p, i, &spaces.family(cfg, &masks), part)
        }),
    };
    part.into_report(&mut report, "");
    Ok(report)
}

/// Re-runs a coding witness; true when the same stage fails again.
pub fn replay_coding(p: &CodingParams, w: &Witness) -> Result<bool, SuiteError> {
    let coder = Coder::new(p.config.clone())?;
    let x: IndexedFamily = serde_json::from_value(w.input.clone())?;
    let mut part = Partial::default();
    check_family(&coder, p, 0, &x, &mut part);
    Ok(part.witnesses.iter().any(|(_, v)| v.law == w.law))
}
