//! Formula-versus-enumeration count tables.

use std::ops::RangeInclusive;

use clap::ValueEnum;
use finpart::counting::{assoc_stirling, count_b_n, count_fin, count_o_n};
use finpart::{enum_b_n, enum_fin, enum_o_n};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    /// partitions with exactly `n` non-singleton blocks
    Bn,
    /// `n`-tuples of pairwise disjoint sets
    On,
    /// finite subsets (`n` is ignored)
    Fin,
    /// partitions of `a` elements into `n` blocks of size at least 2
    Stirling,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub space: Space,
    pub a: usize,
    pub n: usize,
    pub formula: String,
    /// absent when the formula count exceeds the enumeration limit
    pub enumerated: Option<u64>,
    pub matches: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

fn formula(space: Space, a: usize, n: usize) -> BigUint {
    match space {
        Space::Bn => count_b_n(a, n),
        Space::On => count_o_n(a, n),
        Space::Fin => count_fin(a),
        Space::Stirling => assoc_stirling(a, n),
    }
}

fn enumerate(space: Space, a: usize, n: usize) -> u64 {
    match space {
        Space::Bn => enum_b_n(a, n).count() as u64,
        Space::On => enum_o_n(a, n, None).count() as u64,
        Space::Fin => enum_fin(a).count() as u64,
        // the B_n enumeration also visits singleton-bearing partitions, so
        // this one is bounded by |B_n| rather than by the formula
        Space::Stirling => enum_b_n(a, n).filter(|p| p.blocks().iter().all(|b| b.len() >= 2)).count() as u64,
    }
}

/// One row per `(a, n)`; enumeration is skipped above `limit`.
pub fn emit_counts(space: Space, a: RangeInclusive<usize>, n: RangeInclusive<usize>, limit: u64) -> Vec<CountRow> {
    let ns: Vec<usize> = if space == Space::Fin { vec![0] } else { n.collect() };
    let mut rows = Vec::new();
    for a in a {
        for &n in &ns {
            let f = formula(space, a, n);
            let work = if space == Space::Stirling { count_b_n(a, n) } else { f.clone() };
            let enumerated = (work <= BigUint::from(limit)).then(|| enumerate(space, a, n));
            rows.push(CountRow {
                space,
                a,
                n,
                formula: f.to_string(),
                enumerated,
                matches: enumerated.map(|e| BigUint::from(e) == f),
            });
        }
    }
    rows
}

pub fn render(rows: &[CountRow], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(rows).expect("rows serialize"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).expect("rows serialize");
            }
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("CSV is UTF-8")
        }
    }
}
