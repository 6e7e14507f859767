//! Round trip of `fin(A)^n → O_{2^n-1}(A)` and its counting identity.

use finpart::counting::count_o_n;
use finpart::maps::{disjoint_to_fin, fin_to_disjoint};
use finpart::{DisjointTuple, FiniteSubset};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::report::{RunReport, Witness};
use crate::suites::{Exec, SuiteError};
use crate::sweep::sweep;

/// Largest sweep, in bits of `a·n`.
pub const MAX_BITS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionParams {
    pub a: usize,
    pub n: usize,
}

/// Sequence number `i` of `fin(a)^n`: `a` bits per set, first set lowest.
pub fn nth_sequence(a: usize, n: usize, i: u64) -> Vec<FiniteSubset> {
    (0..n)
        .map(|k| FiniteSubset::from_elements((0..a).filter(|e| i >> (k * a + e) & 1 == 1)))
        .collect()
}

fn check(a: usize, n: usize, i: u64, part: &mut crate::sweep::Partial) -> Option<DisjointTuple> {
    let s = nth_sequence(a, n, i);
    let q = match fin_to_disjoint(&s) {
        Ok(q) => q,
        Err(e) => {
            part.violate(i, Witness { law: "round trip".into(), input: json!(s), detail: json!(e.to_string()) });
            return None;
        }
    };
    part.bump("round_trips", 1);
    match disjoint_to_fin(&q, n) {
        Ok(back) if back == s => {}
        other => {
            let detail = match other {
                Ok(back) => json!({ "image": q, "back": back }),
                Err(e) => json!({ "image": q, "error": e.to_string() }),
            };
            part.violate(i, Witness { law: "round trip".into(), input: json!(s), detail });
        }
    }
    Some(q)
}

pub fn run_bijection(p: &BijectionParams, exec: Exec) -> Result<RunReport, SuiteError> {
    let mut report = RunReport::new("bijection", serde_json::to_value(p)?);
    if p.n == 0 || p.n >= 16 {
        return Err(SuiteError::Invalid(format!("n = {} must be in 1..16", p.n)));
    }
    let bits = p.a * p.n;
    if bits > MAX_BITS {
        report.infeasible(format!("(2^{})^{} sequences exceed 2^{MAX_BITS}", p.a, p.n));
        return Ok(report);
    }
    let total = 1u64 << bits;
    report.set("sequences", total);
    sweep(total, exec.parallel, |i, part| {
        check(p.a, p.n, i, part);
    })
    .into_report(&mut report, "");
    let mut images: Vec<DisjointTuple> = (0..total)
        .filter_map(|i| fin_to_disjoint(&nth_sequence(p.a, p.n, i)).ok())
        .collect();
    images.sort();
    images.dedup();
    let expected: u128 = count_o_n(p.a, (1 << p.n) - 1);
    report.set("distinct_images", images.len() as u64);
    report.set("expected", expected as u64);
    // (2^a)^n sequences, (2^n)^a tuples in O_{2^n-1}(A)
    let by_power = (1u128 << p.n).pow(p.a as u32);
    if images.len() as u128 != expected || total as u128 != by_power || expected != by_power {
        report.violate(Witness {
            law: "counting".into(),
            input: json!({ "a": p.a, "n": p.n }),
            detail: json!({ "sequences": total, "distinct_images": images.len(), "formula": expected.to_string() }),
        });
    }
    Ok(report)
}
