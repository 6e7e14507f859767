//! Exact small values, pigeonhole exactness and bound soundness.

use finpart::enum_k_subsets;
use finpart::ramsey::{
    check_witness, has_property, search_min_n, upper_bound_r, MinSearch, ProductColoring,
    PropertyOutcome, RamseyQuery, SearchOptions, DEFAULT_MAX_COLORINGS,
};
use finpart::FiniteSubset;
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::report::{RunReport, Witness};
use crate::suites::{Exec, SuiteError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamseyParams {
    pub c_max: usize,
    pub r_max: usize,
    pub max_colorings: u128,
    /// plain enumeration instead of the pruned search
    pub no_prune: bool,
}

impl Default for RamseyParams {
    fn default() -> Self {
        RamseyParams {
            c_max: 3,
            r_max: 4,
            max_colorings: DEFAULT_MAX_COLORINGS,
            no_prune: false,
        }
    }
}

/// Queries whose bounds are checked against the exhaustive search.
pub fn bound_queries() -> Vec<RamseyQuery> {
    let shapes: [&[usize]; 6] = [&[1], &[2], &[3], &[1, 1], &[2, 1], &[1, 1, 1]];
    let mut out = Vec::new();
    for j in shapes {
        for c in 1..=3 {
            for r in 1..=3 {
                out.push(RamseyQuery { j: j.to_vec(), c, r });
            }
        }
    }
    out
}

/// Whether some `r`-box of `col` is monochromatic, by trying them all.
pub fn has_monochromatic_box(col: &ProductColoring, r: usize) -> Result<bool, SuiteError> {
    let axes: Vec<Vec<FiniteSubset>> = col.sizes.iter().map(|&n| enum_k_subsets(n, r).collect()).collect();
    for t in axes.iter().multi_cartesian_product() {
        let t: Vec<FiniteSubset> = t.into_iter().cloned().collect();
        for d in 1..=col.c {
            if check_witness(col, &t, d)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn options(p: &RamseyParams, exec: Exec) -> SearchOptions {
    SearchOptions {
        prune: !p.no_prune,
        parallel: exec.parallel,
        max_colorings: p.max_colorings,
    }
}

/// `search_min_n` must give exactly `expected`, with a checked certificate
/// below it.
fn exact(q: &RamseyQuery, expected: usize, opts: &SearchOptions, report: &mut RunReport, key: &str) -> Result<(), SuiteError> {
    let got = search_min_n(q, expected, opts)?;
    report.bump("searches", 1);
    match &got {
        MinSearch::Exact { n, below, .. } if *n == expected => {
            if let Some(col) = below {
                if has_monochromatic_box(col, q.r)? {
                    report.violate(Witness {
                        law: "certificate".into(),
                        input: json!(q),
                        detail: json!({ "n": n - 1, "coloring": col }),
                    });
                }
                report.artifacts.insert(key.to_string(), json!({ "query": q, "min_n": n, "certificate_below": col }));
            } else if expected > 0 {
                report.violate(Witness {
                    law: "certificate".into(),
                    input: json!(q),
                    detail: json!({ "n": n, "missing": "no coloring refuting n - 1" }),
                });
            }
        }
        MinSearch::Infeasible { .. } => report.infeasible(format!("{key}: {}", serde_json::to_string(&got)?)),
        _ => report.violate(Witness {
            law: "exact value".into(),
            input: json!(q),
            detail: json!({ "expected": expected, "got": got }),
        }),
    }
    Ok(())
}

pub fn run_ramsey(p: &RamseyParams, exec: Exec) -> Result<RunReport, SuiteError> {
    let mut report = RunReport::new("ramsey", serde_json::to_value(p)?);
    let opts = options(p, exec);

    let triangle = RamseyQuery::new(vec![2], 2, 3)?;
    exact(&triangle, 6, &opts, &mut report, "j=2,c=2,r=3")?;

    for c in 1..=p.c_max {
        for r in 1..=p.r_max {
            let q = RamseyQuery::new(vec![1], c, r)?;
            exact(&q, c * (r - 1) + 1, &opts, &mut report, &format!("pigeonhole c={c},r={r}"))?;
        }
    }

    for q in bound_queries() {
        report.bump("bounds", 1);
        let b = match upper_bound_r(&q) {
            Ok(b) => b,
            Err(e) => {
                report.bump("bounds_unavailable", 1);
                report.note(format!("no bound for {q:?}: {e}"));
                continue;
            }
        };
        let Ok(n) = usize::try_from(&b) else {
            report.bump("bounds_infeasible", 1);
            continue;
        };
        match has_property(&vec![n; q.arity()], &q, &opts)? {
            PropertyOutcome::Holds { .. } => report.bump("bounds_confirmed", 1),
            PropertyOutcome::Infeasible { .. } => report.bump("bounds_infeasible", 1),
            PropertyOutcome::Fails { counterexample } => report.violate(Witness {
                law: "bound sufficiency".into(),
                input: json!(q),
                detail: json!({ "bound": b.to_string(), "counterexample": counterexample }),
            }),
        }
    }
    Ok(report)
}
