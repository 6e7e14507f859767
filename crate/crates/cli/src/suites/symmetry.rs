//! Orbit halves, fixing transpositions, fibers, chains and equivariance.

use std::collections::BTreeSet;

use finpart::maps::{fin_to_disjoint, tuple_to_partition};
use finpart::operators::{alpha, gamma, TupleFamily};
use finpart::symmetry::{
    apply_perm, chain_bound, even_odd_orbits, fiber_bound, fiber_of, find_fixing_transposition,
    longest_chain, preceq, restrict_outside, Permutable, Permutation, DEFAULT_SWEEP_LIMIT,
};
use finpart::{
    enum_b_n, enum_k_subsets, enum_o_n, DisjointTuple, ElementSequence, FiniteSubset, SizeProfile,
};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::report::{RunReport, Witness};
use crate::suites::{Exec, SuiteError};
use crate::sweep::{sample_rng, sweep};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryParams {
    pub orbit_n_max: usize,
    pub fix_a_max: usize,
    pub fix_n_max: usize,
    /// ground size and `n` of the fiber sweep
    pub a: usize,
    pub n: usize,
    pub e_max: usize,
    pub chain_e_max: usize,
    /// random permutations for the equivariance checks
    pub samples: u64,
    pub seed: u64,
}

impl Default for SymmetryParams {
    fn default() -> Self {
        SymmetryParams {
            orbit_n_max: 3,
            fix_a_max: 7,
            fix_n_max: 2,
            a: 5,
            n: 1,
            e_max: 2,
            chain_e_max: 1,
            samples: 200,
            seed: 0,
        }
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn orbits(p: &SymmetryParams, report: &mut RunReport) -> Result<(), SuiteError> {
    for n in 0..=p.orbit_n_max {
        let b = FiniteSubset::from_elements(0..n + 2);
        let all: BTreeSet<Vec<usize>> = (0..n + 2).permutations(n + 1).collect();
        let half = factorial(n + 2) / 2;
        let swap = Permutation::transposition(n + 2, 0, 1)?;
        for s in &all {
            report.bump("orbit_pairs", 1);
            let seed = ElementSequence::injective(s.clone())?;
            let op = even_odd_orbits(&b, &seed)?;
            let union: BTreeSet<Vec<usize>> = op.xi.iter().chain(&op.theta).map(|t| t.entries().to_vec()).collect();
            let moved: BTreeSet<ElementSequence> = op.xi.iter().map(|t| t.permute(&swap)).collect();
            let ok = op.xi.len() == half
                && op.theta.len() == half
                && op.xi.is_disjoint(&op.theta)
                && union == all
                && moved == op.theta;
            if !ok {
                report.violate(Witness {
                    law: "orbit pair".into(),
                    input: json!({ "base": b, "seed": s }),
                    detail: json!({ "xi": op.xi.len(), "theta": op.theta.len(), "expected": half }),
                });
            }
        }
    }
    Ok(())
}

fn fixing(p: &SymmetryParams, exec: Exec, report: &mut RunReport) {
    let mut cases = Vec::new();
    for a in 0..=p.fix_a_max {
        for n in 1..=p.fix_n_max {
            if n + 2 <= a {
                cases.push((a, n));
            }
        }
    }
    for (a, n) in cases {
        let bs: Vec<FiniteSubset> = enum_k_subsets(a, n + 2).collect();
        let tuples: Vec<DisjointTuple> = enum_o_n(a, n, None).collect();
        sweep(tuples.len() as u64, exec.parallel, |i, part| {
            let t = &tuples[i as usize];
            for b in &bs {
                part.bump("fixing_checks", 1);
                let found = find_fixing_transposition(t, b);
                let ok = found.is_some_and(|(x, y)| {
                    x != y
                        && b.contains(x)
                        && b.contains(y)
                        && Permutation::transposition(a, x, y).is_ok_and(|tr| t.permute(&tr) == *t)
                });
                if !ok {
                    part.violate(i, Witness {
                        law: "fixing transposition".into(),
                        input: json!({ "a": a, "p": t, "b": b }),
                        detail: json!({ "found": found }),
                    });
                }
            }
        })
        .into_report(report, "");
    }
}

fn fibers(p: &SymmetryParams, report: &mut RunReport) -> Result<(), SuiteError> {
    let bn: Vec<_> = enum_b_n(p.a, p.n).collect();
    for k in 0..=p.e_max.min(p.a) {
        for e in enum_k_subsets(p.a, k) {
            let bound = fiber_bound(p.n, e.len());
            for q in &bn {
                report.bump("fibers", 1);
                let fib = fiber_of(q, &e, p.n)?;
                report.max("max_fiber", fib.len() as u64);
                if fib.len() as u128 > bound {
                    report.violate(Witness {
                        law: "fiber bound".into(),
                        input: json!({ "p": q, "e": e }),
                        detail: json!({ "fiber": fib.len(), "bound": bound.to_string() }),
                    });
                }
                let qe = restrict_outside(q, &e);
                for r in &bn {
                    if preceq(r, q, &e) {
                        report.bump("preceq_pairs", 1);
                        let re = restrict_outside(r, &e);
                        if re.len() == qe.len() && re != qe {
                            report.violate(Witness {
                                law: "equal size under ⊑".into(),
                                input: json!({ "q": r, "p": q, "e": e }),
                                detail: json!({ "q_e": re, "p_e": qe }),
                            });
                        }
                    }
                }
            }
        }
    }
    for k in 0..=p.chain_e_max.min(p.a) {
        for e in enum_k_subsets(p.a, k) {
            let chain = longest_chain(p.a, p.n, &e, DEFAULT_SWEEP_LIMIT)?;
            report.bump("chains", 1);
            report.max("max_chain", chain.len() as u64);
            if chain.len() as u128 > chain_bound(p.n, e.len()) {
                report.violate(Witness {
                    law: "chain bound".into(),
                    input: json!({ "a": p.a, "n": p.n, "e": e }),
                    detail: json!({ "chain": chain, "bound": chain_bound(p.n, e.len()).to_string() }),
                });
            }
        }
    }
    Ok(())
}

fn equivariance(p: &SymmetryParams, exec: Exec, report: &mut RunReport) {
    let a = p.a.max(3);
    sweep(p.samples, exec.parallel, |i, part| {
        let mut rng = sample_rng(p.seed, i);
        let mut img: Vec<usize> = (0..a).collect();
        img.shuffle(&mut rng);
        let pi = Permutation::from_images(img).expect("shuffled identity");
        let mut failures: Vec<(&str, serde_json::Value)> = Vec::new();
        let mut fail = |law, input| failures.push((law, input));
        // closures on a random family of singletons
        let members: Vec<DisjointTuple> = (0..a)
            .filter(|_| rng.gen_bool(0.4))
            .map(|e| DisjointTuple::from_lists(&[&[e]]).expect("singleton"))
            .collect();
        let x = TupleFamily::new(a, SizeProfile::new(vec![1]), members).expect("within ground");
        let l = SizeProfile::new(vec![2]);
        part.bump("equivariance", 1);
        if apply_perm(&pi, &gamma(&x, &l).expect("ok")) != gamma(&apply_perm(&pi, &x), &l).expect("ok")
            || apply_perm(&pi, &alpha(&x, &l).expect("ok")) != alpha(&apply_perm(&pi, &x), &l).expect("ok")
        {
            fail("closure equivariance", json!(x));
        }
        // canonical maps on a random pair of sets
        let s: Vec<FiniteSubset> = (0..2)
            .map(|_| FiniteSubset::from_elements((0..a).filter(|_| rng.gen_bool(0.5))))
            .collect();
        let q = fin_to_disjoint(&s).expect("n = 2");
        if fin_to_disjoint(&apply_perm(&pi, &s)).expect("n = 2") != apply_perm(&pi, &q) {
            fail("fin_to_disjoint equivariance", json!(s));
        }
        let part_of = |t: &DisjointTuple| tuple_to_partition(a, t).expect("within ground").0;
        if part_of(&apply_perm(&pi, &q)) != apply_perm(&pi, &part_of(&q)) {
            fail("tuple_to_partition equivariance", json!(q));
        }
        for (law, input) in failures {
            part.violate(i, Witness { law: law.into(), input: json!({ "pi": pi, "x": input }), detail: json!(null) });
        }
    })
    .into_report(report, "");
}

pub fn run_symmetry(p: &SymmetryParams, exec: Exec) -> Result<RunReport, SuiteError> {
    let mut report = RunReport::new("symmetry", serde_json::to_value(p)?);
    orbits(p, &mut report)?;
    fixing(p, exec, &mut report);
    fibers(p, &mut report)?;
    equivariance(p, exec, &mut report);
    Ok(report)
}

