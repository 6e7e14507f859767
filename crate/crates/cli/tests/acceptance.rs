//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use finpart::coding::{check_signature_contract, CodingConfig, SizeSignature, Slot};
use finpart::maps::tuple_to_partition;
use finpart::ramsey::{search_min_n, MinSearch, RamseyQuery, SearchOptions};
use finpart::{enum_b_n, enum_o_n, SizeProfile};
use finpart_cli::counts::{emit_counts, Space};
use finpart_cli::report::{Outcome, RunReport};
use finpart_cli::suites::bijection::{run_bijection, BijectionParams};
use finpart_cli::suites::coding::{preset, run_coding, CodingParams};
use finpart_cli::suites::operators::{
    replay_nilpotency, run_fact00, run_nilpotency, LawParams, NilpotencyParams,
};
use finpart_cli::suites::ramsey::{run_ramsey, RamseyParams};
use finpart_cli::suites::symmetry::{run_symmetry, SymmetryParams};
use finpart_cli::suites::SuiteError;
use finpart_cli::sweep::{Mode, Sampler};
use finpart_cli::Exec;
use itertools::Itertools;

type Check = Result<String, String>;
type Criterion = (fn() -> Check, Option<Duration>);

const SERIAL: Exec = Exec { parallel: false };
const PARALLEL: Exec = Exec { parallel: true };

fn passed(r: &RunReport) -> Result<(), String> {
    if r.outcome == Outcome::Pass {
        Ok(())
    } else {
        Err(format!("{} {:?}: {}", r.suite, r.outcome, r.canonical_json()))
    }
}

fn counter(r: &RunReport, key: &str) -> u64 {
    r.counters.get(key).copied().unwrap_or(0)
}

fn e(err: SuiteError) -> String {
    err.to_string()
}

fn c1() -> Check {
    let mut trips = Vec::new();
    for n in 1..=3 {
        let r = run_bijection(&BijectionParams { a: 4, n }, SERIAL).map_err(e)?;
        passed(&r)?;
        let expected = 1u64 << (4 * n);
        if counter(&r, "round_trips") != expected {
            return Err(format!("n = {n}: {} round trips, expected {expected}", counter(&r, "round_trips")));
        }
        trips.push(expected.to_string());
    }
    Ok(format!("a = 4, n = 1..3: {} round trips", trips.join(" + ")))
}

fn c2() -> Check {
    let mut out = Vec::new();
    for (m, l) in [(1, 2), (1, 3), (2, 3)] {
        let mut p = LawParams::new(6, vec![m], vec![l]);
        p.mode = Mode::Exhaustive;
        p.pairs = 1000;
        let r = run_fact00(&p, SERIAL).map_err(e)?;
        passed(&r)?;
        out.push(format!("m=({m}) l=({l}): {} families", counter(&r, "families")));
    }
    Ok(format!("a = 6, laws 1-8, 1000 pairs each; {}", out.join(", ")))
}

fn c3() -> Check {
    let mut out = Vec::new();
    for l in [2, 3] {
        let p = NilpotencyParams::new(6, vec![1], vec![l]);
        let r = run_nilpotency(&p, SERIAL).map_err(e)?;
        passed(&r)?;
        let mut scan = NilpotencyParams::new(1, vec![1], vec![l]);
        scan.scan_to = Some(6);
        let s = run_nilpotency(&scan, SERIAL).map_err(e)?;
        let a_min = s.counters.get("a_min").ok_or("exhaustive scan found no a_min")?;
        out.push(format!("m=(1) l=({l}) exhaustive, max index {}, a_min {a_min}", counter(&r, "max_index")));
    }

    let mut p = NilpotencyParams::new(8, vec![1, 1], vec![2, 2]);
    p.mode = Mode::Random;
    p.samples = 1000;
    p.seed = 1;
    let r = run_nilpotency(&p, SERIAL).map_err(e)?;
    passed(&r)?;
    let mut scan = NilpotencyParams::new(4, vec![1, 1], vec![2, 2]);
    scan.mode = Mode::Random;
    scan.samples = 200;
    scan.seed = 1;
    scan.scan_to = Some(8);
    let s = run_nilpotency(&scan, SERIAL).map_err(e)?;
    let a_min = s.counters.get("a_min").ok_or("sampled scan found no a_min")?;
    out.push(format!("m=(1,1) l=(2,2) 1000 random at a = 8, max index {}, a_min {a_min}", counter(&r, "max_index")));

    let cyc = NilpotencyParams::new(2, vec![1], vec![3]);
    let r = run_nilpotency(&cyc, SERIAL).map_err(e)?;
    if r.outcome != Outcome::Violation || counter(&r, "cycles") == 0 {
        return Err("vacuous cycle at a = 2 not detected".into());
    }
    for w in &r.witnesses {
        if !replay_nilpotency(&cyc, 2, w).map_err(e)? {
            return Err(format!("cycle witness does not replay: {}", w.input));
        }
    }
    out.push(format!("{} cycles at a = 2 replayed", r.witnesses.len()));
    Ok(out.join("; "))
}

fn c4() -> Check {
    let r = run_ramsey(&RamseyParams::default(), SERIAL).map_err(e)?;
    passed(&r)?;
    let cert = r.artifacts.get("j=2,c=2,r=3").ok_or("no triangle certificate")?;
    if cert["min_n"] != 6 {
        return Err(format!("triangle value {}", cert["min_n"]));
    }
    let q = RamseyQuery::new(vec![2], 2, 3).map_err(|x| x.to_string())?;
    let plain = SearchOptions { prune: false, ..SearchOptions::default() };
    match search_min_n(&q, 6, &plain).map_err(|x| x.to_string())? {
        MinSearch::Exact { n: 6, .. } => {}
        other => return Err(format!("unpruned search gave {other:?}")),
    }
    Ok(format!(
        "triangle 6 with certificate (pruned and plain), pigeonhole c <= 3 r <= 4, {} of {} bounds confirmed, {} over budget, {} unavailable",
        counter(&r, "bounds_confirmed"),
        counter(&r, "bounds"),
        counter(&r, "bounds_infeasible"),
        counter(&r, "bounds_unavailable"),
    ))
}

fn c5() -> Check {
    let mut out = Vec::new();
    let mut p = CodingParams::new(preset("compact12").unwrap());
    p.mode = Mode::Exhaustive;
    p.materialize = true;
    let r = run_coding(&p, PARALLEL).map_err(e)?;
    passed(&r)?;
    out.push(format!("compact12 {} exhaustive", counter(&r, "round_trips")));
    for name in ["two-slot", "two-component"] {
        let p = CodingParams::new(preset(name).unwrap());
        let r = run_coding(&p, PARALLEL).map_err(e)?;
        passed(&r)?;
        out.push(format!("{name} {} supported samples", counter(&r, "round_trips")));
    }
    Ok(out.join(", "))
}

fn c6() -> Check {
    let cfg = CodingConfig::new(0, 1, SizeSignature::PrimePower, vec![Slot::new(0, vec![1])]);
    let s = &cfg.slots[0];
    let f0 = cfg.sizes(s, 0).map_err(|x| x.to_string())?;
    let f1 = cfg.sizes(s, 1).map_err(|x| x.to_string())?;
    if f0 != SizeProfile::from(vec![10]) || f1 != SizeProfile::from(vec![70]) {
        return Err(format!("sizes {f0} {f1}"));
    }
    let mut slots = Vec::new();
    for j in 0..=2 {
        for n in 1..=2 {
            for profile in itertools::repeat_n(1..=2usize, n).multi_cartesian_product() {
                slots.push(Slot::new(j, profile));
            }
        }
    }
    check_signature_contract(&SizeSignature::PrimePower, &slots).map_err(|x| x.to_string())?;
    Ok(format!("block sizes {f0} {f1}; contract holds on {} slots", slots.len()))
}

fn c7() -> Check {
    let mut total = 0;
    for a in 0..=5 {
        for n in 0..=2 {
            let mut image = BTreeSet::new();
            for p in enum_o_n(a, n, None) {
                let (part, lands) = tuple_to_partition(a, &p).map_err(|x| x.to_string())?;
                if lands {
                    image.insert(part);
                }
            }
            let target: BTreeSet<_> = enum_b_n(a, n).collect();
            if image != target {
                return Err(format!("a = {a}, n = {n}: image {} of {}", image.len(), target.len()));
            }
            total += target.len();
        }
    }
    Ok(format!("image equals B_n for a <= 5, n <= 2 ({total} partitions)"))
}

fn c8() -> Check {
    let r = run_symmetry(&SymmetryParams::default(), SERIAL).map_err(e)?;
    passed(&r)?;
    Ok(format!(
        "{} orbit pairs, {} fibers, {} chains",
        counter(&r, "orbit_pairs"),
        counter(&r, "fibers"),
        counter(&r, "chains")
    ))
}

fn c9() -> Check {
    let rows = emit_counts(Space::Bn, 0..=7, 0..=3, u64::MAX);
    if let Some(bad) = rows.iter().find(|r| r.matches != Some(true)) {
        return Err(format!("{bad:?}"));
    }
    for (a, n, want) in [(4, 2, 3), (5, 2, 10), (3, 2, 0)] {
        let row = &emit_counts(Space::Stirling, a..=a, n..=n, u64::MAX)[0];
        if row.enumerated != Some(want) || row.matches != Some(true) {
            return Err(format!("stirling({a}, {n}): {row:?}"));
        }
    }
    Ok(format!("{} B_n rows agree; stirling (4,2)=3 (5,2)=10 (3,2)=0", rows.len()))
}

fn twice(run: impl Fn(Exec) -> Result<RunReport, SuiteError>) -> Result<(), String> {
    let a = run(SERIAL).map_err(e)?.canonical_json();
    let b = run(SERIAL).map_err(e)?.canonical_json();
    let c = run(PARALLEL).map_err(e)?.canonical_json();
    if a != b {
        return Err(format!("serial runs differ:\n{a}\n{b}"));
    }
    if a != c {
        return Err(format!("parallel run differs:\n{a}\n{c}"));
    }
    Ok(())
}

fn c10() -> Check {
    twice(|x| run_bijection(&BijectionParams { a: 4, n: 2 }, x))?;
    twice(|x| {
        let mut p = LawParams::new(5, vec![2], vec![3]);
        p.mode = Mode::Random;
        p.samples = 300;
        p.seed = 5;
        run_fact00(&p, x)
    })?;
    twice(|x| {
        // below the threshold, so witnesses are part of what must agree
        let mut p = NilpotencyParams::new(5, vec![2], vec![3]);
        p.mode = Mode::Random;
        p.samples = 300;
        run_nilpotency(&p, x)
    })?;
    twice(|x| run_ramsey(&RamseyParams { c_max: 2, r_max: 3, ..RamseyParams::default() }, x))?;
    twice(|x| {
        let mut p = CodingParams::new(preset("two-slot").unwrap());
        p.samples = 5;
        p.seed = 2;
        run_coding(&p, x)
    })?;
    twice(|x| {
        let mut p = CodingParams::new(preset("two-slot").unwrap());
        p.config.ground = 12;
        p.sampler = Sampler::Uniform;
        p.samples = 3;
        run_coding(&p, x)
    })?;
    twice(|x| run_symmetry(&SymmetryParams { samples: 50, ..SymmetryParams::default() }, x))?;

    let args = ["verify", "nilpotency", "--a", "5", "--m", "2", "--l", "3", "--mode", "random", "--samples", "200"];
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| Command::new(env!("CARGO_BIN_EXE_finpart")).args(args).output().map(|o| o.stdout))
        .collect::<Result<_, _>>()
        .map_err(|x| x.to_string())?;
    if runs[0] != runs[1] || runs[0].is_empty() {
        return Err("binary output differs between runs".into());
    }
    Ok("7 suite configurations agree across serial, serial and parallel runs; binary output byte-identical".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        (c1, Some(Duration::from_secs(10))),
        (c2, Some(Duration::from_secs(5 * 60))),
        (c3, None),
        (c4, Some(Duration::from_secs(10 * 60))),
        (c5, Some(Duration::from_secs(15 * 60))),
        (c6, None),
        (c7, None),
        (c8, None),
        (c9, None),
        (c10, None),
    ];
    let mut failed = 0;
    for (i, (check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if took > l => Err(format!("took {took:.1?}, limit {l:?}")),
            (r, _) => r,
        };
        match result {
            Ok(msg) => println!("criterion {}: PASS ({took:.1?}) {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL ({took:.1?}) {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
