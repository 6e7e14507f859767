//! `fact00` (closure laws) and `nilpotency`.

use std::collections::BTreeMap;

use finpart::operators::{
    ClosureEngine, ExplicitClosure, ImplicitClosure, Nilpotency, ProfilePair, TupleSpace,
    DEFAULT_EXPLICIT_LIMIT,
};
use finpart::{FamilyMask, SizeProfile};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::report::{RunReport, Witness};
use crate::sweep::{draw, family_json, mask_from_bits, sample_rng, sweep, Mode, Partial, Sampler};
use crate::suites::{Exec, SuiteError};

/// Largest domain swept exhaustively (`2^24` families).
pub const MAX_EXHAUSTIVE_BITS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawParams {
    pub a: usize,
    pub m: Vec<usize>,
    pub l: Vec<usize>,
    /// larger profile for the `α_l ⊆ α_l'` law; defaults to `l + 1` componentwise
    pub l_prime: Option<Vec<usize>>,
    pub mode: Mode,
    /// random families (random mode)
    pub samples: u64,
    /// random pairs `X ⊆ Y` for laws (1) and (3)
    pub pairs: u64,
    pub seed: u64,
    pub sampler: Sampler,
    pub e_max: usize,
}

impl LawParams {
    pub fn new(a: usize, m: Vec<usize>, l: Vec<usize>) -> Self {
        LawParams {
            a,
            m,
            l,
            l_prime: None,
            mode: Mode::Exhaustive,
            samples: 1000,
            pairs: 1000,
            seed: 0,
            sampler: Sampler::Uniform,
            e_max: 3,
        }
    }

    fn l_prime(&self) -> Vec<usize> {
        self.l_prime.clone().unwrap_or_else(|| self.l.iter().map(|x| x + 1).collect())
    }
}

fn pair(m: &[usize], l: &[usize]) -> Result<ProfilePair, SuiteError> {
    Ok(ProfilePair::new(SizeProfile::new(m.to_vec()), SizeProfile::new(l.to_vec()))?)
}

fn differing(space: &TupleSpace, x: &FamilyMask, y: &FamilyMask) -> Value {
    let mut d = x.clone();
    d.symmetric_difference_with(y);
    family_json(space, &d)
}

struct Laws<'a> {
    eng: &'a ExplicitClosure,
    wide: &'a ExplicitClosure,
}

impl Laws<'_> {
    fn space(&self) -> &TupleSpace {
        self.eng.domain()
    }

    fn fail(&self, p: &mut Partial, idx: u64, law: &str, x: &FamilyMask, y: Option<&FamilyMask>, d: Value) {
        let mut input = json!({ "x": family_json(self.space(), x) });
        if let Some(y) = y {
            input["y"] = family_json(self.space(), y);
        }
        p.violate(idx, Witness { law: law.into(), input, detail: json!({ "differing": d }) });
    }

    /// Laws (2), (4), (5), (7) and (8) on one family.
    fn single(&self, idx: u64, x: &FamilyMask, p: &mut Partial) {
        let e = self.eng;
        let ax = e.alpha(x);
        p.bump("law2", 1);
        if !x.is_subset(&ax) {
            self.fail(p, idx, "2: X ⊆ α(X)", x, None, differing(self.space(), x, &ax));
        }
        p.bump("law4", 1);
        let (g1, g2) = (e.gamma(&ax), e.gamma(x));
        if g1 != g2 {
            self.fail(p, idx, "4: γ(α(X)) = γ(X)", x, None, differing(e.codomain(), &g1, &g2));
        }
        p.bump("law5", 1);
        let aax = e.alpha(&ax);
        if aax != ax {
            self.fail(p, idx, "5: α(α(X)) = α(X)", x, None, differing(self.space(), &aax, &ax));
        }
        p.bump("law7", 1);
        let awx = self.wide.alpha(x);
        if !ax.is_subset(&awx) {
            self.fail(p, idx, "7: α_l(X) ⊆ α_l'(X)", x, None, differing(self.space(), &ax, &awx));
        }
        if &awx == x && &ax != x {
            self.fail(p, idx, "7: α_l'(X) = X ⇒ α_l(X) = X", x, None, differing(self.space(), &ax, x));
        }
        let bound = e.pair().nilpotency_bound();
        let mut k = x.clone();
        for _ in 0..=bound {
            p.bump("law8", 1);
            let next = e.delta(&k);
            let mut rebuilt = e.alpha(&k);
            rebuilt.difference_with(&next);
            if rebuilt != k {
                self.fail(p, idx, "8: δ^(k) = α(δ^(k)) ∖ δ^(k+1)", x, None, differing(self.space(), &rebuilt, &k));
                break;
            }
            k = next;
        }
    }

    /// Laws (1) and (3) on `X ⊆ Y`.
    fn pair(&self, idx: u64, x: &FamilyMask, y: &FamilyMask, p: &mut Partial) {
        let e = self.eng;
        p.bump("law1", 1);
        let (gx, gy) = (e.gamma(x), e.gamma(y));
        if !gx.is_subset(&gy) {
            self.fail(p, idx, "1: X ⊆ Y ⇒ γ(X) ⊆ γ(Y)", x, Some(y), differing(e.codomain(), &gx, &gy));
        }
        p.bump("law3", 1);
        let (ax, ay) = (e.alpha(x), e.alpha(y));
        if !ax.is_subset(&ay) {
            self.fail(p, idx, "3: X ⊆ Y ⇒ α(X) ⊆ α(Y)", x, Some(y), differing(self.space(), &ax, &ay));
        }
    }
}

/// Law (6) over the given closed families: distinct families, distinct images.
fn injectivity(eng: &ExplicitClosure, closed: Vec<FamilyMask>, report: &mut RunReport) {
    let mut by_image: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    let mut seen = std::collections::BTreeSet::new();
    for x in closed {
        let key: Vec<usize> = x.ones().collect();
        if !seen.insert(key.clone()) {
            continue;
        }
        report.bump("law6", 1);
        let img: Vec<usize> = eng.gamma(&x).ones().collect();
        if let Some(other) = by_image.insert(img, key.clone()) {
            let dom = eng.domain();
            let y = mask_from_indices(dom.len(), &other);
            report.violate(Witness {
                law: "6: γ injective on α-closed families".into(),
                input: json!({ "x": family_json(dom, &x), "y": family_json(dom, &y) }),
                detail: json!({ "differing": differing(dom, &x, &y) }),
            });
        }
    }
    report.set("closed_families", seen.len() as u64);
}

fn mask_from_indices(len: usize, idx: &[usize]) -> FamilyMask {
    let mut m = FamilyMask::with_capacity(len);
    idx.iter().for_each(|&i| m.insert(i));
    m
}

fn draw_pair<R: Rng>(space: &TupleSpace, p: &LawParams, rng: &mut R) -> (FamilyMask, FamilyMask) {
    let x = draw(space, p.sampler, p.e_max, rng);
    let mut y = draw(space, p.sampler, p.e_max, rng);
    y.union_with(&x);
    (x, y)
}

pub fn run_fact00(p: &LawParams, exec: Exec) -> Result<RunReport, SuiteError> {
    let mut report = RunReport::new("fact00", serde_json::to_value(p)?);
    let lp = p.l_prime();
    if !p.l.iter().zip(&lp).all(|(a, b)| a <= b) {
        return Err(SuiteError::Invalid(format!("l' = {lp:?} is not ≥ l = {:?}", p.l)));
    }
    let eng = match ExplicitClosure::with_limit(p.a, pair(&p.m, &p.l)?, DEFAULT_EXPLICIT_LIMIT) {
        Ok(e) => e,
        Err(e) => {
            report.infeasible(e.to_string());
            return Ok(report);
        }
    };
    let wide = match ExplicitClosure::with_limit(p.a, pair(&p.m, &lp)?, DEFAULT_EXPLICIT_LIMIT) {
        Ok(e) => e,
        Err(e) => {
            report.infeasible(e.to_string());
            return Ok(report);
        }
    };
    if eng.extension_space_empty() {
        report.note(format!("O_l(A) is empty for l = {:?}, a = {}: α is vacuous", p.l, p.a));
    }
    let laws = Laws { eng: &eng, wide: &wide };
    let n = eng.domain().len();
    report.set("laws", 8);
    report.set("domain", n as u64);
    let closed: Vec<FamilyMask> = match p.mode {
        Mode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_BITS {
                report.infeasible(format!("2^{n} families exceed the exhaustive limit 2^{MAX_EXHAUSTIVE_BITS}"));
                return Ok(report);
            }
            let total = 1u64 << n;
            report.set("families", total);
            sweep(total, exec.parallel, |i, part| laws.single(i, &mask_from_bits(n, i), part))
                .into_report(&mut report, "");
            (0..total)
                .map(|i| mask_from_bits(n, i))
                .filter(|x| eng.alpha(x) == *x)
                .collect()
        }
        Mode::Random => {
            report.set("families", p.samples);
            let space = eng.domain();
            sweep(p.samples, exec.parallel, |i, part| {
                let x = draw(space, p.sampler, p.e_max, &mut sample_rng(p.seed, i));
                laws.single(i, &x, part);
            })
            .into_report(&mut report, "");
            (0..p.samples)
                .map(|i| eng.alpha(&draw(space, p.sampler, p.e_max, &mut sample_rng(p.seed, i))))
                .collect()
        }
    };
    report.set("pairs", p.pairs);
    let space = eng.domain();
    // pair streams follow the family streams
    let offset = 1u64 << 40;
    sweep(p.pairs, exec.parallel, |i, part| {
        let (x, y) = draw_pair(space, p, &mut sample_rng(p.seed, offset + i));
        laws.pair(offset + i, &x, &y, part);
    })
    .into_report(&mut report, "");
    injectivity(&eng, closed, &mut report);
    Ok(report)
}

/// Re-runs the check named by a `fact00` witness; true when it still fails.
pub fn replay_fact00(p: &LawParams, w: &Witness) -> Result<bool, SuiteError> {
    let eng = ExplicitClosure::new(p.a, pair(&p.m, &p.l)?)?;
    let wide = ExplicitClosure::new(p.a, pair(&p.m, &p.l_prime())?)?;
    let space = eng.domain();
    let x = parse_family(space, &w.input["x"])?;
    let laws = Laws { eng: &eng, wide: &wide };
    let mut part = Partial::default();
    if w.law.starts_with('6') {
        let y = parse_family(space, &w.input["y"])?;
        let closed = eng.alpha(&x) == x && eng.alpha(&y) == y;
        return Ok(closed && x != y && eng.gamma(&x) == eng.gamma(&y));
    }
    match w.input.get("y") {
        Some(y) => laws.pair(0, &x, &parse_family(space, y)?, &mut part),
        None => laws.single(0, &x, &mut part),
    }
    Ok(part.witnesses.iter().any(|(_, v)| v.law == w.law))
}

pub fn parse_family(space: &TupleSpace, v: &Value) -> Result<FamilyMask, SuiteError> {
    let tuples: Vec<finpart::DisjointTuple> = serde_json::from_value(v.clone())?;
    Ok(space.mask_from(&tuples)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilpotencyParams {
    pub a: usize,
    pub m: Vec<usize>,
    pub l: Vec<usize>,
    pub mode: Mode,
    pub samples: u64,
    pub seed: u64,
    pub sampler: Sampler,
    pub e_max: usize,
    /// scan every ground size `a..=scan_to` and report the least one from
    /// which the bound held throughout
    pub scan_to: Option<usize>,
}

impl NilpotencyParams {
    pub fn new(a: usize, m: Vec<usize>, l: Vec<usize>) -> Self {
        NilpotencyParams {
            a,
            m,
            l,
            mode: Mode::Exhaustive,
            samples: 1000,
            seed: 0,
            sampler: Sampler::Uniform,
            e_max: 3,
            scan_to: None,
        }
    }
}

fn closure_engine(a: usize, pp: ProfilePair) -> Box<dyn ClosureEngine + Send> {
    match ExplicitClosure::with_limit(a, pp.clone(), DEFAULT_EXPLICIT_LIMIT) {
        Ok(e) => Box::new(e),
        Err(_) => Box::new(ImplicitClosure::new(a, pp)),
    }
}

fn nilpotency_check(eng: &dyn ClosureEngine, idx: u64, x: &FamilyMask, part: &mut Partial) {
    let bound = eng.pair().nilpotency_bound();
    let space = eng.domain();
    part.bump("families", 1);
    match eng.nilpotency(x) {
        Nilpotency::Index(k) => {
            part.bump(&format!("index.{k}"), 1);
            part.max("max_index", k as u64);
            if k > bound {
                part.violate(idx, Witness {
                    law: "nilpotency bound".into(),
                    input: json!({ "x": family_json(space, x) }),
                    detail: json!({ "index": k, "bound": bound }),
                });
            }
        }
        Nilpotency::Cycle(c) => {
            part.bump("cycles", 1);
            part.violate(idx, Witness {
                law: "cycle".into(),
                input: json!({ "x": family_json(space, x) }),
                detail: json!({
                    "start": c.start,
                    "period": c.period,
                    "recurring": family_json(space, &c.family),
                    "bound": bound,
                }),
            });
        }
    }
}

/// One ground size; `None` when the sweep is over budget.
fn nilpotency_at(p: &NilpotencyParams, a: usize, exec: Exec, notes: &mut Vec<String>) -> Result<Option<Partial>, SuiteError> {
    let eng = closure_engine(a, pair(&p.m, &p.l)?);
    if eng.extension_space_empty() {
        notes.push(format!("O_l(A) is empty for l = {:?}, a = {a}: α is vacuous", p.l));
    }
    let n = eng.domain().len();
    let eng = eng.as_ref();
    Ok(match p.mode {
        Mode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_BITS {
                notes.push(format!("a = {a}: 2^{n} families exceed the exhaustive limit 2^{MAX_EXHAUSTIVE_BITS}"));
                return Ok(None);
            }
            Some(sweep(1u64 << n, exec.parallel, |i, part| {
                nilpotency_check(eng, i, &mask_from_bits(n, i), part)
            }))
        }
        Mode::Random => Some(sweep(p.samples, exec.parallel, |i, part| {
            let x = draw(eng.domain(), p.sampler, p.e_max, &mut sample_rng(p.seed, i));
            nilpotency_check(eng, i, &x, part)
        })),
    })
}

pub fn run_nilpotency(p: &NilpotencyParams, exec: Exec) -> Result<RunReport, SuiteError> {
    let mut report = RunReport::new("nilpotency", serde_json::to_value(p)?);
    let pp = pair(&p.m, &p.l)?;
    report.set("bound", pp.nilpotency_bound() as u64);
    let mut notes = Vec::new();
    match p.scan_to {
        None => match nilpotency_at(p, p.a, exec, &mut notes)? {
            Some(part) => part.into_report(&mut report, ""),
            None => report.infeasible("over budget"),
        },
        Some(hi) => {
            if hi < p.a {
                return Err(SuiteError::Invalid(format!("scan_to {hi} < a = {}", p.a)));
            }
            // least a from which every scanned size passes
            let mut a_min: Option<usize> = None;
            let mut last: Option<Partial> = None;
            for a in p.a..=hi {
                let Some(part) = nilpotency_at(p, a, exec, &mut notes)? else {
                    report.infeasible(format!("a = {a} over budget"));
                    break;
                };
                report.set(&format!("a{a}.violations"), part.violations);
                report.set(&format!("a{a}.families"), part.sums.get("families").copied().unwrap_or(0));
                if part.violations == 0 {
                    a_min.get_or_insert(a);
                } else {
                    a_min = None;
                }
                last = Some(part);
            }
            match a_min {
                Some(a) => report.set("a_min", a as u64),
                None => {
                    if let Some(part) = last {
                        part.into_report(&mut report, &format!("a{hi}"));
                    }
                }
            }
        }
    }
    for n in notes {
        report.note(n);
    }
    Ok(report)
}

/// Re-runs a nilpotency witness at ground size `a`.
pub fn replay_nilpotency(p: &NilpotencyParams, a: usize, w: &Witness) -> Result<bool, SuiteError> {
    let eng = closure_engine(a, pair(&p.m, &p.l)?);
    let x = parse_family(eng.domain(), &w.input["x"])?;
    let mut part = Partial::default();
    nilpotency_check(eng.as_ref(), 0, &x, &mut part);
    Ok(part.witnesses.first().is_some_and(|(_, v)| v == w))
}
