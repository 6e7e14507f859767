use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use finpart::coding::{CodeBook, Coder, CodingConfig, IndexedFamily};
use finpart::ramsey::{
    has_property, search_min_n, upper_bound_r, RamseyQuery, SearchOptions, DEFAULT_MAX_COLORINGS,
};
use finpart::symmetry::{
    chain_bound, even_odd_orbits, fiber_bound, fiber_of, is_support, longest_chain,
    restrict_outside, DEFAULT_SWEEP_LIMIT,
};
use finpart::{
    enum_b_fin, enum_b_n, enum_disjoint_tuples, enum_fin, enum_o_n, ElementSequence,
    FinitaryPartition, FiniteSubset, SizeProfile,
};
use finpart_cli::counts::{emit_counts, render, Format, Space};
use finpart_cli::demo::{demo_coding, sample_family};
use finpart_cli::suites::bijection::{run_bijection, BijectionParams};
use finpart_cli::suites::coding::{preset, run_coding, CodingParams};
use finpart_cli::suites::operators::{run_fact00, run_nilpotency, LawParams, NilpotencyParams};
use finpart_cli::suites::ramsey::{run_ramsey, RamseyParams};
use finpart_cli::suites::symmetry::{run_symmetry, SymmetryParams};
use finpart_cli::sweep::{Mode, Sampler};
use finpart_cli::{Exec, RunReport, SuiteError};
use serde_json::json;

#[derive(Parser)]
#[command(name = "finpart", version, about = "Finitary partitions: enumeration, closure operators, coding and symmetry checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the members of a space, one JSON value per line
    Enum(EnumArgs),
    /// Formula counts next to enumerated counts
    Count(CountArgs),
    /// Run a property suite and print its report
    Verify(VerifyArgs),
    #[command(subcommand)]
    Ramsey(RamseyCmd),
    #[command(subcommand)]
    Code(CodeCmd),
    #[command(subcommand)]
    Symmetry(SymmetryCmd),
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum EnumSpace {
    Bn,
    Bfin,
    On,
    Fin,
    /// tuples with exact component sizes `--m`
    Om,
}

#[derive(Args)]
struct EnumArgs {
    #[arg(long, value_enum)]
    space: EnumSpace,
    #[arg(long)]
    a: usize,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    /// stop after this many items
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long, value_enum)]
    space: Space,
    /// inclusive range such as `0..6`, or a single value
    #[arg(long, value_parser = parse_range)]
    a: (usize, usize),
    #[arg(long, value_parser = parse_range, default_value = "0..3")]
    n: (usize, usize),
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// largest count still enumerated
    #[arg(long, default_value_t = 5_000_000)]
    limit: u64,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Suite {
    Fact00,
    Nilpotency,
    Bijection,
    Ramsey,
    Coding,
    Symmetry,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// lower profile, repeatable or comma separated
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    /// upper profile, repeatable or comma separated
    #[arg(long, value_delimiter = ',')]
    l: Vec<usize>,
    /// comparison profile for the `α_l ⊆ α_l'` law, default `l + 1`
    #[arg(long = "l-prime", value_delimiter = ',')]
    l_prime: Vec<usize>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    pairs: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum)]
    sampler: Option<Sampler>,
    /// largest support size for the supported sampler
    #[arg(long)]
    e_max: Option<usize>,
    /// nilpotency: scan ground sizes `a..=scan_to`
    #[arg(long)]
    scan_to: Option<usize>,
    /// coding: preset name or path to a config file
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    materialize: bool,
    #[arg(long)]
    max_colorings: Option<u128>,
    #[arg(long)]
    no_prune: bool,
    #[arg(long)]
    parallel: bool,
    /// also write the report here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QueryArgs {
    /// exponent per coordinate, repeatable or comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    j: Vec<usize>,
    #[arg(long)]
    c: usize,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_COLORINGS)]
    max_colorings: u128,
    #[arg(long)]
    no_prune: bool,
    #[arg(long)]
    parallel: bool,
}

impl QueryArgs {
    fn query(&self) -> finpart::Result<RamseyQuery> {
        RamseyQuery::new(self.j.clone(), self.c, self.r)
    }

    fn options(&self) -> SearchOptions {
        SearchOptions {
            prune: !self.no_prune,
            parallel: self.parallel,
            max_colorings: self.max_colorings,
        }
    }
}

#[derive(Subcommand)]
enum RamseyCmd {
    /// Whether every coloring at sizes `--N` has a monochromatic box
    Check {
        #[command(flatten)]
        q: QueryArgs,
        /// size per coordinate, repeatable; one value is used for all
        #[arg(long = "N", value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
    },
    /// Least equal size with the property
    Search {
        #[command(flatten)]
        q: QueryArgs,
        #[arg(long, default_value_t = 12)]
        cap: usize,
    },
    /// A size that is guaranteed to suffice
    Bound {
        #[arg(long, value_delimiter = ',', required = true)]
        j: Vec<usize>,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Args)]
struct CodeArgs {
    /// preset name (compact12, two-slot, two-component) or config file
    #[arg(long)]
    config: String,
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Print the book of a family (and its partitions with --materialize)
    Encode {
        #[command(flatten)]
        c: CodeArgs,
        /// family JSON; a seeded supported family when absent
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        materialize: bool,
    },
    /// Recover a family from a book or from a partition list
    Decode {
        #[command(flatten)]
        c: CodeArgs,
        #[arg(long, conflicts_with = "partitions", required_unless_present = "partitions")]
        book: Option<PathBuf>,
        #[arg(long)]
        partitions: Option<PathBuf>,
    },
    /// Encode, decode and compare, with a transcript
    Roundtrip {
        #[command(flatten)]
        c: CodeArgs,
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        materialize: bool,
    },
}

#[derive(Subcommand)]
enum SymmetryCmd {
    /// Even and odd images of `--s` under permutations of `--B`
    Orbits {
        #[arg(long = "B", value_delimiter = ',')]
        b: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        s: Vec<usize>,
        /// shorthand for B = 0..n+1, s = 0..n
        #[arg(long)]
        n: Option<usize>,
    },
    /// Whether `--E` supports a partition
    Support {
        #[arg(long)]
        a: usize,
        #[arg(long = "E", value_delimiter = ',')]
        e: Vec<usize>,
        /// non-singleton blocks, e.g. `0,1|2,3`
        #[arg(long)]
        partition: String,
    },
    /// Partitions with the same projection outside `--E`
    Fiber {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "E", value_delimiter = ',')]
        e: Vec<usize>,
        #[arg(long)]
        partition: String,
    },
    /// A longest strictly decreasing chain outside `--E`
    Chain {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "E", value_delimiter = ',')]
        e: Vec<usize>,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let bad = |_| format!("expected N or N..M, got {s:?}");
    match s.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let (lo, hi) = (lo.parse().map_err(bad)?, hi.parse().map_err(bad)?);
            if lo > hi {
                return Err(format!("empty range {s:?}"));
            }
            Ok((lo, hi))
        }
        None => {
            let v = s.parse().map_err(bad)?;
            Ok((v, v))
        }
    }
}

fn parse_partition(a: usize, s: &str) -> Result<FinitaryPartition, SuiteError> {
    let mut blocks = Vec::new();
    for b in s.split('|').filter(|b| !b.trim().is_empty()) {
        let elems = b
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|e| SuiteError::Invalid(format!("{x:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        blocks.push(FiniteSubset::from_elements(elems));
    }
    Ok(FinitaryPartition::with_ns_blocks(a, &blocks)?)
}

fn load_config(spec: &str) -> Result<CodingConfig, SuiteError> {
    if let Some(cfg) = preset(spec) {
        return Ok(cfg);
    }
    let text = std::fs::read_to_string(spec)?;
    let cfg: CodingConfig = serde_json::from_str(&text)?;
    Ok(cfg)
}

fn read_json<T: serde::de::DeserializeOwned>(p: &Path) -> Result<T, SuiteError> {
    Ok(serde_json::from_str(&std::fs::read_to_string(p)?)?)
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, SuiteError> {
    v.ok_or_else(|| SuiteError::Invalid(format!("--{flag} is required")))
}

fn run_verify(v: &VerifyArgs) -> Result<RunReport, SuiteError> {
    let exec = Exec { parallel: v.parallel };
    match v.suite {
        Suite::Fact00 => {
            let mut p = LawParams::new(need(v.a, "a")?, v.m.clone(), v.l.clone());
            p.l_prime = (!v.l_prime.is_empty()).then(|| v.l_prime.clone());
            p.mode = v.mode.unwrap_or(p.mode);
            p.samples = v.samples.unwrap_or(p.samples);
            p.pairs = v.pairs.unwrap_or(p.pairs);
            p.seed = v.seed;
            p.sampler = v.sampler.unwrap_or(p.sampler);
            p.e_max = v.e_max.unwrap_or(p.e_max);
            run_fact00(&p, exec)
        }
        Suite::Nilpotency => {
            let mut p = NilpotencyParams::new(need(v.a, "a")?, v.m.clone(), v.l.clone());
            p.mode = v.mode.unwrap_or(p.mode);
            p.samples = v.samples.unwrap_or(p.samples);
            p.seed = v.seed;
            p.sampler = v.sampler.unwrap_or(p.sampler);
            p.e_max = v.e_max.unwrap_or(p.e_max);
            p.scan_to = v.scan_to;
            run_nilpotency(&p, exec)
        }
        Suite::Bijection => run_bijection(&BijectionParams { a: need(v.a, "a")?, n: need(v.n, "n")? }, exec),
        Suite::Ramsey => {
            let mut p = RamseyParams::default();
            p.max_colorings = v.max_colorings.unwrap_or(p.max_colorings);
            p.no_prune = v.no_prune;
            run_ramsey(&p, exec)
        }
        Suite::Coding => {
            let mut p = CodingParams::new(load_config(&need(v.config.clone(), "config")?)?);
            p.mode = v.mode.unwrap_or(p.mode);
            p.samples = v.samples.unwrap_or(p.samples);
            p.seed = v.seed;
            p.sampler = v.sampler.unwrap_or(p.sampler);
            p.e_max = v.e_max.unwrap_or(p.e_max);
            p.materialize = v.materialize;
            run_coding(&p, exec)
        }
        Suite::Symmetry => {
            let mut p = SymmetryParams::default();
            p.a = v.a.unwrap_or(p.a);
            p.n = v.n.unwrap_or(p.n);
            p.e_max = v.e_max.unwrap_or(p.e_max);
            p.samples = v.samples.unwrap_or(p.samples);
            p.seed = v.seed;
            run_symmetry(&p, exec)
        }
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<(), SuiteError> {
    writeln!(io::stdout(), "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn print_lines<T: serde::Serialize>(items: impl Iterator<Item = T>, limit: Option<usize>) -> Result<(), SuiteError> {
    for it in items.take(limit.unwrap_or(usize::MAX)) {
        writeln!(io::stdout(), "{}", serde_json::to_string(&it)?)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, SuiteError> {
    match cli.cmd {
        Cmd::Enum(e) => {
            match e.space {
                EnumSpace::Bn => print_lines(enum_b_n(e.a, e.n), e.limit)?,
                EnumSpace::Bfin => print_lines(enum_b_fin(e.a), e.limit)?,
                EnumSpace::On => print_lines(enum_o_n(e.a, e.n, None), e.limit)?,
                EnumSpace::Fin => print_lines(enum_fin(e.a), e.limit)?,
                EnumSpace::Om => print_lines(enum_disjoint_tuples(e.a, &SizeProfile::new(e.m)), e.limit)?,
            }
            Ok(0)
        }
        Cmd::Count(c) => {
            let rows = emit_counts(c.space, c.a.0..=c.a.1, c.n.0..=c.n.1, c.limit);
            write!(io::stdout(), "{}", render(&rows, c.format))?;
            if c.format == Format::Json {
                writeln!(io::stdout())?;
            }
            Ok(if rows.iter().any(|r| r.matches == Some(false)) { 1 } else { 0 })
        }
        Cmd::Verify(v) => {
            let start = Instant::now();
            let report = run_verify(&v)?.timed(start.elapsed());
            let text = report.canonical_json();
            writeln!(io::stdout(), "{text}")?;
            eprintln!("{}: {:?} in {} ms", report.suite, report.outcome, report.wall_time_ms.unwrap_or(0));
            if let Some(p) = &v.out {
                std::fs::write(p, report.to_json() + "\n")?;
            }
            Ok(report.outcome.exit_code() as u8)
        }
        Cmd::Ramsey(r) => match r {
            RamseyCmd::Check { q, sizes } => {
                let query = q.query()?;
                let sizes = if sizes.len() == 1 { vec![sizes[0]; query.arity()] } else { sizes };
                let out = has_property(&sizes, &query, &q.options())?;
                print_json(&json!({ "query": query, "sizes": sizes, "result": out }))?;
                Ok(if out.holds().is_none() { 2 } else { 0 })
            }
            RamseyCmd::Search { q, cap } => {
                let query = q.query()?;
                let out = search_min_n(&query, cap, &q.options())?;
                print_json(&json!({ "query": query, "cap": cap, "result": out }))?;
                Ok(if matches!(out, finpart::ramsey::MinSearch::Infeasible { .. }) { 2 } else { 0 })
            }
            RamseyCmd::Bound { j, c, r } => {
                let query = RamseyQuery::new(j, c, r)?;
                let b = upper_bound_r(&query)?;
                print_json(&json!({ "query": query, "sufficient_size": b.to_string() }))?;
                Ok(0)
            }
        },
        Cmd::Code(c) => run_code(c),
        Cmd::Symmetry(s) => run_symmetry_cmd(s),
    }
}

fn family_or_sample(cfg: &CodingConfig, family: Option<&Path>, seed: u64) -> Result<IndexedFamily, SuiteError> {
    match family {
        Some(p) => read_json(p),
        None => Ok(sample_family(cfg, seed)),
    }
}

fn run_code(c: CodeCmd) -> Result<u8, SuiteError> {
    match c {
        CodeCmd::Encode { c, family, seed, materialize } => {
            let cfg = load_config(&c.config)?;
            let coder = Coder::new(cfg.clone()).map_err(|e| SuiteError::Invalid(e.to_string()))?;
            let x = family_or_sample(&cfg, family.as_deref(), seed)?;
            let book = coder.encode(&x)?;
            if materialize {
                print_json(&json!({ "book": book, "partitions": coder.materialize(&book)? }))?;
            } else {
                print_json(&book)?;
            }
            Ok(0)
        }
        CodeCmd::Decode { c, book, partitions } => {
            let cfg = load_config(&c.config)?;
            let coder = Coder::new(cfg).map_err(|e| SuiteError::Invalid(e.to_string()))?;
            let x = match (book, partitions) {
                (Some(b), _) => coder.decode_book(&read_json::<CodeBook>(&b)?)?,
                (None, Some(p)) => coder.decode_partitions(&read_json(&p)?)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            print_json(&x)?;
            Ok(0)
        }
        CodeCmd::Roundtrip { c, family, seed, materialize } => {
            let cfg = load_config(&c.config)?;
            let x = family_or_sample(&cfg, family.as_deref(), seed)?;
            let t = demo_coding(&cfg, &x, materialize)?;
            write!(io::stdout(), "{}", t.text)?;
            Ok(if t.passed { 0 } else { 1 })
        }
    }
}

fn run_symmetry_cmd(s: SymmetryCmd) -> Result<u8, SuiteError> {
    let set = |v: &[usize]| FiniteSubset::from_elements(v.iter().copied());
    match s {
        SymmetryCmd::Orbits { b, s, n } => {
            let (b, s) = match n {
                Some(n) => ((0..n + 2).collect(), (0..n + 1).collect()),
                None => (b, s),
            };
            let op = even_odd_orbits(&set(&b), &ElementSequence::injective(s)?)?;
            let lists = |xs: &std::collections::BTreeSet<ElementSequence>| {
                xs.iter().map(|t| t.entries().to_vec()).collect::<Vec<_>>()
            };
            print_json(&json!({ "base": op.base, "seed": op.seed.entries(), "even": lists(&op.xi), "odd": lists(&op.theta) }))?;
            Ok(0)
        }
        SymmetryCmd::Support { a, e, partition } => {
            let p = parse_partition(a, &partition)?;
            let e = set(&e);
            print_json(&json!({ "partition": p, "e": e, "supported": is_support(a, &e, &p) }))?;
            Ok(0)
        }
        SymmetryCmd::Fiber { a, n, e, partition } => {
            let p = parse_partition(a, &partition)?;
            let e = set(&e);
            let fib = fiber_of(&p, &e, n)?;
            let bound = fiber_bound(n, e.len());
            print_json(&json!({
                "partition": p,
                "projection": restrict_outside(&p, &e),
                "fiber": fib,
                "size": fib.len(),
                "bound": bound.to_string(),
            }))?;
            Ok(if fib.len() as u128 > bound { 1 } else { 0 })
        }
        SymmetryCmd::Chain { a, n, e } => {
            let e = set(&e);
            let chain = longest_chain(a, n, &e, DEFAULT_SWEEP_LIMIT)?;
            let bound = chain_bound(n, e.len());
            print_json(&json!({ "chain": chain, "length": chain.len(), "bound": bound.to_string() }))?;
            Ok(if chain.len() as u128 > bound { 1 } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        // a closed pipe (`| head`) is not an error worth reporting
        Err(SuiteError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
