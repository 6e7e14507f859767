//! Polarized Ramsey property for colorings of product grids
//! `[S_1]^{j_1} × ⋯ × [S_n]^{j_n}`.
//!
//! A query `(j, c, r)` holds at sizes `N` when every `c`-coloring of the grid
//! over `S_i = {0..N_i-1}` has sets `T_i ⊆ S_i` of size `r` whose sub-grid
//! `[T_1]^{j_1} × ⋯ × [T_n]^{j_n}` is monochromatic. [`has_property`] decides
//! this exhaustively; [`upper_bound_r`] gives sizes that are sufficient by
//! construction.
//!
//! The exhaustive search assigns colors to grid points in order and prunes a
//! branch as soon as some box is completed monochromatic, since no extension
//! of it can be a counterexample. Colors are interchangeable, so a point may
//! only use a color already in use or the least unused one. With pruning off
//! every coloring is enumerated and checked in full.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{enum_k_subsets, FiniteSubset};
use crate::counting::binomial;
use crate::error::{Error, Result};

/// `(j_1, …, j_n)`, number of colors `c >= 1` and target size `r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RamseyQuery {
    pub j: Vec<usize>,
    pub c: usize,
    pub r: usize,
}

impl RamseyQuery {
    pub fn new(j: Vec<usize>, c: usize, r: usize) -> Result<Self> {
        if c == 0 {
            return Err(Error::Ramsey("at least one color is required".into()));
        }
        Ok(RamseyQuery { j, c, r })
    }

    pub fn arity(&self) -> usize {
        self.j.len()
    }
}

/// Points of `[S_1]^{j_1} × ⋯ × [S_n]^{j_n}` in lexicographic order, last
/// coordinate fastest; each axis lists its subsets lexicographically.
#[derive(Clone, Debug)]
pub struct Grid {
    sizes: Vec<usize>,
    j: Vec<usize>,
    axes: Vec<Vec<FiniteSubset>>,
    ranks: Vec<HashMap<FiniteSubset, usize>>,
    strides: Vec<usize>,
    len: usize,
}

impl Grid {
    pub fn new(sizes: &[usize], j: &[usize]) -> Result<Self> {
        if sizes.len() != j.len() {
            return Err(Error::ArityMismatch {
                expected: j.len(),
                found: sizes.len(),
            });
        }
        let mut len: usize = 1;
        for (&n, &k) in sizes.iter().zip(j) {
            let axis: u128 = binomial(n, k);
            len = usize::try_from(axis)
                .ok()
                .and_then(|a| len.checked_mul(a))
                .ok_or_else(|| Error::Ramsey(format!("grid over sizes {sizes:?} is too large")))?;
        }
        let axes: Vec<Vec<FiniteSubset>> = sizes
            .iter()
            .zip(j)
            .map(|(&n, &k)| enum_k_subsets(n, k).collect())
            .collect();
        let ranks = axes
            .iter()
            .map(|ax| ax.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        let mut strides = vec![1; axes.len()];
        for i in (0..axes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * axes[i + 1].len();
        }
        Ok(Grid {
            sizes: sizes.to_vec(),
            j: j.to_vec(),
            axes,
            ranks,
            strides,
            len,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn point(&self, mut idx: usize) -> Vec<FiniteSubset> {
        self.axes
            .iter()
            .zip(&self.strides)
            .map(|(ax, &st)| {
                let r = idx / st;
                idx %= st;
                ax[r].clone()
            })
            .collect()
    }

    pub fn index_of(&self, point: &[FiniteSubset]) -> Option<usize> {
        if point.len() != self.axes.len() {
            return None;
        }
        point
            .iter()
            .zip(&self.ranks)
            .zip(&self.strides)
            .try_fold(0, |acc, ((s, rk), &st)| rk.get(s).map(|r| acc + r * st))
    }

    /// Indices of the points of `[T_1]^{j_1} × ⋯ × [T_n]^{j_n}`, ascending.
    pub fn box_points(&self, t: &[FiniteSubset]) -> Vec<usize> {
        let per_axis: Vec<Vec<usize>> = t
            .iter()
            .zip(&self.j)
            .zip(&self.ranks)
            .zip(&self.strides)
            .map(|(((ti, &k), rk), &st)| {
                crate::combinatorics::subsets_of(ti.elements(), k)
                    .map(|s| rk[&s] * st)
                    .collect()
            })
            .collect();
        let mut pts: Vec<usize> = if per_axis.is_empty() {
            vec![0]
        } else {
            per_axis
                .into_iter()
                .multi_cartesian_product()
                .map(|v| v.into_iter().sum())
                .collect()
        };
        pts.sort_unstable();
        pts
    }
}

/// A total coloring of a grid with colors `1..=c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductColoring {
    pub sizes: Vec<usize>,
    pub j: Vec<usize>,
    pub c: usize,
    /// one color per grid point, in grid order
    pub colors: Vec<usize>,
}

impl ProductColoring {
    pub fn new(sizes: Vec<usize>, j: Vec<usize>, c: usize, colors: Vec<usize>) -> Result<Self> {
        let grid = Grid::new(&sizes, &j)?;
        if colors.len() != grid.len() {
            return Err(Error::Ramsey(format!(
                "coloring has {} entries for a grid of {} points",
                colors.len(),
                grid.len()
            )));
        }
        if let Some(&bad) = colors.iter().find(|&&x| x == 0 || x > c) {
            return Err(Error::Ramsey(format!("color {bad} outside 1..={c}")));
        }
        Ok(ProductColoring { sizes, j, c, colors })
    }

    pub fn from_fn(
        sizes: Vec<usize>,
        j: Vec<usize>,
        c: usize,
        f: impl Fn(&[FiniteSubset]) -> usize,
    ) -> Result<Self> {
        let grid = Grid::new(&sizes, &j)?;
        let colors = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        Self::new(sizes, j, c, colors)
    }

    pub fn grid(&self) -> Grid {
        Grid::new(&self.sizes, &self.j).expect("validated at construction")
    }

    pub fn color_of(&self, point: &[FiniteSubset]) -> Option<usize> {
        self.grid().index_of(point).map(|i| self.colors[i])
    }
}

/// Whether every point of the box over `t` has color `d`.
///
/// All `T_i` must have the same size `r` and lie in `S_i`.
pub fn check_witness(coloring: &ProductColoring, t: &[FiniteSubset], d: usize) -> Result<bool> {
    if t.len() != coloring.sizes.len() {
        return Err(Error::ArityMismatch {
            expected: coloring.sizes.len(),
            found: t.len(),
        });
    }
    if let Some(first) = t.first() {
        if let Some(i) = t.iter().position(|ti| ti.len() != first.len()) {
            return Err(Error::Ramsey(format!(
                "T_{i} has {} elements, T_0 has {}",
                t[i].len(),
                first.len()
            )));
        }
    }
    for (ti, &n) in t.iter().zip(&coloring.sizes) {
        ti.check_within(n)?;
    }
    let grid = coloring.grid();
    Ok(grid.box_points(t).into_iter().all(|p| coloring.colors[p] == d))
}

/// Largest grid (and box list) built at all, whatever the number of colors.
pub const MAX_GRID_POINTS: u64 = 1 << 22;

/// Cap on `c^|grid|` accepted by the exhaustive search.
pub const DEFAULT_MAX_COLORINGS: u128 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub prune: bool,
    pub parallel: bool,
    pub max_colorings: u128,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            prune: true,
            parallel: false,
            max_colorings: DEFAULT_MAX_COLORINGS,
        }
    }
}

/// Result of an exhaustive check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum PropertyOutcome {
    /// every coloring has a monochromatic box; `searched` counts search
    /// nodes (pruned) or colorings (plain)
    Holds { searched: u128 },
    /// a coloring without a monochromatic box
    Fails { counterexample: ProductColoring },
    /// `c^|grid|` exceeds the limit
    Infeasible { required: String, limit: u128 },
}

impl PropertyOutcome {
    pub fn holds(&self) -> Option<bool> {
        match self {
            PropertyOutcome::Holds { .. } => Some(true),
            PropertyOutcome::Fails { .. } => Some(false),
            PropertyOutcome::Infeasible { .. } => None,
        }
    }
}

struct Problem {
    c: usize,
    len: usize,
    /// boxes whose largest point is the key
    closing: Vec<Vec<Vec<usize>>>,
    boxes: Vec<Vec<usize>>,
}

impl Problem {
    fn mono_closed_at(&self, t: usize, colors: &[usize]) -> bool {
        self.closing[t]
            .iter()
            .any(|b| b.iter().all(|&p| colors[p] == colors[t]))
    }

    fn has_mono(&self, colors: &[usize]) -> bool {
        self.boxes
            .iter()
            .any(|b| b.iter().all(|&p| colors[p] == colors[b[0]]))
    }

    /// Colors a point may take when `used` colors appear before it.
    fn colors_at(&self, used: usize) -> usize {
        self.c.min(used + 1)
    }

    /// Pruned DFS below `colors[..t]`; `used` is the number of distinct
    /// colors so far. Returns a counterexample if one exists.
    fn dfs(
        &self,
        t: usize,
        colors: &mut Vec<usize>,
        used: usize,
        nodes: &mut u128,
        stop: &dyn Fn() -> bool,
    ) -> Option<Vec<usize>> {
        if t == self.len {
            return Some(colors.clone());
        }
        if stop() {
            return None;
        }
        for col in 0..self.colors_at(used) {
            *nodes += 1;
            colors[t] = col;
            if self.mono_closed_at(t, colors) {
                continue;
            }
            if let Some(found) = self.dfs(t + 1, colors, used.max(col + 1), nodes, stop) {
                return Some(found);
            }
        }
        None
    }

    /// Prefixes of length `depth` surviving the pruning rules, in DFS
    /// order, and the number of nodes spent finding them.
    fn prefixes(&self, depth: usize) -> (Vec<(Vec<usize>, usize)>, u128) {
        let mut out = Vec::new();
        let mut colors = vec![0; self.len];
        let mut nodes = 0;
        self.collect_prefixes(0, depth, &mut colors, 0, &mut out, &mut nodes);
        (out, nodes)
    }

    fn collect_prefixes(
        &self,
        t: usize,
        depth: usize,
        colors: &mut Vec<usize>,
        used: usize,
        out: &mut Vec<(Vec<usize>, usize)>,
        nodes: &mut u128,
    ) {
        if t == depth {
            out.push((colors[..t].to_vec(), used));
            return;
        }
        for col in 0..self.colors_at(used) {
            *nodes += 1;
            colors[t] = col;
            if self.mono_closed_at(t, colors) {
                continue;
            }
            self.collect_prefixes(t + 1, depth, colors, used.max(col + 1), out, nodes);
        }
    }
}

/// Decides the property at sizes `n` by exhaustive search.
pub fn has_property(n: &[usize], query: &RamseyQuery, opts: &SearchOptions) -> Result<PropertyOutcome> {
    if n.len() != query.j.len() {
        return Err(Error::ArityMismatch {
            expected: query.j.len(),
            found: n.len(),
        });
    }
    // budget first: the grid itself may be far too large to build
    let points: BigUint = n
        .iter()
        .zip(&query.j)
        .map(|(&ni, &ji)| binomial::<BigUint>(ni, ji))
        .product();
    let infeasible = |required: String| PropertyOutcome::Infeasible {
        required,
        limit: opts.max_colorings,
    };
    if points > BigUint::from(MAX_GRID_POINTS) {
        return Ok(infeasible(format!("{}^{points}", query.c)));
    }
    let len = usize::try_from(&points).expect("bounded above");
    if query.c >= 2 && len > 128 {
        return Ok(infeasible(format!("{}^{len}", query.c)));
    }
    let colorings = BigUint::from(query.c).pow(len as u32);
    if colorings > BigUint::from(opts.max_colorings) {
        return Ok(infeasible(colorings.to_string()));
    }
    let box_count: BigUint = n.iter().map(|&ni| binomial::<BigUint>(ni, query.r)).product();
    if box_count > BigUint::from(MAX_GRID_POINTS) {
        return Ok(infeasible(format!("{box_count} boxes to track")));
    }
    let grid = Grid::new(n, &query.j)?;
    let boxes: Vec<Vec<usize>> = n
        .iter()
        .map(|&ni| enum_k_subsets(ni, query.r).collect::<Vec<_>>())
        .multi_cartesian_product()
        .map(|t| grid.box_points(&t))
        .collect();
    // arity 0: a single empty box choice
    let boxes = if n.is_empty() { vec![grid.box_points(&[])] } else { boxes };
    let to_coloring = |colors: Vec<usize>| ProductColoring {
        sizes: n.to_vec(),
        j: query.j.clone(),
        c: query.c,
        colors: colors.into_iter().map(|x| x + 1).collect(),
    };
    if boxes.is_empty() {
        // no r-subsets at all: any coloring is a counterexample
        return Ok(PropertyOutcome::Fails {
            counterexample: to_coloring(vec![0; grid.len()]),
        });
    }
    if boxes.iter().any(Vec::is_empty) {
        // a box with no points is monochromatic under every coloring
        return Ok(PropertyOutcome::Holds { searched: 0 });
    }
    let mut closing = vec![Vec::new(); grid.len()];
    for b in &boxes {
        closing[*b.last().expect("non-empty")].push(b.clone());
    }
    let pb = Problem {
        c: query.c,
        len: grid.len(),
        closing,
        boxes,
    };
    if !opts.prune {
        return Ok(plain_enumeration(&pb, to_coloring));
    }
    let depth = pb.len.min(prefix_depth(query.c));
    let (prefixes, prefix_nodes) = pb.prefixes(depth);
    let best = AtomicUsize::new(usize::MAX);
    let run = |(i, (prefix, used)): (usize, &(Vec<usize>, usize))| {
        let mut colors = vec![0; pb.len];
        colors[..prefix.len()].copy_from_slice(prefix);
        let mut nodes = 0u128;
        let stop = || best.load(Ordering::Relaxed) < i;
        let found = pb.dfs(prefix.len(), &mut colors, *used, &mut nodes, &stop);
        if found.is_some() {
            best.fetch_min(i, Ordering::Relaxed);
        }
        (found, nodes)
    };
    let results: Vec<(Option<Vec<usize>>, u128)> = if opts.parallel {
        prefixes.par_iter().enumerate().map(run).collect()
    } else {
        let mut out = Vec::with_capacity(prefixes.len());
        for item in prefixes.iter().enumerate() {
            let r = run(item);
            let done = r.0.is_some();
            out.push(r);
            if done {
                break;
            }
        }
        out
    };
    // the first counterexample in prefix order, independent of schedule
    if let Some(found) = results.iter().find_map(|(f, _)| f.clone()) {
        return Ok(PropertyOutcome::Fails {
            counterexample: to_coloring(found),
        });
    }
    let searched = results.iter().map(|(_, k)| k).sum::<u128>() + prefix_nodes;
    Ok(PropertyOutcome::Holds { searched })
}

fn prefix_depth(c: usize) -> usize {
    // aim for a few hundred tasks
    let mut d = 0;
    let mut tasks = 1usize;
    while tasks < 256 && d < 24 {
        tasks = tasks.saturating_mul(c.max(2));
        d += 1;
    }
    d
}

fn plain_enumeration(pb: &Problem, to_coloring: impl Fn(Vec<usize>) -> ProductColoring) -> PropertyOutcome {
    let mut colors = vec![0usize; pb.len];
    let mut searched: u128 = 0;
    loop {
        searched += 1;
        if !pb.has_mono(&colors) {
            return PropertyOutcome::Fails {
                counterexample: to_coloring(colors),
            };
        }
        // odometer, last point fastest
        let mut t = pb.len;
        loop {
            if t == 0 {
                return PropertyOutcome::Holds { searched };
            }
            t -= 1;
            colors[t] += 1;
            if colors[t] < pb.c {
                break;
            }
            colors[t] = 0;
        }
    }
}

/// Outcome of [`search_min_n`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum MinSearch {
    /// least `n` with the property at `(n, …, n)`; `below` refutes `n - 1`
    Exact {
        n: usize,
        searched: u128,
        below: Option<ProductColoring>,
    },
    /// no size up to `cap` was shown to have the property
    UnknownAboveCap { cap: usize },
    /// the search hit the coloring budget at `at` before succeeding
    Infeasible { at: usize, required: String, limit: u128 },
}

/// Least `n <= cap` such that the property holds at `(n, …, n)`.
///
/// The property is monotone in `n`, so the scan stops at the first success.
pub fn search_min_n(query: &RamseyQuery, cap: usize, opts: &SearchOptions) -> Result<MinSearch> {
    let mut below = None;
    for n in 0..=cap {
        let sizes = vec![n; query.arity()];
        match has_property(&sizes, query, opts)? {
            PropertyOutcome::Holds { searched } => {
                return Ok(MinSearch::Exact { n, searched, below })
            }
            PropertyOutcome::Fails { counterexample } => below = Some(counterexample),
            PropertyOutcome::Infeasible { required, limit } => {
                return Ok(MinSearch::Infeasible {
                    at: n,
                    required,
                    limit,
                })
            }
        }
    }
    Ok(MinSearch::UnknownAboveCap { cap })
}

/// Largest argument the hypergraph recursion accepts before giving up.
const MAX_RECURSION_ARG: u64 = 4096;

struct BoundCtx {
    memo: HashMap<(usize, u64, u64), BigUint>,
}

impl BoundCtx {
    fn small(&self, v: &BigUint) -> Result<u64> {
        v.to_u64()
            .filter(|&x| x <= MAX_RECURSION_ARG)
            .ok_or_else(|| Error::Ramsey(format!("bound recursion argument {v} is too large")))
    }

    /// Two colors, `[S]^j`: size forcing a homogeneous `s`-set in color 1 or
    /// a homogeneous `t`-set in color 2.
    fn two(&mut self, j: usize, s: u64, t: u64) -> Result<BigUint> {
        if s.min(t) < j as u64 {
            return Ok(BigUint::from(s.min(t)));
        }
        if s == j as u64 {
            return Ok(BigUint::from(t));
        }
        if t == j as u64 {
            return Ok(BigUint::from(s));
        }
        if let Some(v) = self.memo.get(&(j, s, t)) {
            return Ok(v.clone());
        }
        let v = match j {
            0 => BigUint::from(s.max(t)),
            1 => BigUint::from(s + t - 1),
            2 => {
                // Erdős–Szekeres: C(s+t-2, s-1)
                let n = (s + t - 2) as usize;
                crate::counting::binomial::<BigUint>(n, (s - 1) as usize)
            }
            _ => {
                let a = self.two(j, s - 1, t)?;
                let b = self.two(j, s, t - 1)?;
                let (a, b) = (self.small(&a)?, self.small(&b)?);
                self.two(j - 1, a, b)? + 1u32
            }
        };
        self.memo.insert((j, s, t), v.clone());
        Ok(v)
    }

    /// One coordinate, `c` colors.
    fn single(&mut self, j: usize, c: &BigUint, r: u64) -> Result<BigUint> {
        if (r as usize) < j || c.is_one() || j == 0 {
            return Ok(BigUint::from(r));
        }
        if j == 1 {
            return Ok(c * (r - 1) + 1u32);
        }
        if *c == BigUint::from(2u32) {
            return self.two(j, r, r);
        }
        // merge colors in pairs, then split each merged class
        let m = self.two(j, r, r)?;
        let m = self.small(&m)?;
        let half = (c + 1u32) / 2u32;
        self.single(j, &half, m)
    }
}

/// A size `N` such that the property holds at `(N, …, N)`.
///
/// Colors are merged two at a time; coordinates are added one at a time,
/// treating the coloring of the earlier coordinates as a color of the new
/// one. The classical two-color recurrences serve as base cases. The value
/// is sufficient by construction but far from optimal; errors only when an
/// intermediate argument outgrows the recursion.
pub fn upper_bound_r(query: &RamseyQuery) -> Result<BigUint> {
    let r = query.r as u64;
    let js: Vec<usize> = query.j.iter().copied().filter(|&x| x > 0).collect();
    if js.is_empty() || js.iter().any(|&x| x > query.r) || query.c == 1 {
        return Ok(BigUint::from(r));
    }
    let mut ctx = BoundCtx { memo: HashMap::new() };
    let c = BigUint::from(query.c);
    let mut k = ctx.single(js[0], &c, r)?;
    for idx in 1..js.len() {
        // colors of the new coordinate: colorings of the K-grid so far
        let ks = ctx.small(&k)? as usize;
        let mut cells = BigUint::one();
        for &ji in &js[..idx] {
            cells *= binomial::<BigUint>(ks, ji);
        }
        let cells = cells
            .to_u32()
            .filter(|&x| x <= 1 << 20)
            .ok_or_else(|| Error::Ramsey("pattern count is too large".into()))?;
        let patterns = c.pow(cells);
        if js[idx] > 1 && patterns.bits() > 64 {
            return Err(Error::Ramsey("pattern count is too large".into()));
        }
        let n = ctx.single(js[idx], &patterns, r)?;
        k = k.max(n);
    }
    if k.is_zero() {
        return Ok(BigUint::from(r));
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(j: &[usize], c: usize, r: usize) -> RamseyQuery {
        RamseyQuery::new(j.to_vec(), c, r).unwrap()
    }

    fn set(v: &[usize]) -> FiniteSubset {
        FiniteSubset::from_elements(v.iter().copied())
    }

    fn pentagon() -> ProductColoring {
        ProductColoring::from_fn(vec![5], vec![2], 2, |p| {
            let e = p[0].elements();
            let d = (e[1] - e[0]).min(5 - (e[1] - e[0]));
            if d == 1 {
                1
            } else {
                2
            }
        })
        .unwrap()
    }

    #[test]
    fn witness_examples() {
        let k = ProductColoring::from_fn(vec![4], vec![2], 3, |_| 2).unwrap();
        assert!(check_witness(&k, &[set(&[0, 1, 3])], 2).unwrap());
        assert!(!check_witness(&pentagon(), &[set(&[0, 1, 2])], 1).unwrap());
        let p = pentagon();
        let pt = vec![set(&[1, 3])];
        let own = p.color_of(&pt).unwrap();
        assert!(check_witness(&p, &pt, own).unwrap());
        assert!(check_witness(&p, &[set(&[0, 7])], 1).is_err());
    }

    #[test]
    fn property_examples() {
        let o = SearchOptions::default();
        assert_eq!(has_property(&[6], &q(&[2], 2, 3), &o).unwrap().holds(), Some(true));
        assert_eq!(has_property(&[5], &q(&[2], 2, 3), &o).unwrap().holds(), Some(false));
        assert_eq!(has_property(&[3], &q(&[1], 2, 2), &o).unwrap().holds(), Some(true));
    }

    #[test]
    fn plain_and_pruned_agree() {
        let plain = SearchOptions { prune: false, ..Default::default() };
        let par = SearchOptions { parallel: true, ..Default::default() };
        for (n, query) in [(5, q(&[2], 2, 3)), (6, q(&[2], 2, 3)), (4, q(&[1], 3, 2)), (3, q(&[1, 1], 2, 2))] {
            let sizes = vec![n; query.arity()];
            let a = has_property(&sizes, &query, &SearchOptions::default()).unwrap();
            let b = has_property(&sizes, &query, &plain).unwrap();
            let c = has_property(&sizes, &query, &par).unwrap();
            assert_eq!(a.holds(), b.holds(), "{query:?} at {n}");
            assert_eq!(a, c);
        }
    }

    #[test]
    fn counterexample_has_no_mono_box() {
        let o = has_property(&[5], &q(&[2], 2, 3), &SearchOptions::default()).unwrap();
        let PropertyOutcome::Fails { counterexample } = o else { panic!("{o:?}") };
        for t in enum_k_subsets(5, 3) {
            for d in 1..=2 {
                assert!(!check_witness(&counterexample, std::slice::from_ref(&t), d).unwrap());
            }
        }
    }

    #[test]
    fn minimal_sizes() {
        let o = SearchOptions::default();
        match search_min_n(&q(&[2], 2, 3), 7, &o).unwrap() {
            MinSearch::Exact { n, below, .. } => {
                assert_eq!(n, 6);
                assert_eq!(below.unwrap().sizes, vec![5]);
            }
            other => panic!("{other:?}"),
        }
        let exact = |query: &RamseyQuery| match search_min_n(query, 12, &o).unwrap() {
            MinSearch::Exact { n, .. } => n,
            other => panic!("{other:?}"),
        };
        assert_eq!(exact(&q(&[1], 2, 3)), 5);
        assert_eq!(exact(&q(&[3], 4, 3)), 3);
    }

    #[test]
    fn bounds() {
        for c in 1..=3 {
            for r in 1..=4 {
                assert_eq!(upper_bound_r(&q(&[1], c, r)).unwrap(), BigUint::from(c * (r - 1) + 1));
            }
        }
        assert_eq!(upper_bound_r(&q(&[2], 2, 3)).unwrap(), BigUint::from(6u32));
        assert_eq!(upper_bound_r(&q(&[0, 0], 3, 4)).unwrap(), BigUint::from(4u32));
        assert_eq!(upper_bound_r(&q(&[1, 1], 2, 2)).unwrap(), BigUint::from(9u32));
        assert!(upper_bound_r(&q(&[3], 2, 4)).unwrap() >= BigUint::from(4u32));
    }

    #[test]
    fn over_budget_is_an_outcome() {
        let o = SearchOptions { max_colorings: 1000, ..Default::default() };
        assert!(matches!(
            has_property(&[6], &q(&[2], 2, 3), &o).unwrap(),
            PropertyOutcome::Infeasible { .. }
        ));
    }
}
