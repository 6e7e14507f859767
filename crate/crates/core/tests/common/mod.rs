//! Brute-force oracles written straight from the definitions. They share no
//! code with the library beyond its value types.
#![allow(dead_code)]

use std::collections::BTreeSet;

use finpart::symmetry::Permutation;
use finpart::{DisjointTuple, FiniteSubset};
use rand::seq::SliceRandom;
use rand::Rng;

/// Every set partition of `{0..a-1}` via restricted growth strings, blocks
/// sorted by least element.
pub fn all_set_partitions(a: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, a: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == a {
            let k = rgs.iter().max().map_or(0, |m| m + 1);
            let mut blocks = vec![Vec::new(); k];
            for (x, &b) in rgs.iter().enumerate() {
                blocks[b].push(x);
            }
            out.push(blocks);
            return;
        }
        let k = rgs.iter().max().map_or(0, |m| m + 1);
        for b in 0..=k {
            rgs.push(b);
            go(i + 1, a, rgs, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    go(0, a, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `{0..j-1}` into exactly `n` blocks, each of size >= 2.
pub fn brute_assoc_stirling(j: usize, n: usize) -> usize {
    all_set_partitions(j)
        .into_iter()
        .filter(|p| p.len() == n && p.iter().all(|b| b.len() >= 2))
        .count()
}

/// All tuples of `n` disjoint subsets via label vectors: each element picks
/// a component or none.
pub fn label_tuples(a: usize, n: usize) -> Vec<Vec<Vec<usize>>> {
    let total = (n + 1).pow(a as u32);
    (0..total)
        .map(|mut code| {
            let mut comps = vec![Vec::new(); n];
            for x in 0..a {
                let l = code % (n + 1);
                code /= n + 1;
                if l > 0 {
                    comps[l - 1].push(x);
                }
            }
            comps
        })
        .collect()
}

pub fn tuple(comps: &[Vec<usize>]) -> DisjointTuple {
    DisjointTuple::new(
        comps
            .iter()
            .map(|c| FiniteSubset::from_elements(c.iter().copied()))
            .collect(),
    )
    .unwrap()
}

/// `O_m(A)` by filtering label vectors.
pub fn brute_space(a: usize, m: &[usize]) -> Vec<DisjointTuple> {
    let mut v: Vec<DisjointTuple> = label_tuples(a, m.len())
        .into_iter()
        .filter(|c| c.iter().map(Vec::len).eq(m.iter().copied()))
        .map(|c| tuple(&c))
        .collect();
    v.sort();
    v
}

pub fn below(p: &DisjointTuple, q: &DisjointTuple) -> bool {
    p.components()
        .iter()
        .zip(q.components())
        .all(|(x, y)| x.iter().all(|e| y.contains(e)))
}

pub fn brute_gamma(a: usize, x: &BTreeSet<DisjointTuple>, l: &[usize]) -> BTreeSet<DisjointTuple> {
    brute_space(a, l)
        .into_iter()
        .filter(|q| x.iter().any(|p| below(p, q)))
        .collect()
}

pub fn brute_alpha(a: usize, m: &[usize], x: &BTreeSet<DisjointTuple>, l: &[usize]) -> BTreeSet<DisjointTuple> {
    let g = brute_gamma(a, x, l);
    let ext = brute_space(a, l);
    brute_space(a, m)
        .into_iter()
        .filter(|p| ext.iter().filter(|q| below(p, q)).all(|q| g.contains(q)))
        .collect()
}

pub fn random_perm<R: Rng>(a: usize, rng: &mut R) -> Permutation {
    let mut v: Vec<usize> = (0..a).collect();
    v.shuffle(rng);
    Permutation::from_images(v).unwrap()
}

pub fn random_subset<R: Rng>(a: usize, rng: &mut R) -> FiniteSubset {
    FiniteSubset::from_elements((0..a).filter(|_| rng.gen_bool(0.5)))
}
