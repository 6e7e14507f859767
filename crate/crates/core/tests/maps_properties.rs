mod common;

use std::collections::BTreeSet;

use finpart::maps::{
    bfin_map, disjoint_to_fin, fin_to_disjoint, ns_injection, signature_classes, tuple_to_partition,
};
use finpart::symmetry::{apply_perm, Permutable};
use finpart::{enum_b_fin, enum_b_n, enum_fin, enum_o_n, FiniteSubset};
use itertools::Itertools;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_perm, random_subset};

fn fin_power(a: usize, n: usize) -> Vec<Vec<FiniteSubset>> {
    (0..n).map(|_| enum_fin(a).collect::<Vec<_>>()).multi_cartesian_product().collect()
}

#[test]
fn fin_power_round_trip() {
    for a in 0..=5 {
        for n in 1..=3 {
            let seqs = fin_power(a, n);
            assert_eq!(seqs.len(), 1 << (a * n));
            let mut images = BTreeSet::new();
            for s in &seqs {
                let q = fin_to_disjoint(s).unwrap();
                assert_eq!(q.arity(), (1 << n) - 1);
                assert_eq!(disjoint_to_fin(&q, n).unwrap(), *s);
                images.insert(q);
            }
            // bijective onto O_{2^n - 1}(A)
            let space: BTreeSet<_> = enum_o_n(a, (1 << n) - 1, None).collect();
            assert_eq!(images, space, "a={a} n={n}");
            for q in &space {
                assert_eq!(&fin_to_disjoint(&disjoint_to_fin(q, n).unwrap()).unwrap(), q);
            }
        }
    }
}

#[test]
fn cardinality_identity() {
    for a in 0..=4 {
        for n in 1..=3u32 {
            let lhs = enum_fin(a).count().pow(n);
            let rhs = enum_o_n(a, (1 << n) - 1, None).count();
            assert_eq!(lhs, rhs);
            assert_eq!(lhs, (1usize << n).pow(a as u32));
        }
    }
}

#[test]
fn disjoint_to_fin_rejects_wrong_arity() {
    let q = fin_to_disjoint(&[FiniteSubset::empty()]).unwrap();
    assert!(disjoint_to_fin(&q, 2).is_err());
}

#[test]
fn tuple_to_partition_onto_b_n() {
    for a in 0..=5 {
        for n in 0..=2 {
            let image: BTreeSet<_> = enum_o_n(a, n, None)
                .filter_map(|p| {
                    let (part, lands) = tuple_to_partition(a, &p).unwrap();
                    lands.then_some(part)
                })
                .collect();
            let target: BTreeSet<_> = enum_b_n(a, n).collect();
            assert_eq!(image, target, "a={a} n={n}");
        }
    }
}

#[test]
fn ns_is_injective() {
    for a in 0..=5 {
        let all: Vec<_> = enum_b_fin(a).collect();
        let images: BTreeSet<_> = all.iter().map(ns_injection).collect();
        assert_eq!(images.len(), all.len());
    }
}

#[test]
fn bfin_lands_in_b_2n_minus_1() {
    let a = 6;
    let subsets: Vec<_> = enum_fin(a).collect();
    for n in 1..=2 {
        for s in subsets.iter().cloned().combinations(n) {
            if let Ok(p) = bfin_map(a, &s).unwrap() {
                assert_eq!(p.ns_count(), (1 << n) - 1);
            }
        }
    }
}

#[test]
fn signature_classes_partition_ground() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let a = 7;
        let sets: Vec<_> = (0..3).map(|_| random_subset(a, &mut rng)).collect();
        let c = signature_classes(a, &sets).unwrap();
        let mut seen = BTreeSet::new();
        for class in c.classes() {
            for x in class.iter() {
                assert!(seen.insert(x));
            }
        }
        assert_eq!(seen.len(), a);
        for (sig, class) in &c.inside {
            for x in class.iter() {
                for (i, s) in sets.iter().enumerate() {
                    assert_eq!(s.contains(x), sig.contains(i + 1));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn maps_are_equivariant(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = 7;
        let pi = random_perm(a, &mut rng);
        let s: Vec<FiniteSubset> = (0..n).map(|_| random_subset(a, &mut rng)).collect();

        let q = fin_to_disjoint(&s).unwrap();
        prop_assert_eq!(fin_to_disjoint(&apply_perm(&pi, &s)).unwrap(), q.permute(&pi));
        prop_assert_eq!(disjoint_to_fin(&q.permute(&pi), n).unwrap(), s.permute(&pi));

        let (p, lands) = tuple_to_partition(a, &q).unwrap();
        let (pp, lands2) = tuple_to_partition(a, &q.permute(&pi)).unwrap();
        prop_assert_eq!(pp, p.permute(&pi));
        prop_assert_eq!(lands, lands2);

        prop_assert_eq!(ns_injection(&p.permute(&pi)), ns_injection(&p).permute(&pi));

        let image = bfin_map(a, &s).unwrap();
        let moved = bfin_map(a, &s.permute(&pi)).unwrap();
        prop_assert_eq!(moved.map_err(|_| ()), image.map(|p| p.permute(&pi)).map_err(|_| ()));

        let c = signature_classes(a, &s).unwrap();
        let cm = signature_classes(a, &s.permute(&pi)).unwrap();
        prop_assert_eq!(cm.outside, c.outside.permute(&pi));
        for (sig, class) in &c.inside {
            prop_assert_eq!(&cm.inside[sig], &class.permute(&pi));
        }
    }
}
