mod common;

use std::collections::BTreeSet;

use finpart::counting::{assoc_stirling, count_b_n, count_disjoint_tuples, count_o_n};
use finpart::{
    canonicalize_partition, enum_b_fin, enum_b_n, enum_disjoint_tuples, enum_k_subsets, enum_o_n,
    Count, FiniteSubset, SizeProfile,
};

use common::{all_set_partitions, brute_assoc_stirling, brute_space, label_tuples};

fn profiles_up_to(total: usize) -> Vec<Vec<usize>> {
    // all compositions with at most 3 parts (parts may be 0) and sum <= total
    let mut out = vec![vec![]];
    for n in 1..=3 {
        let mut cur = vec![0; n];
        loop {
            if cur.iter().sum::<usize>() <= total {
                out.push(cur.clone());
            }
            let mut i = 0;
            loop {
                if i == n {
                    break;
                }
                cur[i] += 1;
                if cur[i] <= total {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    out
}

#[test]
fn o_n_size_is_power() {
    for a in 0..=6 {
        for n in 0..=3 {
            let all: Vec<_> = enum_o_n(a, n, None).collect();
            let distinct: BTreeSet<_> = all.iter().cloned().collect();
            assert_eq!(all.len(), (n + 1).pow(a as u32), "a={a} n={n}");
            assert_eq!(distinct.len(), all.len());
            assert_eq!(count_o_n::<u64>(a, n), all.len() as u64);
            assert_eq!(distinct.len(), label_tuples(a, n).len());
        }
    }
}

#[test]
fn o_n_cap_limits_components() {
    for t in enum_o_n(5, 2, Some(1)) {
        assert!(t.components().iter().all(|c| c.len() <= 1));
    }
    assert_eq!(enum_o_n(5, 2, Some(1)).count(), 1 + 5 * 2 + 5 * 4);
}

#[test]
fn disjoint_tuples_match_count_and_oracle() {
    for a in 0..=6 {
        for m in profiles_up_to(a) {
            let profile = SizeProfile::from(m.clone());
            let got: Vec<_> = enum_disjoint_tuples(a, &profile).collect();
            let want = count_disjoint_tuples::<u64>(a, &m);
            assert_eq!(got.len() as u64, want, "a={a} m={m:?}");
            // lexicographic and duplicate-free
            assert!(got.windows(2).all(|w| w[0] < w[1]), "order a={a} m={m:?}");
            if a <= 5 {
                assert_eq!(got, brute_space(a, &m));
            }
            for t in &got {
                assert_eq!(t.profile(), profile);
                t.check_within(a).unwrap();
            }
        }
    }
}

#[test]
fn b_n_matches_count_and_oracle() {
    for a in 0..=7 {
        let all = all_set_partitions(a);
        for n in 0..=3 {
            let got: Vec<_> = enum_b_n(a, n).collect();
            let distinct: BTreeSet<_> = got.iter().cloned().collect();
            assert_eq!(distinct.len(), got.len());
            assert_eq!(Count::from(got.len()), count_b_n::<Count>(a, n), "a={a} n={n}");
            let want = all
                .iter()
                .filter(|p| p.iter().filter(|b| b.len() >= 2).count() == n)
                .count();
            assert_eq!(got.len(), want);
            for p in &got {
                assert_eq!(p.ns_count(), n);
                let rebuilt = canonicalize_partition(a, p.blocks().to_vec()).unwrap();
                assert_eq!(&rebuilt, p);
            }
        }
    }
}

#[test]
fn b_fin_is_every_partition() {
    for a in 0..=6 {
        assert_eq!(enum_b_fin(a).count(), all_set_partitions(a).len());
    }
}

#[test]
fn assoc_stirling_against_partitions() {
    for (j, n, v) in [(4, 2, 3u64), (5, 2, 10), (3, 2, 0)] {
        assert_eq!(assoc_stirling::<u64>(j, n), v);
        assert_eq!(brute_assoc_stirling(j, n) as u64, v);
    }
    for j in 0..=8 {
        for n in 0..=4 {
            assert_eq!(assoc_stirling::<u64>(j, n), brute_assoc_stirling(j, n) as u64, "j={j} n={n}");
        }
    }
}

#[test]
fn k_subsets_lexicographic() {
    for a in 0..=7 {
        for k in 0..=a + 1 {
            let v: Vec<FiniteSubset> = enum_k_subsets(a, k).collect();
            assert_eq!(v.len() as u64, finpart::counting::binomial::<u64>(a, k));
            assert!(v.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn wide_counts_need_big_integers() {
    let big = count_b_n::<Count>(200, 3);
    assert!(big > Count::from(u64::MAX));
}
