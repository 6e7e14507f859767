use finpart::enum_k_subsets;
use finpart::ramsey::{
    check_witness, has_property, search_min_n, upper_bound_r, MinSearch, ProductColoring,
    PropertyOutcome, RamseyQuery, SearchOptions,
};
use finpart::FiniteSubset;
use itertools::Itertools;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Oracle: try every choice of `r`-subsets and every color.
fn has_mono_box(col: &ProductColoring, r: usize) -> bool {
    let choices: Vec<Vec<FiniteSubset>> = col.sizes.iter().map(|&n| enum_k_subsets(n, r).collect()).collect();
    choices.iter().multi_cartesian_product().any(|t| {
        let t: Vec<FiniteSubset> = t.into_iter().cloned().collect();
        (1..=col.c).any(|d| check_witness(col, &t, d).unwrap())
    }) || (col.sizes.is_empty() && col.c >= 1)
}

fn odometer_oracle(sizes: &[usize], q: &RamseyQuery) -> bool {
    let grid = finpart::ramsey::Grid::new(sizes, &q.j).unwrap();
    let len = grid.len();
    let total = (q.c as u64).pow(len as u32);
    (0..total).all(|mut code| {
        let colors = (0..len)
            .map(|_| {
                let d = (code % q.c as u64) as usize + 1;
                code /= q.c as u64;
                d
            })
            .collect();
        let col = ProductColoring::new(sizes.to_vec(), q.j.clone(), q.c, colors).unwrap();
        has_mono_box(&col, q.r)
    })
}

fn plain() -> SearchOptions {
    SearchOptions { prune: false, ..Default::default() }
}

#[test]
fn search_modes_agree_with_oracle() {
    let cases = [
        (vec![1], 2, 2, vec![vec![2], vec![3], vec![4]]),
        (vec![1, 1], 2, 2, vec![vec![2, 2], vec![3, 2], vec![3, 3]]),
        (vec![2], 2, 3, vec![vec![4], vec![5]]),
        (vec![1, 1], 3, 1, vec![vec![1, 1]]),
        (vec![1], 3, 2, vec![vec![3], vec![4]]),
    ];
    for (j, c, r, sizes) in cases {
        let q = RamseyQuery::new(j, c, r).unwrap();
        for n in sizes {
            let want = odometer_oracle(&n, &q);
            for opts in [SearchOptions::default(), plain(), SearchOptions { parallel: true, ..Default::default() }] {
                let out = has_property(&n, &q, &opts).unwrap();
                assert_eq!(out.holds(), Some(want), "{q:?} at {n:?} opts {opts:?}");
                if let PropertyOutcome::Fails { counterexample } = out {
                    assert!(!has_mono_box(&counterexample, r));
                }
            }
        }
    }
}

#[test]
fn serial_and_parallel_counterexamples_coincide() {
    let q = RamseyQuery::new(vec![1, 1], 2, 2).unwrap();
    let s = has_property(&[3, 2], &q, &SearchOptions::default()).unwrap();
    let p = has_property(&[3, 2], &q, &SearchOptions { parallel: true, ..Default::default() }).unwrap();
    assert_eq!(s, p);
}

#[test]
fn monotone_in_sizes() {
    let q = RamseyQuery::new(vec![1, 1], 2, 2).unwrap();
    let mut seen_hold = false;
    for n in 1..=5 {
        let h = has_property(&[n, n], &q, &SearchOptions::default()).unwrap().holds().unwrap();
        assert!(!seen_hold || h, "property lost at {n}");
        seen_hold |= h;
    }
    assert!(seen_hold);
}

#[test]
fn classical_values() {
    let q = RamseyQuery::new(vec![2], 2, 3).unwrap();
    match search_min_n(&q, 6, &SearchOptions::default()).unwrap() {
        MinSearch::Exact { n, below, .. } => {
            assert_eq!(n, 6);
            assert!(!has_mono_box(&below.unwrap(), 3));
        }
        other => panic!("{other:?}"),
    }
    let q = RamseyQuery::new(vec![1], 3, 2).unwrap();
    assert!(matches!(search_min_n(&q, 10, &SearchOptions::default()).unwrap(), MinSearch::Exact { n: 4, .. }));
}

#[test]
fn bounds_are_sound_where_checkable() {
    for (j, c, r) in [(vec![1], 2, 2), (vec![1], 3, 2), (vec![2], 2, 3), (vec![1, 1], 2, 2), (vec![2], 2, 2)] {
        let q = RamseyQuery::new(j, c, r).unwrap();
        let bound = upper_bound_r(&q).unwrap();
        let n: usize = bound.to_string().parse().unwrap();
        let opts = SearchOptions { max_colorings: 1 << 40, ..Default::default() };
        match has_property(&vec![n; q.arity()], &q, &opts).unwrap() {
            PropertyOutcome::Holds { .. } => {}
            PropertyOutcome::Infeasible { .. } => {}
            other => panic!("bound {n} for {q:?} refuted: {other:?}"),
        }
    }
    assert_eq!(upper_bound_r(&RamseyQuery::new(vec![2], 2, 3).unwrap()).unwrap(), BigUint::from(6u32));
}

#[test]
fn budget_is_reported() {
    let q = RamseyQuery::new(vec![2], 2, 4).unwrap();
    let out = has_property(&[10], &q, &SearchOptions::default()).unwrap();
    assert!(matches!(out, PropertyOutcome::Infeasible { .. }));
}

#[test]
fn witness_agrees_with_recomputation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let sizes = vec![rng.gen_range(2..5), rng.gen_range(2..5)];
        let j = vec![1, rng.gen_range(1..3)];
        let c = rng.gen_range(1..4);
        let len = finpart::ramsey::Grid::new(&sizes, &j).unwrap().len();
        let colors = (0..len).map(|_| rng.gen_range(1..=c)).collect();
        let col = ProductColoring::new(sizes.clone(), j.clone(), c, colors).unwrap();
        let r = 2;
        let t: Vec<FiniteSubset> = sizes
            .iter()
            .map(|&n| FiniteSubset::from_elements((0..n).filter(|_| rng.gen_bool(0.5)).take(r)))
            .collect();
        if t.iter().any(|x| x.len() != r) {
            continue;
        }
        let d = rng.gen_range(1..=c);
        let grid = col.grid();
        let by_hand = (0..grid.len()).filter(|&i| {
            let p = grid.point(i);
            p.iter().zip(&t).all(|(s, ti)| s.is_subset(ti))
        });
        let want = by_hand.clone().all(|i| col.colors[i] == d);
        assert_eq!(check_witness(&col, &t, d).unwrap(), want);
    }
}
