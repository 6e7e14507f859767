use std::collections::BTreeSet;
use std::time::Instant;

use finpart::coding::{
    check_signature_contract, decode_seq_family, decode_seq_partitions, encode_seq_family,
    materialize_seq, slot_space, Coder, CodingConfig, FinSequence, IndexedFamily,
    SeqCodingConfig, SizeSignature, Slot,
};
use finpart::operators::{ClosureEngine, ExplicitClosure, ProfilePair};
use finpart::symmetry::{is_support, stabilizer_orbits};
use finpart::{FamilyMask, FiniteSubset, SizeProfile};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn compact12() -> CodingConfig {
    CodingConfig::compact(12, 1, vec![Slot::new(0, vec![1])])
}

/// A random union of orbits of the pointwise stabilizer of a random `E`.
fn supported_family<R: Rng>(cfg: &CodingConfig, e_max: usize, rng: &mut R) -> (IndexedFamily, FiniteSubset) {
    let mut pool: Vec<usize> = (0..cfg.ground).collect();
    pool.shuffle(rng);
    let e = FiniteSubset::from_elements(pool[..rng.gen_range(0..=e_max)].iter().copied());
    let mut x = IndexedFamily::empty(cfg.ground, cfg.arity);
    for slot in &cfg.slots {
        let space = slot_space(cfg, slot);
        let mut mask = space.empty_mask();
        for orbit in stabilizer_orbits(&space, &e) {
            if rng.gen_bool(0.5) {
                mask.union_with(&orbit);
            }
        }
        x.set_slice(slot.j, &slot.profile, space.tuples_of(&mask).cloned());
    }
    (x, e)
}

fn check_round_trip(coder: &Coder, x: &IndexedFamily, materialize_limit: u128) {
    let (book, traces) = coder.encode_traced(x).unwrap();
    for t in &traces {
        assert_eq!(t.residual(), 0, "slot {:?} not nilpotent: {:?}", t.slot, t.delta_sizes);
    }
    assert_eq!(&coder.decode_book(&book).unwrap(), x);
    if materialize_limit > 0 && coder.partition_count(&book, 50_000_000).unwrap() <= materialize_limit {
        let h = coder.materialize(&book).unwrap();
        let n = coder.config().arity;
        assert!(h.iter().all(|p| p.ns_count() == n));
        assert_eq!(&coder.decode_partitions(&h).unwrap(), x);
    }
}

#[test]
fn all_families_compact_single_slot() {
    let cfg = compact12();
    let coder = Coder::new(cfg.clone()).unwrap();
    let slot = &cfg.slots[0];
    let space = slot_space(&cfg, slot);
    let start = Instant::now();
    for bits in 0u32..1 << 12 {
        let mut mask = FamilyMask::with_capacity(12);
        (0..12).filter(|i| bits >> i & 1 == 1).for_each(|i| mask.insert(i));
        let mut x = IndexedFamily::empty(12, 1);
        x.set_slice(0, &slot.profile, space.tuples_of(&mask).cloned());
        let limit = if bits % 97 == 0 { 200_000 } else { 0 };
        check_round_trip(&coder, &x, limit);
    }
    eprintln!("4096 families in {:?}", start.elapsed());
}

#[test]
fn two_slot_supported_families() {
    let cfg = CodingConfig::compact(24, 1, vec![Slot::new(0, vec![2]), Slot::new(1, vec![1])]);
    cfg.validate().unwrap();
    let coder = Coder::new(cfg.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let (x, e) = supported_family(&cfg, 3, &mut rng);
        for slot in &cfg.slots {
            let slice: BTreeSet<_> = x.slice(slot.j, &slot.profile).cloned().collect();
            assert!(is_support(24, &e, &slice));
        }
        check_round_trip(&coder, &x, 0);
    }
}

#[test]
fn two_component_profile() {
    let cfg = CodingConfig::compact(22, 2, vec![Slot::new(0, vec![1, 1])]);
    cfg.validate().unwrap();
    let coder = Coder::new(cfg.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..3 {
        let (x, _) = supported_family(&cfg, 3, &mut rng);
        check_round_trip(&coder, &x, 0);
    }
}

#[test]
fn encoded_books_are_closed() {
    let cfg = compact12();
    let coder = Coder::new(cfg.clone()).unwrap();
    let slot = &cfg.slots[0];
    let g = cfg.top_sizes(slot).unwrap();
    let top = ExplicitClosure::new(12, ProfilePair::new(slot.profile.clone(), g).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let mut x = IndexedFamily::empty(12, 1);
        for e in (0..12).filter(|_| rng.gen_bool(0.4)) {
            x.insert(0, finpart::DisjointTuple::from_lists(&[&[e]]).unwrap());
        }
        let book = coder.encode(&x).unwrap();
        for (key, ys) in book.entries() {
            let f = cfg.sizes(slot, key.k).unwrap();
            let lower = ExplicitClosure::new(12, ProfilePair::new(slot.profile.clone(), f).unwrap()).unwrap();
            let y = top.domain().mask_from(ys).unwrap();
            assert_eq!(top.alpha(&y), y, "k = {} not closed at g", key.k);
            assert_eq!(lower.alpha(&y), y, "k = {} not closed at f(k)", key.k);
        }
    }
}

#[test]
fn prime_power_signature_contract() {
    let mut slots = Vec::new();
    for j in 0..=2 {
        for n in 1..=2 {
            for profile in itertools::repeat_n(1..=2usize, n).multi_cartesian_product() {
                slots.push(Slot::new(j, profile));
            }
        }
    }
    check_signature_contract(&SizeSignature::PrimePower, &slots).unwrap();
    let cfg = CodingConfig::new(0, 1, SizeSignature::PrimePower, vec![Slot::new(0, vec![1])]);
    let s = &cfg.slots[0];
    assert_eq!(cfg.sizes(s, 0).unwrap(), SizeProfile::from(vec![10]));
    assert_eq!(cfg.sizes(s, 1).unwrap(), SizeProfile::from(vec![70]));
}

#[test]
fn compact_contract_for_planned_configs() {
    for cfg in [
        compact12(),
        CodingConfig::compact(24, 1, vec![Slot::new(0, vec![2]), Slot::new(1, vec![1])]),
        CodingConfig::compact(22, 2, vec![Slot::new(0, vec![1, 1])]),
    ] {
        check_signature_contract(&cfg.signature, &cfg.slots).unwrap();
    }
}

#[test]
fn sequence_families() {
    let mut cfg = SeqCodingConfig { ground: 12, configs: Default::default() };
    cfg.configs.insert(1, compact12());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for round in 0..20 {
        let mut w: BTreeSet<FinSequence> = BTreeSet::new();
        if round % 2 == 0 {
            w.insert(Vec::new());
        }
        for e in 0..12 {
            if rng.gen_bool(0.3) {
                w.insert(vec![FiniteSubset::from_elements([e])]);
            }
        }
        let code = encode_seq_family(&w, &cfg).unwrap();
        assert_eq!(decode_seq_family(&code, &cfg).unwrap(), w);
        if w.len() <= 3 {
            let h = materialize_seq(&code, &cfg).unwrap();
            assert_eq!(decode_seq_partitions(&h, &cfg).unwrap(), w);
        }
    }
}
