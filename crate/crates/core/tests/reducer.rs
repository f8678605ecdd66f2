use std::collections::HashSet;

use proptest::prelude::*;
use sl3_core::generators::enumerate_minimal_set;
use sl3_core::identities::rank2sum;
use sl3_core::mat3::{random_exact_rep, trace_of_word};
use sl3_core::reducer::*;
use sl3_core::trpoly::TracePolynomial;
use sl3_core::word::{CyclicKey, Word};

fn key(u: &[i32]) -> CyclicKey {
    CyclicKey::from_units(u)
}

fn basis(r: usize) -> HashSet<CyclicKey> {
    enumerate_minimal_set(r).unwrap().into_iter().map(|g| g.key).collect()
}

#[test]
fn commutator_fixture() {
    let p = reduce_to_minimal(&TracePolynomial::t(&[2, 1, -2, -1]), 2).unwrap();
    assert_eq!(p, rank2sum().1);
}

#[test]
fn minimal_generators_are_fixed() {
    for r in 1..=3 {
        for g in enumerate_minimal_set(r).unwrap() {
            let p = TracePolynomial::symbol(g.key.clone());
            assert_eq!(reduce_to_minimal(&p, r).unwrap(), p, "{}", g.key);
            assert_eq!(classify(&g.key), Some(g.ty));
        }
    }
}

#[test]
fn classify_examples() {
    assert_eq!(classify(&key(&[1])), Some(GeneratorType::X));
    assert_eq!(classify(&key(&[-1])), Some(GeneratorType::XInv));
    assert_eq!(classify(&key(&[1, 2, -1, -2])), Some(GeneratorType::Commutator));
    assert_eq!(classify(&key(&[1, 2, 3, 4, 5, 6])), Some(GeneratorType::UVWXYZ));
    assert_eq!(classify(&key(&[1, 1])), None);
    assert_eq!(classify(&key(&[1, 2, 1, 3])), None);
    assert_eq!(classify(&CyclicKey::empty()), None);
}

#[test]
fn measure_orders_rewrites() {
    assert!(measure(&key(&[1, 2])) < measure(&key(&[1, 1, 2])));
    assert!(measure(&key(&[1, 2, 3])) < measure(&key(&[1, 2, 1, 3])));
    assert!(measure(&key(&[1, -2])) < measure(&key(&[1, 2, 3, 4])));
}

#[test]
fn letters_beyond_rank_are_rejected() {
    let e = reduce_to_minimal(&TracePolynomial::t(&[1, 3]), 2).unwrap_err();
    assert!(matches!(e, ReduceError::IndexOutOfRange { index: 3, r: 2 }));
}

#[test]
fn every_type_keeps_its_multiplier() {
    for ty in GeneratorType::ALL {
        let kept = kept_forms(ty).unwrap();
        assert_eq!(kept.len() as u64, ty.multiplier(), "{}", ty.pattern());
        assert!(kept.iter().all(|k| classify(k) == Some(ty)));
    }
}

#[test]
fn class_ranks() {
    let c = class_rules(&[1, 1, 1, 1, 1]).unwrap();
    assert_eq!((c.columns.len(), c.rank, c.kept.len()), (24, 12, 12));
    let c = class_rules(&[1, 1, 1, 1, 2]).unwrap();
    assert_eq!((c.columns.len(), c.relations.len(), c.rank, c.kept.len()), (24, 17, 17, 7));
    let c = class_rules(&[1, 1, 1, 1, 1, 1]).unwrap();
    assert_eq!((c.columns.len(), c.relations.len(), c.rank, c.kept.len()), (120, 120, 105, 15));
    let c = class_rules(&[3, 1, 1, 1]).unwrap();
    assert_eq!(c.kept.len(), 2);
}

#[test]
fn replacements_hold_exactly() {
    for pattern in [vec![1, 1, 1, 1], vec![1, 1, 1, 2], vec![1, 1, 2, 2], vec![3, 1, 1, 1], vec![2, 2, 2]] {
        let c = class_rules(&pattern).unwrap();
        for k in c.removed() {
            let rep = c.replacement(&k).unwrap();
            for seed in 0..3 {
                let m = random_exact_rep(seed, pattern.len());
                assert_eq!(rep.evaluate(&m).unwrap(), trace_of_word(&m, &k.word()).unwrap(), "{}", k);
            }
        }
    }
}

#[test]
fn tier2_rules_cover_removed_columns() {
    let rules = tier2_rules(4).unwrap();
    let w = basis(4);
    for rule in &rules {
        assert!(!w.contains(&rule.removed.key));
    }
    // 2 commutator-class forms per pair, one removed
    let comm = rules.iter().filter(|r| r.removed.ty == GeneratorType::Commutator).count();
    assert_eq!(comm, 6);
}

fn small_word() -> impl Strategy<Value = (Vec<(u32, i32)>, usize)> {
    (1usize..=4).prop_flat_map(|r| {
        (
            prop::collection::vec((1..=r as u32, prop::sample::select(vec![-2, -1, 1, 2])), 1..5),
            Just(r),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn basis_reduction_is_sound((pairs, _r) in small_word(), seed in 0u64..1000) {
        let w = Word::from_pairs(&pairs);
        let p = reduce_word_to_basis(&w).unwrap();
        prop_assert!(p.symbols().iter().all(is_basis_form));
        prop_assert!(p.max_symbol_weight() <= CyclicKey::of(&w).weighted_length());
        let rep = random_exact_rep(seed, 4);
        prop_assert_eq!(p.evaluate(&rep).unwrap(), trace_of_word(&rep, &w).unwrap());
    }

    #[test]
    fn minimal_reduction_is_sound((pairs, r) in small_word(), seed in 0u64..1000) {
        let w = Word::from_pairs(&pairs);
        let p = reduce_word_to_minimal(&w, r).unwrap();
        let b = basis(r);
        prop_assert!(p.symbols().iter().all(|k| b.contains(k)));
        let rep = random_exact_rep(seed, r);
        prop_assert_eq!(p.evaluate(&rep).unwrap(), trace_of_word(&rep, &w).unwrap());
        prop_assert_eq!(reduce_to_minimal(&p, r).unwrap(), p);
    }

    #[test]
    fn reduction_commutes_with_monotone_relabeling((pairs, _r) in small_word()) {
        let w = Word::from_pairs(&pairs);
        let f = |i: u32| 2 * i + 1;
        let moved: Vec<(u32, i32)> = pairs.iter().map(|&(i, e)| (f(i), e)).collect();
        let a = reduce_word_to_basis(&w).unwrap().relabel_monotone(&f);
        let b = reduce_word_to_basis(&Word::from_pairs(&moved)).unwrap();
        prop_assert_eq!(a, b);
    }
}
