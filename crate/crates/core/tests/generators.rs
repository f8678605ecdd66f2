use std::collections::HashSet;

use proptest::prelude::*;
use sl3_core::generators::*;
use sl3_core::reducer::GeneratorType;
use sl3_core::word::CyclicKey;

// Pascal's triangle, independent of the multiplicative binomial.
fn pascal(n: u64, k: u64) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k as usize).copied().unwrap_or(0)
}

#[test]
fn small_counts() {
    let got: Vec<u128> = [1, 2, 3, 6].iter().map(|&r| count_formula(r)).collect();
    assert_eq!(got, vec![2, 9, 45, 1629]);
}

#[test]
fn formula_matches_binomial_sum() {
    for r in 1..=10 {
        assert_eq!(count_formula(r), binomial_sum(r), "r={r}");
    }
}

#[test]
fn binomial_matches_pascal() {
    for n in 0..=12 {
        for k in 0..=n + 1 {
            assert_eq!(binomial(n, k), pascal(n, k), "C({n},{k})");
        }
    }
}

#[test]
fn table_has_all_types() {
    let t = type_counts(6);
    assert_eq!(t.rows.len(), 19);
    assert_eq!(t.total(), 1629);
    // at r = letters each type contributes exactly its multiplier
    for ty in GeneratorType::ALL {
        let row = type_counts(ty.letters() as u64).rows.into_iter().find(|r| r.ty == ty).unwrap();
        assert_eq!(row.count, ty.multiplier() as u128);
    }
}

#[test]
fn rank_two_set() {
    let got: HashSet<CyclicKey> = enumerate_minimal_set(2).unwrap().into_iter().map(|g| g.key).collect();
    let want: HashSet<CyclicKey> = [
        vec![1],
        vec![2],
        vec![-1],
        vec![-2],
        vec![1, 2],
        vec![1, -2],
        vec![-1, 2],
        vec![-1, -2],
        vec![1, 2, -1, -2],
    ]
    .iter()
    .map(|u| CyclicKey::from_units(u))
    .collect();
    assert_eq!(got, want);
}

#[test]
fn enumeration_is_ordered_and_distinct() {
    for r in 1..=5 {
        let w = enumerate_minimal_set(r).unwrap();
        assert_eq!(w.len() as u128, count_formula(r as u64));
        let d: HashSet<_> = w.iter().map(|g| &g.key).collect();
        assert_eq!(d.len(), w.len());
        let weights: Vec<_> = w.iter().map(|g| g.ty.weight()).collect();
        assert!(weights.windows(2).all(|p| p[0] <= p[1]));
        assert!(w.iter().all(|g| g.key.max_index() as usize <= r));
    }
    let w1: Vec<String> = enumerate_minimal_set(1).unwrap().iter().map(|g| g.key.to_string()).collect();
    assert_eq!(w1.len(), 2);
    assert!(enumerate_minimal_set(0).is_err());
}

#[test]
fn enumeration_is_deterministic() {
    let a: Vec<String> = enumerate_minimal_set(4).unwrap().iter().map(|g| g.key.to_string()).collect();
    let b: Vec<String> = enumerate_minimal_set(4).unwrap().iter().map(|g| g.key.to_string()).collect();
    assert_eq!(a, b);
}

#[test]
fn dimension_totals() {
    let totals: Vec<u128> = (1..=3).map(|r| dimension_crosscheck(r).unwrap().total).collect();
    assert_eq!(totals, vec![3, 11, 48]);
    for r in 1..=6 {
        let d = dimension_crosscheck(r).unwrap();
        assert!(d.passed, "r={r}");
        assert_eq!(d.total - r as u128, count_formula(r as u64));
    }
}

#[test]
fn irrep_dimensions() {
    assert_eq!(irrep_dimension(&[1], 3).unwrap(), 3);
    assert_eq!(irrep_dimension(&[2], 3).unwrap(), 6);
    assert_eq!(irrep_dimension(&[1, 1], 3).unwrap(), 3);
    assert_eq!(irrep_dimension(&[2, 1], 3).unwrap(), 8);
    assert_eq!(irrep_dimension(&[1, 1, 1, 1], 3).unwrap(), 0);
    assert!(matches!(irrep_dimension(&[1, 2], 3), Err(GenError::BadPartition(_))));
}

#[test]
fn permutations_are_lexicographic() {
    let p = permutations(&[1, 2, 3]);
    assert_eq!(p.len(), 6);
    assert_eq!(p[0], vec![1, 2, 3]);
    assert_eq!(p[5], vec![3, 2, 1]);
    let mut s = p.clone();
    s.sort();
    assert_eq!(s, p);
}

proptest! {
    // sum of dims over weights of a single row k equals C(r+k-1, k)
    #[test]
    fn symmetric_power_dimension(r in 1usize..8, k in 1u32..6) {
        prop_assert_eq!(irrep_dimension(&[k], r).unwrap(), binomial(r as u64 + k as u64 - 1, k as u64));
    }

    #[test]
    fn exterior_power_dimension(r in 1usize..8, k in 1usize..6) {
        prop_assert_eq!(irrep_dimension(&vec![1; k], r).unwrap(), binomial(r as u64, k as u64));
    }
}
