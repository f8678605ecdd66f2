use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use sl3_core::mat3::random_exact_rep;
use sl3_core::relmat::*;
use sl3_core::word::CyclicKey;

// Rank by plain rational row reduction.
fn rref_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let nc = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..nc {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[rank][c];
                let pivot = a[rank].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot).skip(c) {
                    *x -= p * &f;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn shapes_and_ranks() {
    for (f, rank) in [(Family::FiveInFive, 12), (Family::SixInFive, 5), (Family::SixInSix, 105)] {
        let m = build_relation_matrix(f).unwrap();
        assert_eq!((m.rows(), m.cols()), f.shape());
        assert_eq!(exact_rank(&m), rank, "{}", f.name());
        assert_eq!(f.expected_rank(), rank);
        assert!(m.entries_in_unit_range(), "{}", f.name());
        assert_eq!(m.rhs.len(), m.rows());
        assert_eq!(m.row_provenance.len(), m.rows());
    }
}

#[test]
fn bareiss_agrees_with_rref_on_families() {
    for f in [Family::FiveInFive, Family::SixInFive] {
        let m = build_relation_matrix(f).unwrap();
        assert_eq!(rank_of(&m.entries), rref_rank(&m.entries));
    }
}

#[test]
fn reference_kept_sets_are_complements() {
    for f in Family::ALL {
        let m = build_relation_matrix(f).unwrap();
        let kept = reference_kept(f);
        assert_eq!(kept.len(), m.cols() - f.expected_rank());
        assert!(validate_complement(&m, &kept).unwrap(), "{}", f.name());
        let piv = pivot_complement(&m);
        assert_eq!(piv.len(), kept.len());
        assert!(validate_complement(&m, &piv).unwrap());
    }
}

#[test]
fn six5_kept_sets_for_each_negative_letter() {
    for k in 1..=5 {
        let kept = six5_kept_for(k);
        assert_eq!(kept.len(), 7, "k={k}");
    }
    assert_eq!(six5_kept_for(5).len(), reference_kept(Family::SixInFive).len());
}

#[test]
fn a_bad_complement_is_rejected() {
    let m = build_relation_matrix(Family::SixInSix).unwrap();
    let first: Vec<CyclicKey> = m.column_keys().into_iter().take(15).collect();
    assert!(!validate_complement(&m, &first).unwrap());
    let m = build_relation_matrix(Family::FiveInFive).unwrap();
    let first: Vec<CyclicKey> = m.column_keys().into_iter().take(12).collect();
    assert!(!validate_complement(&m, &first).unwrap());
}

#[test]
fn unknown_label() {
    let m = build_relation_matrix(Family::FiveInFive).unwrap();
    let e = validate_complement(&m, &[CyclicKey::from_units(&[1, 2])]).unwrap_err();
    assert!(matches!(e, RelmatError::UnknownLabel(_)));
    assert!(Family::from_name("seven").is_err());
    for f in Family::ALL {
        assert_eq!(Family::from_name(f.name()).unwrap(), f);
    }
}

#[test]
fn six6_row_sources() {
    let m = build_relation_matrix(Family::SixInSix).unwrap();
    assert_eq!(six6_source_counts(&m), (60, 60));
}

#[test]
fn rows_hold_on_random_reps() {
    for f in Family::ALL {
        let m = build_relation_matrix(f).unwrap();
        let r = if f == Family::SixInSix { 6 } else { 5 };
        for seed in 0..2 {
            let rep = random_exact_rep(100 + seed, r);
            for i in 0..m.rows() {
                let lhs = m.row_polynomial(i).evaluate(&rep).unwrap();
                let rhs = m.rhs[i].evaluate(&rep).unwrap();
                assert_eq!(lhs, rhs, "{} row {i}", f.name());
            }
        }
    }
}

#[test]
fn six5_relations_hold() {
    let rep = random_exact_rep(11, 5);
    for i in 0..5 {
        let (l, r) = six5_relation_identity(i);
        assert_eq!(l.evaluate(&rep).unwrap(), r.evaluate(&rep).unwrap());
    }
}

#[test]
fn reference_comparison() {
    let five = diff_reference(&build_relation_matrix(Family::FiveInFive).unwrap()).unwrap();
    assert!(five.same_row_space);
    assert_eq!(five.reference_rank, 12);
    assert_eq!(five.matched_rows, 6);
    let six = diff_reference(&build_relation_matrix(Family::SixInFive).unwrap()).unwrap();
    assert!(six.same_row_space);
    assert_eq!(six.matched_rows, six.rows);
    assert!(diff_reference(&build_relation_matrix(Family::SixInSix).unwrap()).is_none());
}

#[test]
fn reports() {
    for f in Family::ALL {
        let r = rank_report(f).unwrap();
        assert!(r.passed, "{}", f.name());
    }
}

#[test]
fn csv_dump() {
    let m = build_relation_matrix(Family::SixInFive).unwrap();
    let mut buf = Vec::new();
    m.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + m.rows());
    assert_eq!(lines[0].matches("\"t(").count(), m.cols());
    assert!(lines[0].starts_with("\"t(1,2,4,3,-5)\","));
    assert!(lines[1..].iter().all(|l| l.split(',').count() == m.cols()));
}

#[test]
fn identity_rank() {
    let id: Vec<Vec<BigInt>> = (0..3)
        .map(|i| (0..3).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    assert_eq!(rank_of(&id), 3);
    assert_eq!(bareiss_pivots(&id), vec![0, 1, 2]);
    assert_eq!(rank_of(&[]), 0);
}

proptest! {
    #[test]
    fn bareiss_matches_rref(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 0..7)) {
        let m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        prop_assert_eq!(rank_of(&m), rref_rank(&m));
    }
}
