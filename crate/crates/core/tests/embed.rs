use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sl3_core::embed::*;
use sl3_core::mat3::{rat, random_exact_rep, random_numeric_rep, shear, AnyRep, Matrix3, Representation};
use sl3_core::word::parse_word;

type M = [[f64; 3]; 3];

fn mul(a: &M, b: &M) -> M {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

// Traces by direct dyadic arithmetic; every value is exact in f64.
fn oracle() -> Vec<(String, f64)> {
    let x: M = [[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 0.5]];
    let xi: M = [[1.0, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 2.0]];
    let y: M = [[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let yi: M = [[1.0, -1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let tr = |m: &M| m[0][0] + m[1][1] + m[2][2];
    vec![
        ("t(1)".into(), tr(&x)),
        ("t(2)".into(), tr(&y)),
        ("t(-1)".into(), tr(&xi)),
        ("t(-2)".into(), tr(&yi)),
        ("t(1,2)".into(), tr(&mul(&x, &y))),
        ("t(1,-2)".into(), tr(&mul(&x, &yi))),
        ("t(-1,2)".into(), tr(&mul(&xi, &y))),
        ("t(-1,-2)".into(), tr(&mul(&xi, &yi))),
        ("t(1,2,-1,-2)".into(), tr(&mul(&mul(&x, &y), &mul(&xi, &yi)))),
    ]
}

const FROZEN: [f64; 9] = [3.5, 3.0, 3.5, 3.0, 3.5, 3.5, 3.5, 3.5, 3.0];

fn diag_shear() -> Representation<BigRational> {
    Representation::new(vec![Matrix3::diag(rat(1, 1), rat(2, 1), rat(1, 2)), shear(0, 1, 1)]).unwrap()
}

#[test]
fn oracle_matches_frozen() {
    let o: Vec<f64> = oracle().into_iter().map(|(_, v)| v).collect();
    assert_eq!(o, FROZEN);
}

#[test]
fn diagonal_and_shear() {
    let e = embed(&diag_shear()).unwrap();
    let mut got: Vec<(String, f64)> = e
        .coordinates
        .iter()
        .map(|(g, v)| (g.key.to_string(), v.to_f64().unwrap()))
        .collect();
    let mut want = oracle();
    got.sort_by(|a, b| a.0.cmp(&b.0));
    want.sort_by(|a, b| a.0.cmp(&b.0));
    assert_eq!(got, want);
}

#[test]
fn identity_reps() {
    let e = embed(&Representation::<BigRational>::identity(1)).unwrap();
    assert_eq!(e.values(), vec![rat(3, 1), rat(3, 1)]);
    let e = embed(&Representation::<BigRational>::identity(2)).unwrap();
    assert_eq!(e.len(), 9);
    assert!(e.values().iter().all(|v| *v == rat(3, 1)));
    assert!(!e.is_empty());
}

#[test]
fn conjugation_by_identity_and_shear() {
    let rep = random_exact_rep(3, 3);
    let same = conjugate(&rep, &Matrix3::identity()).unwrap();
    assert_eq!(same.matrices, rep.matrices);
    let g = shear(0, 1, 1);
    let c = conjugate(&rep, &g).unwrap();
    let gi = shear(0, 1, -1);
    assert_eq!(c.matrices[0], g.mul(&rep.matrices[0]).mul(&gi));
    assert_eq!(embed(&c).unwrap().values(), embed(&rep).unwrap().values());
}

#[test]
fn singular_conjugator() {
    let rep = random_exact_rep(1, 2);
    let g = Matrix3::diag(rat(1, 1), rat(0, 1), rat(1, 1));
    assert!(matches!(conjugate(&rep, &g), Err(EmbedError::SingularConjugator)));
}

#[test]
fn conjugators_with_nonunit_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let dets: Vec<BigRational> = (0..20).map(|_| random_conjugator_exact(&mut rng, false).det()).collect();
    assert!(dets.iter().any(|d| *d != rat(1, 1)));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    assert_eq!(random_conjugator_exact(&mut rng, true).det(), rat(1, 1));
}

#[test]
fn invariance_exact() {
    for r in 1..=4 {
        let rep = AnyRep::Exact(random_exact_rep(40 + r as u64, r));
        let rep = invariance_report(&rep, 6, 5).unwrap();
        assert!(rep.passed, "r={r}");
        assert_eq!(rep.non_unimodular_trials, 3);
        assert_eq!(rep.max_residual, 0.0);
    }
}

#[test]
fn invariance_numeric() {
    for r in 1..=3 {
        let rep = AnyRep::Numeric(random_numeric_rep(70 + r as u64, r));
        let rep = invariance_report(&rep, 6, 5).unwrap();
        assert!(rep.passed, "r={r} residual {}", rep.max_residual);
    }
}

fn corner(m: &Matrix3<BigRational>) -> BigRational {
    m.m[0][0].clone()
}

#[test]
fn non_invariant_functional_is_caught() {
    let rep = random_exact_rep(8, 2);
    let r = invariance_report_exact_with(&rep, 6, 1, corner).unwrap();
    assert!(!r.passed);
}

#[test]
fn zero_trials() {
    let rep = AnyRep::Exact(random_exact_rep(8, 2));
    assert!(matches!(invariance_report(&rep, 0, 1), Err(EmbedError::NoTrials)));
}

#[test]
fn reduction_and_p_consistency() {
    let rep = random_exact_rep(21, 3);
    for w in ["x1^2 x2 x1^-1 x3", "x1 x2 x3 x1 x2", "x2^3", "x1 x2 x1^-1 x2^-1 x3"] {
        assert!(reduction_consistent(&parse_word(w).unwrap(), &rep).unwrap(), "{w}");
    }
    assert!(p_consistent(&rep));
    assert!(p_consistent(&diag_shear()));
}

#[test]
fn json_and_csv() {
    let rep = AnyRep::Exact(diag_shear());
    let v = embedding_json(&rep).unwrap();
    assert_eq!(v["count"], 9);
    assert_eq!(v["coordinates"][0]["label"], "t(1)");
    assert_eq!(v["coordinates"][0]["value"], "7/2");
    let csv = embedding_csv(&rep).unwrap();
    assert_eq!(csv[0], "index,type,label,value");
    assert_eq!(csv.len(), 10);
}
