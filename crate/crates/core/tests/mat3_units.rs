use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use sl3_core::mat3::*;
use sl3_core::word::Word;
use sl3_core::word::parse_word;

fn dx() -> ExactRep {
    Representation::new(vec![Matrix3::diag(rat(1, 1), rat(2, 1), rat(1, 2))]).unwrap()
}

#[test]
fn diag_word_traces() {
    let rep = dx();
    assert_eq!(trace_of_word(&rep, &Word::empty()).unwrap(), rat(3, 1));
    assert_eq!(trace_of_word(&rep, &parse_word("x1").unwrap()).unwrap(), rat(7, 2));
    assert_eq!(trace_of_word(&rep, &parse_word("x1^2").unwrap()).unwrap(), rat(21, 4));
    assert_eq!(
        word_matrix(&rep, &parse_word("x1^2").unwrap()).unwrap(),
        Matrix3::diag(rat(1, 1), rat(4, 1), rat(1, 4))
    );
    assert_eq!(
        word_matrix(&rep, &parse_word("x1 x1^-1").unwrap()).unwrap(),
        Matrix3::identity()
    );
}

#[test]
fn shears_are_unimodular() {
    assert_eq!(shear(0, 1, 2).det(), rat(1, 1));
    for seed in 0..20 {
        let m = random_sl3_exact(seed, 9);
        assert_eq!(m.det(), rat(1, 1));
        assert_eq!(m, random_sl3_exact(seed, 9));
    }
}

#[test]
fn numeric_det_normalized() {
    for seed in 0..100 {
        let m = random_sl3_numeric(seed);
        assert!((m.det() - Complex64::one()).norm() < DET_TOL);
    }
    assert_eq!(random_sl3_numeric(5), random_sl3_numeric(5));
}

#[test]
fn char_coefficient_examples() {
    let d = Matrix3::diag(rat(1, 1), rat(2, 1), rat(3, 1));
    let c = char_coefficients(&d);
    assert_eq!(c[2], rat(11, 1));
    assert_eq!(c[3], d.det());
    let i = char_coefficients(&Matrix3::<BigRational>::identity());
    assert_eq!(i, vec![rat(1, 1), rat(3, 1), rat(3, 1), rat(1, 1)]);
}

#[test]
fn p_poly_examples() {
    assert_eq!(p_poly(&Matrix3::<BigRational>::identity()), rat(3, 1));
    for seed in 0..20 {
        let m = random_sl3_exact(seed, 8);
        assert_eq!(p_poly(&m), m.pow(3).trace());
    }
    let g = Matrix3::from_rows([
        [rat(2, 1), rat(1, 1), rat(0, 1)],
        [rat(0, 1), rat(1, 1), rat(3, 1)],
        [rat(1, 1), rat(0, 1), rat(1, 1)],
    ]);
    let three = rat(3, 1);
    assert_eq!(p_poly(&g), g.pow(3).trace() - three * (g.det() - rat(1, 1)));
}

#[test]
fn json_round_trip() {
    let rep = AnyRep::Exact(random_exact_rep(3, 2));
    let text = rep_to_json(&rep).to_string();
    let back = rep_from_json(&text).unwrap();
    match (rep, back) {
        (AnyRep::Exact(a), AnyRep::Exact(b)) => assert_eq!(a.matrices, b.matrices),
        _ => panic!("field changed"),
    }
    let t = r#"{"r":1,"field":"rational","matrices":[[["1/2",0,0],[0,2,0],[0,0,1]]]}"#;
    assert!(matches!(rep_from_json(t), Ok(AnyRep::Exact(_))));
    let bad = r#"{"r":2,"field":"rational","matrices":[[[1,0,0],[0,1,0],[0,0,1]]]}"#;
    assert!(rep_from_json(bad).is_err());
}
