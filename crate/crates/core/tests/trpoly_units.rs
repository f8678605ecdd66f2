use sl3_core::mat3::Representation;
use sl3_core::trpoly::*;
use sl3_core::word::CyclicKey;
use sl3_core::mat3::{random_exact_rep, rat};
use sl3_core::word::parse_word;

#[test]
fn ring_basics() {
    let t1 = TracePolynomial::t(&[1]);
    let t2 = TracePolynomial::t(&[2]);
    assert!(t1.add(&t1.neg()).is_zero());
    assert_eq!(TracePolynomial::t(&[2, 1]), TracePolynomial::t(&[1, 2]));
    let s = t1.add(&t2);
    let sq = s.mul(&s);
    let expect = t1.mul(&t1).add(&t1.mul(&t2).scale(&q(2))).add(&t2.mul(&t2));
    assert_eq!(sq, expect);
    assert_eq!(sq.to_string(), "t(1)^2 + 2*t(1)*t(2) + t(2)^2");
}

#[test]
fn evaluation_basics() {
    let id = Representation::<Q>::identity(2);
    assert_eq!(TracePolynomial::constant(q(3)).evaluate(&id).unwrap(), rat(3, 1));
    let p = TracePolynomial::t(&[1]).mul(&TracePolynomial::t(&[-1]));
    assert_eq!(p.evaluate(&id).unwrap(), rat(9, 1));
    assert_eq!(TracePolynomial::symbol(CyclicKey::empty()), TracePolynomial::constant(q(3)));
}

#[test]
fn trace_of_identity_term() {
    assert_eq!(MatrixExpression::identity().trace(), TracePolynomial::constant(q(3)));
}

#[test]
fn substitution_matches_evaluation() {
    let rep = random_exact_rep(11, 3);
    let e = MatrixExpression::letter(1)
        .mul(&MatrixExpression::letter(2))
        .scale(&TracePolynomial::t(&[1, -2]))
        .add(&MatrixExpression::identity());
    let w = parse_word("x3 x1^-1").unwrap();
    let subs = |i: u32| if i == 2 { Some(w.clone()) } else { None };
    let lhs = e.substitute(&subs).trace().evaluate(&rep).unwrap();
    let m = vec![
        rep.matrices[0].clone(),
        sl3_core::mat3::word_matrix(&rep, &w).unwrap(),
        rep.matrices[2].clone(),
    ];
    let rep2 = Representation::new(m).unwrap();
    assert_eq!(lhs, e.trace().evaluate(&rep2).unwrap());
}

#[test]
fn mul_word_left_uses_cyclic_key() {
    let rep = random_exact_rep(2, 2);
    let u = parse_word("x2 x1").unwrap();
    let e = MatrixExpression::word(parse_word("x1^-1 x2").unwrap()).mul_word_left(&u);
    let direct = sl3_core::mat3::trace_of_word(&rep, &u.mul(&parse_word("x1^-1 x2").unwrap())).unwrap();
    assert_eq!(e.trace().evaluate(&rep).unwrap(), direct);
}
