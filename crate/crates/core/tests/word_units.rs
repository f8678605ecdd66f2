use sl3_core::word::*;

fn w(s: &str) -> Word {
    parse_word(s).unwrap()
}

#[test]
fn parse_examples() {
    assert_eq!(w("x1 x2^-1").letters(), &[Letter::new(1, 1), Letter::new(2, -1)]);
    assert_eq!(w("x1 x1^2").letters(), &[Letter::new(1, 3)]);
    assert!(w("x1 x2 x2^-1 x1^-1").is_empty());
    assert!(w("").is_empty());
}

#[test]
fn parse_errors_report_position() {
    assert_eq!(parse_word("x0"), Err(WordError::ZeroIndex { pos: 1 }));
    assert_eq!(parse_word("x1 x2^0"), Err(WordError::ZeroExponent { pos: 6 }));
    match parse_word("x1 y2") {
        Err(WordError::Syntax { pos, .. }) => assert_eq!(pos, 3),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_word("x1^"), Err(WordError::Syntax { pos: 3, .. })));
    assert!(matches!(parse_word("x1x2"), Err(WordError::Syntax { pos: 2, .. })));
}

#[test]
fn json_form() {
    assert_eq!(parse_word_json("[[1,2],[3,-1]]").unwrap(), w("x1^2 x3^-1"));
    assert!(parse_word_json("[[0,1]]").is_err());
    assert!(parse_word_json("[[1,0]]").is_err());
    let s = serde_json::to_string(&w("x1^2 x3^-1")).unwrap();
    assert_eq!(s, "[[1,2],[3,-1]]");
}

#[test]
fn key_examples() {
    assert_eq!(CyclicKey::of(&w("x2 x3 x1")).units(), &[1, 2, 3]);
    assert_eq!(CyclicKey::of(&w("x1 x2 x1^-1")).units(), &[2]);
    assert_eq!(CyclicKey::of(&w("x1 x2 x1 x3")).units(), &[1, 2, 1, 3]);
    assert_eq!(CyclicKey::of(&w("x2 x1^-1 x2")).units(), &[-1, 2, 2]);
    assert!(CyclicKey::of(&Word::empty()).is_empty());
    // +1 sorts before -1
    assert_eq!(CyclicKey::of(&w("x1^-1 x2 x1")).units(), &[2]);
    assert_eq!(CyclicKey::of(&w("x1^-1 x2 x1 x3")).units(), &[1, 3, -1, 2]);
}

#[test]
fn weights() {
    assert_eq!(w("x1^-1").weighted_length(), 2);
    assert_eq!(w("x1^-1 x2^-1 x3^-1").weighted_length(), 6);
    assert_eq!(w("x1 x2 x3").weighted_length(), 3);
    assert_eq!(w("x1 x2 x1^-1 x2^-1").multidegree(2).unwrap(), vec![3, 3]);
    assert_eq!(w("x1 x2 x3").multidegree(3).unwrap(), vec![1, 1, 1]);
    assert_eq!(w("x1 x2^-1").multidegree(3).unwrap(), vec![1, 2, 0]);
    assert!(w("x4").multidegree(3).is_err());
}

#[test]
fn key_order_is_weight_then_units() {
    let a = CyclicKey::of(&w("x2"));
    let b = CyclicKey::of(&w("x1^-1"));
    assert!(a < b);
    let c = CyclicKey::of(&w("x1 x2"));
    let d = CyclicKey::of(&w("x1^-1"));
    assert!(c < d);
}
