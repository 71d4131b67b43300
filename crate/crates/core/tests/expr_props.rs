mod common;

use common::{Gen, FUZZ_U};
use loxoforge_core::expr::{ExprError, ProfileExpr};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn generated_expressions_evaluate_as_written(seed in any::<u64>(), depth in 0u32..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (src, want) = Gen.expr(&mut rng, depth);
        let e = ProfileExpr::parse(&src).unwrap();
        match (e.eval(FUZZ_U), want) {
            (Ok(got), Some(w)) => prop_assert_eq!(got.to_bits(), w.to_bits(), "{} = {} vs {}", src, got, w),
            (Err(_), None) => {}
            (got, w) => prop_assert!(false, "{src}: {got:?} vs {w:?}"),
        }
    }

    #[test]
    fn canonical_form_round_trips(seed in any::<u64>(), depth in 0u32..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (src, _) = Gen.expr(&mut rng, depth);
        let e = ProfileExpr::parse(&src).unwrap();
        let again = ProfileExpr::parse(&e.canonical()).unwrap();
        prop_assert_eq!(again.canonical(), e.canonical());
        for u in [-1.3, 0.0, 0.7, 2.5] {
            match (e.eval(u), again.eval(u)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a.to_bits(), b.to_bits()),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{src} at {u}: {a:?} vs {b:?}"),
            }
        }
    }

    /// Arbitrary input never panics; syntax errors point inside the input.
    #[test]
    fn parser_is_total(src in "[-+*/^()a-z0-9. ]{0,24}") {
        match ProfileExpr::parse(&src) {
            Ok(e) => { let _ = e.eval(0.5); }
            Err(ExprError::Syntax { pos, .. } | ExprError::UnknownIdentifier { pos, .. }) => {
                prop_assert!(pos <= src.len())
            }
            Err(e) => prop_assert!(false, "parse returned a non-syntax error: {e}"),
        }
    }
}

#[test]
fn syntax_errors_name_what_was_expected() {
    for (src, pos) in [("", 0), ("1+", 2), ("sin(u", 5), ("2*)", 2), ("1 2", 2)] {
        match ProfileExpr::parse(src) {
            Err(ExprError::Syntax { pos: p, expected }) => {
                assert_eq!(p, pos, "{src}");
                assert!(!expected.is_empty());
            }
            other => panic!("{src}: {other:?}"),
        }
    }
    assert!(matches!(
        ProfileExpr::parse("2*foo(u)"),
        Err(ExprError::UnknownIdentifier { pos: 2, .. })
    ));
}
