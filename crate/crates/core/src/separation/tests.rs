use std::sync::Arc;

use super::*;
use crate::geometry::{Letter, Point2};
use crate::precision::CSource;
use crate::report::Outcome;
use proptest::prelude::*;

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn sys() -> System {
    System::standard()
}

fn with_h(num: i64, den: i64) -> System {
    System::new(frac(num, den), Arc::new(CSource::canonical())).unwrap()
}

fn approx(r: &Rational) -> f64 {
    crate::rational::to_f64(r)
}

#[test]
fn classification_examples() {
    let s = sys();
    assert_eq!(classify_case(&s, &w("1")).unwrap().kind, CaseKind::One);
    assert_eq!(classify_case(&s, &w("11")).unwrap().kind, CaseKind::OneOne);
    let zero = classify_case(&s, &w("0")).unwrap();
    assert_eq!((zero.kind, zero.k), (CaseKind::BelowDiverging, Some(0)));
    // 110 agrees with c = 0.1102…, and c_110 < c
    assert_eq!(
        classify_case(&s, &w("110")).unwrap().kind,
        CaseKind::BelowPrefix
    );
    let two = classify_case(&s, &w("2")).unwrap();
    assert_eq!((two.kind, two.k), (CaseKind::AboveDiverging, Some(0)));
    assert!(classify_case(&s, &Word::empty()).is_err());
}

#[test]
fn margin_examples() {
    let s = sys();
    let one = margin(&s, &w("1")).unwrap();
    assert!(one.pass);
    assert_eq!(one.side, Side::Above);
    assert!(one.scaled_gap.lo() > &frac(4, 81));
    // 3(c_1 − c) = 1 − 2c
    assert!((approx(one.scaled_gap.lo()) - 0.060885).abs() < 1e-5);
    let two = margin(&s, &w("2")).unwrap();
    assert!(two.pass);
    assert!((approx(two.scaled_gap.lo()) - (2.0 - 2.0 * 0.469557)).abs() < 1e-5);
    let below = margin(&s, &w("110")).unwrap();
    assert_eq!(below.side, Side::Below);
    // the lower side carries the extra factor c
    let ratio = approx(below.scaled_gap.lo()) / approx(below.unfactored_gap.lo());
    assert!((ratio - 0.469557).abs() < 1e-5);
}

#[test]
fn pass_matches_margin_sign() {
    let s = with_h(1, 3);
    for word in &Word::i_words_up_to(3) {
        let rec = margin(&s, word).unwrap();
        assert_eq!(rec.pass, rec.scaled_gap.lo() > &rec.required, "{word}");
    }
}

#[test]
fn separation_depth_four() {
    let r = verify_separation(&sys(), 4).unwrap();
    assert_eq!(r.result, Outcome::Pass);
    assert_eq!(r.items_checked, 120);
    assert!(r.failures.is_empty());
    assert_eq!(r.detail("min_word"), Some("1"));
}

#[test]
fn separation_min_margin_at_depth_eight() {
    let r = verify_separation(&sys(), 8).unwrap();
    assert_eq!(r.result, Outcome::Pass);
    assert_eq!(r.items_checked, 9840);
    assert_eq!(r.detail("min_word"), Some("1"));
    assert_eq!(r.detail("min_side"), Some("above"));
    // 1 − 2c − 4/81
    let m = approx(r.min_margin.as_ref().unwrap());
    assert!((m - 0.0115027).abs() < 1e-6, "{m}");
}

#[test]
fn separation_fails_at_one_third() {
    let r = verify_separation(&with_h(1, 3), 4).unwrap();
    assert_eq!(r.result, Outcome::Fail);
    let words: Vec<&str> = r
        .failures
        .iter()
        .map(|f| f.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(words, ["word=1", "word=110"]);
    assert!(r.min_margin.unwrap() < Rational::from_integer(0.into()));
}

#[test]
fn separation_tiny_h_passes() {
    let r = verify_separation(&with_h(1, 100), 2).unwrap();
    assert_eq!(r.result, Outcome::Pass);
    assert_eq!(r.items_checked, 12);
}

#[test]
fn separation_rejects_depth_zero() {
    assert!(verify_separation(&sys(), 0).is_err());
}

#[test]
fn separation_is_inconclusive_without_digits() {
    let stream = crate::ternary::DigitStream::from_digits("0.11").unwrap();
    let src = CSource::new(stream, 1, 2).unwrap();
    let s = System::new(frac(2, 9), Arc::new(src)).unwrap();
    let r = verify_separation(&s, 2).unwrap();
    assert_eq!(r.result, Outcome::Inconclusive);
    assert!(!r.failures.is_empty());
}

#[test]
fn case_bounds_for_special_words() {
    let s = sys();
    let one = case_bound_check(&s, &w("1")).unwrap();
    assert!(one.holds);
    assert_eq!(one.bound, frac(4, 81));
    let eleven = case_bound_check(&s, &w("11")).unwrap();
    assert!(eleven.holds);
    // 9(c_11 − c) = 4 − 8c
    assert!((approx(eleven.value.lo()) - (4.0 - 8.0 * 0.469557)).abs() < 1e-5);
    let prefix = case_bound_check(&s, &w("110200")).unwrap();
    // σ⁶(c) = 0.0220… < c puts c_110200 above c
    assert_eq!(prefix.case.kind, CaseKind::AbovePrefix);
    assert!(prefix.holds);
}

#[test]
fn diverging_bound_flags_word_zero() {
    // c − c/3 = 2c/3 ≈ 0.313 falls short of 1/3
    let zero = case_bound_check(&sys(), &w("0")).unwrap();
    assert!(zero.is_flag_only());
    assert!(!zero.holds);
}

#[test]
fn case_bounds_report_to_depth_ten() {
    let r = verify_case_bounds(&sys(), 10).unwrap();
    assert_eq!(r.result, Outcome::Pass);
    assert_eq!(r.items_checked, 88572);
    assert_eq!(r.detail("required_words"), Some("10"));
    assert_eq!(r.detail("first_flagged"), Some("0"));
}

#[test]
fn pairwise_disjoint_small() {
    let r = verify_pairwise_disjoint(&sys(), 3).unwrap();
    assert_eq!(r.result, Outcome::Pass, "{:?}", r.failures);
    // 1 + 3 + 9 + 27 triangles
    assert_eq!(r.items_checked, 40 * 39 / 2);
}

#[test]
fn pairwise_disjoint_fails_for_large_h() {
    // h² = 1/9 exceeds the gap of the word 1, so Δ meets Δ_1
    let r = verify_pairwise_disjoint(&with_h(1, 3), 1).unwrap();
    assert_eq!(r.result, Outcome::Fail);
    assert!(
        r.failures.iter().any(|f| f.contains("pair=ε 1")),
        "{:?}",
        r.failures
    );
}

#[test]
fn osc_levels() {
    let r0 = verify_osc(&sys(), 0).unwrap();
    assert_eq!(r0.result, Outcome::Pass, "{:?}", r0.failures);
    assert_eq!(r0.detail("components"), Some("1"));
    let r = verify_osc(&sys(), 2).unwrap();
    assert_eq!(r.result, Outcome::Pass, "{:?}", r.failures);
    assert_eq!(r.detail("hull_overlaps"), Some("1h"));
    // 6 image pairs of 13 × 13 components
    assert!(r.items_checked >= 6 * 169);
}

#[test]
fn one_point_small() {
    let s = sys();
    assert_eq!(
        one_point::touching_first_level(&s),
        [
            (Letter::Zero, Letter::One),
            (Letter::One, Letter::Two),
            (Letter::One, Letter::H)
        ]
    );
    let r = verify_one_point(&s, 4).unwrap();
    assert_eq!(r.result, Outcome::Pass, "{:?}", r.failures);
    assert_eq!(
        r.detail("point_1h"),
        Some(Point2::c_on_axis().to_string().as_str())
    );
    assert_eq!(
        r.detail("point_01"),
        Some(Point2::exact(frac(1, 3), frac(0, 1)).to_string().as_str())
    );
    assert!(verify_one_point(&s, 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn smaller_h_keeps_passing(
        digits in prop::collection::vec(0u8..3, 1..6),
        num in 1i64..9,
        den in 10i64..40,
    ) {
        let word = Word::from_digits(&digits).unwrap();
        let big = with_h(num, den);
        let small = with_h(num, den + 1);
        let a = margin(&big, &word).unwrap();
        let b = margin(&small, &word).unwrap();
        prop_assert_eq!(a.case, b.case);
        if a.pass {
            prop_assert!(b.pass);
        }
    }
}
