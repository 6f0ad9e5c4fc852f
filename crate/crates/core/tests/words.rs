use std::cmp::Ordering;

use proptest::prelude::*;
use teapot_core::words::*;

fn binary(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..2, 1..=max_len)
}

/// Admissibility by comparing every shift of the periodic word over a
/// long window, independently of the finite-word shortcut.
fn admissible_by_window(w: &[u8]) -> bool {
    let n = w.len();
    let at = |i: usize| w[i % n];
    (1..n).all(|s| {
        let mut ones = 0;
        for i in 0..4 * n {
            let (x, y) = (at(s + i), at(i));
            if x != y {
                let greater = (x > y) == (ones % 2 == 0);
                return !greater;
            }
            ones += x as u32;
        }
        true
    })
}

#[test]
fn realizable_counts_match_the_center_oracle() {
    for n in 1..=10 {
        let words = realizable_words_of_period(n);
        let centers = teapot_core::oracles::real_centers(n).unwrap();
        let mut from_oracle: Vec<Vec<u8>> = centers.into_iter().map(|c| c.itinerary).collect();
        from_oracle.sort();
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(sorted, from_oracle, "period {n}");
    }
}

#[test]
fn vein_enumeration_is_vein_independent() {
    let a = enumerate_vein_itineraries(1, 2, 9, EnumerationMode::All).unwrap();
    let b = enumerate_vein_itineraries(2, 5, 9, EnumerationMode::All).unwrap();
    assert_eq!(a, b);
    let minimal = enumerate_vein_itineraries(1, 3, 9, EnumerationMode::Minimal).unwrap();
    assert!(minimal.len() < a.len());
    assert!(minimal.iter().all(|w| a.contains(w)));
    assert!(enumerate_vein_itineraries(2, 4, 5, EnumerationMode::All).is_err());
}

#[test]
fn one_sided_words_contain_the_centers() {
    let all = one_sided_words(10);
    let realizable = realizable_words(10);
    assert!(realizable.iter().all(|w| all.contains(w)));
    assert!(all.len() > realizable.len());
    for w in &all {
        assert!(is_admissible(w) && is_irreducible(w));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn recoding_round_trips(w in binary(16)) {
        prop_assume!(w.contains(&0));
        let r = recode(&BinaryWord::finite(w.clone())).unwrap();
        prop_assert!(r.satisfies_grammar());
        prop_assert_eq!(recode_inverse(&r), BinaryWord::finite(w));
    }

    #[test]
    fn q_recoding_simplifies_back(w in binary(14), q in 2u8..7) {
        prop_assume!(w.contains(&0));
        let r = recode(&BinaryWord::finite(w)).unwrap();
        let full = q_recode(&r, q);
        prop_assert!(full.satisfies_grammar());
        prop_assert_eq!(full.simplify(), r);
    }

    #[test]
    fn twisted_order_is_antisymmetric(a in binary(10), b in binary(10)) {
        let (x, y) = (BinaryWord::finite(a), BinaryWord::finite(b));
        prop_assert_eq!(twisted_lex_compare(&x, &y), twisted_lex_compare(&y, &x).reverse());
        prop_assert_eq!(twisted_lex_compare(&x, &x), Ordering::Equal);
    }

    #[test]
    fn admissibility_matches_window_check(w in binary(12)) {
        prop_assert_eq!(is_admissible(&w), admissible_by_window(&w));
    }

    #[test]
    fn realizable_words_are_admissible_and_irreducible(w in binary(14)) {
        if is_realizable_combinatorial(&w) {
            prop_assert!(is_admissible(&w) && is_irreducible(&w));
            // Exactly one of the pair is the representative.
            prop_assert!(!is_realizable_combinatorial(&flip_last(&w)));
        }
    }

    #[test]
    fn substitution_preserves_realizability(w in binary(7)) {
        if is_realizable_combinatorial(&w) && w.len() >= 2 {
            let d = substitution_d(&w);
            prop_assert!(is_admissible(&d), "D({w:?}) = {d:?}");
        }
    }
}
