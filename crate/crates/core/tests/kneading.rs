use proptest::prelude::*;
use teapot_core::kneading::*;
use teapot_core::polyalg::*;
use teapot_core::words::*;

fn realizable(max: usize) -> Vec<Vec<u8>> {
    realizable_words(max)
        .into_iter()
        .filter(|w| w.len() >= 2)
        .collect()
}

/// Smallest root of `p` in `(0, 1]` by sign scan and bisection.
fn smallest_unit_root(p: &IntPolynomial) -> Option<f64> {
    let f = |x: f64| p.eval_complex(num_complex::Complex64::new(x, 0.0)).re;
    let steps = 20_000;
    let mut prev = f(1e-9);
    for k in 1..=steps {
        let x = k as f64 / steps as f64;
        let y = f(x);
        if y == 0.0 {
            return Some(x);
        }
        if prev.signum() != y.signum() {
            let (mut lo, mut hi) = ((k - 1) as f64 / steps as f64, x);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if f(mid).signum() == f(lo).signum() {
                    lo = mid
                } else {
                    hi = mid
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev = y;
    }
    None
}

#[test]
fn three_real_entropy_formulas_agree() {
    for w in realizable(12) {
        let kneading = growth_rate(&real_kneading_polynomial(&w)).unwrap();
        let parry = growth_rate(&parry_polynomial(&w)).unwrap();
        assert!(
            (kneading - parry).abs() < 1e-9,
            "{w:?}: {kneading} vs {parry}"
        );
        if kneading > 1.0 + 1e-6 {
            let t = smallest_unit_root(&mt_kneading_polynomial(&w)).expect("root in (0, 1]");
            assert!(
                (1.0 / t - kneading).abs() < 1e-7,
                "{w:?}: 1/t = {} vs {kneading}",
                1.0 / t
            );
        }
    }
}

#[test]
fn vein_growth_is_monotone_in_q() {
    // Along the same itinerary, growth decreases as q grows.
    for w in realizable(9) {
        let s = SimplifiedWord(recode_symbols(&w));
        let rates: Vec<f64> = (2..=5)
            .map(|q| growth_rate(&kneading_polynomial(&s, q)).unwrap())
            .collect();
        assert!(
            rates.windows(2).all(|r| r[1] <= r[0] + 1e-12),
            "{s}: {rates:?}"
        );
    }
}

#[test]
fn tips_and_roots() {
    // Vein root 20 has zero entropy on every vein.
    for q in 2..=6 {
        assert_eq!(
            growth_rate(&kneading_polynomial(&"20".parse().unwrap(), q)).unwrap(),
            1.0
        );
    }
    // The tip words approach the tip growth rate.
    for q in [2u32, 3] {
        let mut last = 0.0;
        for n in [4usize, 8, 14] {
            let mut s = vec![2u8];
            s.extend(std::iter::repeat_n(0, n));
            let g = growth_rate(&kneading_polynomial(&SimplifiedWord(s), q)).unwrap();
            assert!(g > last && g < tip_growth_rate(q) + 1e-12);
            last = g;
        }
        assert!(tip_growth_rate(q) - last < 0.05);
    }
}

#[test]
fn tuning_examples() {
    let rabbit: SimplifiedWord = "20".parse().unwrap();
    let inner: SimplifiedWord = "20121".parse().unwrap();
    assert_eq!(tune(&rabbit, &inner).to_string(), "2021202020");
    assert_eq!(
        q_recode(&tune(&rabbit, &inner), 3).to_string(),
        "230231230230230"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tuning_identity(i in 0usize..60, j in 0usize..60, q in 2u32..5) {
        let words = realizable(8);
        let outer = SimplifiedWord(recode_symbols(&words[i % words.len()]));
        let inner = SimplifiedWord(recode_symbols(&words[j % words.len()]));
        let tuned = tune(&outer, &inner);
        prop_assert!(tuned.satisfies_grammar());
        prop_assert_eq!(tuned.len(), outer.len() * inner.len());
        let product = tuned_polynomial(&outer, q, &inner).unwrap();
        prop_assert_eq!(kneading_polynomial(&tuned, q), product);
        let h = tuned_entropy(&outer, q, &inner).unwrap();
        let direct = growth_rate(&kneading_polynomial(&tuned, q)).unwrap().ln();
        prop_assert!((h - direct).abs() < 1e-7, "{} vs {}", h, direct);
    }

    #[test]
    fn determinant_series_matches_rational_form(i in 0usize..100, q in 2u32..5) {
        let words = realizable(9);
        let s = recode_symbols(&words[i % words.len()]);
        let series = kneading_determinant(&[], &s, q, 40).unwrap();
        let (num, den) = series.rational.clone().unwrap();
        let lhs = (&IntPolynomial::new(series.coefficients.clone()) * &den).truncate(40);
        prop_assert_eq!(lhs, num.truncate(40));
    }
}
