use proptest::prelude::*;
use teapot_core::kneading::*;
use teapot_core::markov::*;
use teapot_core::polyalg::*;
use teapot_core::words::*;

fn realizable(max: usize) -> Vec<Vec<u8>> {
    realizable_words(max)
        .into_iter()
        .filter(|w| w.len() >= 2)
        .collect()
}

fn full(w: &[u8], q: u8) -> FullWord {
    q_recode(&SimplifiedWord(recode_symbols(w)), q)
}

#[test]
fn one_fifth_table() {
    let w = FullWord::parse("2301", 3).unwrap();
    assert_eq!(
        markov_polynomial(&w, 3).unwrap(),
        "x^4 - 2x - 1".parse().unwrap()
    );
    let m = markov_matrix(&w, 3).unwrap();
    assert_eq!(m.intervals.len(), 4);
    let json = m.to_json();
    assert_eq!(json["intervals"].as_array().unwrap().len(), 4);
}

#[test]
fn airplane_and_markings() {
    let airplane = full(&[1, 0, 1], 2);
    assert_eq!(
        markov_polynomial(&airplane, 2).unwrap(),
        "x^3 - 2x - 1".parse().unwrap()
    );
    let a0 = markov_matrix_with(&airplane, 2, TreeMarking::Postcritical).unwrap();
    assert_eq!(
        spectral_determinant(&a0.entries),
        "1 - t - t^2".parse().unwrap()
    );
    // The postcritical markings are for the real vein only.
    assert!(markov_matrix_with(&full(&[1, 0, 1], 3), 3, TreeMarking::Beta).is_err());
}

#[test]
fn beta_marking_adds_a_unit_factor() {
    for w in realizable(10) {
        let f = full(&w, 2);
        let a0 = spectral_determinant(
            &markov_matrix_with(&f, 2, TreeMarking::Postcritical)
                .unwrap()
                .entries,
        );
        let a1 = spectral_determinant(
            &markov_matrix_with(&f, 2, TreeMarking::Beta)
                .unwrap()
                .entries,
        );
        assert_eq!(
            a1,
            &"1 - t".parse::<IntPolynomial>().unwrap() * &a0,
            "{w:?}"
        );
    }
}

#[test]
fn piecewise_linear_model_reproduces_minimal_words() {
    for w in realizable(9) {
        if !matches!(is_vein_minimal(&w), Ok(true)) || w == [1, 0] {
            continue;
        }
        for q in [2u8, 3] {
            let f = full(&w, q);
            let model = star_tree_model(&f, q as u32).unwrap();
            let tree = combinatorial_tree(&f, q as u32, TreeMarking::Alpha).unwrap();
            assert_eq!(model.tree.markov_matrix(), tree.markov_matrix());
            assert_eq!(model.positions.len(), tree.line.len());
            let g = growth_rate(&kneading_polynomial(&f.simplify(), q as u32)).unwrap();
            assert!((model.lambda - g).abs() < 1e-9);
        }
    }
}

#[test]
fn zero_entropy_has_no_pl_model() {
    let rabbit = FullWord::parse("230", 3).unwrap();
    assert!(matches!(
        star_tree_model(&rabbit, 3),
        Err(MarkovError::ZeroEntropy)
    ));
    assert_eq!(
        growth_rate(&markov_polynomial(&rabbit, 3).unwrap()).unwrap(),
        1.0
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn markov_growth_matches_kneading(i in 0usize..200, q in 2u8..6) {
        let words = realizable(10);
        let w = &words[i % words.len()];
        let f = full(w, q);
        let m = markov_matrix(&f, q as u32).unwrap();
        prop_assert!(m.entries.rows().iter().flatten().all(|&x| x >= 0));
        prop_assert!(m.entries.rows().iter().all(|r| r.iter().any(|&x| x > 0)), "every interval covers something");
        let mg = growth_rate(&markov_polynomial(&f, q as u32).unwrap()).unwrap();
        let kg = growth_rate(&kneading_polynomial(&f.simplify(), q as u32)).unwrap();
        prop_assert!((mg - kg).abs() < 1e-8, "{:?} q={}: {} vs {}", w, q, mg, kg);
    }
}
