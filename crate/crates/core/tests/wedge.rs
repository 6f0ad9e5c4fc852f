use proptest::prelude::*;
use teapot_core::angles::Angle;
use teapot_core::oracles::{brute_force_multicycles, DEFAULT_CYCLE_BUDGET};
use teapot_core::polyalg::*;
use teapot_core::wedge::*;

fn ang(s: &str) -> Angle {
    s.parse().unwrap()
}

fn graph(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec(
            prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => Just(1), 1 => Just(2)], n),
            n,
        )
        .prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

fn periodic_angle() -> impl Strategy<Value = Angle> {
    (2u32..=7).prop_flat_map(|n| {
        let den = (1u64 << n) - 1;
        (1..den).prop_map(move |k| Angle::new(k, den).unwrap())
    })
}

fn is_monomial_times_cyclotomic(p: &IntPolynomial) -> bool {
    let mut rest = p.unshift(p.trailing_zeros());
    for (n, e) in cyclotomic_factors(&rest, 6 * rest.degree().unwrap_or(1).max(1)) {
        for _ in 0..e {
            rest = rest.exact_div(&cyclotomic(n)).unwrap();
        }
    }
    rest.degree() == Some(0)
}

#[test]
fn one_fifth_truncation() {
    let t = truncated_spectral_determinant_with(&ang("1/5"), 8, DEFAULT_MULTICYCLE_BUDGET).unwrap();
    assert_eq!(t.coefficients, "1 - 2t^3 - 2t^7".parse().unwrap());
    let k = truncation_cover_index(&ang("1/5"), 8);
    assert_eq!(k, 5);
    let a = finite_model(&ang("1/5"), k).unwrap();
    assert_eq!(
        spectral_determinant(&a.incidence).truncate(8),
        t.coefficients
    );
}

#[test]
fn truncations_stabilize() {
    for s in ["1/5", "1/9", "1/7", "3/7", "2/9", "1/4", "1/6"] {
        let theta = ang(s);
        let n = 6;
        let t = truncated_spectral_determinant(&theta, n).unwrap();
        let k = truncation_cover_index(&theta, n);
        for m in [k, k + 1] {
            let a = finite_model(&theta, m).unwrap();
            assert_eq!(
                spectral_determinant(&a.incidence).truncate(n),
                t,
                "{s} cover {m}"
            );
        }
    }
}

#[test]
fn preperiodic_growth() {
    assert_eq!(growth_rate_from_wedge(&ang("1/2")).unwrap(), 2.0);
    assert!((growth_rate_from_wedge(&ang("1/4")).unwrap() - tip_growth_rate(3)).abs() < 1e-9);
    assert_eq!(growth_rate_from_wedge(&ang("1/3")).unwrap(), 1.0);
}

#[test]
fn invalid_cover() {
    assert!(matches!(
        quotient_charpoly_ratio(&ang("1/5"), 0),
        Err(WedgeError::InvalidCover { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multicycles_match_brute_force(g in graph(7)) {
        let n = g.dim();
        let fast = multicycle_expansion(&g, n, DEFAULT_MULTICYCLE_BUDGET).unwrap();
        let brute = brute_force_multicycles(&g, n, DEFAULT_CYCLE_BUDGET).unwrap();
        prop_assert_eq!(&fast.coefficients, &IntPolynomial::new(brute));
        // Multicycles cannot be longer than the vertex count.
        prop_assert_eq!(fast.coefficients, spectral_determinant(&g));
    }

    #[test]
    fn covers_add_only_cyclotomic_factors(theta in periodic_angle(), k in 2usize..4) {
        let ratio = quotient_charpoly_ratio(&theta, k).unwrap();
        prop_assert!(is_monomial_times_cyclotomic(&ratio), "{} k={}: {}", theta, k, ratio);
    }

    #[test]
    fn finite_model_exports_every_edge(theta in periodic_angle()) {
        let m = finite_model(&theta, 1).unwrap();
        let edges: i64 = m.incidence.rows().iter().flatten().sum();
        let text = m.export();
        prop_assert_eq!(text.lines().count() as i64, edges);
        // Every pair has out-degree 0 (equivalent), 1 or 2.
        for row in m.incidence.rows() {
            prop_assert!(row.iter().sum::<i64>() <= 2);
        }
        for line in text.lines() {
            let (from, to) = line.split_once(" -> ").unwrap();
            let pair = |s: &str| {
                let (i, j) = s.split_once(',').unwrap();
                (i.parse::<usize>().unwrap(), j.parse::<usize>().unwrap())
            };
            let ((i, j), (k, l)) = (pair(from), pair(to));
            prop_assert!(m.incidence.get(m.vertex_index(i, j).unwrap(), m.vertex_index(k, l).unwrap()) > 0);
        }
        prop_assert_eq!(thurston_polynomial(&theta), charpoly(&m.incidence));
    }
}
