use teapot_core::oracles::*;
use teapot_core::polyalg::IntMatrix;

/// f_c^n(0) and its c-derivative.
fn orbit(c: f64, n: usize) -> (f64, f64) {
    let (mut z, mut dz) = (0.0f64, 0.0f64);
    for _ in 0..n {
        dz = 2.0 * z * dz + 1.0;
        z = z * z + c;
    }
    (z, dz)
}

#[test]
fn centers_are_superattracting() {
    for n in 1..=9 {
        let centers = real_centers(n).unwrap();
        for w in centers.windows(2) {
            assert!(w[0].c < w[1].c);
        }
        for center in centers.iter() {
            assert_eq!(center.period, n);
            // One Newton step from the stored value barely moves it.
            let c = center.c_f64();
            let (z, dz) = orbit(c, n);
            assert!((z / dz).abs() < 1e-12, "period {n} at {c}");
            assert!((-2.0..=0.25).contains(&c));
        }
    }
    let airplane = real_centers(3).unwrap();
    assert!((airplane[0].c_f64() + 1.754877666246693).abs() < 1e-12);
    assert_eq!(airplane[0].itinerary, vec![1, 0, 1]);
    assert!(matches!(
        real_centers(0),
        Err(OracleError::PeriodOutOfRange(0))
    ));
    assert!(matches!(
        real_centers(MAX_CENTER_PERIOD + 1),
        Err(OracleError::PeriodOutOfRange(_))
    ));
}

#[test]
fn multicycles_of_a_triangle() {
    // 0 -> 1 -> 2 -> 0 and a loop at 0: det(I - tA) = 1 - t - t^3.
    let g = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
    let c = brute_force_multicycles(&g, 3, DEFAULT_CYCLE_BUDGET).unwrap();
    let c: Vec<i64> = c.iter().map(|x| x.to_string().parse().unwrap()).collect();
    assert_eq!(c, vec![1, -1, 0, -1]);
    assert!(matches!(
        brute_force_multicycles(&IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]), 2, 1),
        Err(OracleError::ResourceLimit(1))
    ));
}
