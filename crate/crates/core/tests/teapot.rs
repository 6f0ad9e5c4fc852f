use std::collections::BTreeMap;

use teapot_core::kneading::kneading_polynomial;
use teapot_core::polyalg::*;
use teapot_core::teapot::*;
use teapot_core::words::*;

fn sw(s: &str) -> SimplifiedWord {
    s.parse().unwrap()
}

fn csv(cloud: &PointCloud) -> String {
    let mut out = Vec::new();
    cloud.write_csv(&mut out).unwrap();
    String::from_utf8(out).unwrap()
}

#[test]
fn cloud_points_are_the_roots() {
    let cloud = generate(1, 3, 9, EnumerationMode::All, false).unwrap();
    let expected: usize = cloud
        .words
        .iter()
        .map(|w| kneading_polynomial(&w.itinerary, 3).degree().unwrap())
        .sum();
    assert_eq!(cloud.len(), expected);
    for w in &cloud.words {
        assert!(w.lambda >= 1.0 && w.period >= 2);
    }
    for pt in cloud.iter() {
        let p = kneading_polynomial(pt.itinerary, 3);
        assert!(
            p.eval_complex(pt.z).norm()
                < 1e-6 * (1.0 + pt.z.norm()).powi(p.degree().unwrap() as i32)
        );
        assert!(pt.z.norm() <= pt.lambda + 1e-9);
    }
    // Sorted by period, then itinerary.
    let keys: Vec<(usize, &SimplifiedWord)> = cloud
        .words
        .iter()
        .map(|w| (w.period, &w.itinerary))
        .collect();
    assert!(keys.windows(2).all(|k| k[0] < k[1]));
}

#[test]
fn modes_and_stripping_select_subsets() {
    let all = generate(1, 3, 9, EnumerationMode::All, false).unwrap();
    let minimal = generate(1, 3, 9, EnumerationMode::Minimal, false).unwrap();
    let stripped = generate(1, 3, 9, EnumerationMode::All, true).unwrap();
    assert!(minimal.len() < all.len() && stripped.len() < all.len());
    assert!(minimal.words.iter().all(|w| w.minimal));
    for w in &minimal.words {
        assert!(all.words.contains(w));
    }
    // Stripping removes exactly the cyclotomic roots.
    for w in &stripped.words {
        let p = kneading_polynomial(&w.itinerary, 3);
        let kept = stripped
            .iter()
            .filter(|pt| pt.itinerary == &w.itinerary)
            .count();
        assert_eq!(
            kept,
            strip_cyclotomic(&p, 6 * p.degree().unwrap())
                .degree()
                .unwrap()
        );
    }
}

#[test]
fn one_sided_convention_adds_partner_words() {
    let mut config = GenerateConfig::new(1, 2, 10, EnumerationMode::All, false);
    let realizable = generate_with(&config, None).unwrap();
    config.convention = ItineraryConvention::OneSided;
    let one_sided = generate_with(&config, None).unwrap();
    assert!(one_sided.len() > realizable.len());
    assert!(one_sided.len() < 2 * realizable.len() + 1);
    for w in &realizable.words {
        assert!(one_sided.words.iter().any(|v| v.itinerary == w.itinerary));
    }
}

#[test]
fn output_is_deterministic_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let cache = PolynomialCache::new(dir.path());
    let config = GenerateConfig::new(1, 3, 10, EnumerationMode::All, false);
    let fresh = generate_with(&config, None).unwrap();
    let first = generate_with(&config, Some(&cache)).unwrap();
    let second = generate_with(&config, Some(&cache)).unwrap();
    assert_eq!(csv(&fresh), csv(&first));
    assert_eq!(csv(&first), csv(&second));
    let stored = cache.load(1, 3, 3).unwrap();
    assert!(!stored.is_empty());
    assert_eq!(stored["201"], kneading_polynomial(&sw("201"), 3));
    // Merging keeps existing entries.
    let mut extra = BTreeMap::new();
    extra.insert("201".to_string(), IntPolynomial::one());
    cache.store(1, 3, 3, &extra).unwrap();
    assert_eq!(
        cache.load(1, 3, 3).unwrap()["201"],
        kneading_polynomial(&sw("201"), 3)
    );
}

#[test]
fn jsonl_starts_with_metadata() {
    let cloud = generate(1, 2, 6, EnumerationMode::All, false).unwrap();
    let mut out = Vec::new();
    cloud.write_jsonl(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    let meta: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(meta["metadata"]["points"], cloud.len());
    assert_eq!(meta["metadata"]["q"], 2);
    assert_eq!(lines.count(), cloud.len());
}

#[test]
fn projections_and_slices() {
    let cloud = generate(1, 2, 8, EnumerationMode::All, false).unwrap();
    let merged = thurston_projection(&cloud, 1e-9);
    assert!(merged.len() < cloud.len());
    for (i, a) in merged.iter().enumerate() {
        assert!(merged[i + 1..].iter().all(|b| (a - b).norm() > 1e-9));
    }
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let s = slice(&cloud, golden, 1e-9);
    let airplane = roots(&kneading_polynomial(&sw("201"), 2), 1e-12)
        .unwrap()
        .points();
    assert!(airplane
        .iter()
        .all(|z| s.iter().any(|w| (z - w).norm() < 1e-9)));
    let at_golden = cloud
        .iter()
        .filter(|pt| (pt.lambda - golden).abs() <= 1e-9)
        .count();
    assert_eq!(s.len(), at_golden);
}

#[test]
fn lambda_fibres() {
    let z = z_of_lambda(1, 3, &sw("201")).unwrap();
    assert_eq!(z.count(), 4);
    assert!(matches!(
        z_of_lambda(1, 3, &teapot_core::kneading::tune(&sw("201"), &sw("20121"))),
        Err(TeapotError::NotMinimal(_))
    ));
    assert!(matches!(
        z_of_lambda(2, 4, &sw("201")),
        Err(TeapotError::InvalidVein { .. })
    ));
}

#[test]
fn persistence_reports() {
    let r = persistence_probe(1, 3, &sw("20121"), &sw("201"), &[2, 4, 8]).unwrap();
    assert!(r.monotone);
    assert_eq!(r.steps.len(), 3);
    assert!(r
        .steps
        .windows(2)
        .all(|s| s[1].lambda_gap < s[0].lambda_gap));
    for s in &r.steps {
        assert!(is_realizable_combinatorial(
            recode_inverse(&s.word).symbols().unwrap()
        ));
    }
    assert!(matches!(
        persistence_probe(1, 3, &sw("201"), &sw("2011"), &[2]),
        Err(TeapotError::ConnectorNotFound { .. })
    ));
}
