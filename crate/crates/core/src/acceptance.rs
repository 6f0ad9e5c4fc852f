//! The acceptance suite: twelve end-to-end checks, each reported as one
//! PASS or FAIL line.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use serde::Serialize;

use crate::angles::{vein_angles_of_period, Angle};
use crate::kneading::{kneading_polynomial, mt_kneading_polynomial, tune, tuned_polynomial};
use crate::markov::{markov_matrix_with, markov_polynomial, TreeMarking};
use crate::oracles::{brute_force_multicycles, real_centers, DEFAULT_CYCLE_BUDGET};
use crate::polyalg::{
    circle_union_distance, cyclotomic, cyclotomic_factors, growth_rate, off_circle_roots,
    root_set_distance, roots, spectral_determinant, tip_growth_rate, IntPolynomial,
    DEFAULT_ROOT_TOLERANCE,
};
use crate::teapot::{generate_with, persistence_probe, GenerateConfig, ItineraryConvention};
use crate::wedge::{
    finite_model, multicycle_expansion, quotient_charpoly_ratio, thurston_polynomial,
    truncated_spectral_determinant, truncation_cover_index, DEFAULT_MULTICYCLE_BUDGET,
};
use crate::words::{
    is_vein_minimal, q_recode, realizable_words, realizable_words_of_period, recode,
    recode_symbols, BinaryWord, EnumerationMode, FullWord, SimplifiedWord,
};

/// Settings for a run of the suite.
#[derive(Clone, Debug, Serialize)]
pub struct AcceptanceConfig {
    /// Largest real period in the three-way root comparison.
    pub max_period: usize,
    /// Distance below which two root sets count as equal.
    pub tolerance: f64,
    /// Run only these criteria (all when empty).
    pub only: Vec<u32>,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        Self {
            max_period: 10,
            tolerance: 1e-8,
            only: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} criterion {:>2} {}: {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

type Check = fn(&AcceptanceConfig) -> Result<String, String>;

const CRITERIA: [(u32, &str, Check); 12] = [
    (1, "one-fifth pipeline", one_fifth_pipeline),
    (2, "three-way root equality", three_way_roots),
    (3, "cyclotomic covers", cyclotomic_covers),
    (4, "truncated spectral determinant", truncated_determinant),
    (5, "vein tip growth rates", tip_growth_rates),
    (6, "recoding and tuning", recoding_and_tuning),
    (7, "q-th root closure", q_root_closure),
    (8, "Milnor-Thurston determinant", mt_determinant),
    (9, "persistence probe", persistence),
    (10, "continuity sampling", continuity),
    (11, "teapot generation", teapot_generation),
    (12, "real center count", real_center_count),
];

/// Names of all criteria, by id.
pub fn criteria() -> Vec<(u32, &'static str)> {
    CRITERIA.iter().map(|(id, name, _)| (*id, *name)).collect()
}

/// Run the selected criteria in order, calling `report` after each.
pub fn run(
    config: &AcceptanceConfig,
    mut report: impl FnMut(&CriterionResult),
) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .filter(|(id, _, _)| config.only.is_empty() || config.only.contains(id))
        .map(|&(id, name, check)| {
            let start = Instant::now();
            let outcome = check(config);
            let seconds = start.elapsed().as_secs_f64();
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            let r = CriterionResult {
                id,
                name,
                passed,
                detail,
                seconds,
            };
            report(&r);
            r
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn angle(s: &str) -> Angle {
    s.parse().expect("literal angle")
}

fn sw(s: &str) -> SimplifiedWord {
    s.parse().expect("literal word")
}

fn poly(s: &str) -> IntPolynomial {
    s.parse().expect("literal polynomial")
}

fn err(e: impl fmt::Display) -> String {
    e.to_string()
}

fn one_fifth_pipeline(_: &AcceptanceConfig) -> Result<String, String> {
    let start = Instant::now();
    let theta = angle("1/5");
    let thurston = thurston_polynomial(&theta);
    let markov = markov_polynomial(&FullWord::parse("2301", 3).map_err(err)?, 3).map_err(err)?;
    let quotient = thurston.exact_div(&markov);
    let elapsed = start.elapsed();
    ensure(thurston == poly("x^10 - 2x^7 - x^6"), || {
        format!("Thurston polynomial {thurston}")
    })?;
    ensure(markov == poly("x^4 - 2x - 1"), || {
        format!("Markov polynomial {markov}")
    })?;
    ensure(quotient == Some(IntPolynomial::monomial(1, 6)), || {
        format!("quotient {quotient:?}")
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{thurston} = x^6 ({markov}) in {:.1} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn three_way_roots(config: &AcceptanceConfig) -> Result<String, String> {
    let start = Instant::now();
    let words: Vec<SimplifiedWord> = realizable_words(config.max_period)
        .into_iter()
        .filter(|w| w.len() >= 2)
        .map(|w| SimplifiedWord(recode_symbols(&w)))
        .collect();
    let mut compared = 0usize;
    let mut worst = 0f64;
    for q in [2u32, 3, 5] {
        let max_len = words
            .iter()
            .map(|w| crate::kneading::full_length(w, q))
            .max()
            .unwrap_or(0);
        let mut by_word: HashMap<SimplifiedWord, Vec<Angle>> = HashMap::new();
        for period in 2..=max_len as u32 {
            for (a, it) in vein_angles_of_period(1, q, period).map_err(err)? {
                by_word.entry(it.simplified).or_default().push(a);
            }
        }
        for w in &words {
            let angles = by_word
                .get(w)
                .ok_or_else(|| format!("no angle on the 1/{q} vein has itinerary {w}"))?;
            let band = 1e-6;
            let kneading = off_circle_roots(&kneading_polynomial(w, q), band).map_err(err)?;
            let full = q_recode(w, q as u8);
            let markov =
                off_circle_roots(&markov_polynomial(&full, q).map_err(err)?, band).map_err(err)?;
            for a in angles {
                let thurston = off_circle_roots(&thurston_polynomial(a), band).map_err(err)?;
                let d = root_set_distance(&kneading, &markov)
                    .max(root_set_distance(&kneading, &thurston));
                let same_count =
                    kneading.count() == markov.count() && kneading.count() == thurston.count();
                ensure(same_count && d <= config.tolerance, || {
                    format!(
                        "{w} on the 1/{q} vein at {a}: {} / {} / {} roots, distance {d:e}",
                        kneading.count(),
                        markov.count(),
                        thurston.count()
                    )
                })?;
                worst = worst.max(d);
                compared += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(600), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{compared} angles up to period {}, q in {{2,3,5}}, max distance {worst:.1e}",
        config.max_period
    ))
}

/// `p = x^d · Π Φ_n^e` exactly.
fn is_monomial_times_cyclotomic(p: &IntPolynomial) -> bool {
    let d = p.trailing_zeros();
    let mut rest = p.unshift(d);
    let bound = 6 * rest.degree().unwrap_or(0).max(1);
    for (n, e) in cyclotomic_factors(&rest, bound) {
        for _ in 0..e {
            rest = rest
                .exact_div(&cyclotomic(n))
                .expect("listed factor divides");
        }
    }
    rest == IntPolynomial::one() || rest == -IntPolynomial::one()
}

fn cyclotomic_covers(_: &AcceptanceConfig) -> Result<String, String> {
    let mut parts = Vec::new();
    for theta in ["1/5", "1/9", "1/7"] {
        for k in [2usize, 3] {
            let ratio = quotient_charpoly_ratio(&angle(theta), k).map_err(err)?;
            ensure(is_monomial_times_cyclotomic(&ratio), || {
                format!("cover {k} of {theta}: ratio {ratio}")
            })?;
            let rs = roots(&ratio, DEFAULT_ROOT_TOLERANCE).map_err(err)?.points();
            let off = rs
                .iter()
                .map(|z| z.norm().min((z.norm() - 1.0).abs()))
                .fold(0.0, f64::max);
            ensure(off < 1e-8, || {
                format!("cover {k} of {theta}: a root is {off:e} off")
            })?;
            parts.push(format!("{theta}/{k}"));
        }
    }
    Ok(format!(
        "ratios are x^d times cyclotomics for {}",
        parts.join(" ")
    ))
}

fn truncated_determinant(_: &AcceptanceConfig) -> Result<String, String> {
    let theta = angle("1/5");
    let nmax = 8;
    let truncated = truncated_spectral_determinant(&theta, nmax).map_err(err)?;
    let k = truncation_cover_index(&theta, nmax);
    let model = finite_model(&theta, k).map_err(err)?;
    let full = spectral_determinant(&model.incidence).truncate(nmax);
    ensure(truncated == full, || {
        format!("truncation {truncated} but det(I - tA_{k}) gives {full}")
    })?;
    let brute_degree = 6;
    let brute = brute_force_multicycles(&model.incidence, brute_degree, DEFAULT_CYCLE_BUDGET)
        .map_err(err)?;
    let fast = multicycle_expansion(&model.incidence, brute_degree, DEFAULT_MULTICYCLE_BUDGET)
        .map_err(err)?
        .coefficients;
    let brute = IntPolynomial::new(brute);
    ensure(
        brute == fast && brute == full.truncate(brute_degree),
        || format!("degree {brute_degree}: search {brute}, expansion {fast}"),
    )?;
    Ok(format!(
        "{truncated} = det(I - tA_{k}) mod t^9; brute force agrees to t^6"
    ))
}

fn tip_growth_rates(_: &AcceptanceConfig) -> Result<String, String> {
    let two = tip_growth_rate(2);
    ensure(two == 2.0, || format!("q = 2 gives {two}"))?;
    let three = tip_growth_rate(3);
    // Independent bisection on x^3 - x^2 - 2 over [1.5, 2].
    let f = |x: f64| x * x * x - x * x - 2.0;
    let (mut lo, mut hi) = (1.5f64, 2.0f64);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid
        } else {
            hi = mid
        }
    }
    ensure(
        (three - lo).abs() < 1e-6 && (three - 1.69562).abs() < 1e-5,
        || format!("q = 3 gives {three}, bisection {lo}"),
    )?;
    Ok(format!("q = 2: {two}, q = 3: {three:.8}"))
}

fn recoding_and_tuning(_: &AcceptanceConfig) -> Result<String, String> {
    let binary: BinaryWord = "10111".parse().map_err(err)?;
    let r = recode(&binary).map_err(err)?;
    ensure(r.to_string() == "20121", || format!("R(10111) = {r}"))?;
    let r3 = q_recode(&sw("2021202020"), 3);
    ensure(r3.to_string() == "230231230230230", || {
        format!("R_3(2021202020) = {r3}")
    })?;
    let tuned = tune(&sw("20"), &sw("20121"));
    ensure(tuned.to_string() == "2021202020", || {
        format!("tune(20, 20121) = {tuned}")
    })?;
    let outers: Vec<SimplifiedWord> = ["20", "201", "20121", "2011"]
        .iter()
        .map(|s| sw(s))
        .collect();
    let inners: Vec<SimplifiedWord> = ["20", "201", "2011", "20121", "2012121"]
        .iter()
        .map(|s| sw(s))
        .collect();
    let mut pairs = 0;
    for outer in &outers {
        for inner in &inners {
            for q in [2u32, 3] {
                let direct = kneading_polynomial(&tune(outer, inner), q);
                let product = tuned_polynomial(outer, q, inner).map_err(err)?;
                ensure(direct == product, || {
                    format!("tuning {outer} by {inner} at q = {q}: {direct} vs {product}")
                })?;
            }
            pairs += 1;
        }
    }
    Ok(format!(
        "recodings and tune(20, 20121) match; identity holds on {pairs} pairs at q = 2, 3"
    ))
}

fn q_root_closure(_: &AcceptanceConfig) -> Result<String, String> {
    let words: Vec<Vec<u8>> = realizable_words(12)
        .into_iter()
        .filter(|w| w.len() >= 3 && matches!(is_vein_minimal(w), Ok(true)))
        .take(50)
        .collect();
    ensure(words.len() == 50, || {
        format!("only {} minimal words", words.len())
    })?;
    let tip = sw("20");
    let mut checked = 0;
    for w in &words {
        let inner = SimplifiedWord(recode_symbols(w));
        let base = kneading_polynomial(&inner, 2);
        let lambda = growth_rate(&base).map_err(err)?;
        let base_roots = off_circle_roots(&base, 1e-6).map_err(err)?.points();
        for q in [2u32, 3, 5] {
            let tuned = kneading_polynomial(&tune(&tip, &inner), q);
            let one_minus = &IntPolynomial::one() - &IntPolynomial::monomial(1, q as usize);
            let one_plus = &IntPolynomial::one() + &IntPolynomial::monomial(1, q as usize);
            let expected = (&one_minus * &base.compose_power(q as usize))
                .exact_div(&one_plus)
                .ok_or_else(|| format!("1 + t^{q} does not divide for {inner}"))?;
            ensure(tuned == expected, || {
                format!("{inner} at q = {q}: {tuned} vs {expected}")
            })?;
            let height = growth_rate(&tuned).map_err(err)?;
            ensure((height - lambda.powf(1.0 / q as f64)).abs() < 1e-8, || {
                format!("{inner} at q = {q}: growth {height} vs {lambda}^(1/{q})")
            })?;
            let lifted: Vec<Complex64> = base_roots
                .iter()
                .flat_map(|z| {
                    let r = z.norm().powf(1.0 / q as f64);
                    let a = z.arg();
                    (0..q).map(move |j| {
                        Complex64::from_polar(
                            r,
                            (a + 2.0 * std::f64::consts::PI * j as f64) / q as f64,
                        )
                    })
                })
                .collect();
            let tuned_roots = off_circle_roots(&tuned, 1e-6).map_err(err)?.points();
            let d = crate::polyalg::hausdorff(&lifted, &tuned_roots);
            ensure(d < 1e-8, || {
                format!("{inner} at q = {q}: q-th roots off by {d:e}")
            })?;
        }
        checked += 1;
    }
    Ok(format!("{checked} minimal words at q = 2, 3, 5"))
}

fn mt_determinant(_: &AcceptanceConfig) -> Result<String, String> {
    let words: Vec<Vec<u8>> = realizable_words(12)
        .into_iter()
        .filter(|w| w.len() >= 2)
        .collect();
    for w in &words {
        let full = q_recode(&SimplifiedWord(recode_symbols(w)), 2);
        let a0 = markov_matrix_with(&full, 2, TreeMarking::Postcritical).map_err(err)?;
        let det = spectral_determinant(&a0.entries);
        let mt = mt_kneading_polynomial(w);
        ensure(det == mt, || {
            let s: String = w.iter().map(|d| char::from(b'0' + d)).collect();
            format!("{s}: det(I - tA0) = {det}, kneading {mt}")
        })?;
    }
    Ok(format!("{} realizable words of period 2..=12", words.len()))
}

/// Word pairs `(w0, w1)` with `w0` closer to the main cardioid.
const PERSISTENCE_PAIRS: [(&str, &str); 5] = [
    ("20", "201"),
    ("20", "20121"),
    ("20121", "201"),
    ("2012121", "201"),
    ("2012121", "20121"),
];

fn persistence(_: &AcceptanceConfig) -> Result<String, String> {
    let mut lines = Vec::new();
    let mut ok = true;
    for (w0, w1) in PERSISTENCE_PAIRS {
        let r = persistence_probe(1, 3, &sw(w0), &sw(w1), &[2, 4, 8]).map_err(err)?;
        let last = r.steps.last().expect("three steps").distance;
        ok &= r.monotone && last < 1e-2;
        let ds: Vec<String> = r
            .steps
            .iter()
            .map(|s| format!("{:.3}", s.distance))
            .collect();
        lines.push(format!("({w0},{w1}) {}", ds.join(">")));
    }
    let detail = format!("distances at N = 2,4,8: {}", lines.join("; "));
    if ok {
        Ok(detail)
    } else {
        Err(format!("{detail}; need monotone and < 1e-2 at N = 8"))
    }
}

fn outside_roots(theta: &Angle) -> Result<Vec<Complex64>, String> {
    let rs = roots(&thurston_polynomial(theta), DEFAULT_ROOT_TOLERANCE).map_err(err)?;
    Ok(rs.filter(|z| z.norm() > 1.0 + 1e-9).points())
}

/// The ten dyadic angles `m / 2^k` closest to `θ`, five on each side.
fn dyadic_neighbours(theta: &Angle, k: u32) -> Vec<Angle> {
    let den = 1u64 << k;
    let below = (theta.numerator() as u128 * den as u128 / theta.denominator() as u128) as u64;
    (below - 4..=below + 5)
        .map(|m| Angle::new(m, den).expect("positive denominator"))
        .collect()
}

fn continuity(_: &AcceptanceConfig) -> Result<String, String> {
    let theta = angle("1/5");
    let target = outside_roots(&theta)?;
    let mut worst_by_level = Vec::new();
    for k in 7..=16u32 {
        let mut worst = 0f64;
        for a in dyadic_neighbours(&theta, k) {
            worst = worst.max(circle_union_distance(&outside_roots(&a)?, &target));
        }
        worst_by_level.push((k, worst));
    }
    let trend: Vec<String> = worst_by_level
        .iter()
        .map(|(k, d)| format!("2^-{k}:{d:.3}"))
        .collect();
    let last = worst_by_level.last().expect("ten levels").1;
    let detail = format!(
        "100 angles, worst Z+ distance per level {}",
        trend.join(" ")
    );
    if last < 1e-2 {
        Ok(detail)
    } else {
        Err(format!("{detail}; need < 1e-2 at 2^-16"))
    }
}

fn teapot_generation(_: &AcceptanceConfig) -> Result<String, String> {
    let mut config = GenerateConfig::new(1, 3, 20, EnumerationMode::All, false);
    config.convention = ItineraryConvention::OneSided;
    let start = Instant::now();
    let cloud = generate_with(&config, None).map_err(err)?;
    let elapsed = start.elapsed();
    let n = cloud.len();
    let expected = 2_800_000f64;
    ensure((n as f64 - expected).abs() <= 0.1 * expected, || {
        format!("{n} points")
    })?;
    ensure(elapsed < Duration::from_secs(1800), || {
        format!("took {elapsed:?}")
    })?;
    drop(cloud);
    let parameters = realizable_words(20).len() - 1;

    let small = GenerateConfig::new(1, 3, 12, EnumerationMode::All, false);
    let csv = |c: &GenerateConfig| -> Result<Vec<u8>, String> {
        let mut out = Vec::new();
        generate_with(c, None)
            .map_err(err)?
            .write_csv(&mut out)
            .map_err(err)?;
        Ok(out)
    };
    let (a, b) = (csv(&small)?, csv(&small)?);
    ensure(a == b, || "period 12 output differs between runs".into())?;
    Ok(format!(
        "{n} points from both one-sided itineraries of {parameters} centers in {:.1}s; period 12 output is byte-identical",
        elapsed.as_secs_f64()
    ))
}

fn real_center_count(_: &AcceptanceConfig) -> Result<String, String> {
    let mut counts = Vec::new();
    for n in 1..=12 {
        let centers = real_centers(n).map_err(err)?.len();
        let words = realizable_words_of_period(n).len();
        ensure(centers == words, || {
            format!("period {n}: {centers} centers, {words} words")
        })?;
        counts.push(centers);
    }
    Ok(format!("counts {counts:?}"))
}
