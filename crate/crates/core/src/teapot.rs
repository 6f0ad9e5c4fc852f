//! Point clouds of (root, growth rate) pairs over the critically periodic
//! parameters of a principal vein, their projections and slices, and
//! numeric probes of root persistence under concatenation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kneading::kneading_polynomial;
use crate::polyalg::{
    circle_union_distance, roots, strip_cyclotomic, IntPolynomial, PolyError, RootSet,
    DEFAULT_CIRCLE_BAND, DEFAULT_ROOT_TOLERANCE,
};
use crate::words::{
    flip_last, is_realizable_combinatorial, is_vein_minimal, one_sided_words, realizable_words,
    recode_inverse, recode_symbols, EnumerationMode, SimplifiedWord, WordError,
};

#[derive(Debug, Error)]
pub enum TeapotError {
    #[error("invalid vein {p}/{q}")]
    InvalidVein { p: u32, q: u32 },
    #[error("word {0} is not minimal")]
    NotMinimal(String),
    #[error("no connector of length <= {max_len} joins {w1}^{n} and {w0}^{n}")]
    ConnectorNotFound {
        w0: String,
        w1: String,
        n: usize,
        max_len: usize,
    },
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Which words stand for a parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ItineraryConvention {
    /// One realizable word per critically periodic parameter.
    Realizable,
    /// Both one-sided itineraries of each parameter, i.e. every admissible
    /// irreducible word. The two words share their kneading polynomial.
    OneSided,
}

impl FromStr for ItineraryConvention {
    type Err = TeapotError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "realizable" => Ok(Self::Realizable),
            "one-sided" => Ok(Self::OneSided),
            _ => Err(TeapotError::Word(WordError::Parse(s.to_string()))),
        }
    }
}

impl fmt::Display for ItineraryConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Realizable => "realizable",
            Self::OneSided => "one-sided",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenerateConfig {
    pub p: u32,
    pub q: u32,
    pub max_period: usize,
    pub mode: EnumerationMode,
    pub strip: bool,
    pub convention: ItineraryConvention,
    pub tolerance: f64,
}

impl GenerateConfig {
    pub fn new(p: u32, q: u32, max_period: usize, mode: EnumerationMode, strip: bool) -> Self {
        Self {
            p,
            q,
            max_period,
            mode,
            strip,
            convention: ItineraryConvention::Realizable,
            tolerance: DEFAULT_ROOT_TOLERANCE,
        }
    }
}

/// One word of the cloud with the data shared by its points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CloudWord {
    pub itinerary: SimplifiedWord,
    pub period: usize,
    pub lambda: f64,
    pub minimal: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CloudPoint {
    /// Index into `PointCloud::words`.
    pub word: u32,
    pub z: Complex64,
}

/// A point of the cloud with its word data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TeapotPoint<'a> {
    pub z: Complex64,
    pub lambda: f64,
    pub period: usize,
    pub itinerary: &'a SimplifiedWord,
    pub minimal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CloudMetadata {
    pub p: u32,
    pub q: u32,
    pub max_period: usize,
    pub mode: EnumerationMode,
    pub strip: bool,
    pub convention: ItineraryConvention,
    pub tolerance: f64,
    pub words: usize,
    pub points: usize,
    pub elapsed_seconds: f64,
    pub tool_version: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    pub metadata: CloudMetadata,
    /// Sorted by period, then itinerary.
    pub words: Vec<CloudWord>,
    /// Grouped by word in word order, each group sorted by `(re, im)`.
    pub points: Vec<CloudPoint>,
}

pub const CSV_HEADER: &str = "period,itinerary,lambda,re,im,minimal";

impl PointCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = TeapotPoint<'_>> + '_ {
        self.points.iter().map(|pt| {
            let w = &self.words[pt.word as usize];
            TeapotPoint {
                z: pt.z,
                lambda: w.lambda,
                period: w.period,
                itinerary: &w.itinerary,
                minimal: w.minimal,
            }
        })
    }

    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for pt in self.iter() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                pt.period, pt.itinerary, pt.lambda, pt.z.re, pt.z.im, pt.minimal
            )?;
        }
        Ok(())
    }

    /// Metadata record first, then one record per point.
    pub fn write_jsonl(&self, out: &mut impl Write) -> io::Result<()> {
        let meta = serde_json::json!({ "metadata": self.metadata });
        writeln!(out, "{meta}")?;
        for pt in self.iter() {
            let rec = serde_json::json!({
                "period": pt.period,
                "itinerary": pt.itinerary.to_string(),
                "lambda": pt.lambda,
                "re": pt.z.re,
                "im": pt.z.im,
                "minimal": pt.minimal,
            });
            writeln!(out, "{rec}")?;
        }
        Ok(())
    }
}

/// Exact kneading polynomials on disk, one JSON file per
/// `(p, q, period)` mapping itineraries to coefficient arrays.
#[derive(Clone, Debug)]
pub struct PolynomialCache {
    dir: PathBuf,
}

impl PolynomialCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    fn file(&self, p: u32, q: u32, period: usize) -> PathBuf {
        self.dir
            .join(format!("vein-{p}-{q}"))
            .join(format!("period-{period}.json"))
    }

    pub fn load(
        &self,
        p: u32,
        q: u32,
        period: usize,
    ) -> Result<BTreeMap<String, IntPolynomial>, TeapotError> {
        let path = self.file(p, q, period);
        if !path.exists() {
            return Ok(BTreeMap::new());
        }
        let text = fs::read_to_string(&path)?;
        let raw: BTreeMap<String, Vec<String>> = serde_json::from_str(&text)
            .map_err(|e| TeapotError::Cache(format!("{}: {e}", path.display())))?;
        raw.into_iter()
            .map(|(k, coeffs)| {
                let c: Result<Vec<BigInt>, _> =
                    coeffs.iter().map(|c| c.parse::<BigInt>()).collect();
                c.map(|c| (k, IntPolynomial::new(c)))
                    .map_err(|e| TeapotError::Cache(format!("{}: {e}", path.display())))
            })
            .collect()
    }

    /// Merge `entries` into the stored file; existing keys are kept.
    pub fn store(
        &self,
        p: u32,
        q: u32,
        period: usize,
        entries: &BTreeMap<String, IntPolynomial>,
    ) -> Result<(), TeapotError> {
        let mut all = self.load(p, q, period)?;
        for (k, v) in entries {
            all.entry(k.clone()).or_insert_with(|| v.clone());
        }
        let raw: BTreeMap<&String, Vec<String>> = all
            .iter()
            .map(|(k, v)| (k, v.coeffs().iter().map(|c| c.to_string()).collect()))
            .collect();
        let path = self.file(p, q, period);
        fs::create_dir_all(path.parent().unwrap())?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string(&raw).unwrap())?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}

fn check_vein(p: u32, q: u32) -> Result<(), TeapotError> {
    if 0 < p && p < q && num_integer::gcd(p, q) == 1 {
        Ok(())
    } else {
        Err(TeapotError::InvalidVein { p, q })
    }
}

/// Largest `n` whose cyclotomic polynomial can divide a polynomial of
/// degree `d`: `n / φ(n) < 6` for every `n` below `2·10^8`.
fn cyclotomic_index_bound(degree: usize) -> usize {
    6 * degree.max(1)
}

pub fn generate(
    p: u32,
    q: u32,
    max_period: usize,
    mode: EnumerationMode,
    strip: bool,
) -> Result<PointCloud, TeapotError> {
    generate_with(&GenerateConfig::new(p, q, max_period, mode, strip), None)
}

/// Enumerate words, compute their kneading polynomials (through the cache
/// when given), optionally strip cyclotomic factors, and collect every root
/// with multiplicity. The period-1 word is left out.
pub fn generate_with(
    config: &GenerateConfig,
    cache: Option<&PolynomialCache>,
) -> Result<PointCloud, TeapotError> {
    let start = Instant::now();
    let (p, q) = (config.p, config.q);
    check_vein(p, q)?;
    let words: Vec<Vec<u8>> = match config.convention {
        ItineraryConvention::Realizable => realizable_words(config.max_period),
        ItineraryConvention::OneSided => one_sided_words(config.max_period),
    }
    .into_iter()
    .filter(|w| w.len() >= 2)
    .collect();

    // Minimality belongs to the parameter, decided on its realizable word.
    let representative = |w: &Vec<u8>| {
        if is_realizable_combinatorial(w) {
            w.clone()
        } else {
            flip_last(w)
        }
    };
    let minimal: Vec<bool> = words
        .par_iter()
        .map(|w| matches!(is_vein_minimal(&representative(w)), Ok(true)))
        .collect();
    let words: Vec<(SimplifiedWord, bool)> = words
        .iter()
        .zip(minimal)
        .filter(|(_, m)| config.mode == EnumerationMode::All || *m)
        .map(|(w, m)| (SimplifiedWord(recode_symbols(w)), m))
        .collect();

    let polys = kneading_polynomials(config, cache, &words)?;

    // Words sharing all but the last symbol share the polynomial.
    let mut groups: BTreeMap<&[u8], usize> = BTreeMap::new();
    for (w, _) in &words {
        let n = groups.len();
        groups.entry(&w.symbols()[..w.len() - 1]).or_insert(n);
    }
    let mut unique: Vec<(usize, &IntPolynomial)> = Vec::with_capacity(groups.len());
    let mut group_of = Vec::with_capacity(words.len());
    let mut seen = vec![false; groups.len()];
    for ((w, _), poly) in words.iter().zip(&polys) {
        let g = groups[&w.symbols()[..w.len() - 1]];
        if !seen[g] {
            seen[g] = true;
            unique.push((g, poly));
        }
        group_of.push(g);
    }
    type Solved = Result<(f64, Vec<Complex64>), PolyError>;
    let solved: Vec<(usize, Solved)> = unique
        .par_iter()
        .map(|&(g, poly)| (g, solve(poly, config)))
        .collect();
    let mut by_group: Vec<Option<(f64, Vec<Complex64>)>> = vec![None; groups.len()];
    for (g, r) in solved {
        by_group[g] = Some(r?);
    }

    let mut order: Vec<usize> = (0..words.len()).collect();
    order.sort_by(|&a, &b| {
        let (wa, wb) = (&words[a].0, &words[b].0);
        wa.len()
            .cmp(&wb.len())
            .then_with(|| wa.symbols().cmp(wb.symbols()))
    });
    let mut cloud_words = Vec::with_capacity(words.len());
    let mut points = Vec::new();
    for i in order {
        let (lambda, zs) = by_group[group_of[i]].as_ref().unwrap();
        let idx = cloud_words.len() as u32;
        cloud_words.push(CloudWord {
            itinerary: words[i].0.clone(),
            period: words[i].0.len(),
            lambda: *lambda,
            minimal: words[i].1,
        });
        points.extend(zs.iter().map(|&z| CloudPoint { word: idx, z }));
    }
    Ok(PointCloud {
        metadata: CloudMetadata {
            p,
            q,
            max_period: config.max_period,
            mode: config.mode,
            strip: config.strip,
            convention: config.convention,
            tolerance: config.tolerance,
            words: cloud_words.len(),
            points: points.len(),
            elapsed_seconds: start.elapsed().as_secs_f64(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        },
        words: cloud_words,
        points,
    })
}

fn kneading_polynomials(
    config: &GenerateConfig,
    cache: Option<&PolynomialCache>,
    words: &[(SimplifiedWord, bool)],
) -> Result<Vec<IntPolynomial>, TeapotError> {
    let q = config.q;
    let Some(cache) = cache else {
        return Ok(words
            .par_iter()
            .map(|(w, _)| kneading_polynomial(w, q))
            .collect());
    };
    let mut out = Vec::with_capacity(words.len());
    let mut stored: HashMap<usize, BTreeMap<String, IntPolynomial>> = HashMap::new();
    let mut fresh: HashMap<usize, BTreeMap<String, IntPolynomial>> = HashMap::new();
    for (w, _) in words {
        let n = w.len();
        if let std::collections::hash_map::Entry::Vacant(e) = stored.entry(n) {
            e.insert(cache.load(config.p, q, n)?);
        }
        let key = w.to_string();
        let poly = match stored[&n].get(&key) {
            Some(poly) => poly.clone(),
            None => {
                let poly = kneading_polynomial(w, q);
                fresh.entry(n).or_default().insert(key, poly.clone());
                poly
            }
        };
        out.push(poly);
    }
    let mut periods: Vec<_> = fresh.keys().copied().collect();
    periods.sort_unstable();
    for n in periods {
        cache.store(config.p, q, n, &fresh[&n])?;
    }
    Ok(out)
}

/// Growth rate and sorted roots (with multiplicity) of one polynomial.
fn solve(
    poly: &IntPolynomial,
    config: &GenerateConfig,
) -> Result<(f64, Vec<Complex64>), PolyError> {
    let all = roots(poly, config.tolerance)?;
    let lambda = all.spectral_radius().max(1.0);
    let kept = if config.strip {
        let d = poly.degree().unwrap_or(0);
        roots(
            &strip_cyclotomic(poly, cyclotomic_index_bound(d)),
            config.tolerance,
        )?
    } else {
        all
    };
    let mut zs = kept.points();
    zs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok((lambda, zs))
}

/// Root set of the kneading polynomial of a minimal word: every root that
/// appears at its growth rate.
pub fn z_of_lambda(p: u32, q: u32, lambda_word: &SimplifiedWord) -> Result<RootSet, TeapotError> {
    check_vein(p, q)?;
    let binary = recode_inverse(lambda_word);
    let binary = binary.symbols().expect("finite word");
    if !matches!(is_vein_minimal(binary), Ok(true)) {
        return Err(TeapotError::NotMinimal(lambda_word.to_string()));
    }
    Ok(roots(
        &kneading_polynomial(lambda_word, q),
        DEFAULT_ROOT_TOLERANCE,
    )?)
}

/// Cloud points with λ forgotten, merged when closer than `tolerance`.
pub fn thurston_projection(cloud: &PointCloud, tolerance: f64) -> Vec<Complex64> {
    let mut zs: Vec<Complex64> = cloud.points.iter().map(|p| p.z).collect();
    zs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let cell = |z: Complex64| {
        (
            (z.re / tolerance).floor() as i64,
            (z.im / tolerance).floor() as i64,
        )
    };
    let mut grid: HashMap<(i64, i64), Vec<Complex64>> = HashMap::new();
    let mut out = Vec::new();
    for z in zs {
        let (cx, cy) = cell(z);
        let near = (-1..=1).any(|dx| {
            (-1..=1).any(|dy| {
                grid.get(&(cx + dx, cy + dy))
                    .is_some_and(|v| v.iter().any(|w| (w - z).norm() <= tolerance))
            })
        });
        if !near {
            grid.entry((cx, cy)).or_default().push(z);
            out.push(z);
        }
    }
    out
}

/// Points whose growth rate lies within `width` of `lambda`.
pub fn slice(cloud: &PointCloud, lambda: f64, width: f64) -> Vec<Complex64> {
    cloud
        .iter()
        .filter(|pt| (pt.lambda - lambda).abs() <= width)
        .map(|pt| pt.z)
        .collect()
}

/// One concatenation `w1^N u w0^N` of a persistence probe.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PersistenceStep {
    pub n: usize,
    /// Binary connector `u`.
    pub connector: String,
    pub word: SimplifiedWord,
    /// Hausdorff distance, with the unit circle adjoined to both sides,
    /// between the roots inside the disk and the target roots.
    pub distance: f64,
    /// `|λ - λ(w1)|`.
    pub lambda_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PersistenceReport {
    pub w0: SimplifiedWord,
    pub w1: SimplifiedWord,
    pub target_lambda: f64,
    pub steps: Vec<PersistenceStep>,
    /// Distances are non-increasing in `N`.
    pub monotone: bool,
}

/// Longest connector tried by `persistence_probe`.
pub const MAX_CONNECTOR_LEN: usize = 16;

fn inside_disk(rs: &RootSet) -> Vec<Complex64> {
    rs.points()
        .into_iter()
        .filter(|z| z.norm() < 1.0 - DEFAULT_CIRCLE_BAND)
        .collect()
}

/// For each `N`, the first realizable `w1^N u w0^N` in (length, binary)
/// order of `u`, with the distance of its roots inside the disk to those of
/// `w0` and of its growth rate to that of `w1`.
pub fn persistence_probe(
    p: u32,
    q: u32,
    w0: &SimplifiedWord,
    w1: &SimplifiedWord,
    n_list: &[usize],
) -> Result<PersistenceReport, TeapotError> {
    check_vein(p, q)?;
    let b0 = recode_inverse(w0).symbols().expect("finite word").to_vec();
    let b1 = recode_inverse(w1).symbols().expect("finite word").to_vec();
    let target = inside_disk(&roots(&kneading_polynomial(w0, q), DEFAULT_ROOT_TOLERANCE)?);
    let target_lambda = roots(&kneading_polynomial(w1, q), DEFAULT_ROOT_TOLERANCE)?
        .spectral_radius()
        .max(1.0);
    let mut steps = Vec::new();
    for &n in n_list {
        let (connector, word) =
            find_connector(&b0, &b1, n).ok_or_else(|| TeapotError::ConnectorNotFound {
                w0: w0.to_string(),
                w1: w1.to_string(),
                n,
                max_len: MAX_CONNECTOR_LEN,
            })?;
        let sw = SimplifiedWord(recode_symbols(&word));
        let rs = roots(&kneading_polynomial(&sw, q), DEFAULT_ROOT_TOLERANCE)?;
        steps.push(PersistenceStep {
            n,
            connector: connector.iter().map(|d| char::from(b'0' + d)).collect(),
            word: sw,
            distance: circle_union_distance(&inside_disk(&rs), &target),
            lambda_gap: (rs.spectral_radius().max(1.0) - target_lambda).abs(),
        });
    }
    let monotone = steps.windows(2).all(|s| s[1].distance <= s[0].distance);
    Ok(PersistenceReport {
        w0: w0.clone(),
        w1: w1.clone(),
        target_lambda,
        steps,
        monotone,
    })
}

fn find_connector(b0: &[u8], b1: &[u8], n: usize) -> Option<(Vec<u8>, Vec<u8>)> {
    let head: Vec<u8> = b1.iter().copied().cycle().take(b1.len() * n).collect();
    let tail: Vec<u8> = b0.iter().copied().cycle().take(b0.len() * n).collect();
    for len in 0..=MAX_CONNECTOR_LEN {
        for bits in 0..(1u32 << len) {
            let u: Vec<u8> = (0..len)
                .map(|i| ((bits >> (len - 1 - i)) & 1) as u8)
                .collect();
            let mut w = head.clone();
            w.extend(&u);
            w.extend(&tail);
            if is_realizable_combinatorial(&w) {
                return Some((u, w));
            }
        }
    }
    None
}

/// Write a cloud as CSV to `path`.
pub fn write_csv_file(cloud: &PointCloud, path: &Path) -> Result<(), TeapotError> {
    let mut f = io::BufWriter::new(fs::File::create(path)?);
    cloud.write_csv(&mut f)?;
    f.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sw(s: &str) -> SimplifiedWord {
        s.parse().unwrap()
    }

    #[test]
    fn small_real_cloud() {
        let cloud = generate(1, 2, 3, EnumerationMode::All, false).unwrap();
        let words: Vec<String> = cloud
            .words
            .iter()
            .map(|w| w.itinerary.to_string())
            .collect();
        assert_eq!(words, ["20", "201"]);
        assert_eq!(cloud.words[0].lambda, 1.0);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((cloud.words[1].lambda - golden).abs() < 1e-12);
        // 1 - z^2 and 1 + 2z - z^3.
        assert_eq!(cloud.len(), 5);
    }

    #[test]
    fn csv_layout() {
        let cloud = generate(1, 2, 3, EnumerationMode::All, false).unwrap();
        let mut buf = Vec::new();
        cloud.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "2,20,1,-1,0,true");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn vein_root_z() {
        let rs = z_of_lambda(1, 3, &sw("20")).unwrap();
        assert_eq!(rs.count(), 3);
        assert!(rs.points().iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        // Tuned by the airplane: same entropy as the airplane, farther out.
        let tuned = crate::kneading::tune(&sw("201"), &sw("20121"));
        assert!(matches!(
            z_of_lambda(1, 3, &tuned),
            Err(TeapotError::NotMinimal(_))
        ));
    }

    #[test]
    fn projection_dedupes() {
        let cloud = generate(1, 2, 6, EnumerationMode::All, false).unwrap();
        let proj = thurston_projection(&cloud, 1e-9);
        assert!(proj.len() < cloud.len());
        assert!(thurston_projection(
            &generate(1, 2, 1, EnumerationMode::All, false).unwrap(),
            1e-9
        )
        .is_empty());
    }
}
