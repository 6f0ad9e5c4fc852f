mod plot;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use teapot_core::acceptance::{self, AcceptanceConfig};
use teapot_core::angles::{angle_to_itineraries, angles_for_itinerary, Angle};
use teapot_core::kneading::{kneading_polynomial, parry_polynomial};
use teapot_core::markov::markov_polynomial;
use teapot_core::polyalg::{
    off_circle_roots, root_set_distance, IntPolynomial, RootSet, DEFAULT_CIRCLE_BAND,
    DEFAULT_ROOT_TOLERANCE,
};
use teapot_core::teapot::{
    generate_with, thurston_projection, GenerateConfig, ItineraryConvention,
};
use teapot_core::wedge::thurston_polynomial;
use teapot_core::words::{q_recode, recode_inverse, EnumerationMode, SimplifiedWord};

/// Core entropy, kneading polynomials and Master Teapot point clouds on the
/// principal veins of the Mandelbrot set.
#[derive(Parser, Debug)]
#[command(name = "teapot", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Core entropy of an external angle or of a vein itinerary.
    Entropy(EntropyArgs),
    /// Kneading, Parry, Markov and Thurston polynomials of a vein itinerary.
    Polys(PolysArgs),
    /// Master Teapot point cloud as CSV (or JSON lines for a .jsonl path).
    Teapot(CloudArgs),
    /// Teapot points with the growth rate forgotten and duplicates merged.
    ThurstonSet(CloudArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
    /// Render a point CSV as an SVG scatter plot.
    Plot(PlotArgs),
}

#[derive(Args, Debug)]
struct EntropyArgs {
    /// External angle a/b of a critically periodic parameter.
    #[arg(
        long,
        conflicts_with = "itinerary",
        required_unless_present = "itinerary"
    )]
    angle: Option<Angle>,
    /// Simplified itinerary over {0, 1, 2}.
    #[arg(long)]
    itinerary: Option<SimplifiedWord>,
    /// Principal vein p/q; searched for when only an angle is given.
    #[arg(long)]
    vein: Option<Vein>,
    #[arg(long, default_value_t = DEFAULT_ROOT_TOLERANCE)]
    tolerance: f64,
}

#[derive(Args, Debug)]
struct PolysArgs {
    #[arg(long)]
    vein: Vein,
    #[arg(long)]
    itinerary: SimplifiedWord,
    #[arg(long, default_value_t = DEFAULT_ROOT_TOLERANCE)]
    tolerance: f64,
}

#[derive(Args, Debug)]
struct CloudArgs {
    #[arg(long)]
    vein: Vein,
    #[arg(long, default_value_t = 12)]
    max_period: usize,
    #[arg(long, default_value = "all")]
    mode: EnumerationMode,
    /// Drop cyclotomic factors before solving.
    #[arg(long)]
    strip_cyclotomic: bool,
    /// realizable (one word per center) or one-sided (both itineraries).
    #[arg(long, default_value = "realizable")]
    convention: ItineraryConvention,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (all cores when absent).
    #[arg(long)]
    jobs: Option<usize>,
    /// Root tolerance; for thurston-set also the merge distance.
    #[arg(long, default_value_t = DEFAULT_ROOT_TOLERANCE)]
    tolerance: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Largest real period in the three-way root comparison.
    #[arg(long, default_value_t = 10)]
    max_period: usize,
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
    /// Run only these criteria, e.g. --only 1,4,12.
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..=12))]
    only: Vec<u32>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// CSV with `re` and `im` columns and optionally `lambda`.
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A principal vein `p/q` with `0 < p < q` coprime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Vein {
    p: u32,
    q: u32,
}

impl FromStr for Vein {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, q) = s
            .split_once('/')
            .ok_or_else(|| format!("expected p/q, got {s:?}"))?;
        let p: u32 = p
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {s:?}"))?;
        let q: u32 = q
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {s:?}"))?;
        if !(0 < p && p < q && gcd(p, q) == 1) {
            return Err(format!(
                "{s} is not a principal vein (need 0 < p < q coprime)"
            ));
        }
        Ok(Vein { p, q })
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Prefix a library error with the name of its type.
fn named<E: std::error::Error + Send + Sync + 'static>(e: E) -> anyhow::Error {
    let full = std::any::type_name::<E>();
    let short = full.rsplit("::").next().unwrap_or(full);
    anyhow!("{short}: {e}")
}

fn set_threads(jobs: Option<usize>) -> Result<()> {
    let n = jobs.unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("thread pool")
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn fmt_root(z: Complex64) -> String {
    format!("{:.12} {:+.12}i", z.re, z.im)
}

/// First vein with `q <= 16` on which `θ` has an itinerary.
fn find_vein(theta: &Angle) -> Option<(Vein, SimplifiedWord, String)> {
    (2..=16u32)
        .flat_map(|q| (1..q).filter(move |&p| gcd(p, q) == 1).map(move |p| (p, q)))
        .find_map(|(p, q)| {
            angle_to_itineraries(theta, p, q)
                .ok()
                .map(|it| (Vein { p, q }, it.simplified, it.full.to_string()))
        })
}

fn entropy(args: EntropyArgs) -> Result<()> {
    set_threads(Some(1))?;
    let mut out = io::stdout().lock();
    let tol = args.tolerance;
    if let Some(theta) = args.angle {
        let thurston = thurston_polynomial(&theta);
        writeln!(out, "angle: {theta}")?;
        let vein = match args.vein {
            Some(v) => {
                let it = angle_to_itineraries(&theta, v.p, v.q).map_err(named)?;
                Some((v, it.simplified, it.full.to_string()))
            }
            None => find_vein(&theta),
        };
        let lambda = if let Some((v, simplified, full)) = vein {
            let markov =
                markov_polynomial(&q_recode(&simplified, v.q as u8), v.q).map_err(named)?;
            writeln!(out, "vein: {}/{}", v.p, v.q)?;
            writeln!(out, "itinerary: {simplified} (full {full})")?;
            writeln!(out, "markov: {markov}")?;
            growth(&markov, tol)?
        } else {
            growth(&thurston, tol)?
        };
        writeln!(out, "thurston: {thurston}")?;
        writeln!(out, "growth_rate: {lambda:.15}")?;
        writeln!(out, "entropy: {:.15}", lambda.ln())?;
    } else if let Some(w) = args.itinerary {
        let v = args.vein.unwrap_or(Vein { p: 1, q: 2 });
        if !w.satisfies_grammar() {
            bail!("WordError: {w} is not a vein itinerary");
        }
        let kneading = kneading_polynomial(&w, v.q);
        let lambda = growth(&kneading, tol)?;
        writeln!(out, "vein: {}/{}", v.p, v.q)?;
        writeln!(out, "itinerary: {w}")?;
        writeln!(out, "kneading: {kneading}")?;
        writeln!(out, "growth_rate: {lambda:.15}")?;
        writeln!(out, "entropy: {:.15}", lambda.ln())?;
    }
    Ok(())
}

fn growth(p: &IntPolynomial, tol: f64) -> Result<f64> {
    let rs = teapot_core::polyalg::roots(p, tol).map_err(named)?;
    Ok(rs.spectral_radius().max(1.0))
}

fn polys(args: PolysArgs) -> Result<()> {
    set_threads(Some(1))?;
    let (w, v) = (&args.itinerary, args.vein);
    if !w.satisfies_grammar() {
        bail!("WordError: {w} is not a vein itinerary");
    }
    let binary = recode_inverse(w);
    let binary = binary.symbols().context("finite itinerary")?.to_vec();
    let kneading = kneading_polynomial(w, v.q);
    let parry = parry_polynomial(&binary);
    let markov = markov_polynomial(&q_recode(w, v.q as u8), v.q).map_err(named)?;
    let angles = angles_for_itinerary(w, v.p, v.q).map_err(named)?;
    let thurston = angles.first().map(thurston_polynomial);

    let mut out = io::stdout().lock();
    writeln!(out, "vein: {}/{}", v.p, v.q)?;
    writeln!(out, "itinerary: {w} (full {})", q_recode(w, v.q as u8))?;
    writeln!(out, "kneading: {kneading}")?;
    writeln!(out, "parry: {parry}")?;
    writeln!(out, "markov: {markov}")?;
    match (&thurston, angles.first()) {
        (Some(t), Some(a)) => writeln!(out, "thurston: {t} (angle {a})")?,
        _ => writeln!(out, "thurston: no angle of this period on the vein")?,
    }
    let off = |p: &IntPolynomial| -> Result<RootSet> {
        off_circle_roots(p, DEFAULT_CIRCLE_BAND).map_err(named)
    };
    let shared = off(&kneading)?;
    let mut others = vec![("markov", off(&markov)?)];
    if v.q == 2 {
        // The Parry polynomial describes the real map, i.e. the 1/2 vein.
        others.push(("parry", off(&parry)?));
    }
    if let Some(t) = &thurston {
        others.push(("thurston", off(t)?));
    }
    writeln!(out, "off-circle roots ({}):", shared.count())?;
    for z in shared.points() {
        writeln!(out, "  {}", fmt_root(z))?;
    }
    for (name, rs) in others {
        let d = root_set_distance(&shared, &rs);
        let agree = rs.count() == shared.count() && d <= args.tolerance.max(1e-8);
        writeln!(
            out,
            "{name} off-circle roots: {} ({})",
            rs.count(),
            if agree {
                format!("agree, distance {d:.1e}")
            } else {
                format!("differ, distance {d:.1e}")
            }
        )?;
    }
    Ok(())
}

fn cloud_config(args: &CloudArgs) -> GenerateConfig {
    let mut c = GenerateConfig::new(
        args.vein.p,
        args.vein.q,
        args.max_period,
        args.mode,
        args.strip_cyclotomic,
    );
    c.convention = args.convention;
    c.tolerance = args.tolerance;
    c
}

fn teapot(args: CloudArgs) -> Result<()> {
    set_threads(args.jobs)?;
    let cloud = generate_with(&cloud_config(&args), None).map_err(named)?;
    let jsonl = args
        .out
        .as_deref()
        .and_then(|p| p.extension())
        .is_some_and(|e| e == "jsonl");
    let mut out = output(args.out.as_deref())?;
    if jsonl {
        cloud.write_jsonl(&mut out)?;
    } else {
        cloud.write_csv(&mut out)?;
    }
    out.flush()?;
    if args.out.is_some() {
        eprintln!(
            "{} points from {} words in {:.2}s",
            cloud.len(),
            cloud.words.len(),
            cloud.metadata.elapsed_seconds
        );
    }
    Ok(())
}

fn thurston_set(args: CloudArgs) -> Result<()> {
    set_threads(args.jobs)?;
    let mut config = cloud_config(&args);
    config.tolerance = DEFAULT_ROOT_TOLERANCE;
    let cloud = generate_with(&config, None).map_err(named)?;
    let points = thurston_projection(&cloud, args.tolerance);
    let mut out = output(args.out.as_deref())?;
    writeln!(out, "re,im")?;
    for z in points {
        writeln!(out, "{:.17e},{:.17e}", z.re, z.im)?;
    }
    out.flush()?;
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<bool> {
    set_threads(args.jobs)?;
    let config = AcceptanceConfig {
        max_period: args.max_period,
        tolerance: args.tolerance,
        only: args.only,
    };
    let results = acceptance::run(&config, |r| println!("{r}"));
    let passed = results.iter().filter(|r| r.passed).count();
    println!("{passed}/{} criteria passed", results.len());
    Ok(passed == results.len())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Entropy(a) => entropy(a).map(|_| true),
        Command::Polys(a) => polys(a).map(|_| true),
        Command::Teapot(a) => teapot(a).map(|_| true),
        Command::ThurstonSet(a) => thurston_set(a).map(|_| true),
        Command::Verify(a) => verify(a),
        Command::Plot(a) => plot::run(&a.input, a.out.as_deref()).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
