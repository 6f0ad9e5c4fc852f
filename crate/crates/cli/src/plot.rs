//! SVG scatter plots of point CSVs.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// SVG units per unit of the complex plane.
const SCALE: f64 = 100.0;
const RADIUS: f64 = 0.5;

struct Point {
    x: f64,
    y: f64,
    lambda: Option<f64>,
}

fn read_points(path: &Path) -> Result<Vec<Point>> {
    let mut reader =
        csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (Some(re), Some(im)) = (col("re"), col("im")) else {
        bail!("{} has no re and im columns", path.display());
    };
    let lambda = col("lambda");
    let mut points = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let num = |j: usize| -> Result<f64> {
            rec.get(j)
                .and_then(|s| s.parse().ok())
                .with_context(|| format!("row {}: bad number", i + 2))
        };
        points.push(Point {
            x: num(re)? * SCALE,
            // SVG y grows downwards.
            y: -num(im)? * SCALE,
            lambda: lambda.map(num).transpose()?,
        });
    }
    Ok(points)
}

/// Blue for the smallest growth rate through red for the largest.
fn color(lambda: Option<f64>, lo: f64, hi: f64) -> String {
    match lambda {
        None => "#000".into(),
        Some(l) => {
            let t = if hi > lo { (l - lo) / (hi - lo) } else { 0.0 };
            format!("hsl({:.0},80%,45%)", 240.0 * (1.0 - t))
        }
    }
}

fn render(points: &[Point], out: &mut impl Write) -> std::io::Result<()> {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    let (mut lo, mut hi) = (f64::MAX, f64::MIN);
    for p in points {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
        if let Some(l) = p.lambda {
            lo = lo.min(l);
            hi = hi.max(l);
        }
    }
    if points.is_empty() {
        (x0, y0, x1, y1) = (0.0, 0.0, 0.0, 0.0);
    }
    let pad = RADIUS;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.3} {:.3} {:.3} {:.3}">"#,
        x0 - pad,
        y0 - pad,
        x1 - x0 + 2.0 * pad,
        y1 - y0 + 2.0 * pad
    )?;
    for p in points {
        writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{RADIUS}" fill="{}"/>"#,
            p.x,
            p.y,
            color(p.lambda, lo, hi)
        )?;
    }
    writeln!(out, "</svg>")
}

pub fn run(input: &Path, out: Option<&Path>) -> Result<()> {
    let points = read_points(input)?;
    let mut w = crate::output(out)?;
    render(&points, &mut w)?;
    w.flush()?;
    Ok(())
}
