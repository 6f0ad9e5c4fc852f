use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::poly::IntPolynomial;
use super::PolyError;

pub const DEFAULT_ROOT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_CIRCLE_BAND: f64 = 1e-6;

const MAX_ITERATIONS: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub z: Complex64,
    pub multiplicity: usize,
}

/// Complex roots with multiplicity.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub tolerance: f64,
}

impl RootSet {
    pub fn empty(tolerance: f64) -> Self {
        Self {
            roots: Vec::new(),
            tolerance,
        }
    }

    /// Sum of multiplicities.
    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Every root repeated by its multiplicity.
    pub fn points(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.z, r.multiplicity))
            .collect()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.roots.iter().map(|r| r.z.norm()).fold(0.0, f64::max)
    }

    pub fn filter(&self, keep: impl Fn(Complex64) -> bool) -> Self {
        Self {
            roots: self.roots.iter().copied().filter(|r| keep(r.z)).collect(),
            tolerance: self.tolerance,
        }
    }

    /// Canonical order: by modulus, then argument.
    pub fn sorted(mut self) -> Self {
        self.roots.sort_by(|a, b| {
            a.z.norm()
                .total_cmp(&b.z.norm())
                .then(a.z.arg().total_cmp(&b.z.arg()))
        });
        self
    }
}

/// Roots as `[re, im, multiplicity]` triples.
impl Serialize for RootSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.roots.len()))?;
        for r in &self.roots {
            seq.serialize_element(&(r.z.re, r.z.im, r.multiplicity))?;
        }
        seq.end()
    }
}

/// All complex roots of a nonzero polynomial.
///
/// Repeated factors are separated exactly first, so each square-free part
/// is solved with simple roots: companion-matrix eigenvalues seed Aberth
/// iterations, and every root is accepted only if its relative backward
/// error is below `tol`.
pub fn roots(p: &IntPolynomial, tol: f64) -> Result<RootSet, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut out = RootSet::empty(tol);
    let zeros = p.trailing_zeros();
    if zeros > 0 {
        out.roots.push(Root {
            z: Complex64::new(0.0, 0.0),
            multiplicity: zeros,
        });
    }
    let rest = p.unshift(zeros);
    for (factor, mult) in rest.squarefree_factors() {
        for z in simple_roots(&factor, tol)? {
            out.roots.push(Root {
                z,
                multiplicity: mult,
            });
        }
    }
    Ok(out)
}

/// Roots with modulus outside `[1 - band, 1 + band]`, excluding the origin.
///
/// With `band = 0` the cutoff is the exact modulus 1.
pub fn off_circle_roots(p: &IntPolynomial, band: f64) -> Result<RootSet, PolyError> {
    let all = roots(p, DEFAULT_ROOT_TOLERANCE)?;
    Ok(all.filter(|z| z.norm() != 0.0 && (z.norm() - 1.0).abs() > band))
}

/// Hausdorff distance between finite point sets; `0` if both are empty and
/// infinite if exactly one is.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let one_way = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| (p - q).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Hausdorff distance between `A ∪ S¹` and `B ∪ S¹`.
pub fn root_set_distance(a: &RootSet, b: &RootSet) -> f64 {
    circle_union_distance(&a.points(), &b.points())
}

/// Hausdorff distance between `A ∪ S¹` and `B ∪ S¹` for plain point lists.
pub fn circle_union_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    // Points of the circle are at distance 0 from the other union, so only
    // the finite points matter, each measured to the nearer of the circle
    // and the other finite set.
    let one_way = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|p| {
                let to_circle = (p.norm() - 1.0).abs();
                y.iter().map(|q| (p - q).norm()).fold(to_circle, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Largest real root, if any.
pub fn largest_real_root(p: &IntPolynomial) -> Result<Option<f64>, PolyError> {
    let rs = roots(p, DEFAULT_ROOT_TOLERANCE)?;
    Ok(rs
        .roots
        .iter()
        .filter(|r| r.z.im.abs() <= 1e-9 * r.z.norm().max(1.0))
        .map(|r| r.z.re)
        .reduce(f64::max))
}

/// `max(1, spectral radius)`: the growth rate carried by a polynomial whose
/// roots are eigenvalues of a non-negative integer matrix.
pub fn growth_rate(p: &IntPolynomial) -> Result<f64, PolyError> {
    Ok(roots(p, DEFAULT_ROOT_TOLERANCE)?.spectral_radius().max(1.0))
}

/// Largest real root of `x^q - x^(q-1) - 2`, the growth rate at the tip of
/// the `p/q` vein.
pub fn tip_growth_rate(q: u32) -> f64 {
    assert!(q >= 2, "tip_growth_rate needs q >= 2");
    let f = |x: f64| x.powi(q as i32) - x.powi(q as i32 - 1) - 2.0;
    if f(2.0) == 0.0 {
        return 2.0;
    }
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Roots of a square-free polynomial with no root at the origin.
fn simple_roots(p: &IntPolynomial, tol: f64) -> Result<Vec<Complex64>, PolyError> {
    let coeffs = p.to_f64_coeffs();
    let d = coeffs.len() - 1;
    match d {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)]),
        _ => {}
    }
    let lead = coeffs[d];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let mut z = initial_estimates(&monic);
    aberth(&monic, &mut z);
    let scale = |r: f64| monic.iter().rev().fold(0.0, |acc, c| acc * r + c.abs());
    for zi in z.iter_mut() {
        if zi.im.abs() < 1e-14 * zi.norm().max(1e-300) {
            zi.im = 0.0;
        }
        let resid = horner(&monic, *zi).norm() / scale(zi.norm());
        if !resid.is_finite() || resid > tol {
            return Err(PolyError::NonConvergence {
                degree: d,
                residual: resid,
            });
        }
    }
    Ok(z)
}

fn horner(c: &[f64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Newton correction `p(z) / p'(z)`, evaluated on the reversed polynomial
/// outside the unit disk to avoid overflow.
fn newton_ratio(c: &[f64], z: Complex64) -> Complex64 {
    let d = c.len() - 1;
    let zero = Complex64::new(0.0, 0.0);
    if z.norm() <= 1.0 {
        let (mut p, mut dp) = (zero, zero);
        for &a in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        p / dp
    } else {
        let w = z.inv();
        let (mut r, mut dr) = (zero, zero);
        for &a in c.iter() {
            dr = dr * w + r;
            r = r * w + a;
        }
        z * r / (r * d as f64 - w * dr)
    }
}

fn initial_estimates(monic: &[f64]) -> Vec<Complex64> {
    let d = monic.len() - 1;
    let mut comp = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        comp[(i, d - 1)] = -monic[i];
    }
    if let Some(ev) = comp.clone().try_schur(1e-15, 10_000) {
        let ev = ev.complex_eigenvalues();
        if ev.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            let mut v: Vec<Complex64> = ev.iter().copied().collect();
            // Exact duplicates stall Aberth; nudge them apart.
            for i in 0..v.len() {
                for j in 0..i {
                    if v[i] == v[j] {
                        v[i] += Complex64::new(1e-7, 1e-7 * (i as f64 + 1.0));
                    }
                }
            }
            return v;
        }
    }
    let r = monic[0].abs().powf(1.0 / d as f64).max(0.5);
    (0..d)
        .map(|k| Complex64::from_polar(r, std::f64::consts::TAU * (k as f64 + 0.25) / d as f64))
        .collect()
}

fn aberth(monic: &[f64], z: &mut [Complex64]) {
    let n = z.len();
    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        let mut moved = false;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let ratio = newton_ratio(monic, z[i]);
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    sum += (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !step.re.is_finite() || !step.im.is_finite() {
                done[i] = true;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(1e-300) {
                done[i] = true;
            } else {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == (f(hi) > 0.0) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn quadratic_with_integer_roots() {
        let mut r: Vec<f64> = roots(&p(&[-2, -1, 1]), 1e-12)
            .unwrap()
            .points()
            .iter()
            .map(|z| z.re)
            .collect();
        r.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(r[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn leading_root_matches_bisection() {
        let lam = largest_real_root(&p(&[-1, -2, 0, 0, 1])).unwrap().unwrap();
        let oracle = bisect(|x| x.powi(4) - 2.0 * x - 1.0, 1.39, 1.40);
        assert_abs_diff_eq!(lam, oracle, epsilon = 1e-12);
        assert_abs_diff_eq!(lam, 1.395337, epsilon = 1e-6);
    }

    #[test]
    fn pure_power_has_zero_root() {
        let r = roots(&IntPolynomial::monomial(1, 7), 1e-12).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert_eq!(r.count(), 7);
        assert_eq!(r.roots[0].z, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn repeated_roots_get_multiplicity() {
        // (x - 1)^3 (x + 2)
        let f = &p(&[-1, 1]).pow(3) * &p(&[2, 1]);
        let r = roots(&f, 1e-12).unwrap();
        assert_eq!(r.count(), 4);
        let triple = r.roots.iter().find(|r| r.multiplicity == 3).unwrap();
        assert_abs_diff_eq!(triple.z.re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn off_circle_examples() {
        let th = p(&[0, 0, 0, 0, 0, 0, -1, -2, 0, 0, 1]);
        let mar = p(&[-1, -2, 0, 0, 1]);
        let a = off_circle_roots(&th, 1e-6).unwrap();
        let b = off_circle_roots(&mar, 1e-6).unwrap();
        assert_eq!(a.count(), b.count());
        assert!(root_set_distance(&a, &b) < 1e-8);
        assert!(hausdorff(&a.points(), &b.points()) < 1e-8);
        assert!(off_circle_roots(&p(&[1, 0, 0, -1]), 1e-6)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn distance_examples() {
        let one = |x: f64| RootSet {
            roots: vec![Root {
                z: Complex64::new(x, 0.0),
                multiplicity: 1,
            }],
            tolerance: 0.0,
        };
        assert_eq!(root_set_distance(&one(2.0), &one(2.0)), 0.0);
        assert_abs_diff_eq!(
            root_set_distance(&one(2.0), &one(2.1)),
            0.1,
            epsilon = 1e-12
        );
        // A point near the circle is close to the circle of the other set.
        assert_abs_diff_eq!(
            root_set_distance(&one(1.05), &RootSet::empty(0.0)),
            0.05,
            epsilon = 1e-12
        );
    }

    #[test]
    fn tip_rates() {
        assert_eq!(tip_growth_rate(2), 2.0);
        let oracle = bisect(|x| x.powi(3) - x.powi(2) - 2.0, 1.5, 2.0);
        assert_abs_diff_eq!(tip_growth_rate(3), oracle, epsilon = 1e-12);
        assert_abs_diff_eq!(tip_growth_rate(3), 1.69562, epsilon = 1e-5);
        for q in 2..12 {
            assert!(tip_growth_rate(q + 1) < tip_growth_rate(q));
            assert!(tip_growth_rate(q) > 1.0);
        }
    }

    #[test]
    fn high_degree_cyclotomic_like() {
        // x^60 - 1 has 60 unimodular simple roots.
        let mut c = vec![0i64; 61];
        c[0] = -1;
        c[60] = 1;
        let r = roots(&p(&c), 1e-12).unwrap();
        assert_eq!(r.count(), 60);
        assert!(r.roots.iter().all(|r| (r.z.norm() - 1.0).abs() < 1e-10));
    }
}
