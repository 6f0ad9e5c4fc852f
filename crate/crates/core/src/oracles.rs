//! Independent reference computations: real superattracting parameters by
//! rigorous interval subdivision, and naive multicycle enumeration.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use rug::float::Round;
use rug::Float;
use serde::Serialize;
use thiserror::Error;

use crate::polyalg::IntMatrix;
use crate::words::is_irreducible;

/// Working precision for center isolation.
pub const CENTER_PREC: u32 = 256;
/// Subdivision stops with an error below this interval width (as a power
/// of two).
const MIN_WIDTH_EXP: i32 = -200;
/// Largest period the center oracle accepts.
pub const MAX_CENTER_PERIOD: usize = 14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("interval subdivision reached width 2^{MIN_WIDTH_EXP} without isolating a root")]
    PrecisionExhausted,
    #[error("period {0} outside 1..={MAX_CENTER_PERIOD}")]
    PeriodOutOfRange(usize),
    #[error("more than {0} cycles; raise the budget")]
    ResourceLimit(usize),
}

/// A real parameter `c` with `f_c^n(0) = 0` for minimal `n`.
#[derive(Clone, Debug, Serialize)]
pub struct RealCenter {
    #[serde(serialize_with = "ser_float")]
    pub c: Float,
    pub period: usize,
    /// Binary itinerary of the critical value (1 on the negative side).
    pub itinerary: Vec<u8>,
}

fn ser_float<S: serde::Serializer>(x: &Float, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string_radix(10, Some(70)))
}

impl RealCenter {
    pub fn c_f64(&self) -> f64 {
        self.c.to_f64()
    }
}

#[derive(Clone, Debug)]
struct Interval {
    lo: Float,
    hi: Float,
}

impl Interval {
    fn point(x: &Float) -> Self {
        Self {
            lo: x.clone(),
            hi: x.clone(),
        }
    }

    fn add(&self, o: &Self) -> Self {
        let (lo, _) = Float::with_val_round(CENTER_PREC, &self.lo + &o.lo, Round::Down);
        let (hi, _) = Float::with_val_round(CENTER_PREC, &self.hi + &o.hi, Round::Up);
        Self { lo, hi }
    }

    fn add_scalar(&self, c: i32) -> Self {
        let (lo, _) = Float::with_val_round(CENTER_PREC, &self.lo + c, Round::Down);
        let (hi, _) = Float::with_val_round(CENTER_PREC, &self.hi + c, Round::Up);
        Self { lo, hi }
    }

    fn mul(&self, o: &Self) -> Self {
        let ends = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in ends {
            let (d, _) = Float::with_val_round(CENTER_PREC, a * b, Round::Down);
            let (u, _) = Float::with_val_round(CENTER_PREC, a * b, Round::Up);
            lo = Some(match lo {
                Some(l) if l <= d => l,
                _ => d,
            });
            hi = Some(match hi {
                Some(h) if h >= u => h,
                _ => u,
            });
        }
        Self {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    fn square(&self) -> Self {
        let mut s = self.mul(self);
        if self.contains_zero() && s.lo < 0 {
            s.lo = Float::with_val(CENTER_PREC, 0);
        }
        s
    }

    fn scale2(&self) -> Self {
        Self {
            lo: Float::with_val(CENTER_PREC, &self.lo * 2u32),
            hi: Float::with_val(CENTER_PREC, &self.hi * 2u32),
        }
    }

    fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    fn strictly_positive(&self) -> bool {
        self.lo > 0
    }

    fn strictly_negative(&self) -> bool {
        self.hi < 0
    }
}

/// Enclosures of `f_c^n(0)` and its derivative in `c` over an interval.
fn iterate(c: &Interval, n: usize) -> (Interval, Interval) {
    let zero = Interval::point(&Float::with_val(CENTER_PREC, 0));
    let mut x = zero.clone();
    let mut dx = zero;
    for _ in 0..n {
        dx = x.mul(&dx).scale2().add_scalar(1);
        x = x.square().add(c);
    }
    (x, dx)
}

fn sign_at(c: &Float, n: usize) -> Option<i8> {
    let (g, _) = iterate(&Interval::point(c), n);
    if g.strictly_positive() {
        Some(1)
    } else if g.strictly_negative() {
        Some(-1)
    } else {
        None
    }
}

/// Isolate the roots of `c -> f_c^n(0)` in `[lo, hi]`: each returned
/// interval contains exactly one simple root.
fn isolate(
    lo: Float,
    hi: Float,
    n: usize,
    out: &mut Vec<(Float, Float)>,
) -> Result<(), OracleError> {
    let box_ = Interval {
        lo: lo.clone(),
        hi: hi.clone(),
    };
    let (g, dg) = iterate(&box_, n);
    if !g.contains_zero() {
        return Ok(());
    }
    if !dg.contains_zero() {
        if let (Some(a), Some(b)) = (sign_at(&lo, n), sign_at(&hi, n)) {
            if a != b {
                out.push((lo, hi));
                return Ok(());
            }
            // Monotone with equal endpoint signs: no root.
            return Ok(());
        }
    }
    let width = Float::with_val(CENTER_PREC, &hi - &lo);
    if width < Float::with_val(CENTER_PREC, Float::i_exp(1, MIN_WIDTH_EXP)) {
        return Err(OracleError::PrecisionExhausted);
    }
    let mid = Float::with_val(CENTER_PREC, &lo + &hi) / 2u32;
    if sign_at(&mid, n).is_none() {
        // The midpoint is (numerically) a root; nudge the split point.
        let nudged = Float::with_val(
            CENTER_PREC,
            &mid + Float::with_val(CENTER_PREC, &width / 7u32),
        );
        isolate(lo, nudged.clone(), n, out)?;
        return isolate(nudged, hi, n, out);
    }
    isolate(lo, mid.clone(), n, out)?;
    isolate(mid, hi, n, out)
}

/// Bisect an isolating interval down to full precision.
fn polish(mut lo: Float, mut hi: Float, n: usize) -> Float {
    let s_lo = sign_at(&lo, n);
    for _ in 0..(CENTER_PREC as usize) {
        let mid = Float::with_val(CENTER_PREC, &lo + &hi) / 2u32;
        if mid <= lo || mid >= hi {
            break;
        }
        match sign_at(&mid, n) {
            None => return mid,
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Float::with_val(CENTER_PREC, &lo + &hi) / 2u32
}

fn orbit(c: &Float, n: usize) -> Vec<Float> {
    let mut x = Float::with_val(CENTER_PREC, 0);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        x = Float::with_val(CENTER_PREC, x.square_ref()) + c;
        out.push(x.clone());
    }
    out
}

/// All real `c` in `[-2, 1/4]` with `f_c^n(0) = 0` and exact period `n`,
/// sorted by `c`, with the binary itinerary of the critical value.
///
/// The ambiguous last symbol is the limit from the side of the main
/// cardioid: 0 when `d/dc f_c^n(0) > 0` and 1 otherwise, replaced by the
/// other symbol if that makes the word a proper power.
pub fn real_centers(n: usize) -> Result<Vec<RealCenter>, OracleError> {
    if n == 0 || n > MAX_CENTER_PERIOD {
        return Err(OracleError::PeriodOutOfRange(n));
    }
    // Split the parameter interval so the pieces run in parallel.
    let pieces = 64;
    let lo = Float::with_val(CENTER_PREC, -2);
    let hi = Float::with_val(CENTER_PREC, 0.25);
    let step = Float::with_val(CENTER_PREC, &hi - &lo) / pieces as u32;
    let bounds: Vec<(Float, Float)> = (0..pieces)
        .map(|i| {
            let a = Float::with_val(CENTER_PREC, &step * i as u32) + &lo;
            let b = if i + 1 == pieces {
                hi.clone()
            } else {
                Float::with_val(CENTER_PREC, &step * (i + 1) as u32) + &lo
            };
            (a, b)
        })
        .collect();
    // A root sitting exactly on a cut point would be seen twice or lost;
    // check the cut points directly.
    for (a, _) in bounds.iter().skip(1) {
        if sign_at(a, n).is_none() {
            return Err(OracleError::PrecisionExhausted);
        }
    }
    let found: Vec<Vec<(Float, Float)>> = bounds
        .into_par_iter()
        .map(|(a, b)| {
            let mut out = Vec::new();
            isolate(a, b, n, &mut out).map(|_| out)
        })
        .collect::<Result<_, _>>()?;
    let tiny = Float::with_val(CENTER_PREC, Float::i_exp(1, -150));
    let mut centers = Vec::new();
    for (a, b) in found.into_iter().flatten() {
        let c = polish(a, b, n);
        let orb = orbit(&c, n);
        let period = (1..=n)
            .find(|&k| {
                n.is_multiple_of(k) && Float::with_val(CENTER_PREC, orb[k - 1].abs_ref()) < tiny
            })
            .unwrap_or(n);
        if period != n {
            continue;
        }
        let mut itinerary: Vec<u8> = orb[..n - 1]
            .iter()
            .map(|x| u8::from(x.is_sign_negative()))
            .collect();
        let (_, dg) = iterate(&Interval::point(&c), n);
        itinerary.push(u8::from(!dg.strictly_positive()));
        if !is_irreducible(&itinerary) {
            *itinerary.last_mut().unwrap() ^= 1;
        }
        centers.push(RealCenter {
            c,
            period: n,
            itinerary,
        });
    }
    centers.sort_by(|x, y| x.c.partial_cmp(&y.c).unwrap());
    Ok(centers)
}

/// [`real_centers`] memoized per period for the life of the process.
pub fn cached_real_centers(n: usize) -> Result<Arc<Vec<RealCenter>>, OracleError> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<RealCenter>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return Ok(v.clone());
    }
    let v = Arc::new(real_centers(n)?);
    cache.lock().unwrap().insert(n, v.clone());
    Ok(v)
}

/// Default cap on the number of simple cycles the naive search may find.
pub const DEFAULT_CYCLE_BUDGET: usize = 2_000_000;

/// Coefficients of `Σ (-1)^C(γ) w(γ) t^ℓ(γ)` up to `t^nmax` over all
/// multicycles `γ` of the weighted digraph with adjacency matrix `graph`,
/// found by unoptimized search: every closed simple path from every start
/// vertex, deduplicated by rotation, then every disjoint family.
pub fn brute_force_multicycles(
    graph: &IntMatrix,
    nmax: usize,
    budget: usize,
) -> Result<Vec<BigInt>, OracleError> {
    let n = graph.dim();
    let mut cycles: BTreeSet<Vec<usize>> = BTreeSet::new();
    for start in 0..n {
        let mut path = vec![start];
        let mut on_path = vec![false; n];
        on_path[start] = true;
        walk(
            graph,
            start,
            nmax,
            &mut path,
            &mut on_path,
            &mut cycles,
            budget,
        )?;
    }
    let cycles: Vec<(Vec<usize>, BigInt)> = cycles
        .into_iter()
        .map(|c| {
            let w: BigInt = (0..c.len())
                .map(|i| BigInt::from(graph.get(c[i], c[(i + 1) % c.len()])))
                .product();
            (c, w)
        })
        .collect();
    let mut coeffs = vec![BigInt::zero(); nmax + 1];
    let mut used = vec![false; n];
    families(
        &cycles,
        0,
        0,
        0,
        &BigInt::from(1),
        &mut used,
        nmax,
        &mut coeffs,
    );
    Ok(coeffs)
}

fn walk(
    g: &IntMatrix,
    start: usize,
    nmax: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    cycles: &mut BTreeSet<Vec<usize>>,
    budget: usize,
) -> Result<(), OracleError> {
    let v = *path.last().unwrap();
    for w in 0..g.dim() {
        if g.get(v, w) == 0 {
            continue;
        }
        if w == start {
            let min_pos = (0..path.len()).min_by_key(|&i| path[i]).unwrap();
            let mut canon = path.clone();
            canon.rotate_left(min_pos);
            cycles.insert(canon);
            if cycles.len() > budget {
                return Err(OracleError::ResourceLimit(budget));
            }
        } else if !on_path[w] && path.len() < nmax {
            on_path[w] = true;
            path.push(w);
            walk(g, start, nmax, path, on_path, cycles, budget)?;
            path.pop();
            on_path[w] = false;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn families(
    cycles: &[(Vec<usize>, BigInt)],
    from: usize,
    len: usize,
    count: usize,
    weight: &BigInt,
    used: &mut [bool],
    nmax: usize,
    coeffs: &mut [BigInt],
) {
    if count.is_multiple_of(2) {
        coeffs[len] += weight;
    } else {
        coeffs[len] -= weight;
    }
    for i in from..cycles.len() {
        let (c, w) = &cycles[i];
        if len + c.len() > nmax || c.iter().any(|&v| used[v]) {
            continue;
        }
        for &v in c {
            used[v] = true;
        }
        families(
            cycles,
            i + 1,
            len + c.len(),
            count + 1,
            &(weight * w),
            used,
            nmax,
            coeffs,
        );
        for &v in c {
            used[v] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{spectral_determinant, IntPolynomial};

    fn words(n: usize) -> Vec<String> {
        real_centers(n)
            .unwrap()
            .iter()
            .map(|c| c.itinerary.iter().map(|d| char::from(b'0' + d)).collect())
            .collect()
    }

    #[test]
    fn low_periods() {
        let one = real_centers(1).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].c_f64().abs() < 1e-60);
        assert_eq!(words(1), vec!["0"]);
        let two = real_centers(2).unwrap();
        assert_eq!(two.len(), 1);
        assert!((two[0].c_f64() + 1.0).abs() < 1e-15);
        assert_eq!(words(2), vec!["10"]);
        let three = real_centers(3).unwrap();
        assert_eq!(three.len(), 1);
        assert!((three[0].c_f64() + 1.754877666246693).abs() < 1e-12);
        assert_eq!(words(3), vec!["101"]);
    }

    #[test]
    fn known_counts() {
        // Real centers of exact period n: 1, 1, 1, 2, 3, 5, 9, 16.
        let counts: Vec<usize> = (1..=8).map(|n| real_centers(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 5, 9, 16]);
    }

    #[test]
    fn out_of_range() {
        assert_eq!(
            real_centers(0).unwrap_err(),
            OracleError::PeriodOutOfRange(0)
        );
        assert!(real_centers(15).is_err());
    }

    #[test]
    fn multicycle_basics() {
        assert_eq!(
            brute_force_multicycles(&IntMatrix::zeros(0), 4, 10).unwrap(),
            vec![BigInt::from(1), 0.into(), 0.into(), 0.into(), 0.into()]
        );
        let mut loop1 = IntMatrix::zeros(1);
        loop1.set(0, 0, 1);
        let c = brute_force_multicycles(&loop1, 3, 10).unwrap();
        assert_eq!(IntPolynomial::new(c), IntPolynomial::from_i64(&[1, -1]));
    }

    #[test]
    fn multicycles_match_determinant() {
        let m = IntMatrix::from_rows(&[
            vec![1, 1, 0, 0],
            vec![0, 0, 2, 1],
            vec![1, 0, 0, 1],
            vec![1, 1, 0, 0],
        ]);
        let c = brute_force_multicycles(&m, 4, 1000).unwrap();
        assert_eq!(IntPolynomial::new(c), spectral_determinant(&m));
        assert!(brute_force_multicycles(&m, 4, 2).is_err());
    }
}
