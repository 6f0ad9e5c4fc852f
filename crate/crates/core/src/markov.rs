//! Star-shaped Hubbard trees of vein parameters, their Markov partitions by
//! the critical orbit and the α-fixed point, and the resulting incidence
//! matrices.
//!
//! Marked points on the line `I_0 ∪ I_1 ∪ I_2` are ordered by their
//! first-return itineraries, with the critical point as a symbol between 0
//! and 1 and orientation reversed after symbols 1 and 2. Points on the
//! other branches inherit the order of their preimages in `I_2`.

use std::cmp::Ordering;

use rug::ops::Pow;
use rug::Float;
use serde::Serialize;
use thiserror::Error;

use crate::kneading::kneading_polynomial;
use crate::mp::{refine_real_root, PREC};
use crate::polyalg::{charpoly, largest_real_root, IntMatrix, IntPolynomial, PolyError};
use crate::words::{FullWord, ZERO_ENTROPY_CUTOFF};

/// Marked points closer than this in the piecewise linear model collide.
pub const COLLISION_TOLERANCE: f64 = 1e-30;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MarkovError {
    #[error("growth rate is 1; the piecewise linear model degenerates")]
    ZeroEntropy,
    #[error("marked points {0} and {1} coincide")]
    PositionCollision(String, String),
    #[error("piecewise linear positions of {0} and {1} contradict their itineraries")]
    OrderMismatch(String, String),
    #[error("invalid vein itinerary {word}: {reason}")]
    InvalidWord { word: String, reason: String },
    #[error("the {0:?} marking needs the real vein")]
    InvalidMarking(TreeMarking),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Which points cut the tree into intervals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TreeMarking {
    /// Critical orbit and α, on the hull of the critical orbit.
    Alpha,
    /// Critical orbit only, on `[f(c), f²(c)]` (real vein).
    Postcritical,
    /// Critical orbit and `±β`, on `[-β, β]` (real vein).
    Beta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MarkKind {
    /// `f^i(c)` for `1 <= i <= period`; `i = period` is the critical point.
    Orbit(usize),
    Alpha,
    Beta,
    MinusBeta,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkedPoint {
    pub kind: MarkKind,
    /// 0, 1 or 2 on the line, `k >= 3` on branch `I_k`.
    pub region: u8,
    pub label: String,
}

/// Marked points of the star tree in combinatorial order.
#[derive(Clone, Debug, Serialize)]
pub struct CombinatorialTree {
    pub q: u8,
    pub word: FullWord,
    pub marking: TreeMarking,
    /// Marked points of `I_0 ∪ I_1 ∪ I_2`, increasing.
    pub line: Vec<MarkedPoint>,
    /// Branch `I_(k+3)`, ordered away from α (α itself excluded).
    pub branches: Vec<Vec<MarkedPoint>>,
}

/// A combinatorial tree together with the piecewise linear positions of
/// its line points.
#[derive(Clone, Debug, Serialize)]
pub struct StarTreeModel {
    pub tree: CombinatorialTree,
    pub lambda: f64,
    /// Positions of `tree.line` in the same order, as decimal strings.
    pub positions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkovMatrix {
    /// `[a,b]` labels of the intervals, line first, then each branch.
    pub intervals: Vec<String>,
    pub entries: IntMatrix,
}

impl MarkovMatrix {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "intervals": self.intervals,
            "entries": self.entries.rows(),
        })
    }
}

fn mark_label(kind: MarkKind, period: usize) -> String {
    match kind {
        MarkKind::Orbit(i) if i == period => "c0".to_string(),
        MarkKind::Orbit(i) => format!("c{i}"),
        MarkKind::Alpha => "alpha".to_string(),
        MarkKind::Beta => "beta".to_string(),
        MarkKind::MinusBeta => "-beta".to_string(),
    }
}

fn invalid(w: &FullWord, reason: &str) -> MarkovError {
    MarkovError::InvalidWord {
        word: w.to_string(),
        reason: reason.to_string(),
    }
}

/// Sort keys on the line: symbol 0 < critical point < 1 < 2.
const KEY_CRITICAL: u8 = 1;

fn line_key(symbol: u8) -> u8 {
    match symbol {
        0 => 0,
        1 => 2,
        _ => 3,
    }
}

/// Symbol sequence of a line point under the first-return map, as sort
/// keys: a finite head followed by a repeated cycle.
struct Itinerary {
    head: Vec<u8>,
    cycle: Vec<u8>,
}

impl Itinerary {
    fn at(&self, i: usize) -> u8 {
        if i < self.head.len() {
            self.head[i]
        } else {
            self.cycle[(i - self.head.len()) % self.cycle.len()]
        }
    }
}

fn twisted_cmp(a: &Itinerary, b: &Itinerary, len: usize) -> Ordering {
    let mut flips = 0;
    for i in 0..len {
        let (x, y) = (a.at(i), b.at(i));
        if x != y {
            let plain = x.cmp(&y);
            return if flips % 2 == 0 {
                plain
            } else {
                plain.reverse()
            };
        }
        if x >= 2 {
            flips += 1;
        }
    }
    Ordering::Equal
}

pub fn combinatorial_tree(
    w: &FullWord,
    q: u32,
    marking: TreeMarking,
) -> Result<CombinatorialTree, MarkovError> {
    let s = &w.symbols;
    let period = s.len();
    if w.q as u32 != q || q < 2 {
        return Err(invalid(w, "vein denominator mismatch"));
    }
    if period < 2 || s[0] != 2 || !w.satisfies_grammar() {
        return Err(invalid(
            w,
            "not a vein itinerary of a critically periodic parameter",
        ));
    }
    if q > 2 && marking != TreeMarking::Alpha {
        return Err(MarkovError::InvalidMarking(marking));
    }
    // Orbit point i (1-based) has symbol s[i-1]; point `period` is critical.
    let key_of = |i: usize| {
        if i == period {
            KEY_CRITICAL
        } else {
            line_key(s[i - 1])
        }
    };
    let orbit_itinerary = |i: usize| {
        let keys: Vec<u8> = (0..period)
            .map(|k| (i - 1 + k) % period + 1)
            .filter(|&j| j == period || s[j - 1] <= 2)
            .map(key_of)
            .collect();
        Itinerary {
            head: vec![],
            cycle: keys,
        }
    };
    let cmp_len = 2 * period + 4;

    let mut line: Vec<(MarkedPoint, Itinerary)> = Vec::new();
    for i in 1..=period {
        let region = if i == period { 0 } else { s[i - 1] };
        if i != period && region > 2 {
            continue;
        }
        line.push((
            MarkedPoint {
                kind: MarkKind::Orbit(i),
                region,
                label: mark_label(MarkKind::Orbit(i), period),
            },
            orbit_itinerary(i),
        ));
    }
    // Fixed points: α between I_1 and I_2, β = 0^∞, -β = 2 0^∞.
    let fixed = match marking {
        TreeMarking::Alpha => vec![(MarkKind::Alpha, 2, vec![], vec![])],
        TreeMarking::Postcritical => vec![],
        TreeMarking::Beta => vec![
            (MarkKind::Beta, 0, vec![], vec![0]),
            (MarkKind::MinusBeta, 2, vec![3], vec![0]),
        ],
    };
    for (kind, region, head, cycle) in fixed {
        let point = MarkedPoint {
            kind,
            region,
            label: mark_label(kind, period),
        };
        if kind == MarkKind::Alpha {
            // Sorted separately: after every key below 3, before every 3.
            line.push((
                point,
                Itinerary {
                    head: vec![],
                    cycle: vec![],
                },
            ));
        } else {
            line.push((point, Itinerary { head, cycle }));
        }
    }
    let mut err = None;
    line.sort_by(|(pa, ia), (pb, ib)| {
        let ord = match (pa.kind, pb.kind) {
            (MarkKind::Alpha, MarkKind::Alpha) => Ordering::Equal,
            (MarkKind::Alpha, _) => 2.5f32.partial_cmp(&(ib.at(0) as f32)).unwrap(),
            (_, MarkKind::Alpha) => (ia.at(0) as f32).partial_cmp(&2.5f32).unwrap(),
            _ => twisted_cmp(ia, ib, cmp_len),
        };
        if ord == Ordering::Equal && pa.kind != pb.kind && err.is_none() {
            err = Some(MarkovError::PositionCollision(
                pa.label.clone(),
                pb.label.clone(),
            ));
        }
        ord
    });
    if let Some(e) = err {
        return Err(e);
    }
    let line_points: Vec<MarkedPoint> = line.into_iter().map(|(p, _)| p).collect();

    // Branch k holds f^(k-2) of the I_2 points, in their I_2 order.
    let mut branches = Vec::new();
    let i2: Vec<usize> = line_points
        .iter()
        .filter_map(|p| match p.kind {
            MarkKind::Orbit(i) if p.region == 2 => Some(i),
            _ => None,
        })
        .collect();
    for k in 3..=q as u8 {
        let shift = (k - 2) as usize;
        let pts = i2
            .iter()
            .map(|&i| (i - 1 + shift) % period + 1)
            .map(|j| {
                debug_assert!(j == period || s[j - 1] == k);
                MarkedPoint {
                    kind: MarkKind::Orbit(j),
                    region: k,
                    label: mark_label(MarkKind::Orbit(j), period),
                }
            })
            .collect();
        branches.push(pts);
    }
    Ok(CombinatorialTree {
        q: q as u8,
        word: w.clone(),
        marking,
        line: line_points,
        branches,
    })
}

/// Where a marked point sits: index on the line, or (branch, rank) with
/// rank 0 being the first point after α.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Place {
    Line(usize),
    Branch(usize, usize),
}

impl CombinatorialTree {
    fn place(&self, kind: MarkKind) -> Place {
        if let Some(i) = self.line.iter().position(|p| p.kind == kind) {
            return Place::Line(i);
        }
        for (b, pts) in self.branches.iter().enumerate() {
            if let Some(r) = pts.iter().position(|p| p.kind == kind) {
                return Place::Branch(b, r);
            }
        }
        unreachable!("unmarked point {kind:?}")
    }

    fn image(&self, kind: MarkKind) -> MarkKind {
        let period = self.word.len();
        match kind {
            MarkKind::Orbit(i) => MarkKind::Orbit(i % period + 1),
            MarkKind::Alpha => MarkKind::Alpha,
            MarkKind::Beta | MarkKind::MinusBeta => MarkKind::Beta,
        }
    }

    fn alpha_index(&self) -> Option<usize> {
        self.line.iter().position(|p| p.kind == MarkKind::Alpha)
    }

    /// Intervals as (line index) for line intervals `[i, i+1]` then
    /// `(branch, rank)` for `[rank-1 or α, rank]`.
    fn interval_count(&self) -> usize {
        self.line.len() - 1 + self.branches.iter().map(Vec::len).sum::<usize>()
    }

    fn branch_interval(&self, b: usize, r: usize) -> usize {
        self.line.len() - 1 + self.branches[..b].iter().map(Vec::len).sum::<usize>() + r
    }

    /// Intervals on the arc between two marked points.
    fn path(&self, a: Place, b: Place) -> Vec<usize> {
        let line_span = |i: usize, j: usize| {
            let (lo, hi) = (i.min(j), i.max(j));
            (lo..hi).collect::<Vec<_>>()
        };
        let to_alpha = |b: usize, r: usize| (0..=r).map(move |k| self.branch_interval(b, k));
        let alpha = || self.alpha_index().expect("branches need α");
        match (a, b) {
            (Place::Line(i), Place::Line(j)) => line_span(i, j),
            (Place::Branch(b, r), Place::Line(j)) | (Place::Line(j), Place::Branch(b, r)) => {
                let mut out: Vec<usize> = to_alpha(b, r).collect();
                out.extend(line_span(alpha(), j));
                out
            }
            (Place::Branch(b1, r1), Place::Branch(b2, r2)) if b1 == b2 => {
                let (lo, hi) = (r1.min(r2), r1.max(r2));
                (lo + 1..=hi).map(|k| self.branch_interval(b1, k)).collect()
            }
            (Place::Branch(b1, r1), Place::Branch(b2, r2)) => {
                to_alpha(b1, r1).chain(to_alpha(b2, r2)).collect()
            }
        }
    }

    pub fn markov_matrix(&self) -> MarkovMatrix {
        let n = self.interval_count();
        let mut entries = IntMatrix::zeros(n);
        let mut intervals = vec![String::new(); n];
        let mut ends: Vec<(MarkKind, MarkKind)> = vec![(MarkKind::Alpha, MarkKind::Alpha); n];
        for i in 0..self.line.len() - 1 {
            ends[i] = (self.line[i].kind, self.line[i + 1].kind);
            intervals[i] = format!("[{},{}]", self.line[i].label, self.line[i + 1].label);
        }
        for (b, pts) in self.branches.iter().enumerate() {
            for (r, p) in pts.iter().enumerate() {
                let (from, from_label) = if r == 0 {
                    (MarkKind::Alpha, "alpha")
                } else {
                    (pts[r - 1].kind, pts[r - 1].label.as_str())
                };
                ends[self.branch_interval(b, r)] = (from, p.kind);
                intervals[self.branch_interval(b, r)] = format!("[{},{}]", from_label, p.label);
            }
        }
        for (row, &(a, b)) in ends.iter().enumerate() {
            let (fa, fb) = (self.image(a), self.image(b));
            for col in self.path(self.place(fa), self.place(fb)) {
                entries.add_to(row, col, 1);
            }
        }
        MarkovMatrix { intervals, entries }
    }
}

/// Growth rate from the kneading polynomial of the simplified word, with
/// its first-return PL positions at 200 bits.
pub fn star_tree_model(w: &FullWord, q: u32) -> Result<StarTreeModel, MarkovError> {
    let tree = combinatorial_tree(w, q, TreeMarking::Alpha)?;
    let simplified = w.simplify();
    let kp = kneading_polynomial(&simplified, q);
    let approx = largest_real_root(&kp)?.unwrap_or(1.0);
    if approx < ZERO_ENTROPY_CUTOFF {
        return Err(MarkovError::ZeroEntropy);
    }
    let lambda = refine_real_root(&kp, approx, PREC);
    let s = &w.symbols;
    let period = s.len();
    let one = Float::with_val(PREC, 1);
    let lam_q1 = Float::with_val(PREC, (&lambda).pow(q - 1));
    // F_0 = λx + λ + 1, F_1 = -λx + λ + 1, F_2 = -λ^(q-1)x + λ^(q-1) + 1.
    let apply = |symbol: u8, x: &Float| -> Float {
        let slope = if symbol == 2 { &lam_q1 } else { &lambda };
        let mut y = Float::with_val(PREC, slope * x);
        if symbol != 0 {
            y = -y;
        }
        y + slope + &one
    };
    // Walk the first-return orbit from the critical value.
    let mut pos: Vec<Option<Float>> = vec![None; period + 1];
    let mut x = Float::with_val(PREC, &lambda + &one);
    let mut i = 1;
    while i < period {
        pos[i] = Some(x.clone());
        let sym = s[i - 1];
        x = apply(sym, &x);
        i += if sym == 2 { q as usize - 1 } else { 1 };
    }
    pos[period] = Some(Float::with_val(PREC, 0));
    let position = |p: &MarkedPoint| -> Float {
        match p.kind {
            MarkKind::Orbit(i) => pos[i]
                .clone()
                .expect("line point on the first-return orbit"),
            MarkKind::Alpha => one.clone(),
            _ => unreachable!("α marking"),
        }
    };
    let xs: Vec<Float> = tree.line.iter().map(position).collect();
    for k in 1..xs.len() {
        let gap = Float::with_val(PREC, &xs[k] - &xs[k - 1]);
        let (a, b) = (tree.line[k - 1].label.clone(), tree.line[k].label.clone());
        if gap.clone().abs() < COLLISION_TOLERANCE {
            return Err(MarkovError::PositionCollision(a, b));
        }
        if gap < 0 {
            return Err(MarkovError::OrderMismatch(a, b));
        }
    }
    Ok(StarTreeModel {
        positions: xs.iter().map(|x| x.to_string_radix(10, Some(40))).collect(),
        lambda: lambda.to_f64(),
        tree,
    })
}

/// Incidence matrix of the partition by the critical orbit and α.
pub fn markov_matrix(w: &FullWord, q: u32) -> Result<MarkovMatrix, MarkovError> {
    markov_matrix_with(w, q, TreeMarking::Alpha)
}

pub fn markov_matrix_with(
    w: &FullWord,
    q: u32,
    marking: TreeMarking,
) -> Result<MarkovMatrix, MarkovError> {
    Ok(combinatorial_tree(w, q, marking)?.markov_matrix())
}

/// Monic characteristic polynomial of the Markov matrix.
pub fn markov_polynomial(w: &FullWord, q: u32) -> Result<IntPolynomial, MarkovError> {
    Ok(charpoly(&markov_matrix(w, q)?.entries).sign_normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::spectral_determinant;

    fn fw(s: &str, q: u8) -> FullWord {
        FullWord::parse(s, q).unwrap()
    }

    #[test]
    fn one_fifth_table() {
        let m = markov_matrix(&fw("2301", 3), 3).unwrap();
        assert_eq!(
            m.intervals,
            ["[c3,c0]", "[c0,alpha]", "[alpha,c1]", "[alpha,c2]"]
        );
        let rows = m.entries.rows();
        // I_0 -> I_1 + I_2, I_1 -> I_2, I_2 -> I_3, I_3 -> I_0 + I_1.
        assert_eq!(
            rows,
            vec![
                vec![0, 1, 1, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![1, 1, 0, 0]
            ]
        );
        assert_eq!(
            markov_polynomial(&fw("2301", 3), 3).unwrap(),
            IntPolynomial::from_i64(&[-1, -2, 0, 0, 1])
        );
    }

    #[test]
    fn airplane() {
        assert_eq!(
            markov_polynomial(&fw("201", 2), 2).unwrap(),
            IntPolynomial::from_i64(&[-1, -2, 0, 1])
        );
        let a0 = markov_matrix_with(&fw("201", 2), 2, TreeMarking::Postcritical).unwrap();
        assert_eq!(
            spectral_determinant(&a0.entries),
            IntPolynomial::from_i64(&[1, -1, -1])
        );
    }

    #[test]
    fn pl_model() {
        let m = star_tree_model(&fw("2301", 3), 3).unwrap();
        assert_eq!(m.tree.line.len(), 4);
        assert!((m.lambda.powi(4) - 2.0 * m.lambda - 1.0).abs() < 1e-9);
        assert!(matches!(
            star_tree_model(&fw("20", 2), 2),
            Err(MarkovError::ZeroEntropy)
        ));
    }

    #[test]
    fn invalid_inputs() {
        assert!(markov_matrix(&fw("0201", 2), 2).is_err());
        assert!(markov_matrix_with(&fw("2301", 3), 3, TreeMarking::Beta).is_err());
    }
}
