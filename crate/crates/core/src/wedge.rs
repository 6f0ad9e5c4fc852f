//! Labeled wedges of an angle, the graph they induce on index pairs, its
//! finite models and their characteristic polynomials and spectral
//! determinants.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::angles::{classify, orbit, Angle, AnglePartition};
use crate::polyalg::{charpoly, growth_rate, IntMatrix, IntPolynomial, PolyError};

/// Default cap on simple cycles and multicycles during enumeration.
pub const DEFAULT_MULTICYCLE_BUDGET: usize = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WedgeError {
    #[error("cycle enumeration exceeded the budget of {budget}")]
    CycleBudget { budget: usize },
    #[error("charpoly of the {k}-fold cover is not divisible by the base charpoly")]
    NonDivisible { k: usize },
    #[error("cover index must be at least {min}, got {k}")]
    InvalidCover { k: usize, min: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum WedgeLabel {
    NonSeparated,
    Separated,
    Equivalent,
}

impl WedgeLabel {
    pub fn letter(&self) -> char {
        match self {
            WedgeLabel::NonSeparated => 'N',
            WedgeLabel::Separated => 'S',
            WedgeLabel::Equivalent => 'E',
        }
    }
}

/// Labels of index pairs `(i, j)`, 1-based, for the orbit `x_i = 2^(i-1) θ`.
#[derive(Clone, Debug, Serialize)]
pub struct LabeledWedge {
    pub theta: Angle,
    pub period: usize,
    pub preperiod: usize,
    pub window: usize,
    /// `x_1 .. x_(preperiod + period)`.
    #[serde(skip)]
    points: Vec<Angle>,
    #[serde(skip)]
    partition: AnglePartition,
}

impl LabeledWedge {
    /// Representative of `i` in `1..=preperiod + period`.
    pub fn reduce(&self, i: usize) -> usize {
        reduce_index(i, self.period, self.preperiod)
    }

    pub fn point(&self, i: usize) -> Angle {
        self.points[self.reduce(i) - 1]
    }

    pub fn label(&self, i: usize, j: usize) -> WedgeLabel {
        let (x, y) = (self.point(i), self.point(j));
        if x == y {
            WedgeLabel::Equivalent
        } else if self.partition.separates(&x, &y) {
            WedgeLabel::Separated
        } else {
            WedgeLabel::NonSeparated
        }
    }

    /// Separated pairs `i < j` inside the window.
    pub fn separated_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.window {
            for j in i + 1..=self.window {
                if self.label(i, j) == WedgeLabel::Separated {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// `i` reduced by `i ~ i + period` for `i > preperiod`.
fn reduce_index(i: usize, period: usize, preperiod: usize) -> usize {
    assert!(i >= 1, "wedge indices are 1-based");
    if i <= preperiod + period {
        i
    } else {
        preperiod + 1 + (i - preperiod - 1) % period
    }
}

pub fn build_wedge(theta: &Angle, window: usize) -> LabeledWedge {
    let cls = classify(theta);
    let (period, preperiod) = (cls.period as usize, cls.preperiod as usize);
    LabeledWedge {
        theta: *theta,
        period,
        preperiod,
        window,
        points: orbit(theta, period + preperiod),
        partition: AnglePartition::new(*theta),
    }
}

/// The quotient of the pair graph by `i ~ i + k·period` beyond the
/// preperiod.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteModel {
    pub theta: Angle,
    pub k: usize,
    /// Largest index, `k·period + preperiod`.
    pub size: usize,
    /// Pairs `(i, j)` with `1 <= i <= j <= size` in lexicographic order.
    pub vertices: Vec<(usize, usize)>,
    pub incidence: IntMatrix,
}

impl FiniteModel {
    pub fn vertex_index(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = (i.min(j), i.max(j));
        if i == 0 || j > self.size {
            return None;
        }
        Some(pair_index(i, j, self.size))
    }

    /// One line `i,j -> k,l` per edge (repeated for multiple edges), sorted.
    pub fn export(&self) -> String {
        let mut edges = Vec::new();
        for (a, &(i, j)) in self.vertices.iter().enumerate() {
            for (b, &(k, l)) in self.vertices.iter().enumerate() {
                for _ in 0..self.incidence.get(a, b) {
                    edges.push((i, j, k, l));
                }
            }
        }
        edges.sort_unstable();
        let mut out = String::new();
        for (i, j, k, l) in edges {
            writeln!(out, "{i},{j} -> {k},{l}").unwrap();
        }
        out
    }
}

/// Position of `(i, j)`, `i <= j`, in the lexicographic list of pairs of
/// `1..=n`.
fn pair_index(i: usize, j: usize, n: usize) -> usize {
    // Row r contributes n - r + 1 pairs.
    (i - 1) * (n + 1) - i * (i - 1) / 2 + (j - i)
}

/// Out-edges of the pair `(i, j)`, given the wedge label and an index
/// reduction.
fn pair_edges(
    wedge: &LabeledWedge,
    i: usize,
    j: usize,
    reduce: impl Fn(usize) -> usize,
) -> Vec<(usize, usize)> {
    let sorted = |a: usize, b: usize| (a.min(b), a.max(b));
    match wedge.label(i, j) {
        WedgeLabel::Equivalent => vec![],
        WedgeLabel::NonSeparated => vec![sorted(reduce(i + 1), reduce(j + 1))],
        WedgeLabel::Separated => vec![sorted(1, reduce(i + 1)), sorted(1, reduce(j + 1))],
    }
}

pub fn finite_model(theta: &Angle, k: usize) -> Result<FiniteModel, WedgeError> {
    if k == 0 {
        return Err(WedgeError::InvalidCover { k, min: 1 });
    }
    let cls = classify(theta);
    let (period, preperiod) = (cls.period as usize, cls.preperiod as usize);
    let size = k * period + preperiod;
    let wedge = build_wedge(theta, size);
    let vertices: Vec<(usize, usize)> = (1..=size)
        .flat_map(|i| (i..=size).map(move |j| (i, j)))
        .collect();
    let mut incidence = IntMatrix::zeros(vertices.len());
    let reduce = |i: usize| reduce_index(i, k * period, preperiod);
    for (a, &(i, j)) in vertices.iter().enumerate() {
        for (k2, l2) in pair_edges(&wedge, i, j, reduce) {
            incidence.add_to(a, pair_index(k2, l2, size), 1);
        }
    }
    Ok(FiniteModel {
        theta: *theta,
        k,
        size,
        vertices,
        incidence,
    })
}

/// `det(xI - A)` of the first finite model, monic.
pub fn thurston_polynomial(theta: &Angle) -> IntPolynomial {
    let model = finite_model(theta, 1).expect("k = 1 is valid");
    charpoly(&model.incidence).sign_normalized()
}

/// Coefficients of a truncated spectral determinant together with the
/// number of multicycles found at each length.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralTruncation {
    pub coefficients: IntPolynomial,
    pub multicycle_counts: Vec<u64>,
    pub simple_cycles: usize,
    /// Largest pair coordinate kept in the graph.
    pub index_bound: usize,
}

/// `Σ (-1)^C(γ) t^ℓ(γ)` over multicycles of the pair graph of `θ` with
/// `ℓ(γ) <= nmax`, keeping only pairs with both coordinates at most
/// `2·nmax + preperiod`.
pub fn truncated_spectral_determinant(
    theta: &Angle,
    nmax: usize,
) -> Result<IntPolynomial, WedgeError> {
    Ok(truncated_spectral_determinant_with(theta, nmax, DEFAULT_MULTICYCLE_BUDGET)?.coefficients)
}

pub fn truncated_spectral_determinant_with(
    theta: &Angle,
    nmax: usize,
    budget: usize,
) -> Result<SpectralTruncation, WedgeError> {
    let cls = classify(theta);
    let bound = 2 * nmax + cls.preperiod as usize;
    let wedge = build_wedge(theta, bound);
    // Unreduced pairs i < j <= bound; diagonal pairs have no edges.
    let pairs: Vec<(usize, usize)> = (1..=bound)
        .flat_map(|i| (i + 1..=bound).map(move |j| (i, j)))
        .collect();
    let index = |i: usize, j: usize| -> Option<usize> {
        (i < j && j <= bound).then(|| pair_index(i, j, bound) - i)
    };
    let mut graph = IntMatrix::zeros(pairs.len());
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for (k, l) in pair_edges(&wedge, i, j, |x| x) {
            if let Some(b) = index(k, l) {
                graph.add_to(a, b, 1);
            }
        }
    }
    let mut out = multicycle_expansion(&graph, nmax, budget)?;
    out.index_bound = bound;
    Ok(out)
}

/// Multicycle expansion of a weighted digraph up to length `nmax`.
///
/// Simple cycles are found once each, from their smallest vertex, by a
/// depth-limited search over larger vertices; disjoint families are then
/// combined over vertex bitsets.
pub fn multicycle_expansion(
    graph: &IntMatrix,
    nmax: usize,
    budget: usize,
) -> Result<SpectralTruncation, WedgeError> {
    let n = graph.dim();
    let adj: Vec<Vec<(usize, i64)>> = (0..n)
        .map(|v| {
            graph
                .row(v)
                .iter()
                .enumerate()
                .filter(|(_, &m)| m != 0)
                .map(|(w, &m)| (w, m))
                .collect()
        })
        .collect();
    let per_start: Vec<Result<Vec<Cycle>, WedgeError>> = (0..n)
        .into_par_iter()
        .map(|s| cycles_from(&adj, s, nmax, budget))
        .collect();
    let mut cycles = Vec::new();
    for c in per_start {
        cycles.extend(c?);
        if cycles.len() > budget {
            return Err(WedgeError::CycleBudget { budget });
        }
    }
    let simple_cycles = cycles.len();
    cycles.sort_by(|a, b| a.vertices.cmp(&b.vertices));

    let words = n.div_ceil(64).max(1);
    let masks: Vec<Vec<u64>> = cycles
        .iter()
        .map(|c| {
            let mut m = vec![0u64; words];
            for &v in &c.vertices {
                m[v / 64] |= 1 << (v % 64);
            }
            m
        })
        .collect();
    let mut coeffs = vec![BigInt::from(0); nmax + 1];
    let mut counts = vec![0u64; nmax + 1];
    let mut used = vec![0u64; words];
    let mut state = Families {
        cycles: &cycles,
        masks: &masks,
        nmax,
        budget,
        visited: 0,
        coeffs: &mut coeffs,
        counts: &mut counts,
    };
    state.extend(0, 0, 0, &BigInt::from(1), &mut used)?;
    Ok(SpectralTruncation {
        coefficients: IntPolynomial::new(coeffs),
        multicycle_counts: counts,
        simple_cycles,
        index_bound: n,
    })
}

struct Cycle {
    vertices: Vec<usize>,
    weight: i64,
}

fn cycles_from(
    adj: &[Vec<(usize, i64)>],
    start: usize,
    nmax: usize,
    budget: usize,
) -> Result<Vec<Cycle>, WedgeError> {
    let mut out = Vec::new();
    let mut path = vec![start];
    let mut on_path = vec![false; adj.len()];
    on_path[start] = true;
    // Stack of (vertex, next edge position, weight so far).
    let mut stack = vec![(start, 0usize, 1i64)];
    while let Some(&mut (v, ref mut pos, w)) = stack.last_mut() {
        if *pos == adj[v].len() {
            stack.pop();
            on_path[path.pop().unwrap()] = false;
            continue;
        }
        let (u, m) = adj[v][*pos];
        *pos += 1;
        if u == start {
            out.push(Cycle {
                vertices: path.clone(),
                weight: w * m,
            });
            if out.len() > budget {
                return Err(WedgeError::CycleBudget { budget });
            }
        } else if u > start && !on_path[u] && path.len() < nmax {
            on_path[u] = true;
            path.push(u);
            stack.push((u, 0, w * m));
        }
    }
    Ok(out)
}

struct Families<'a> {
    cycles: &'a [Cycle],
    masks: &'a [Vec<u64>],
    nmax: usize,
    budget: usize,
    visited: usize,
    coeffs: &'a mut [BigInt],
    counts: &'a mut [u64],
}

impl Families<'_> {
    fn extend(
        &mut self,
        from: usize,
        len: usize,
        components: usize,
        weight: &BigInt,
        used: &mut [u64],
    ) -> Result<(), WedgeError> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(WedgeError::CycleBudget {
                budget: self.budget,
            });
        }
        if components.is_multiple_of(2) {
            self.coeffs[len] += weight;
        } else {
            self.coeffs[len] -= weight;
        }
        self.counts[len] += 1;
        for i in from..self.cycles.len() {
            let c = &self.cycles[i];
            let m = &self.masks[i];
            if len + c.vertices.len() > self.nmax || used.iter().zip(m).any(|(a, b)| a & b != 0) {
                continue;
            }
            used.iter_mut().zip(m).for_each(|(a, b)| *a |= b);
            self.extend(
                i + 1,
                len + c.vertices.len(),
                components + 1,
                &(weight * c.weight),
                used,
            )?;
            used.iter_mut().zip(m).for_each(|(a, b)| *a &= !b);
        }
        Ok(())
    }
}

/// Smallest cover index `m` with `m > (2n + 2) / period`, beyond which the
/// `m`-th finite model has the same multicycles of length `<= n` as the
/// infinite pair graph.
pub fn truncation_cover_index(theta: &Angle, n: usize) -> usize {
    let p = classify(theta).period as usize;
    (2 * n + 2) / p + 1
}

/// `charpoly(Γ_k) / charpoly(Γ_1)`, exact.
pub fn quotient_charpoly_ratio(theta: &Angle, k: usize) -> Result<IntPolynomial, WedgeError> {
    if k == 0 {
        return Err(WedgeError::InvalidCover { k, min: 1 });
    }
    let base = charpoly(&finite_model(theta, 1)?.incidence);
    let cover = charpoly(&finite_model(theta, k)?.incidence);
    cover
        .exact_div(&base)
        .map(|q| q.sign_normalized())
        .ok_or(WedgeError::NonDivisible { k })
}

/// Leading eigenvalue modulus of the first finite model, at least 1.
pub fn growth_rate_from_wedge(theta: &Angle) -> Result<f64, WedgeError> {
    Ok(growth_rate(&thurston_polynomial(theta))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ang(s: &str) -> Angle {
        s.parse().unwrap()
    }

    #[test]
    fn pair_indexing_is_lexicographic() {
        let n = 5;
        let mut k = 0;
        for i in 1..=n {
            for j in i..=n {
                assert_eq!(pair_index(i, j, n), k);
                k += 1;
            }
        }
    }

    #[test]
    fn wedge_labels() {
        let w = build_wedge(&ang("1/5"), 4);
        assert_eq!(w.separated_pairs(), vec![(1, 3), (2, 3)]);
        assert_eq!(w.label(3, 3), WedgeLabel::Equivalent);
        assert_eq!(w.label(1, 5), WedgeLabel::Equivalent);
        assert_eq!(w.label(1, 2), WedgeLabel::NonSeparated);
    }

    #[test]
    fn one_fifth_model() {
        let m = finite_model(&ang("1/5"), 1).unwrap();
        assert_eq!(m.vertices.len(), 10);
        let (a, b, c) = (
            m.vertex_index(1, 3).unwrap(),
            m.vertex_index(1, 2).unwrap(),
            m.vertex_index(1, 4).unwrap(),
        );
        assert_eq!(m.incidence.get(a, b), 1);
        assert_eq!(m.incidence.get(a, c), 1);
        assert!(m.export().contains("1,2 -> 2,3\n"));
        assert_eq!(
            thurston_polynomial(&ang("1/5")),
            IntPolynomial::from_i64(&[0, 0, 0, 0, 0, 0, -1, -2, 0, 0, 1])
        );
    }

    #[test]
    fn chebyshev_tip() {
        let m = finite_model(&ang("1/2"), 1).unwrap();
        let v = m.vertex_index(1, 2).unwrap();
        assert_eq!(m.incidence.get(v, v), 2);
        assert_eq!(growth_rate_from_wedge(&ang("1/2")).unwrap(), 2.0);
    }

    #[test]
    fn trivial_truncation() {
        assert_eq!(
            truncated_spectral_determinant(&ang("1/5"), 0).unwrap(),
            IntPolynomial::one()
        );
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            truncated_spectral_determinant_with(&ang("1/5"), 8, 3),
            Err(WedgeError::CycleBudget { .. })
        ));
    }
}
