//! Affine models of the first-return map on a principal vein, kneading
//! polynomials and determinants, Parry and Milnor-Thurston polynomials, and
//! tuning.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::polyalg::{growth_rate, IntPolynomial, PolyError};
use crate::words::{recode_symbols, SimplifiedWord};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KneadingError {
    #[error("invalid symbol {symbol} for q = {q}")]
    InvalidSymbol { symbol: u8, q: u32 },
    #[error("empty word")]
    EmptyWord,
    #[error("{0} does not divide the tuned product exactly")]
    NonDivisible(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `x -> sign * z^degree * x + offset` with `offset = 1 + z^degree`: the
/// branch of the piecewise linear first-return map on `I_j`, written in the
/// growth rate `z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineModelMap {
    pub symbol: u8,
    pub q: u32,
    pub sign: i8,
    pub degree: u32,
    pub offset: IntPolynomial,
}

impl AffineModelMap {
    pub fn apply(&self, p: &IntPolynomial) -> IntPolynomial {
        let scaled = p
            .shift(self.degree as usize)
            .scale(&BigInt::from(self.sign));
        &scaled + &self.offset
    }
}

pub fn affine_model(symbol: u8, q: u32) -> Result<AffineModelMap, KneadingError> {
    let (sign, degree) = match symbol {
        0 => (1, 1),
        1 => (-1, 1),
        2 if q >= 2 => (-1, q - 1),
        _ => return Err(KneadingError::InvalidSymbol { symbol, q }),
    };
    Ok(AffineModelMap {
        symbol,
        q,
        sign,
        degree,
        offset: one_plus_power(degree as usize),
    })
}

fn one_plus_power(k: usize) -> IntPolynomial {
    &IntPolynomial::one() + &IntPolynomial::monomial(1, k)
}

fn sign_of(symbol: u8) -> i8 {
    if symbol == 0 {
        1
    } else {
        -1
    }
}

fn degree_of(symbol: u8, q: u32) -> usize {
    if symbol == 2 {
        q as usize - 1
    } else {
        1
    }
}

/// `F_{w_{n-1}} ∘ ... ∘ F_{w_1} (1 + z)` for any word `w_1 ... w_n` over
/// `{0, 1, 2}`; the last symbol is not used.
pub fn finite_word_kneading_polynomial(w: &[u8], q: u32) -> IntPolynomial {
    assert!(!w.is_empty(), "kneading polynomial of the empty word");
    assert!(q >= 2, "veins have q >= 2");
    let mut p = one_plus_power(1);
    for &s in &w[..w.len() - 1] {
        assert!(s <= 2, "simplified symbols are 0, 1, 2");
        let d = degree_of(s, q);
        let scaled = p.shift(d);
        p = if sign_of(s) > 0 {
            &scaled + &one_plus_power(d)
        } else {
            &one_plus_power(d) - &scaled
        };
    }
    p
}

/// Kneading polynomial of the critically periodic parameter with simplified
/// itinerary `w` on the `p/q` vein.
pub fn kneading_polynomial(w: &SimplifiedWord, q: u32) -> IntPolynomial {
    finite_word_kneading_polynomial(w.symbols(), q)
}

/// Kneading polynomial of a real kneading word (through its recoding).
pub fn real_kneading_polynomial(w: &[u8]) -> IntPolynomial {
    finite_word_kneading_polynomial(&recode_symbols(w), 2)
}

/// Truncated kneading determinant, with its exact rational form for a
/// purely periodic word.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KneadingSeries {
    /// Coefficients of `t^0 .. t^truncation`.
    pub coefficients: Vec<BigInt>,
    /// `(numerator, denominator)` with `D(t) = numerator / denominator`.
    pub rational: Option<(IntPolynomial, IntPolynomial)>,
}

/// `D(t) = Σ_k η_k B_{w_k} t^{d_k}` for the eventually periodic word
/// `w_1 w_2 ... = prefix cycle cycle ...`, with `w_0` the critical symbol
/// (`B = 1 + t`, degree 1), `η_k` the product of the signs of
/// `w_1 .. w_k` and `d_k` the sum of the degrees of `w_0 .. w_{k-1}`.
pub fn kneading_determinant(
    prefix: &[u8],
    cycle: &[u8],
    q: u32,
    truncation: usize,
) -> Result<KneadingSeries, KneadingError> {
    if cycle.is_empty() {
        return Err(KneadingError::EmptyWord);
    }
    for &s in prefix.iter().chain(cycle) {
        if s > 2 {
            return Err(KneadingError::InvalidSymbol { symbol: s, q });
        }
    }
    let symbol = |k: usize| -> u8 {
        if k <= prefix.len() {
            prefix[k - 1]
        } else {
            cycle[(k - 1 - prefix.len()) % cycle.len()]
        }
    };
    let mut coeffs = vec![BigInt::zero(); truncation + 1];
    let add = |coeffs: &mut Vec<BigInt>, deg: usize, v: i64| {
        if deg <= truncation {
            coeffs[deg] += v;
        }
    };
    // k = 0: the critical symbol.
    let (mut eta, mut d) = (1i64, 0usize);
    add(&mut coeffs, 0, 1);
    add(&mut coeffs, 1, 1);
    let mut last_degree = 1;
    for k in 1.. {
        d += last_degree;
        if d > truncation {
            break;
        }
        let s = symbol(k);
        eta *= sign_of(s) as i64;
        let qd = degree_of(s, q);
        add(&mut coeffs, d, eta);
        add(&mut coeffs, d + qd, eta);
        last_degree = qd;
    }

    let rational = if prefix.is_empty() {
        let p = cycle.len();
        let pf = finite_word_kneading_polynomial(cycle, q);
        let eta_before: i64 = cycle[..p - 1].iter().map(|&s| sign_of(s) as i64).product();
        let eta_p = eta_before * sign_of(cycle[p - 1]) as i64;
        let d_p = 1 + cycle[..p - 1]
            .iter()
            .map(|&s| degree_of(s, q))
            .sum::<usize>();
        let numerator = pf.reciprocal(d_p).scale(&BigInt::from(eta_before));
        let denominator = &IntPolynomial::one() - &IntPolynomial::monomial(eta_p, d_p);
        Some((numerator, denominator))
    } else {
        None
    };
    Ok(KneadingSeries {
        coefficients: coeffs,
        rational,
    })
}

/// `f_{w_n} ∘ ... ∘ f_{w_1}(1) - 1` with `f_0(x) = zx`, `f_1(x) = 2 - zx`.
pub fn parry_polynomial(w: &[u8]) -> IntPolynomial {
    let two = IntPolynomial::from_i64(&[2]);
    let mut x = IntPolynomial::one();
    for &s in w {
        let zx = x.shift(1);
        x = if s == 0 { zx } else { &two - &zx };
    }
    &x - &IntPolynomial::one()
}

/// `Σ_{k<p} θ_k t^k` with `θ_k` the product of `ε(w_1) .. ε(w_k)`,
/// `ε(0) = 1`, `ε(1) = -1`: the numerator of the Milnor-Thurston kneading
/// series `P(t) / (1 - t^p)` of `w^∞`.
pub fn mt_kneading_polynomial(w: &[u8]) -> IntPolynomial {
    let mut theta = 1i64;
    let mut coeffs = Vec::with_capacity(w.len());
    for k in 0..w.len() {
        if k > 0 {
            theta *= sign_of(w[k - 1]) as i64;
        }
        coeffs.push(BigInt::from(theta));
    }
    IntPolynomial::new(coeffs)
}

/// Length of the full itinerary: every 2 expands to `q - 1` symbols.
pub fn full_length(w: &SimplifiedWord, q: u32) -> usize {
    w.symbols()
        .iter()
        .map(|&s| if s == 2 { q as usize - 1 } else { 1 })
        .sum()
}

/// Tune the outer parameter by a real-vein parameter.
///
/// Each inner symbol `v` becomes the outer word without its last symbol
/// followed by `hat(v)`, where `hat` is `0 -> 0, 1, 2 -> 1` when the outer
/// prefix has positive orientation and `0 -> 1, 1, 2 -> 0` otherwise.
pub fn tune(outer: &SimplifiedWord, inner: &SimplifiedWord) -> SimplifiedWord {
    let o = outer.symbols();
    let head = &o[..o.len() - 1];
    let positive = head.iter().filter(|&&s| s != 0).count() % 2 == 0;
    let hat = |v: u8| -> u8 {
        match (positive, v) {
            (true, 0) => 0,
            (true, _) => 1,
            (false, 0) => 1,
            (false, _) => 0,
        }
    };
    let mut out = Vec::with_capacity(o.len() * inner.len());
    for &v in inner.symbols() {
        out.extend_from_slice(head);
        out.push(hat(v));
    }
    SimplifiedWord(out)
}

/// `P_outer(t) · P_inner(t^ℓ) / (1 + t^ℓ)`, with `ℓ` the full length of the
/// outer word; the division must be exact.
pub fn tuned_polynomial(
    outer: &SimplifiedWord,
    q: u32,
    inner: &SimplifiedWord,
) -> Result<IntPolynomial, KneadingError> {
    let l = full_length(outer, q);
    let product = &kneading_polynomial(outer, q) * &kneading_polynomial(inner, 2).compose_power(l);
    product
        .exact_div(&one_plus_power(l))
        .ok_or_else(|| KneadingError::NonDivisible(format!("1 + t^{l}")))
}

/// Core entropy of a tuned parameter: `max(h_outer, h_inner / ℓ)`.
pub fn tuned_entropy(
    outer: &SimplifiedWord,
    q: u32,
    inner: &SimplifiedWord,
) -> Result<f64, KneadingError> {
    let l = full_length(outer, q) as f64;
    let h_outer = growth_rate(&kneading_polynomial(outer, q))?.ln();
    let h_inner = growth_rate(&kneading_polynomial(inner, 2))?.ln();
    Ok(h_outer.max(h_inner / l))
}
