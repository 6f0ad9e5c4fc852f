//! Symbolic itineraries: binary kneading words, first-return itineraries on
//! principal veins, twisted order, recoding and enumeration.

mod enumerate;
mod minimal;
mod order;
mod recode;
mod types;

pub use enumerate::{
    enumerate_vein_itineraries, one_sided_words, realizable_words, realizable_words_of_period,
    sort_along_vein, EnumerationMode,
};
pub use minimal::{is_minimal, is_vein_minimal, real_growth_rate, tent_orbit, ZERO_ENTROPY_CUTOFF};
pub use order::{
    flip_last, has_positive_cumulative_sign, is_admissible, is_irreducible,
    is_realizable_combinatorial, twisted_lex_compare,
};
pub use recode::{q_recode, recode, recode_inverse, recode_symbols, substitution_d};
pub use types::{BinaryWord, FullWord, SimplifiedWord};

use thiserror::Error;

use crate::oracles::{self, OracleError};
use crate::polyalg::PolyError;

/// Longest period for which the numeric center oracle may be consulted.
pub const ORACLE_MAX_PERIOD: usize = 14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WordError {
    #[error("cannot parse word {0:?}")]
    Parse(String),
    #[error("word ends in an infinite tail of 1s")]
    TailOfOnes,
    #[error("growth rate is 1; the piecewise linear model degenerates")]
    ZeroEntropy,
    #[error("word {0} is not realizable")]
    NotRealizable(String),
    #[error("no center oracle for period {period} (bound {bound})")]
    OracleUnavailable { period: usize, bound: usize },
    #[error("invalid vein {p}/{q}")]
    InvalidVein { p: u32, q: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

pub(crate) fn digits(w: &[u8]) -> String {
    w.iter().map(|d| char::from(b'0' + d)).collect()
}

/// Realizability of a finite kneading word.
///
/// Decided combinatorially: admissible, irreducible, and the representative
/// of its pair of one-sided itineraries.
pub fn is_realizable(w: &BinaryWord) -> bool {
    match w.symbols() {
        Some(s) => is_realizable_combinatorial(s),
        None => false,
    }
}

/// Realizability decided by the real center oracle, available up to
/// `bound` (itself capped at [`ORACLE_MAX_PERIOD`]).
pub fn is_realizable_by_oracle(w: &[u8], bound: usize) -> Result<bool, WordError> {
    let bound = bound.min(ORACLE_MAX_PERIOD);
    if w.len() > bound {
        return Err(WordError::OracleUnavailable {
            period: w.len(),
            bound,
        });
    }
    let centers = oracles::cached_real_centers(w.len())?;
    Ok(centers.iter().any(|c| c.itinerary == w))
}
