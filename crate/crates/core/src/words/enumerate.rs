use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::minimal::is_vein_minimal;
use super::order::{
    flip_last, is_admissible, is_irreducible, is_realizable_combinatorial, twisted_lex_compare,
};
use super::recode::recode_symbols;
use super::types::{BinaryWord, SimplifiedWord};
use super::WordError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnumerationMode {
    All,
    Minimal,
}

impl std::str::FromStr for EnumerationMode {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Self::All),
            "minimal" => Ok(Self::Minimal),
            _ => Err(WordError::Parse(s.to_string())),
        }
    }
}

impl std::fmt::Display for EnumerationMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::All => "all",
            Self::Minimal => "minimal",
        })
    }
}

/// Length at which the search tree is split into parallel tasks.
const SPLIT_DEPTH: usize = 8;

/// Some shift of the prefix is already strictly above the prefix itself in
/// twisted order, so no extension is admissible.
fn prefix_is_dead(u: &[u8]) -> bool {
    let m = u.len();
    (1..m).any(|k| {
        let mut ones = 0u32;
        for i in 0..m - k {
            let (x, y) = (u[k + i], u[i]);
            if x != y {
                let greater = (x > y) == ones.is_multiple_of(2);
                return greater;
            }
            ones += x as u32;
        }
        false
    })
}

fn extend(prefix: &mut Vec<u8>, max_len: usize, out: &mut Vec<Vec<u8>>) {
    if is_realizable_combinatorial(prefix) {
        out.push(prefix.clone());
    }
    if prefix.len() == max_len {
        return;
    }
    for s in [0u8, 1] {
        prefix.push(s);
        if !prefix_is_dead(prefix) {
            extend(prefix, max_len, out);
        }
        prefix.pop();
    }
}

fn prefixes_at(depth: usize, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if prefix.len() == depth {
        out.push(prefix.clone());
        return;
    }
    for s in [0u8, 1] {
        prefix.push(s);
        if !prefix_is_dead(prefix) {
            prefixes_at(depth, prefix, out);
        }
        prefix.pop();
    }
}

/// Every realizable binary kneading word of length `1..=max_period`, sorted
/// by length and then lexicographically.
///
/// Besides the period-1 word `0` these all start with `10`.
pub fn realizable_words(max_period: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if max_period == 0 {
        return out;
    }
    out.push(vec![0]);
    if max_period >= 2 {
        let split = SPLIT_DEPTH.min(max_period);
        // Words shorter than the split depth are found on the way down.
        let mut short = Vec::new();
        let mut start = vec![1, 0];
        collect_short(&mut start, split, &mut short);
        out.extend(short);

        let mut roots = Vec::new();
        let mut start = vec![1, 0];
        prefixes_at(split, &mut start, &mut roots);
        let long: Vec<Vec<u8>> = roots
            .into_par_iter()
            .flat_map_iter(|mut r| {
                let mut found = Vec::new();
                if r.len() < max_period {
                    for s in [0u8, 1] {
                        r.push(s);
                        if !prefix_is_dead(&r) {
                            extend(&mut r, max_period, &mut found);
                        }
                        r.pop();
                    }
                }
                found
            })
            .collect();
        out.extend(long);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out.dedup();
    out
}

/// Realizable words with length at most `depth`, found below `prefix`.
fn collect_short(prefix: &mut Vec<u8>, depth: usize, out: &mut Vec<Vec<u8>>) {
    if is_realizable_combinatorial(prefix) {
        out.push(prefix.clone());
    }
    if prefix.len() == depth {
        return;
    }
    for s in [0u8, 1] {
        prefix.push(s);
        if !prefix_is_dead(prefix) {
            collect_short(prefix, depth, out);
        }
        prefix.pop();
    }
}

/// Realizable words of exactly length `n`.
pub fn realizable_words_of_period(n: usize) -> Vec<Vec<u8>> {
    realizable_words(n)
        .into_iter()
        .filter(|w| w.len() == n)
        .collect()
}

/// First-return itineraries of the critically periodic parameters on the
/// `p/q` vein with period at most `max_period` on the real vein.
///
/// Recoding is a bijection between real kneading words and simplified
/// itineraries on every principal vein, so the list is the same for every
/// `p/q`. `Minimal` keeps the vein root and the words with positive entropy
/// whose piecewise linear model reproduces them.
pub fn enumerate_vein_itineraries(
    p: u32,
    q: u32,
    max_period: usize,
    mode: EnumerationMode,
) -> Result<Vec<SimplifiedWord>, WordError> {
    if !(0 < p && p < q && num_integer::gcd(p, q) == 1) {
        return Err(WordError::InvalidVein { p, q });
    }
    let words = realizable_words(max_period);
    let keep: Vec<bool> = match mode {
        EnumerationMode::All => vec![true; words.len()],
        EnumerationMode::Minimal => words
            .par_iter()
            .map(|w| matches!(is_vein_minimal(w), Ok(true)))
            .collect(),
    };
    Ok(words
        .iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(w, _)| SimplifiedWord(recode_symbols(w)))
        .collect())
}

/// Both one-sided itineraries of every real center up to `max_period`: the
/// realizable words and their admissible irreducible partners that differ
/// in the last symbol, sorted by length and then lexicographically.
pub fn one_sided_words(max_period: usize) -> Vec<Vec<u8>> {
    let mut out = realizable_words(max_period);
    let partners: Vec<Vec<u8>> = out
        .iter()
        .map(|w| flip_last(w))
        .filter(|v| is_admissible(v) && is_irreducible(v) && !is_realizable_combinatorial(v))
        .collect();
    out.extend(partners);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Sort realizable words along the vein: twisted order of `w^∞`.
pub fn sort_along_vein(words: &mut [Vec<u8>]) {
    words.sort_by(|a, b| {
        let o = twisted_lex_compare(
            &BinaryWord::Finite(a.clone()).periodic(),
            &BinaryWord::Finite(b.clone()).periodic(),
        );
        if o == Ordering::Equal {
            a.len().cmp(&b.len())
        } else {
            o
        }
    });
}
