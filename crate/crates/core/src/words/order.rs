use std::cmp::Ordering;

use super::types::BinaryWord;

/// Compare two symbol sequences in twisted lexicographic order, looking at
/// the first `len` positions.
fn twisted_cmp_by(len: usize, a: impl Fn(usize) -> u8, b: impl Fn(usize) -> u8) -> Ordering {
    let mut ones = 0u32;
    for i in 0..len {
        let (x, y) = (a(i), b(i));
        if x != y {
            let plain = x.cmp(&y);
            return if ones.is_multiple_of(2) {
                plain
            } else {
                plain.reverse()
            };
        }
        ones += x as u32;
    }
    Ordering::Equal
}

/// Twisted lexicographic order: at the first difference `i`, `w < v` iff
/// `(-1)^(w_0 + ... + w_{i-1}) (w_i - v_i) < 0`.
///
/// Two finite words of equal length compare as finite words; in every other
/// case a finite word stands for its periodic extension.
pub fn twisted_lex_compare(w: &BinaryWord, v: &BinaryWord) -> Ordering {
    if let (BinaryWord::Finite(a), BinaryWord::Finite(b)) = (w, v) {
        if a.len() == b.len() {
            return twisted_cmp_by(a.len(), |i| a[i], |i| b[i]);
        }
    }
    let (w, v) = (w.periodic(), v.periodic());
    let (
        BinaryWord::Infinite {
            prefix: pa,
            cycle: ca,
        },
        BinaryWord::Infinite {
            prefix: pb,
            cycle: cb,
        },
    ) = (&w, &v)
    else {
        unreachable!()
    };
    // Past the longer prefix both sequences repeat with period lcm.
    let len = pa.len().max(pb.len()) + num_integer::lcm(ca.len(), cb.len());
    twisted_cmp_by(len, |i| w.symbol(i).unwrap(), |i| v.symbol(i).unwrap())
}

/// Every rotation `ba` of `w = ab` satisfies `(ba)^∞ <= (ab)^∞`.
pub fn is_admissible(w: &[u8]) -> bool {
    assert!(!w.is_empty(), "admissibility of the empty word");
    let n = w.len();
    let mut rot = w.to_vec();
    for _ in 1..n {
        rot.rotate_left(1);
        if twisted_cmp_by(n, |i| rot[i], |i| w[i]) == Ordering::Greater {
            return false;
        }
    }
    true
}

/// Not a concatenation of two or more copies of a shorter word.
pub fn is_irreducible(w: &[u8]) -> bool {
    let n = w.len();
    (1..n)
        .filter(|d| n.is_multiple_of(*d))
        .all(|d| (d..n).any(|i| w[i] != w[i - d]))
}

/// Even number of 1s.
pub fn has_positive_cumulative_sign(w: &[u8]) -> bool {
    w.iter().filter(|&&s| s == 1).count() % 2 == 0
}

/// `w` with its last symbol flipped.
pub fn flip_last(w: &[u8]) -> Vec<u8> {
    let mut v = w.to_vec();
    if let Some(last) = v.last_mut() {
        *last ^= 1;
    }
    v
}

/// Combinatorial realizability of a finite kneading word.
///
/// The two words that differ only in the last symbol are the one-sided
/// itineraries at the same superattracting parameter; the representative is
/// the one of even cumulative sign, unless its partner is reducible or not
/// admissible, in which case it is the word itself.
pub fn is_realizable_combinatorial(w: &[u8]) -> bool {
    if !is_admissible(w) || !is_irreducible(w) {
        return false;
    }
    if has_positive_cumulative_sign(w) {
        return true;
    }
    let partner = flip_last(w);
    !is_admissible(&partner) || !is_irreducible(&partner)
}
