use super::types::{BinaryWord, FullWord, SimplifiedWord};
use super::WordError;

/// Recode a binary kneading word into a first-return itinerary.
///
/// Each maximal block of 1s of even length `2k` becomes `(12)^k`, and one
/// of odd length `2k+1` becomes `2(12)^k`; equivalently a 1 becomes 2 when
/// the run of 1s starting at it has odd length. Runs in a finite word are
/// read cyclically.
pub fn recode(w: &BinaryWord) -> Result<SimplifiedWord, WordError> {
    match w {
        BinaryWord::Finite(s) => {
            if s.iter().all(|&x| x == 1) {
                return Err(WordError::TailOfOnes);
            }
            let n = s.len();
            Ok(SimplifiedWord(recode_with(n, |i| s[i % n])))
        }
        BinaryWord::Infinite { prefix, cycle } => {
            if cycle.iter().all(|&x| x == 1) {
                return Err(WordError::TailOfOnes);
            }
            let n = prefix.len() + cycle.len();
            Ok(SimplifiedWord(recode_with(n, |i| w.symbol(i).unwrap())))
        }
    }
}

/// Recode positions `0..n` of a sequence that has a 0 within `n` steps of
/// every position.
fn recode_with(n: usize, at: impl Fn(usize) -> u8) -> Vec<u8> {
    (0..n)
        .map(|i| {
            if at(i) == 0 {
                return 0;
            }
            let run = (i..).take_while(|&j| at(j) == 1).count();
            if run % 2 == 1 {
                2
            } else {
                1
            }
        })
        .collect()
}

/// Recode a finite binary word; panics on words of 1s only.
pub fn recode_symbols(w: &[u8]) -> Vec<u8> {
    assert!(w.contains(&0), "recoding needs a 0");
    let n = w.len();
    recode_with(n, |i| w[i % n])
}

/// Replace every 2 by 1.
pub fn recode_inverse(w: &SimplifiedWord) -> BinaryWord {
    BinaryWord::Finite(w.0.iter().map(|&s| s.min(1)).collect())
}

/// Replace every 2 by `2 3 ... q`.
pub fn q_recode(w: &SimplifiedWord, q: u8) -> FullWord {
    assert!(q >= 2, "veins have q >= 2");
    let mut out = Vec::with_capacity(w.len() * q as usize);
    for &s in &w.0 {
        if s == 2 {
            out.extend(2..=q);
        } else {
            out.push(s);
        }
    }
    FullWord::new(out, q)
}

/// Doubling substitution `1 -> 10`, `0 -> 11`.
pub fn substitution_d(w: &[u8]) -> Vec<u8> {
    w.iter()
        .flat_map(|&s| if s == 1 { [1, 0] } else { [1, 1] })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bw(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn recode_examples() {
        assert_eq!(recode(&bw("10111")).unwrap().to_string(), "20121");
        assert_eq!(recode(&bw("10")).unwrap().to_string(), "20");
        assert_eq!(recode(&bw("101")).unwrap().to_string(), "201");
        assert_eq!(recode(&bw("|1")), Err(WordError::TailOfOnes));
        assert_eq!(recode(&bw("0|1")), Err(WordError::TailOfOnes));
        assert_eq!(recode(&bw("11")), Err(WordError::TailOfOnes));
        assert_eq!(recode(&bw("0000")).unwrap().to_string(), "0000");
        assert_eq!(recode(&bw("|110")).unwrap().to_string(), "120");
        assert_eq!(recode(&bw("1|110")).unwrap().to_string(), "2120");
    }

    #[test]
    fn inverse_and_q_recode() {
        let s: SimplifiedWord = "20121".parse().unwrap();
        assert_eq!(recode_inverse(&s).to_string(), "10111");
        let t: SimplifiedWord = "2021202020".parse().unwrap();
        assert_eq!(q_recode(&t, 3).to_string(), "230231230230230");
        assert_eq!(q_recode(&t, 2).simplify(), t);
        assert_eq!(q_recode(&"000".parse().unwrap(), 5).to_string(), "000");
    }

    #[test]
    fn doubling() {
        assert_eq!(substitution_d(&[1, 0]), vec![1, 0, 1, 1]);
        assert_eq!(substitution_d(&[1, 0, 1]), vec![1, 0, 1, 1, 1, 0]);
        assert_eq!(substitution_d(&[0]), vec![1, 1]);
    }
}
