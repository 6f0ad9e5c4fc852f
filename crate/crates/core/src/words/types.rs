use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::WordError;

fn parse_digits(s: &str, max: u8) -> Result<Vec<u8>, WordError> {
    let bad = || WordError::Parse(s.to_string());
    let v: Vec<u8> = s
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
        .collect::<Result<_, _>>()?;
    if v.iter().any(|&d| d > max) {
        return Err(bad());
    }
    Ok(v)
}

fn write_digits(f: &mut fmt::Formatter<'_>, v: &[u8]) -> fmt::Result {
    for d in v {
        write!(f, "{d}")?;
    }
    Ok(())
}

/// Word over `{0, 1}`: finite, or eventually periodic stored as
/// `prefix` followed by `cycle` repeated forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum BinaryWord {
    Finite(Vec<u8>),
    Infinite { prefix: Vec<u8>, cycle: Vec<u8> },
}

impl BinaryWord {
    /// Panics on symbols other than 0 and 1 or an empty word.
    pub fn finite(symbols: Vec<u8>) -> Self {
        assert!(!symbols.is_empty(), "finite words are non-empty");
        assert!(symbols.iter().all(|&s| s <= 1), "binary symbols only");
        Self::Finite(symbols)
    }

    /// `prefix` followed by `cycle` forever; `cycle` must be non-empty.
    pub fn infinite(prefix: Vec<u8>, cycle: Vec<u8>) -> Self {
        assert!(!cycle.is_empty(), "eventually periodic words need a cycle");
        assert!(
            prefix.iter().chain(&cycle).all(|&s| s <= 1),
            "binary symbols only"
        );
        Self::Infinite { prefix, cycle }
    }

    /// `w^∞` for a finite word; infinite words are returned unchanged.
    pub fn periodic(&self) -> Self {
        match self {
            Self::Finite(w) => Self::Infinite {
                prefix: Vec::new(),
                cycle: w.clone(),
            },
            other => other.clone(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }

    /// Symbol at 0-based position `i`; `None` past the end of a finite word.
    pub fn symbol(&self, i: usize) -> Option<u8> {
        match self {
            Self::Finite(w) => w.get(i).copied(),
            Self::Infinite { prefix, cycle } => Some(if i < prefix.len() {
                prefix[i]
            } else {
                cycle[(i - prefix.len()) % cycle.len()]
            }),
        }
    }

    /// Symbols of a finite word.
    pub fn symbols(&self) -> Option<&[u8]> {
        match self {
            Self::Finite(w) => Some(w),
            Self::Infinite { .. } => None,
        }
    }

    /// Length of a finite word, or of prefix plus cycle.
    pub fn stored_len(&self) -> usize {
        match self {
            Self::Finite(w) => w.len(),
            Self::Infinite { prefix, cycle } => prefix.len() + cycle.len(),
        }
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(w) => write_digits(f, w),
            Self::Infinite { prefix, cycle } => {
                write_digits(f, prefix)?;
                write!(f, "|")?;
                write_digits(f, cycle)
            }
        }
    }
}

/// `"101"` is finite; `"1|0"` is `1` followed by `0` forever.
impl FromStr for BinaryWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('|') {
            None => {
                let w = parse_digits(s, 1)?;
                if w.is_empty() {
                    return Err(WordError::Parse(s.to_string()));
                }
                Ok(Self::Finite(w))
            }
            Some((pre, cyc)) => {
                let prefix = parse_digits(pre, 1)?;
                let cycle = parse_digits(cyc, 1)?;
                if cycle.is_empty() {
                    return Err(WordError::Parse(s.to_string()));
                }
                Ok(Self::Infinite { prefix, cycle })
            }
        }
    }
}

impl TryFrom<String> for BinaryWord {
    type Error = WordError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<BinaryWord> for String {
    fn from(w: BinaryWord) -> Self {
        w.to_string()
    }
}

/// First-return itinerary over `{0, 1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SimplifiedWord(pub Vec<u8>);

impl SimplifiedWord {
    pub fn new(symbols: Vec<u8>) -> Self {
        assert!(
            symbols.iter().all(|&s| s <= 2),
            "simplified symbols are 0, 1, 2"
        );
        Self(symbols)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// First-return grammar: every 1 is followed by 2 and every 2 by 0 or
    /// 1, cyclically for a periodic word.
    pub fn satisfies_grammar(&self) -> bool {
        let n = self.0.len();
        (0..n).all(|i| {
            let next = self.0[(i + 1) % n];
            match self.0[i] {
                1 => next == 2,
                2 => next <= 1,
                _ => true,
            }
        })
    }
}

impl fmt::Display for SimplifiedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_digits(f, &self.0)
    }
}

impl FromStr for SimplifiedWord {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let w = parse_digits(s, 2)?;
        if w.is_empty() {
            return Err(WordError::Parse(s.to_string()));
        }
        Ok(Self(w))
    }
}

impl TryFrom<String> for SimplifiedWord {
    type Error = WordError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<SimplifiedWord> for String {
    fn from(w: SimplifiedWord) -> Self {
        w.to_string()
    }
}

/// Itinerary over `{0, 1, ..., q}` on the `p/q` star tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FullWord {
    pub symbols: Vec<u8>,
    pub q: u8,
}

impl FullWord {
    pub fn new(symbols: Vec<u8>, q: u8) -> Self {
        assert!(q >= 2, "veins have q >= 2");
        assert!(symbols.iter().all(|&s| s <= q), "symbol above q");
        Self { symbols, q }
    }

    pub fn parse(s: &str, q: u8) -> Result<Self, WordError> {
        let w = parse_digits(s, q)?;
        if w.is_empty() {
            return Err(WordError::Parse(s.to_string()));
        }
        Ok(Self::new(w, q))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Delete every symbol above 2.
    pub fn simplify(&self) -> SimplifiedWord {
        SimplifiedWord(self.symbols.iter().copied().filter(|&s| s <= 2).collect())
    }

    /// Star-tree grammar, cyclically: `k -> k+1` for `2 <= k < q`,
    /// `q -> 0 | 1`, `1 -> 2`, `0 -> anything but 3..q`.
    pub fn satisfies_grammar(&self) -> bool {
        let n = self.symbols.len();
        let q = self.q;
        (0..n).all(|i| {
            let s = self.symbols[i];
            let next = self.symbols[(i + 1) % n];
            if s == q {
                next <= 1
            } else if s >= 2 {
                next == s + 1
            } else if s == 1 {
                next == 2
            } else {
                next <= 2
            }
        })
    }
}

impl fmt::Display for FullWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_digits(f, &self.symbols)
    }
}
