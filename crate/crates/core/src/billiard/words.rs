//! Binary fundamental-domain symbolic words.
//!
//! Symbol `0` sends the trajectory back to the disk it came from, symbol `1`
//! sends it on to the third disk. A prime cycle is encoded by its Lyndon word:
//! aperiodic and strictly smaller than each of its proper rotations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::BilliardError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Word {
    symbols: Vec<u8>,
}

impl Word {
    /// Validates that `symbols` is a non-empty prime canonical binary word.
    pub fn new(symbols: Vec<u8>) -> Result<Self, BilliardError> {
        let text = || {
            symbols
                .iter()
                .map(|s| char::from(b'0' + s.min(&9)))
                .collect::<String>()
        };
        if symbols.is_empty() || symbols.iter().any(|&s| s > 1) {
            return Err(BilliardError::InvalidWord {
                word: text(),
                reason: "expected a non-empty string over {0,1}",
            });
        }
        if !is_primitive(&symbols) {
            return Err(BilliardError::InvalidWord {
                word: text(),
                reason: "word is a repetition of a shorter word",
            });
        }
        if !is_least_rotation(&symbols) {
            return Err(BilliardError::InvalidWord {
                word: text(),
                reason: "word is not its lexicographically least rotation",
            });
        }
        Ok(Self { symbols })
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn n0(&self) -> usize {
        self.symbols.iter().filter(|&&s| s == 0).count()
    }

    pub fn n1(&self) -> usize {
        self.symbols.iter().filter(|&&s| s == 1).count()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl TryFrom<String> for Word {
    type Error = BilliardError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Word> for String {
    fn from(w: Word) -> Self {
        w.to_string()
    }
}

impl FromStr for Word {
    type Err = BilliardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let symbols = s
            .bytes()
            .map(|b| match b {
                b'0' => Ok(0),
                b'1' => Ok(1),
                _ => Err(BilliardError::InvalidWord {
                    word: s.to_owned(),
                    reason: "expected a non-empty string over {0,1}",
                }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(symbols)
    }
}

fn is_primitive(w: &[u8]) -> bool {
    let n = w.len();
    (1..n)
        .filter(|d| n.is_multiple_of(*d))
        .all(|d| w.chunks(d).any(|c| c != &w[..d]))
}

fn is_least_rotation(w: &[u8]) -> bool {
    let n = w.len();
    (1..n).all(|k| {
        let rotated = w[k..].iter().chain(&w[..k]);
        w.iter().cmp(rotated) != std::cmp::Ordering::Greater
    })
}

/// All prime canonical binary words of length `1..=max_len`, sorted by length
/// and then lexicographically.
///
/// Uses Duval's generation of Lyndon words, which produces them in
/// lexicographic order over all lengths at once.
pub fn enumerate_words(max_len: usize) -> Vec<Word> {
    let mut words = Vec::new();
    if max_len == 0 {
        return words;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        words.push(Word { symbols: w.clone() });
        // Extend periodically to max_len, then strip trailing maximal symbols.
        let m = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    words.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.symbols.cmp(&b.symbols))
    });
    words
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(max_len: usize) -> Vec<String> {
        let mut out = Vec::new();
        for n in 1..=max_len {
            for bits in 0u32..(1 << n) {
                let s: Vec<u8> = (0..n).rev().map(|i| ((bits >> i) & 1) as u8).collect();
                let rotations: Vec<Vec<u8>> = (0..n).map(|k| [&s[k..], &s[..k]].concat()).collect();
                let least = rotations.iter().min().unwrap();
                let periodic = (1..n).any(|d| n % d == 0 && s.chunks(d).all(|c| c == &s[..d]));
                if *least == s && !periodic {
                    out.push(s.iter().map(|b| char::from(b'0' + b)).collect());
                }
            }
        }
        out
    }

    fn mobius(n: usize) -> i64 {
        let mut m = n;
        let mut result = 1;
        let mut p = 2;
        while p * p <= m {
            if m.is_multiple_of(p) {
                m /= p;
                if m.is_multiple_of(p) {
                    return 0;
                }
                result = -result;
            }
            p += 1;
        }
        if m > 1 {
            result = -result;
        }
        result
    }

    fn necklace_count(n: usize) -> i64 {
        (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .map(|d| mobius(d) * (1i64 << (n / d)))
            .sum::<i64>()
            / n as i64
    }

    #[test]
    fn single_symbols() {
        let w: Vec<String> = enumerate_words(1).iter().map(Word::to_string).collect();
        assert_eq!(w, ["0", "1"]);
    }

    #[test]
    fn length_four_matches_brute_force() {
        let w: Vec<String> = enumerate_words(4).iter().map(Word::to_string).collect();
        assert_eq!(w, ["0", "1", "01", "001", "011", "0001", "0011", "0111"]);
        assert_eq!(w, brute_force(4));
    }

    #[test]
    fn length_twelve_count() {
        let words = enumerate_words(12);
        let brute = brute_force(12);
        let formula: i64 = (1..=12).map(necklace_count).sum();
        assert_eq!(words.len(), 747);
        assert_eq!(brute.len(), 747);
        assert_eq!(formula, 747);
        let as_text: Vec<String> = words.iter().map(Word::to_string).collect();
        assert_eq!(as_text, brute);
    }

    #[test]
    fn word_validation() {
        assert!("00".parse::<Word>().is_err());
        assert!("10".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
        assert!("0a".parse::<Word>().is_err());
        let w: Word = "0011".parse().unwrap();
        assert_eq!((w.n0(), w.n1(), w.len()), (2, 2, 4));
    }

    #[test]
    fn enumeration_is_deterministic() {
        assert_eq!(enumerate_words(9), enumerate_words(9));
        assert!(enumerate_words(0).is_empty());
    }
}
