//! Finite words and their period combinatorics.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{domain, resource, Result};
use crate::measures::Symbol;

/// Largest `alphabet_size^k` that [`enumerate_words`] will produce.
pub const ENUMERATION_GUARD: u64 = 1 << 24;

/// A finite block `w_1 ... w_k`. Positions are 1-based in the API.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `w[l, l + len)` with 1-based `l`.
    pub fn slice(&self, l: usize, len: usize) -> Word {
        Word(self.0[l - 1..l - 1 + len].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// True if `l` is a period: `l < k` and `w_i = w_{i+l}` for `1 <= i <= k - l`.
    pub fn has_period(&self, l: usize) -> bool {
        l >= 1 && l < self.len() && self.0[..self.len() - l] == self.0[l..]
    }

    /// The set of periods, ascending.
    pub fn periods(&self) -> Vec<usize> {
        (1..self.len()).filter(|&l| self.has_period(l)).collect()
    }

    /// Periodic extension of `self` to length `n`.
    pub fn ext(&self, n: usize) -> Result<Word> {
        if self.is_empty() {
            return Err(domain("periodic extension of the empty word"));
        }
        Ok(Word((0..n).map(|i| self.0[i % self.len()]).collect()))
    }

    /// Word of length `k + l` with `w` at offsets `1` and `l + 1`; it exists
    /// iff `l >= k` would need an explicit gap (rejected here) or `l` is a period.
    pub fn overlap_merge(&self, l: usize) -> Result<Word> {
        let k = self.len();
        if k == 0 || l == 0 {
            return Err(domain("overlap shift must be positive on a non-empty word"));
        }
        if l >= k {
            return Err(domain("shift >= |w| leaves a gap; compose two cylinders instead"));
        }
        if !self.has_period(l) {
            return Err(domain("shift is not a period: the two occurrences cannot coexist"));
        }
        let mut v = self.0.clone();
        v.extend_from_slice(&self.0[k - l..]);
        Ok(Word(v))
    }

    /// Comma-separated rendering, e.g. `3,1,4,1`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&alloc::format!("{a}"));
        }
        s
    }

    pub fn parse_csv(text: &str) -> Result<Word> {
        let t = text.trim();
        if t.is_empty() {
            return Ok(Word::empty());
        }
        t.split(',')
            .map(|p| p.trim().parse::<Symbol>().map_err(|_| domain(alloc::format!("bad symbol {p:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv())
    }
}

impl From<&[Symbol]> for Word {
    fn from(s: &[Symbol]) -> Self {
        Word(s.to_vec())
    }
}

/// Lexicographic iterator over `{0..alphabet_size}^k`.
#[derive(Debug, Clone)]
pub struct WordEnumerator {
    base: u64,
    current: Option<Vec<Symbol>>,
}

impl Iterator for WordEnumerator {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        let mut i = next.len();
        let mut carried_out = true;
        while i > 0 {
            i -= 1;
            if next[i] + 1 < self.base {
                next[i] += 1;
                carried_out = false;
                break;
            }
            next[i] = 0;
        }
        if !carried_out {
            self.current = Some(next);
        }
        Some(Word(cur))
    }
}

/// Number of words of length `k`, or `None` past the enumeration guard.
pub fn word_count(alphabet_size: u64, k: usize) -> Option<u64> {
    let mut n: u64 = 1;
    for _ in 0..k {
        n = n.checked_mul(alphabet_size)?;
        if n > ENUMERATION_GUARD {
            return None;
        }
    }
    Some(n)
}

pub fn enumerate_words(alphabet_size: u64, k: usize) -> Result<WordEnumerator> {
    if alphabet_size == 0 {
        return Err(domain("empty alphabet"));
    }
    if word_count(alphabet_size, k).is_none() {
        return Err(resource(alloc::format!("{alphabet_size}^{k} words exceed the enumeration guard")));
    }
    Ok(WordEnumerator { base: alphabet_size, current: Some(alloc::vec![0; k]) })
}
