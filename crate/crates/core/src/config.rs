//! Exact configuration models: spatially periodic and windowed.

use alloc::vec::Vec;

use crate::error::Error;
use crate::rule::{Alphabet, Letter};
use crate::Result;

/// The bi-infinite spatially periodic configuration repeating `word`.
///
/// Position `i` of the configuration holds `word[i mod n]` where `n` is the
/// period. Values are immutable; every step produces a new value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CyclicConfig {
    alphabet: Alphabet,
    word: Vec<Letter>,
}

impl CyclicConfig {
    pub fn new(alphabet: Alphabet, word: Vec<Letter>) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::EmptyInput("cyclic configuration word"));
        }
        alphabet.check_word(&word)?;
        Ok(CyclicConfig { alphabet, word })
    }

    /// The constant configuration `letter^∞` of period 1.
    pub fn constant(alphabet: Alphabet, letter: Letter) -> Result<Self> {
        CyclicConfig::new(alphabet, alloc::vec![letter])
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn period(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    #[inline]
    pub fn get(&self, position: i64) -> Letter {
        let n = self.word.len() as i64;
        self.word[position.rem_euclid(n) as usize]
    }

    /// The word on the half-open interval `[start, start + width)`.
    pub fn slice(&self, start: i64, width: usize) -> Vec<Letter> {
        (0..width as i64).map(|k| self.get(start + k)).collect()
    }

    /// The configuration shifted left by `k`: position `i` of the result
    /// holds position `i + k` of `self`.
    pub fn rotate(&self, k: i64) -> CyclicConfig {
        let n = self.word.len();
        let word = (0..n as i64).map(|i| self.get(i + k)).collect();
        CyclicConfig { alphabet: self.alphabet, word }
    }
}

/// A configuration known exactly on `[offset, offset + len)` and unknown
/// elsewhere.
///
/// Stepping shrinks the window by the rule radius on each side; every
/// reported cell is exact for every bi-infinite extension of the window.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WindowConfig {
    alphabet: Alphabet,
    offset: i64,
    word: Vec<Letter>,
}

impl WindowConfig {
    pub fn new(alphabet: Alphabet, offset: i64, word: Vec<Letter>) -> Result<Self> {
        alphabet.check_word(&word)?;
        Ok(WindowConfig { alphabet, offset, word })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    /// An exhausted window carries no known cells.
    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    /// Half-open interval of known positions.
    pub fn span(&self) -> (i64, i64) {
        (self.offset, self.offset + self.word.len() as i64)
    }

    pub fn covers(&self, start: i64, end: i64) -> bool {
        let (lo, hi) = self.span();
        lo <= start && end <= hi
    }

    pub fn get(&self, position: i64) -> Option<Letter> {
        let idx = position.checked_sub(self.offset)?;
        if (0..self.word.len() as i64).contains(&idx) {
            Some(self.word[idx as usize])
        } else {
            None
        }
    }

    /// The word on `[start, start + width)`; fails if not fully covered.
    pub fn slice(&self, start: i64, width: usize) -> Result<Vec<Letter>> {
        let end = start + width as i64;
        if !self.covers(start, end) {
            return Err(Error::InsufficientWindow { required: (start, end) });
        }
        let from = (start - self.offset) as usize;
        Ok(self.word[from..from + width].to_vec())
    }
}

/// Either exact configuration model; used by operations accepting both.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Configuration {
    Cyclic(CyclicConfig),
    Window(WindowConfig),
}

impl Configuration {
    pub fn alphabet(&self) -> Alphabet {
        match self {
            Configuration::Cyclic(c) => c.alphabet(),
            Configuration::Window(w) => w.alphabet(),
        }
    }
}

impl From<CyclicConfig> for Configuration {
    fn from(c: CyclicConfig) -> Self {
        Configuration::Cyclic(c)
    }
}

impl From<WindowConfig> for Configuration {
    fn from(w: WindowConfig) -> Self {
        Configuration::Window(w)
    }
}
