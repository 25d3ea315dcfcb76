//! Alphabets and local rule tables.

use alloc::vec::Vec;

use crate::error::Error;
use crate::math::fnv1a64;
use crate::Result;

/// A cell state. Alphabets have at most 256 letters `0..q`.
pub type Letter = u8;

/// Default cap on composed rule table sizes (number of entries).
pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 24;

/// A finite alphabet `{0, ..., q-1}`.
///
/// `q >= 2` for nondegenerate analyses; `q = 1` is permitted for trivial
/// inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Alphabet {
    size: u16,
}

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet { size: 2 };

    pub fn new(size: usize) -> Result<Self> {
        if (1..=256).contains(&size) {
            Ok(Alphabet { size: size as u16 })
        } else {
            Err(Error::InvalidAlphabet(size))
        }
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn contains(&self, letter: Letter) -> bool {
        (letter as u16) < self.size
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.size).map(|l| l as Letter)
    }

    /// Number of words of the given length, if it fits in a `u64`.
    pub fn word_count(&self, len: usize) -> Option<u64> {
        (self.size as u64).checked_pow(u32::try_from(len).ok()?)
    }

    /// Word with the given radix-`q` index, most significant letter first.
    pub fn decode(&self, mut index: u64, len: usize) -> Vec<Letter> {
        let q = self.size as u64;
        let mut word = alloc::vec![0 as Letter; len];
        for cell in word.iter_mut().rev() {
            *cell = (index % q) as Letter;
            index /= q;
        }
        word
    }

    /// Radix-`q` index of a word, most significant letter first.
    pub fn encode(&self, word: &[Letter]) -> u64 {
        let q = self.size as u64;
        word.iter().fold(0u64, |acc, &l| acc * q + l as u64)
    }

    /// All words of the given length in lexicographic order.
    pub fn words(&self, len: usize) -> impl Iterator<Item = Vec<Letter>> + '_ {
        let count = self
            .word_count(len)
            .expect("word enumeration length out of range");
        (0..count).map(move |i| self.decode(i, len))
    }

    pub fn check_word(&self, word: &[Letter]) -> Result<()> {
        for &l in word {
            if !self.contains(l) {
                return Err(Error::LetterOutOfRange { letter: l, alphabet_size: self.size() });
            }
        }
        Ok(())
    }
}

/// A local rule of radius `r`: a total map from neighborhoods (words of
/// length `2r+1`) to letters, stored in lexicographic neighborhood order.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RuleTable {
    alphabet: Alphabet,
    radius: usize,
    table: Vec<Letter>,
}

impl RuleTable {
    pub fn new(alphabet: Alphabet, radius: usize, table: Vec<Letter>) -> Result<Self> {
        let expected = alphabet
            .word_count(2 * radius + 1)
            .ok_or(Error::InvalidParameter("neighborhood count overflows u64"))?;
        if table.len() as u64 != expected {
            return Err(Error::BadTableLength { expected, actual: table.len() });
        }
        alphabet.check_word(&table)?;
        Ok(RuleTable { alphabet, radius, table })
    }

    /// Elementary cellular automaton: binary alphabet, radius 1, table entry
    /// for neighborhood `(a, b, c)` is bit `4a + 2b + c` of the Wolfram
    /// number.
    pub fn eca(number: u8) -> Self {
        let table = (0..8).map(|i| (number >> i) & 1).collect();
        RuleTable { alphabet: Alphabet::BINARY, radius: 1, table }
    }

    /// Radius-0 identity rule.
    pub fn identity(alphabet: Alphabet) -> Self {
        RuleTable { alphabet, radius: 0, table: alphabet.letters().collect() }
    }

    /// The shift map `x_i -> x_{i+1}` as a radius-1 rule.
    pub fn shift(alphabet: Alphabet) -> Self {
        let q = alphabet.size();
        let table = (0..q * q * q).map(|i| (i % q) as Letter).collect();
        RuleTable { alphabet, radius: 1, table }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn neighborhood_width(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn table(&self) -> &[Letter] {
        &self.table
    }

    /// Apply the local rule to one neighborhood of length `2r+1`.
    #[inline]
    pub fn apply(&self, neighborhood: &[Letter]) -> Letter {
        debug_assert_eq!(neighborhood.len(), self.neighborhood_width());
        self.table[self.alphabet.encode(neighborhood) as usize]
    }

    /// The rule computing `F^k`, of radius `k*r`.
    ///
    /// Fails when the composed table would have more than `table_budget`
    /// entries.
    pub fn compose(&self, steps: usize, table_budget: u64) -> Result<RuleTable> {
        if steps == 0 {
            return Err(Error::InvalidParameter("composition requires steps >= 1"));
        }
        let radius = self.radius * steps;
        let width = 2 * radius + 1;
        let entries = self
            .alphabet
            .word_count(width)
            .filter(|&n| n <= table_budget)
            .ok_or(Error::BudgetExceeded {
                needed: self.alphabet.word_count(width).unwrap_or(u64::MAX),
                budget: table_budget,
            })?;

        let mut table = Vec::with_capacity(entries as usize);
        let mut buf = alloc::vec![0 as Letter; width];
        let mut next = Vec::with_capacity(width);
        for index in 0..entries {
            decode_into(self.alphabet, index, &mut buf);
            // Shrink the word by 2r per application; one letter remains.
            let mut len = width;
            for _ in 0..steps {
                next.clear();
                for i in self.radius..len - self.radius {
                    next.push(self.apply(&buf[i - self.radius..=i + self.radius]));
                }
                len = next.len();
                buf[..len].copy_from_slice(&next);
            }
            table.push(buf[0]);
        }
        Ok(RuleTable { alphabet: self.alphabet, radius, table })
    }

    /// Whether `self` and `other` compute the same global map. `self` must
    /// have the larger radius; the narrower table is evaluated on the central
    /// part of each neighborhood.
    pub fn agrees_with(&self, other: &RuleTable) -> bool {
        if self.alphabet != other.alphabet || self.radius < other.radius {
            return false;
        }
        let pad = self.radius - other.radius;
        let width = self.neighborhood_width();
        let mut buf = alloc::vec![0 as Letter; width];
        for (index, &out) in self.table.iter().enumerate() {
            decode_into(self.alphabet, index as u64, &mut buf);
            if other.apply(&buf[pad..width - pad]) != out {
                return false;
            }
        }
        true
    }

    /// FNV-1a hash of the rule contents; stable across runs.
    pub fn content_hash(&self) -> u64 {
        let mut bytes = Vec::with_capacity(self.table.len() + 16);
        bytes.extend_from_slice(&(self.alphabet.size() as u64).to_le_bytes());
        bytes.extend_from_slice(&(self.radius as u64).to_le_bytes());
        bytes.extend_from_slice(&self.table);
        fnv1a64(&bytes)
    }
}

fn decode_into(alphabet: Alphabet, mut index: u64, out: &mut [Letter]) {
    let q = alphabet.size() as u64;
    for cell in out.iter_mut().rev() {
        *cell = (index % q) as Letter;
        index /= q;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eca_zero_maps_everything_to_zero() {
        let rule = RuleTable::eca(0);
        assert!(rule.table().iter().all(|&l| l == 0));
    }

    #[test]
    fn eca_170_is_right_neighbor() {
        let rule = RuleTable::eca(170);
        for a in 0..2u8 {
            for b in 0..2u8 {
                for c in 0..2u8 {
                    assert_eq!(rule.apply(&[a, b, c]), c);
                }
            }
        }
    }

    #[test]
    fn eca_204_is_center() {
        let rule = RuleTable::eca(204);
        for a in 0..2u8 {
            for b in 0..2u8 {
                for c in 0..2u8 {
                    assert_eq!(rule.apply(&[a, b, c]), b);
                }
            }
        }
    }

    #[test]
    fn compose_identity_stays_identity() {
        let rule = RuleTable::eca(204);
        let cubed = rule.compose(3, DEFAULT_TABLE_BUDGET).unwrap();
        assert_eq!(cubed.radius(), 3);
        for (index, &out) in cubed.table().iter().enumerate() {
            let word = cubed.alphabet().decode(index as u64, 7);
            assert_eq!(out, word[3]);
        }
    }

    #[test]
    fn compose_complement_squared_is_identity() {
        let squared = RuleTable::eca(51).compose(2, DEFAULT_TABLE_BUDGET).unwrap();
        assert_eq!(squared.radius(), 2);
        for (index, &out) in squared.table().iter().enumerate() {
            let word = squared.alphabet().decode(index as u64, 5);
            assert_eq!(out, word[2]);
        }
    }

    #[test]
    fn compose_xor_rule_doubles_reach() {
        // ECA 90: f(a, b, c) = a XOR c, so F^2 reads cells at distance 2.
        let squared = RuleTable::eca(90).compose(2, DEFAULT_TABLE_BUDGET).unwrap();
        for (index, &out) in squared.table().iter().enumerate() {
            let word = squared.alphabet().decode(index as u64, 5);
            assert_eq!(out, word[0] ^ word[4]);
        }
    }

    #[test]
    fn compose_respects_budget() {
        let err = RuleTable::eca(90).compose(20, 1 << 10).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn agrees_with_pads_the_narrower_table() {
        let id0 = RuleTable::identity(Alphabet::BINARY);
        let id3 = RuleTable::eca(204).compose(3, DEFAULT_TABLE_BUDGET).unwrap();
        assert!(id3.agrees_with(&id0));
        assert!(!id3.agrees_with(&RuleTable::eca(51)));
    }

    #[test]
    fn table_length_is_validated() {
        let err = RuleTable::new(Alphabet::BINARY, 1, alloc::vec![0, 1]).unwrap_err();
        assert!(matches!(err, Error::BadTableLength { expected: 8, .. }));
    }

    #[test]
    fn shift_rule_equals_eca_170_on_binary() {
        assert_eq!(RuleTable::shift(Alphabet::BINARY), RuleTable::eca(170));
    }
}
