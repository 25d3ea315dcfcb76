//! Surjectivity via the subset construction on the de Bruijn graph.
//!
//! A finite word has a preimage exactly when it labels a path in the de
//! Bruijn graph of width-`2r` words, where the edge `u -> v` (with `u` and
//! `v` overlapping on `2r - 1` letters) carries the output of the local rule
//! on the combined width-`2r+1` neighborhood. The CA is surjective iff every
//! word labels some path, i.e. iff the subset automaton started from the full
//! node set never reaches the empty set. Breadth-first search over subsets
//! therefore decides surjectivity and, on failure, yields a shortest orphan
//! (garden-of-eden) word.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use crate::rule::{Letter, RuleTable};

/// Outcome of the surjectivity decision.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Surjectivity {
    Surjective,
    /// `orphan` is a shortest word with no preimage (lexicographically least
    /// among shortest ones).
    NotSurjective { orphan: Vec<Letter> },
}

impl Surjectivity {
    pub fn is_surjective(&self) -> bool {
        matches!(self, Surjectivity::Surjective)
    }
}

/// Balance pretest: in a surjective CA every letter has exactly `q^{2r}`
/// preimage neighborhoods. Necessary but not sufficient.
pub fn is_balanced(rule: &RuleTable) -> bool {
    let q = rule.alphabet().size();
    let mut counts = alloc::vec![0u64; q];
    for &out in rule.table() {
        counts[out as usize] += 1;
    }
    let expected = rule.table().len() as u64 / q as u64;
    counts.iter().all(|&c| c == expected)
}

/// Decide surjectivity. Complete: runs the subset construction whatever the
/// balance pretest says, so a failing rule always comes with a shortest
/// orphan word.
pub fn is_surjective(rule: &RuleTable) -> Surjectivity {
    let q = rule.alphabet().size();
    let r = rule.radius();
    let node_count = rule
        .alphabet()
        .word_count(2 * r)
        .expect("de Bruijn node count overflows u64") as usize;

    // dests[letter][node] = successor nodes reachable while emitting letter.
    let mut dests: Vec<Vec<Vec<u32>>> = alloc::vec![alloc::vec![Vec::new(); node_count]; q];
    let mut nb = alloc::vec![0 as Letter; 2 * r + 1];
    for node in 0..node_count {
        let prefix = rule.alphabet().decode(node as u64, 2 * r);
        nb[..2 * r].copy_from_slice(&prefix);
        for x in rule.alphabet().letters() {
            nb[2 * r] = x;
            let out = rule.apply(&nb);
            // Successor drops the first letter and appends x.
            let succ = if r == 0 {
                0
            } else {
                let mut w = prefix[1..].to_vec();
                w.push(x);
                rule.alphabet().encode(&w) as usize
            };
            dests[out as usize][node].push(succ as u32);
        }
    }

    let blocks = node_count.div_ceil(64);
    let full: Box<[u64]> = {
        let mut v = alloc::vec![u64::MAX; blocks];
        let spare = blocks * 64 - node_count;
        if spare > 0 {
            v[blocks - 1] = u64::MAX >> spare;
        }
        v.into_boxed_slice()
    };
    let empty: Box<[u64]> = alloc::vec![0u64; blocks].into_boxed_slice();

    // BFS over subsets; parents let us reconstruct the shortest orphan.
    let mut visited: BTreeMap<Box<[u64]>, usize> = BTreeMap::new();
    let mut entries: Vec<(Option<usize>, Letter)> = Vec::new();
    let mut queue: VecDeque<(Box<[u64]>, usize)> = VecDeque::new();
    visited.insert(full.clone(), 0);
    entries.push((None, 0));
    queue.push_back((full, 0));

    while let Some((set, entry)) = queue.pop_front() {
        for out in rule.alphabet().letters() {
            let mut next = alloc::vec![0u64; blocks].into_boxed_slice();
            for block in 0..blocks {
                let mut bits = set[block];
                while bits != 0 {
                    let bit = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let node = block * 64 + bit;
                    for &d in &dests[out as usize][node] {
                        next[d as usize / 64] |= 1u64 << (d % 64);
                    }
                }
            }
            if next == empty {
                // Walk parents back to the root to spell the orphan.
                let mut orphan = alloc::vec![out];
                let mut at = entry;
                while let (Some(parent), letter) = entries[at] {
                    orphan.push(letter);
                    at = parent;
                }
                orphan.reverse();
                return Surjectivity::NotSurjective { orphan };
            }
            if !visited.contains_key(&next) {
                let idx = entries.len();
                visited.insert(next.clone(), idx);
                entries.push((Some(entry), out));
                queue.push_back((next, idx));
            }
        }
    }
    Surjectivity::Surjective
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::Alphabet;

    /// Brute-force preimage check, independent of the subset construction.
    fn has_preimage(rule: &RuleTable, word: &[Letter]) -> bool {
        let r = rule.radius();
        let pre_len = word.len() + 2 * r;
        rule.alphabet().words(pre_len).any(|candidate| {
            candidate
                .windows(2 * r + 1)
                .zip(word)
                .all(|(nb, &out)| rule.apply(nb) == out)
        })
    }

    #[test]
    fn shift_is_surjective() {
        assert!(is_surjective(&RuleTable::eca(170)).is_surjective());
    }

    #[test]
    fn xor_rule_is_surjective() {
        assert!(is_balanced(&RuleTable::eca(90)));
        assert!(is_surjective(&RuleTable::eca(90)).is_surjective());
    }

    #[test]
    fn rule_4_has_a_verified_orphan() {
        let rule = RuleTable::eca(4);
        assert!(!is_balanced(&rule));
        match is_surjective(&rule) {
            Surjectivity::NotSurjective { orphan } => {
                assert_eq!(orphan, alloc::vec![1, 1]);
                assert!(!has_preimage(&rule, &orphan));
                // Shortest: both single letters have preimages.
                assert!(has_preimage(&rule, &[0]));
                assert!(has_preimage(&rule, &[1]));
            }
            Surjectivity::Surjective => panic!("rule 4 must not be surjective"),
        }
    }

    #[test]
    fn radius_zero_surjective_iff_letter_map_onto() {
        let onto = RuleTable::identity(Alphabet::BINARY);
        assert!(is_surjective(&onto).is_surjective());
        let constant = RuleTable::new(Alphabet::BINARY, 0, alloc::vec![0, 0]).unwrap();
        match is_surjective(&constant) {
            Surjectivity::NotSurjective { orphan } => assert_eq!(orphan, alloc::vec![1]),
            _ => panic!("constant map is not surjective"),
        }
    }

    #[test]
    fn agrees_with_brute_force_on_sample_rules() {
        for number in [0u8, 4, 15, 30, 51, 90, 105, 110, 150, 170, 204, 232] {
            let rule = RuleTable::eca(number);
            let verdict = is_surjective(&rule);
            let brute = (1..=5).all(|len| rule.alphabet().words(len).all(|w| has_preimage(&rule, &w)));
            assert_eq!(verdict.is_surjective(), brute, "rule {number}");
        }
    }
}
