//! Sound certification and randomized falsification of blocking words.
//!
//! Certification runs a set-based simulation: each cell of a finite window
//! carries the set of letters it can hold, cells outside the window are
//! pinned to the full alphabet at every step, and one abstract step maps each
//! cell to the image of the local rule over the Cartesian product of its
//! neighbor sets. The abstraction over-approximates every reachable column
//! content, so once the abstract orbit closes into a cycle, a column window
//! that stayed singleton throughout is a proof that the word blocks there.
//! The abstraction is incomplete: failure to certify is reported as
//! "inconclusive", never as "not blocking".

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::WindowConfig;
use crate::error::Error;
use crate::math::fnv1a64;
use crate::rule::{Alphabet, Letter, RuleTable};
use crate::sim::TemporalCycle;
use crate::Result;

/// A nonempty subset of a (at most 256-letter) alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LetterSet {
    bits: [u64; 4],
}

impl LetterSet {
    pub const EMPTY: LetterSet = LetterSet { bits: [0; 4] };

    pub fn singleton(letter: Letter) -> LetterSet {
        let mut s = LetterSet::EMPTY;
        s.insert(letter);
        s
    }

    pub fn full(alphabet: Alphabet) -> LetterSet {
        let mut s = LetterSet::EMPTY;
        for l in alphabet.letters() {
            s.insert(l);
        }
        s
    }

    pub fn insert(&mut self, letter: Letter) {
        self.bits[letter as usize / 64] |= 1u64 << (letter % 64);
    }

    pub fn contains(&self, letter: Letter) -> bool {
        self.bits[letter as usize / 64] >> (letter % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits == [0; 4]
    }

    /// The letter of a one-element set, if it is one.
    pub fn as_singleton(&self) -> Option<Letter> {
        if self.len() != 1 {
            return None;
        }
        self.iter().next()
    }

    pub fn is_subset(&self, other: &LetterSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..256usize).filter(|&l| self.contains(l as Letter)).map(|l| l as Letter)
    }
}

/// A window of letter sets; cells outside the window hold the full alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetWord {
    alphabet: Alphabet,
    offset: i64,
    cells: Vec<LetterSet>,
}

impl SetWord {
    pub fn new(alphabet: Alphabet, offset: i64, cells: Vec<LetterSet>) -> Result<Self> {
        if cells.iter().any(LetterSet::is_empty) {
            return Err(Error::InvalidParameter("set-word cells must be nonempty"));
        }
        Ok(SetWord { alphabet, offset, cells })
    }

    /// Singletons of `word` flanked by `margin` full-alphabet cells per side;
    /// the word itself starts at position 0.
    pub fn around_word(alphabet: Alphabet, word: &[Letter], margin: usize) -> Result<Self> {
        alphabet.check_word(word)?;
        let full = LetterSet::full(alphabet);
        let mut cells = alloc::vec![full; margin];
        cells.extend(word.iter().map(|&l| LetterSet::singleton(l)));
        cells.extend(core::iter::repeat(full).take(margin));
        Ok(SetWord { alphabet, offset: -(margin as i64), cells })
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn cells(&self) -> &[LetterSet] {
        &self.cells
    }

    /// Set held at an absolute position; full alphabet outside the window.
    pub fn at(&self, position: i64) -> LetterSet {
        let idx = position - self.offset;
        if (0..self.cells.len() as i64).contains(&idx) {
            self.cells[idx as usize]
        } else {
            LetterSet::full(self.alphabet)
        }
    }

    /// Round-trip to a concrete window; `None` unless every cell is a
    /// singleton.
    pub fn as_window(&self) -> Option<WindowConfig> {
        let word: Option<Vec<Letter>> = self.cells.iter().map(LetterSet::as_singleton).collect();
        WindowConfig::new(self.alphabet, self.offset, word?).ok()
    }
}

/// One sound abstract step: output cell `i` is the image of the rule over
/// the Cartesian product of the input sets at `i-r..=i+r`, with out-of-window
/// cells pinned to the full alphabet. The window itself does not move.
pub fn abstract_step(rule: &RuleTable, s: &SetWord) -> SetWord {
    let r = rule.radius() as i64;
    let width = rule.neighborhood_width();
    let mut nb_sets = alloc::vec![LetterSet::EMPTY; width];
    let mut nb = alloc::vec![0 as Letter; width];
    let cells = (0..s.cells.len() as i64)
        .map(|i| {
            let pos = s.offset + i;
            for (k, set) in nb_sets.iter_mut().enumerate() {
                *set = s.at(pos - r + k as i64);
            }
            let mut out = LetterSet::EMPTY;
            // Odometer over the product of neighbor sets.
            let mut choice: Vec<Vec<Letter>> =
                nb_sets.iter().map(|set| set.iter().collect()).collect();
            let mut idx = alloc::vec![0usize; width];
            'product: loop {
                for (k, cell) in nb.iter_mut().enumerate() {
                    *cell = choice[k][idx[k]];
                }
                out.insert(rule.apply(&nb));
                for k in (0..width).rev() {
                    idx[k] += 1;
                    if idx[k] < choice[k].len() {
                        continue 'product;
                    }
                    idx[k] = 0;
                    if k == 0 {
                        break 'product;
                    }
                }
            }
            choice.clear();
            out
        })
        .collect();
    SetWord { alphabet: s.alphabet, offset: s.offset, cells }
}

/// A sound proof that `word` is an `s`-blocking word at offset `offset`.
///
/// Replaying [`abstract_step`] from the initial set-word must reproduce the
/// recorded cycle, with the certified column window singleton at every step.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BlockingCertificate {
    pub word: Vec<Letter>,
    #[cfg_attr(feature = "serde", serde(rename = "s"))]
    pub width: usize,
    #[cfg_attr(feature = "serde", serde(rename = "p"))]
    pub offset: usize,
    #[cfg_attr(feature = "serde", serde(rename = "W"))]
    pub margin: usize,
    /// Preperiod and period of the abstract orbit.
    pub preperiod: usize,
    pub period: usize,
    /// Exact letters of the certified column window, one row per abstract
    /// step `0..preperiod+period`.
    #[cfg_attr(feature = "serde", serde(rename = "steps"))]
    pub witness_rows: Vec<Vec<Letter>>,
    /// FNV-1a over the witness rows; lets reports detect stale replays.
    pub replay_hash: u64,
}

fn witness_hash(rows: &[Vec<Letter>]) -> u64 {
    let mut bytes = Vec::new();
    for row in rows {
        bytes.extend_from_slice(&(row.len() as u64).to_le_bytes());
        bytes.extend_from_slice(row);
    }
    fnv1a64(&bytes)
}

/// Try to certify that `word` is an `s`-blocking word.
///
/// Returns the certificate for the smallest offset whose `s`-cell column
/// window is singleton at every step of the abstract orbit (preperiod and
/// full cycle), or `None` when the abstraction is inconclusive — which is
/// weaker than "not blocking".
pub fn certify_blocking(
    rule: &RuleTable,
    word: &[Letter],
    s: usize,
    margin: usize,
    max_steps: usize,
) -> Result<Option<BlockingCertificate>> {
    if word.len() < s {
        return Err(Error::InvalidParameter("blocking word must be at least s letters long"));
    }
    let start = SetWord::around_word(rule.alphabet(), word, margin)?;

    let mut seen: BTreeMap<Vec<LetterSet>, usize> = BTreeMap::new();
    let mut states: Vec<Vec<LetterSet>> = Vec::new();
    let mut cur = start;
    let (preperiod, period) = loop {
        if let Some(&first) = seen.get(&cur.cells) {
            break (first, states.len() - first);
        }
        if states.len() >= max_steps {
            return Ok(None);
        }
        seen.insert(cur.cells.clone(), states.len());
        states.push(cur.cells.clone());
        cur = abstract_step(rule, &cur);
    };

    'offsets: for offset in 0..=(word.len() - s) {
        let lo = margin + offset;
        let mut witness_rows = Vec::with_capacity(states.len());
        for state in &states {
            let row: Option<Vec<Letter>> =
                state[lo..lo + s].iter().map(LetterSet::as_singleton).collect();
            match row {
                Some(row) => witness_rows.push(row),
                None => continue 'offsets,
            }
        }
        let replay_hash = witness_hash(&witness_rows);
        return Ok(Some(BlockingCertificate {
            word: word.to_vec(),
            width: s,
            offset,
            margin,
            preperiod,
            period,
            witness_rows,
            replay_hash,
        }));
    }
    Ok(None)
}

/// Replay a certificate from scratch and check every recorded row.
pub fn verify_certificate(rule: &RuleTable, cert: &BlockingCertificate) -> bool {
    let Ok(start) = SetWord::around_word(rule.alphabet(), &cert.word, cert.margin) else {
        return false;
    };
    let steps = cert.preperiod + cert.period;
    if cert.witness_rows.len() != steps || cert.period == 0 {
        return false;
    }
    let lo = cert.margin + cert.offset;
    let mut cur = start;
    let mut states: Vec<Vec<LetterSet>> = Vec::with_capacity(steps);
    for row in &cert.witness_rows {
        let window: Option<Vec<Letter>> =
            cur.cells()[lo..lo + cert.width].iter().map(LetterSet::as_singleton).collect();
        if window.as_deref() != Some(row.as_slice()) {
            return false;
        }
        states.push(cur.cells().to_vec());
        cur = abstract_step(rule, &cur);
    }
    // The state after the last recorded row must close the recorded cycle.
    cur.cells() == states[cert.preperiod].as_slice()
        && witness_hash(&cert.witness_rows) == cert.replay_hash
}

/// Two configurations agreeing on the word whose column traces diverge.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CounterexamplePair {
    pub x: WindowConfig,
    pub y: WindowConfig,
    /// Offset of the refuted column window within the word.
    pub offset: usize,
    /// First time the traces differ on `[offset, offset + s)`.
    pub time: usize,
}

/// Per-offset counterexamples refuting every admissible offset of a word.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Refutation {
    pub per_offset: Vec<CounterexamplePair>,
}

/// Randomized search for configurations violating the blocking condition.
///
/// Samples pairs of windows agreeing on `word` (placed at `[0, |word|)`) and
/// uniformly random elsewhere, and compares their exact traces on every
/// column window `[p, p+s)` up to `horizon`. A word counts as refuted only
/// when every admissible offset has a counterexample; each sampled pair is
/// tried against every offset, so every offset sees up to `samples` trials.
/// `None` means "not refuted within budget", not "blocking".
pub fn falsify_blocking(
    rule: &RuleTable,
    word: &[Letter],
    s: usize,
    horizon: usize,
    samples: u64,
    seed: u64,
) -> Result<Option<Refutation>> {
    if word.len() < s {
        return Err(Error::InvalidParameter("blocking word must be at least s letters long"));
    }
    if horizon == 0 {
        return Err(Error::InvalidParameter("falsification horizon must be >= 1"));
    }
    rule.alphabet().check_word(word)?;
    let q = rule.alphabet().size() as u32;
    let reach = (horizon * rule.radius()) as i64;
    let offsets = word.len() - s + 1;
    let mut found: Vec<Option<CounterexamplePair>> = alloc::vec![None; offsets];

    for pair_index in 0..samples {
        if found.iter().all(Option::is_some) {
            break;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(pair_index);
        let mut draw = || -> WindowConfig {
            let word_vec: Vec<Letter> = (-reach..word.len() as i64 + reach)
                .map(|pos| {
                    if (0..word.len() as i64).contains(&pos) {
                        word[pos as usize]
                    } else {
                        rng.gen_range(0..q) as Letter
                    }
                })
                .collect();
            WindowConfig::new(rule.alphabet(), -reach, word_vec).expect("letters in range")
        };
        let x = draw();
        let y = draw();

        // Step both windows once and scan all offsets per row.
        let mut fx = x.clone();
        let mut fy = y.clone();
        for time in 1..=horizon {
            fx = rule.step_window(&fx)?;
            fy = rule.step_window(&fy)?;
            let home = (-fx.offset()) as usize;
            let (ax, ay) = (fx.word(), fy.word());
            for (p, slot) in found.iter_mut().enumerate() {
                if slot.is_some() {
                    continue;
                }
                if ax[home + p..home + p + s] != ay[home + p..home + p + s] {
                    *slot = Some(CounterexamplePair {
                        x: x.clone(),
                        y: y.clone(),
                        offset: p,
                        time,
                    });
                }
            }
        }
    }

    if found.iter().all(Option::is_some) {
        Ok(Some(Refutation { per_offset: found.into_iter().map(Option::unwrap).collect() }))
    } else {
        Ok(None)
    }
}

/// Enumerate words of length `s..=lmax` in length-then-lexicographic order
/// and return every certified one. With `dedup_factors`, words containing an
/// already-certified word as a factor are skipped.
pub fn search_blocking_words(
    rule: &RuleTable,
    s: usize,
    lmax: usize,
    margin: usize,
    max_steps: usize,
    dedup_factors: bool,
) -> Result<Vec<(Vec<Letter>, BlockingCertificate)>> {
    if lmax < s {
        return Err(Error::InvalidParameter("lmax must be at least s"));
    }
    let mut certified: Vec<(Vec<Letter>, BlockingCertificate)> = Vec::new();
    for len in s.max(1)..=lmax {
        for word in rule.alphabet().words(len) {
            if dedup_factors
                && certified
                    .iter()
                    .any(|(w, _)| word.windows(w.len()).any(|f| f == w.as_slice()))
            {
                continue;
            }
            if let Some(cert) = certify_blocking(rule, &word, s, margin, max_steps)? {
                certified.push((word, cert));
            }
        }
    }
    Ok(certified)
}

/// Search for `(p0, p)` with `F^{p0+p} = F^{p0}` as global maps, in
/// lexicographic order.
///
/// Each candidate is first screened on the orbits of every short periodic
/// configuration — a disagreeing orbit soundly refutes the candidate without
/// building tables. Survivors are decided by comparing composed tables
/// (complete). Composed tables are capped by `table_budget`; when a
/// surviving candidate cannot be decided within the cap and nothing was
/// found, that is reported as `BudgetExceeded` rather than a clean "none".
pub fn check_global_equicontinuity(
    rule: &RuleTable,
    max_preperiod: usize,
    max_period: usize,
    table_budget: u64,
) -> Result<Option<TemporalCycle>> {
    if max_period == 0 {
        return Err(Error::InvalidParameter("max_period must be >= 1"));
    }
    let horizon = max_preperiod + max_period;

    // Orbits of all cyclic configurations of period <= 7 (or fewer for
    // larger alphabets), up to the search horizon.
    let screen_max = match rule.alphabet().size() {
        0..=2 => 7,
        3..=4 => 4,
        _ => 2,
    };
    let mut orbits: Vec<Vec<crate::config::CyclicConfig>> = Vec::new();
    for period in 1..=screen_max {
        let count = rule.alphabet().word_count(period).unwrap_or(u64::MAX);
        for index in 0..count {
            let x = crate::config::CyclicConfig::new(
                rule.alphabet(),
                rule.alphabet().decode(index, period),
            )?;
            let mut orbit = alloc::vec![x];
            for _ in 0..horizon {
                orbit.push(rule.step_cyclic(orbit.last().expect("nonempty"))?);
            }
            orbits.push(orbit);
        }
    }

    let mut tables: Vec<Option<RuleTable>> = alloc::vec![None; horizon + 1];
    tables[0] = Some(RuleTable::identity(rule.alphabet()));
    let mut undecided = false;

    for preperiod in 0..=max_preperiod {
        for period in 1..=max_period {
            let screened = orbits
                .iter()
                .all(|orbit| orbit[preperiod + period] == orbit[preperiod]);
            if !screened {
                continue;
            }
            let width = 2 * rule.radius() * (preperiod + period) + 1;
            let fits = rule
                .alphabet()
                .word_count(width)
                .is_some_and(|n| n <= table_budget);
            if !fits {
                undecided = true;
                continue;
            }
            for k in [preperiod, preperiod + period] {
                if tables[k].is_none() {
                    tables[k] = Some(rule.compose(k, table_budget)?);
                }
            }
            let big = tables[preperiod + period].as_ref().expect("just composed");
            let small = tables[preperiod].as_ref().expect("just composed");
            if big.agrees_with(small) {
                return Ok(Some(TemporalCycle { preperiod, period }));
            }
        }
    }
    if undecided {
        let width = 2 * rule.radius() * horizon + 1;
        Err(Error::BudgetExceeded {
            needed: rule.alphabet().word_count(width).unwrap_or(u64::MAX),
            budget: table_budget,
        })
    } else {
        Ok(None)
    }
}

/// Budgets for [`classify_kurka`]. `margin` defaults to `2r` when `None`.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct KurkaBudgets {
    pub margin: Option<usize>,
    pub max_steps: usize,
    pub lmax: usize,
    pub horizon: usize,
    pub samples: u64,
    pub seed: u64,
    pub max_preperiod: usize,
    pub max_period: usize,
    pub table_budget: u64,
}

impl Default for KurkaBudgets {
    fn default() -> Self {
        KurkaBudgets {
            margin: None,
            max_steps: 4096,
            lmax: 4,
            horizon: 32,
            samples: 200,
            seed: 0x5eed,
            max_preperiod: 4,
            max_period: 8,
            table_budget: crate::rule::DEFAULT_TABLE_BUDGET,
        }
    }
}

/// Topological classification verdict. Sensitivity is evidence, not proof:
/// absence of blocking words is only sampled up to `lmax`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "verdict"))]
pub enum KurkaVerdict {
    #[cfg_attr(feature = "serde", serde(rename = "GLOBALLY_EQUICONTINUOUS"))]
    GloballyEquicontinuous { witness: TemporalCycle },
    #[cfg_attr(feature = "serde", serde(rename = "HAS_EQUICONTINUOUS_POINTS"))]
    HasEquicontinuousPoints { certificate: BlockingCertificate },
    #[cfg_attr(feature = "serde", serde(rename = "SENSITIVITY_EVIDENCE"))]
    SensitivityEvidence { refuted_words: usize, lmax: usize },
    #[cfg_attr(feature = "serde", serde(rename = "INCONCLUSIVE"))]
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct KurkaReport {
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub verdict: KurkaVerdict,
    /// Whether the global check ran out of budget (as opposed to excluding
    /// the searched range).
    pub global_check_exhausted: bool,
    /// Width of the certified/refuted column windows (`s = r`).
    pub s: usize,
}

/// Classify a rule by its equicontinuity structure, with `s = r`.
pub fn classify_kurka(rule: &RuleTable, budgets: &KurkaBudgets) -> Result<KurkaReport> {
    let r = rule.radius();
    let margin = budgets.margin.unwrap_or(2 * r);
    let s = r.max(1);

    let (global, exhausted) = match check_global_equicontinuity(
        rule,
        budgets.max_preperiod,
        budgets.max_period,
        budgets.table_budget,
    ) {
        Ok(found) => (found, false),
        Err(Error::BudgetExceeded { .. }) => (None, true),
        Err(e) => return Err(e),
    };
    if let Some(witness) = global {
        return Ok(KurkaReport {
            verdict: KurkaVerdict::GloballyEquicontinuous { witness },
            global_check_exhausted: exhausted,
            s,
        });
    }
    if r == 0 {
        // Radius-0 rules are equicontinuous; only the budget can stop the
        // global check, never a blocking-word search.
        return Ok(KurkaReport {
            verdict: KurkaVerdict::Inconclusive {
                reason: String::from("radius-0 rule: global check exhausted its budget"),
            },
            global_check_exhausted: exhausted,
            s,
        });
    }

    let certified =
        search_blocking_words(rule, s, budgets.lmax, margin, budgets.max_steps, false)?;
    if let Some((_, certificate)) = certified.into_iter().next() {
        return Ok(KurkaReport {
            verdict: KurkaVerdict::HasEquicontinuousPoints { certificate },
            global_check_exhausted: exhausted,
            s,
        });
    }

    let mut refuted = 0usize;
    let mut all_refuted = true;
    for len in s..=budgets.lmax {
        for word in rule.alphabet().words(len) {
            match falsify_blocking(rule, &word, s, budgets.horizon, budgets.samples, budgets.seed)? {
                Some(_) => refuted += 1,
                None => all_refuted = false,
            }
        }
    }
    if all_refuted {
        Ok(KurkaReport {
            verdict: KurkaVerdict::SensitivityEvidence { refuted_words: refuted, lmax: budgets.lmax },
            global_check_exhausted: exhausted,
            s,
        })
    } else {
        Ok(KurkaReport {
            verdict: KurkaVerdict::Inconclusive {
                reason: String::from(
                    "no certificate found, and some candidate words were not refuted",
                ),
            },
            global_check_exhausted: exhausted,
            s,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::Alphabet;

    fn set(letters: &[Letter]) -> LetterSet {
        let mut s = LetterSet::EMPTY;
        for &l in letters {
            s.insert(l);
        }
        s
    }

    #[test]
    fn abstract_step_keeps_zero_fixed_under_rule_4() {
        let rule = RuleTable::eca(4);
        let s = SetWord::around_word(Alphabet::BINARY, &[0], 0).unwrap();
        let out = abstract_step(&rule, &s);
        assert_eq!(out.cells(), &[set(&[0])]);
    }

    #[test]
    fn abstract_step_floods_under_shift() {
        let rule = RuleTable::eca(170);
        let s = SetWord::around_word(Alphabet::BINARY, &[0], 0).unwrap();
        let out = abstract_step(&rule, &s);
        assert_eq!(out.cells(), &[set(&[0, 1])]);
    }

    #[test]
    fn abstract_step_on_full_cells_is_rule_image() {
        // ECA 12: f(a,b,c) = b AND NOT a; image over pinned neighborhoods is {0,1}.
        let rule = RuleTable::eca(12);
        let s = SetWord::new(Alphabet::BINARY, 0, alloc::vec![LetterSet::full(Alphabet::BINARY)])
            .unwrap();
        let out = abstract_step(&rule, &s);
        assert_eq!(out.cells(), &[set(&[0, 1])]);
    }

    #[test]
    fn certify_zero_word_under_rule_4() {
        let cert = certify_blocking(&RuleTable::eca(4), &[0], 1, 0, 64).unwrap().unwrap();
        assert_eq!(cert.offset, 0);
        assert_eq!((cert.preperiod, cert.period), (0, 1));
        assert_eq!(cert.witness_rows, alloc::vec![alloc::vec![0]]);
        assert!(verify_certificate(&RuleTable::eca(4), &cert));
    }

    #[test]
    fn certify_complement_cycles_through_both_letters() {
        let cert = certify_blocking(&RuleTable::eca(51), &[0], 1, 0, 64).unwrap().unwrap();
        assert_eq!((cert.preperiod, cert.period), (0, 2));
        assert_eq!(cert.witness_rows, alloc::vec![alloc::vec![0], alloc::vec![1]]);
        assert!(verify_certificate(&RuleTable::eca(51), &cert));
    }

    #[test]
    fn shift_is_inconclusive_at_any_margin() {
        for margin in [0, 1, 2, 4] {
            let out = certify_blocking(&RuleTable::eca(170), &[0, 0], 1, margin, 256).unwrap();
            assert!(out.is_none(), "margin {margin}");
        }
    }

    #[test]
    fn tampered_certificates_fail_replay() {
        let rule = RuleTable::eca(51);
        let cert = certify_blocking(&rule, &[0], 1, 0, 64).unwrap().unwrap();
        let mut bad = cert.clone();
        bad.witness_rows[1] = alloc::vec![0];
        assert!(!verify_certificate(&rule, &bad));
        let mut stale = cert;
        stale.replay_hash ^= 1;
        assert!(!verify_certificate(&rule, &stale));
    }

    #[test]
    fn falsify_refutes_shift_at_both_offsets() {
        let out = falsify_blocking(&RuleTable::eca(170), &[0, 0], 1, 4, 64, 7).unwrap().unwrap();
        assert_eq!(out.per_offset.len(), 2);
        for (p, pair) in out.per_offset.iter().enumerate() {
            assert_eq!(pair.offset, p);
            assert!(pair.time <= 4);
            // The pair really agrees on the word.
            assert_eq!(pair.x.slice(0, 2).unwrap(), alloc::vec![0, 0]);
            assert_eq!(pair.y.slice(0, 2).unwrap(), alloc::vec![0, 0]);
        }
    }

    #[test]
    fn falsify_finds_nothing_for_certified_word() {
        assert!(falsify_blocking(&RuleTable::eca(4), &[0], 1, 16, 200, 3).unwrap().is_none());
    }

    #[test]
    fn falsify_finds_nothing_for_identity_full_width() {
        assert!(falsify_blocking(&RuleTable::eca(204), &[1, 0, 1], 3, 16, 100, 3)
            .unwrap()
            .is_none());
    }

    #[test]
    fn search_finds_only_zero_for_rule_4_at_length_one() {
        let found = search_blocking_words(&RuleTable::eca(4), 1, 1, 2, 256, false).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].0, alloc::vec![0]);
    }

    #[test]
    fn search_finds_nothing_for_shift() {
        let found = search_blocking_words(&RuleTable::eca(170), 1, 4, 2, 256, false).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn search_finds_both_letters_for_identity() {
        let found = search_blocking_words(&RuleTable::eca(204), 1, 1, 2, 256, false).unwrap();
        let words: Vec<_> = found.iter().map(|(w, _)| w.clone()).collect();
        assert_eq!(words, alloc::vec![alloc::vec![0], alloc::vec![1]]);
    }

    #[test]
    fn dedup_skips_words_containing_certified_factors() {
        let all = search_blocking_words(&RuleTable::eca(204), 1, 2, 1, 256, false).unwrap();
        let deduped = search_blocking_words(&RuleTable::eca(204), 1, 2, 1, 256, true).unwrap();
        assert_eq!(all.len(), 6);
        assert_eq!(deduped.len(), 2);
    }

    #[test]
    fn global_check_identity() {
        let got = check_global_equicontinuity(&RuleTable::eca(204), 4, 8, 1 << 24).unwrap();
        assert_eq!(got, Some(TemporalCycle { preperiod: 0, period: 1 }));
    }

    #[test]
    fn global_check_complement() {
        let got = check_global_equicontinuity(&RuleTable::eca(51), 4, 8, 1 << 24).unwrap();
        assert_eq!(got, Some(TemporalCycle { preperiod: 0, period: 2 }));
    }

    #[test]
    fn global_check_rule_4_has_preperiod() {
        let got = check_global_equicontinuity(&RuleTable::eca(4), 4, 8, 1 << 24).unwrap();
        assert_eq!(got, Some(TemporalCycle { preperiod: 1, period: 1 }));
    }

    #[test]
    fn global_check_distinguishes_budget_from_absence() {
        // Shift: no (p0, p) exists. Every candidate is refuted by a short
        // periodic orbit, so the verdict is a clean None at any budget.
        let got = check_global_equicontinuity(&RuleTable::eca(170), 2, 3, 1 << 24).unwrap();
        assert_eq!(got, None);
        let got = check_global_equicontinuity(&RuleTable::eca(170), 2, 3, 8).unwrap();
        assert_eq!(got, None);
        // Identity: the candidate survives screening but its table does not
        // fit, which must surface as a budget failure, not "none".
        let err = check_global_equicontinuity(&RuleTable::eca(204), 2, 3, 4).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn classify_rule_4_globally_equicontinuous() {
        let report = classify_kurka(&RuleTable::eca(4), &KurkaBudgets::default()).unwrap();
        assert_eq!(
            report.verdict,
            KurkaVerdict::GloballyEquicontinuous {
                witness: TemporalCycle { preperiod: 1, period: 1 }
            }
        );
    }

    #[test]
    fn classify_shift_as_sensitivity_evidence() {
        let budgets = KurkaBudgets { lmax: 3, samples: 64, ..KurkaBudgets::default() };
        let report = classify_kurka(&RuleTable::eca(170), &budgets).unwrap();
        match report.verdict {
            KurkaVerdict::SensitivityEvidence { refuted_words, lmax } => {
                assert_eq!(lmax, 3);
                assert_eq!(refuted_words, 2 + 4 + 8);
            }
            v => panic!("expected sensitivity evidence, got {v:?}"),
        }
    }

    #[test]
    fn classify_majority_has_equicontinuous_points() {
        let report = classify_kurka(&RuleTable::eca(232), &KurkaBudgets::default()).unwrap();
        match report.verdict {
            KurkaVerdict::HasEquicontinuousPoints { certificate } => {
                assert_eq!(certificate.word, alloc::vec![0, 0]);
                assert!(verify_certificate(&RuleTable::eca(232), &certificate));
            }
            v => panic!("expected equicontinuous points, got {v:?}"),
        }
    }

    #[test]
    fn singleton_set_word_round_trips_to_window() {
        let s = SetWord::around_word(Alphabet::BINARY, &[1, 0], 0).unwrap();
        let w = s.as_window().unwrap();
        assert_eq!(w.word(), &[1, 0]);
        let flooded = SetWord::around_word(Alphabet::BINARY, &[1], 1).unwrap();
        assert!(flooded.as_window().is_none());
    }
}
