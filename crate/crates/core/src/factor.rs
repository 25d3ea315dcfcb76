//! Splicing, phase sets, the counter CA and the factor map.
//!
//! A configuration whose central column trace repeats at a distance can be
//! spliced: the word between the two occurrences, together with the repeated
//! block, generates a shift-periodic configuration with the same central
//! trace. The temporal cycle of that trace (the phase set) drives an
//! equicontinuous counter CA, and the factor map sends each position to the
//! phase its local trace locks onto, or to an absorbing sink letter.

use alloc::vec::Vec;

use crate::config::{Configuration, CyclicConfig, WindowConfig};
use crate::error::Error;
use crate::rule::{Alphabet, Letter, RuleTable};
use crate::sim::{orbit_until_repeat, TemporalCycle};
use crate::Result;

/// The shift-periodic configuration `(gap · block)^∞`, stored as the two
/// generating words. `block` plays the repeated central window, `gap` the
/// word between two of its occurrences.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PeriodicPoint {
    alphabet: Alphabet,
    gap: Vec<Letter>,
    block: Vec<Letter>,
}

impl PeriodicPoint {
    pub fn new(alphabet: Alphabet, gap: Vec<Letter>, block: Vec<Letter>) -> Result<Self> {
        if gap.len() + block.len() == 0 {
            return Err(Error::EmptyInput("periodic point generator"));
        }
        alphabet.check_word(&gap)?;
        alphabet.check_word(&block)?;
        Ok(PeriodicPoint { alphabet, gap, block })
    }

    pub fn gap(&self) -> &[Letter] {
        &self.gap
    }

    pub fn block(&self) -> &[Letter] {
        &self.block
    }

    pub fn period(&self) -> usize {
        self.gap.len() + self.block.len()
    }

    /// Canonical cyclic form: the period word `gap · block`, i.e. the
    /// rotation starting right after the first block.
    pub fn cyclic(&self) -> CyclicConfig {
        let mut word = self.gap.clone();
        word.extend_from_slice(&self.block);
        CyclicConfig::new(self.alphabet, word).expect("nonempty by construction")
    }

    /// Cyclic form aligned so the block sits centered on the origin, at
    /// positions `[-(|block|-1)/2, ...]` — the alignment under which the
    /// point shares its central window with the configuration it was spliced
    /// from.
    pub fn aligned_cyclic(&self) -> CyclicConfig {
        let r = (self.block.len().max(1) - 1) / 2;
        let mut pattern = self.block.clone();
        pattern.extend_from_slice(&self.gap);
        let period = pattern.len();
        let word = (0..period).map(|k| pattern[(k + r) % period]).collect();
        CyclicConfig::new(self.alphabet, word).expect("nonempty by construction")
    }
}

/// Insert `copies` extra occurrences of `gap · block` between the first
/// block and the gap:
/// `left · block · (gap·block)^copies · gap · block · right`.
///
/// The offset is chosen so the first block occupies its original position
/// `[-(|block|-1)/2, ...]`; `copies = 0` reproduces the original window.
pub fn splice(
    alphabet: Alphabet,
    left: &[Letter],
    block: &[Letter],
    gap: &[Letter],
    right: &[Letter],
    copies: usize,
) -> Result<WindowConfig> {
    if block.is_empty() {
        return Err(Error::EmptyInput("splice block"));
    }
    let mut word = Vec::with_capacity(
        left.len() + right.len() + (copies + 2) * block.len() + (copies + 1) * gap.len(),
    );
    word.extend_from_slice(left);
    word.extend_from_slice(block);
    for _ in 0..copies {
        word.extend_from_slice(gap);
        word.extend_from_slice(block);
    }
    word.extend_from_slice(gap);
    word.extend_from_slice(block);
    word.extend_from_slice(right);
    let r = ((block.len() - 1) / 2) as i64;
    WindowConfig::new(alphabet, -r - left.len() as i64, word)
}

/// The limit of the splice family: `(gap · block)^∞`.
pub fn splice_limit(alphabet: Alphabet, gap: &[Letter], block: &[Letter]) -> Result<PeriodicPoint> {
    PeriodicPoint::new(alphabet, gap.to_vec(), block.to_vec())
}

/// A repeated central window: the width-`2r+1` column traces at positions 0
/// and `distance` agree up to the probed horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TraceRepeat {
    pub block: Vec<Letter>,
    pub gap: Vec<Letter>,
    pub distance: usize,
}

/// Search a periodic configuration for the smallest `distance > 0` at which
/// the central-window trace repeats without overlap, i.e.
/// `distance in [2r+1, period)`, comparing exact traces up to `horizon`.
/// The trivial full-period repeat is excluded.
pub fn find_trace_repeat(
    rule: &RuleTable,
    y: &CyclicConfig,
    horizon: usize,
) -> Result<Option<TraceRepeat>> {
    if rule.alphabet() != y.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let r = rule.radius() as i64;
    let width = rule.neighborhood_width();
    let mut iterates = Vec::with_capacity(horizon + 1);
    let mut cur = y.clone();
    iterates.push(cur.clone());
    for _ in 0..horizon {
        cur = rule.step_cyclic(&cur)?;
        iterates.push(cur.clone());
    }
    for distance in width..y.period() {
        let d = distance as i64;
        let agrees = iterates
            .iter()
            .all(|state| state.slice(-r, width) == state.slice(d - r, width));
        if agrees {
            return Ok(Some(TraceRepeat {
                block: y.slice(-r, width),
                gap: y.slice(r + 1, distance - width),
                distance,
            }));
        }
    }
    Ok(None)
}

/// The temporal cycle of a source point's central-window trace: row `k` is
/// the window word at time `preperiod + k`, and the row at time
/// `preperiod + period` equals the row at `preperiod`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PhaseSet {
    pub preperiod: usize,
    pub period: usize,
    pub rows: Vec<Vec<Letter>>,
    pub source: CyclicConfig,
}

impl PhaseSet {
    /// Build from a cyclic source: detect the configuration cycle, project
    /// onto the central width-`2r+1` window and minimize `(p0, p)` for the
    /// projected row sequence (whose period divides the configuration
    /// cycle's).
    pub fn from_cyclic(rule: &RuleTable, source: &CyclicConfig) -> Result<PhaseSet> {
        let (states, cycle) = orbit_until_repeat(rule, source)?;
        let r = rule.radius() as i64;
        let width = rule.neighborhood_width();
        let proj: Vec<Vec<Letter>> = states.iter().map(|s| s.slice(-r, width)).collect();

        let big_p = cycle.period;
        let p0_max = cycle.preperiod;
        let cyc = |j: usize| -> &Vec<Letter> { &proj[p0_max + j % big_p] };
        let mut period = big_p;
        for d in 1..=big_p {
            if big_p % d == 0 && (0..big_p).all(|j| cyc(j) == cyc(j + d)) {
                period = d;
                break;
            }
        }
        let mut preperiod = p0_max;
        while preperiod > 0 {
            let t = preperiod - 1;
            let idx = (t as i64 - p0_max as i64).rem_euclid(period as i64) as usize;
            if proj[t] == *cyc(idx) {
                preperiod -= 1;
            } else {
                break;
            }
        }
        let rows = (0..period).map(|k| proj[preperiod + k].clone()).collect();
        Ok(PhaseSet { preperiod, period, rows, source: source.clone() })
    }

    /// Build from a source point's aligned periodic form.
    pub fn from_periodic_point(rule: &RuleTable, z: &PeriodicPoint) -> Result<PhaseSet> {
        PhaseSet::from_cyclic(rule, &z.aligned_cyclic())
    }

    /// Build with the cycle parameters fixed by an external witness instead
    /// of minimized from the source; used when `(p0, p)` holds uniformly for
    /// every configuration and must be kept even where the source's own
    /// trace closes earlier.
    pub fn from_cyclic_with_cycle(
        rule: &RuleTable,
        source: &CyclicConfig,
        cycle: TemporalCycle,
    ) -> Result<PhaseSet> {
        let r = rule.radius() as i64;
        let width = rule.neighborhood_width();
        let mut rows = Vec::with_capacity(cycle.period);
        let mut cur = source.clone();
        for t in 0..cycle.preperiod + cycle.period {
            if t >= cycle.preperiod {
                rows.push(cur.slice(-r, width));
            }
            cur = rule.step_cyclic(&cur)?;
        }
        Ok(PhaseSet { preperiod: cycle.preperiod, period: cycle.period, rows, source: source.clone() })
    }
}

/// The counter CA on `{0, ..., p}`: letters below `p` advance mod `p`, the
/// sink letter `p` is absorbing. Radius 0, hence equicontinuous.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CounterCA {
    modulus: usize,
}

impl CounterCA {
    pub fn new(modulus: usize) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidParameter("counter modulus must be >= 1"));
        }
        if modulus > 255 {
            return Err(Error::InvalidAlphabet(modulus + 1));
        }
        Ok(CounterCA { modulus })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.modulus + 1).expect("modulus bounded in constructor")
    }

    pub fn sink(&self) -> Letter {
        self.modulus as Letter
    }

    #[inline]
    pub fn apply_letter(&self, x: Letter) -> Letter {
        if (x as usize) < self.modulus {
            ((x as usize + 1) % self.modulus) as Letter
        } else {
            self.sink()
        }
    }

    pub fn apply_word(&self, word: &[Letter]) -> Vec<Letter> {
        word.iter().map(|&x| self.apply_letter(x)).collect()
    }

    /// The counter as an explicit radius-0 rule table.
    pub fn rule_table(&self) -> RuleTable {
        let table = self.alphabet().letters().map(|x| self.apply_letter(x)).collect();
        RuleTable::new(self.alphabet(), 0, table).expect("table matches alphabet")
    }
}

/// The factor map onto the counter alphabet `{0, ..., p}`.
///
/// Position `i` maps to phase `k` when the exact trace of the width-`2r+1`
/// window centered at `i`, at times `preperiod..preperiod+period`, runs
/// through the phase rows starting at `k`; positions that do not lock onto
/// the cycle map to the sink letter `p`. When all rows are equal the match
/// is ambiguous and phase 0 is assigned.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FactorMap {
    rule: RuleTable,
    phase: PhaseSet,
}

impl FactorMap {
    pub fn new(rule: RuleTable, phase: PhaseSet) -> Result<Self> {
        if phase.period == 0 || phase.rows.len() != phase.period {
            return Err(Error::InvalidParameter("phase set must carry period rows"));
        }
        if phase.period > 255 {
            return Err(Error::InvalidAlphabet(phase.period + 1));
        }
        let width = rule.neighborhood_width();
        if phase.rows.iter().any(|row| row.len() != width) {
            return Err(Error::InvalidParameter("phase rows must have neighborhood width"));
        }
        Ok(FactorMap { rule, phase })
    }

    pub fn rule(&self) -> &RuleTable {
        &self.rule
    }

    pub fn phase(&self) -> &PhaseSet {
        &self.phase
    }

    /// Detection horizon `preperiod + period`.
    pub fn horizon(&self) -> usize {
        self.phase.preperiod + self.phase.period
    }

    pub fn sink(&self) -> Letter {
        self.phase.period as Letter
    }

    pub fn counter(&self) -> CounterCA {
        CounterCA::new(self.phase.period).expect("period bounded in constructor")
    }

    /// Apply the factor map on `[start, start + width)`.
    ///
    /// Window inputs must cover the light cone of every requested position
    /// to the detection horizon.
    pub fn apply(&self, x: &Configuration, start: i64, width: usize) -> Result<Vec<Letter>> {
        if x.alphabet() != self.rule.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        let r = self.rule.radius() as i64;
        let nb_width = self.rule.neighborhood_width();
        let horizon = self.horizon();
        let steps = (self.phase.preperiod + self.phase.period).max(1) - 1;

        enum Iterates {
            Cyclic(Vec<CyclicConfig>),
            Window(Vec<WindowConfig>),
        }
        let iterates = match x {
            Configuration::Cyclic(c) => {
                let mut v = Vec::with_capacity(steps + 1);
                let mut cur = c.clone();
                v.push(cur.clone());
                for _ in 0..steps {
                    cur = self.rule.step_cyclic(&cur)?;
                    v.push(cur.clone());
                }
                Iterates::Cyclic(v)
            }
            Configuration::Window(w) => {
                let reach = r * (horizon as i64 + 1);
                let required = (start - reach, start + width as i64 + reach);
                if !w.covers(required.0, required.1) {
                    return Err(Error::InsufficientWindow { required });
                }
                let mut v = Vec::with_capacity(steps + 1);
                let mut cur = w.clone();
                v.push(cur.clone());
                for _ in 0..steps {
                    cur = self.rule.step_window(&cur)?;
                    v.push(cur.clone());
                }
                Iterates::Window(v)
            }
        };

        let p0 = self.phase.preperiod;
        let p = self.phase.period;
        let mut out = Vec::with_capacity(width);
        let mut window_rows: Vec<Vec<Letter>> = alloc::vec![Vec::new(); p];
        for i in start..start + width as i64 {
            for (j, row) in window_rows.iter_mut().enumerate() {
                *row = match &iterates {
                    Iterates::Cyclic(v) => v[p0 + j].slice(i - r, nb_width),
                    Iterates::Window(v) => v[p0 + j].slice(i - r, nb_width)?,
                };
            }
            let phase = (0..p).find(|&k| {
                (0..p).all(|j| window_rows[j] == self.phase.rows[(k + j) % p])
            });
            out.push(phase.map_or(p as Letter, |k| k as Letter));
        }
        Ok(out)
    }
}

/// One commutation failure, with both computed letters.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CommutationMismatch {
    pub input_index: usize,
    pub position: i64,
    /// `π(F(x))` at the position.
    pub factor_of_image: Letter,
    /// `C(π(x))` at the position.
    pub counter_of_factor: Letter,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CommutationReport {
    pub positions_checked: u64,
    pub mismatches: Vec<CommutationMismatch>,
    pub pass: bool,
}

/// Check `π(F(x)) = C(π(x))` at every verifiable position of every input.
/// Mismatches are data, not errors.
pub fn verify_commutation(
    rule: &RuleTable,
    factor: &FactorMap,
    counter: &CounterCA,
    inputs: &[Configuration],
) -> Result<CommutationReport> {
    let mut positions_checked = 0u64;
    let mut mismatches = Vec::new();
    let r = rule.radius() as i64;
    let reach = r * (factor.horizon() as i64 + 1);

    for (input_index, x) in inputs.iter().enumerate() {
        let (start, width, image): (i64, usize, Configuration) = match x {
            Configuration::Cyclic(c) => {
                let image = rule.step_cyclic(c)?;
                (0, c.period(), Configuration::Cyclic(image))
            }
            Configuration::Window(w) => {
                let image = rule.step_window(w)?;
                let (lo, hi) = image.span();
                let start = lo + reach;
                let end = hi - reach;
                if start >= end {
                    continue;
                }
                (start, (end - start) as usize, Configuration::Window(image))
            }
        };
        let lhs = factor.apply(&image, start, width)?;
        let rhs = counter.apply_word(&factor.apply(x, start, width)?);
        positions_checked += width as u64;
        for (k, (&a, &b)) in lhs.iter().zip(&rhs).enumerate() {
            if a != b {
                mismatches.push(CommutationMismatch {
                    input_index,
                    position: start + k as i64,
                    factor_of_image: a,
                    counter_of_factor: b,
                });
            }
        }
    }
    let pass = mismatches.is_empty();
    Ok(CommutationReport { positions_checked, mismatches, pass })
}

/// Build the factor of a globally equicontinuous rule from its witness
/// `(p0, p)`.
///
/// The witness is replayed (composed tables compared) before use; global
/// equicontinuity makes `(p0, p)` uniform across configurations, so the
/// phase rows are read off the all-zeros configuration with the witness
/// parameters kept as-is.
pub fn build_topological_factor(
    rule: &RuleTable,
    witness: TemporalCycle,
    table_budget: u64,
) -> Result<(FactorMap, CounterCA)> {
    if witness.period == 0 {
        return Err(Error::InvalidWitness { preperiod: witness.preperiod, period: witness.period });
    }
    let big = rule.compose(witness.preperiod + witness.period, table_budget)?;
    let small = if witness.preperiod == 0 {
        RuleTable::identity(rule.alphabet())
    } else {
        rule.compose(witness.preperiod, table_budget)?
    };
    if !big.agrees_with(&small) {
        return Err(Error::InvalidWitness { preperiod: witness.preperiod, period: witness.period });
    }
    let source = CyclicConfig::constant(rule.alphabet(), 0)?;
    let phase = PhaseSet::from_cyclic_with_cycle(rule, &source, witness)?;
    let counter = CounterCA::new(phase.period)?;
    let factor = FactorMap::new(rule.clone(), phase)?;
    Ok((factor, counter))
}
