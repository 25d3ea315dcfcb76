//! Stepping, column traces and temporal cycle detection.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::config::{Configuration, CyclicConfig, WindowConfig};
use crate::error::Error;
use crate::rule::{Letter, RuleTable};
use crate::Result;

impl RuleTable {
    /// One synchronous step on a periodic configuration. Exact: the result
    /// represents the image of the represented bi-infinite configuration.
    pub fn step_cyclic(&self, x: &CyclicConfig) -> Result<CyclicConfig> {
        if self.alphabet() != x.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        let r = self.radius() as i64;
        let width = self.neighborhood_width();
        let mut nb = alloc::vec![0 as Letter; width];
        let word = (0..x.period() as i64)
            .map(|i| {
                for (k, cell) in nb.iter_mut().enumerate() {
                    *cell = x.get(i - r + k as i64);
                }
                self.apply(&nb)
            })
            .collect();
        CyclicConfig::new(self.alphabet(), word)
    }

    /// One step on a window. The result covers `[offset + r, offset + len - r)`
    /// and is exact for every extension; an exhausted window (length `<= 2r`)
    /// yields the explicit empty window at `offset + r`.
    pub fn step_window(&self, x: &WindowConfig) -> Result<WindowConfig> {
        if self.alphabet() != x.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        let r = self.radius();
        let width = self.neighborhood_width();
        let word: Vec<Letter> = if x.len() < width {
            Vec::new()
        } else {
            x.word().windows(width).map(|nb| self.apply(nb)).collect()
        };
        WindowConfig::new(self.alphabet(), x.offset() + r as i64, word)
    }
}

/// Rows `F^j(x)` restricted to a fixed half-open interval, for
/// `j = 0..=horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Trace {
    pub start: i64,
    pub width: usize,
    pub rows: Vec<Vec<Letter>>,
}

impl Trace {
    pub fn horizon(&self) -> usize {
        self.rows.len() - 1
    }
}

/// Exact column trace of `x` on `[start, start + width)` up to `horizon`.
///
/// Cyclic inputs have no precondition. A window input must cover the light
/// cone `[start - horizon*r, start + width + horizon*r)`; otherwise the
/// error names that interval.
pub fn trace(
    rule: &RuleTable,
    x: &Configuration,
    start: i64,
    width: usize,
    horizon: usize,
) -> Result<Trace> {
    match x {
        Configuration::Cyclic(c) => {
            let mut rows = Vec::with_capacity(horizon + 1);
            let mut cur = c.clone();
            rows.push(cur.slice(start, width));
            for _ in 0..horizon {
                cur = rule.step_cyclic(&cur)?;
                rows.push(cur.slice(start, width));
            }
            Ok(Trace { start, width, rows })
        }
        Configuration::Window(w) => {
            let reach = (horizon * rule.radius()) as i64;
            let (lo, hi) = (start - reach, start + width as i64 + reach);
            if !w.covers(lo, hi) {
                return Err(Error::InsufficientWindow { required: (lo, hi) });
            }
            let mut rows = Vec::with_capacity(horizon + 1);
            let mut cur = w.clone();
            rows.push(cur.slice(start, width)?);
            for _ in 0..horizon {
                cur = rule.step_window(&cur)?;
                rows.push(cur.slice(start, width)?);
            }
            Ok(Trace { start, width, rows })
        }
    }
}

/// Minimal preperiod and period of an eventually periodic sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TemporalCycle {
    pub preperiod: usize,
    pub period: usize,
}

/// The orbit `x, F(x), ..., F^{t2-1}(x)` up to (excluding) the first repeated
/// state, together with the minimal `(p0, p)`.
pub(crate) fn orbit_until_repeat(
    rule: &RuleTable,
    x: &CyclicConfig,
) -> Result<(Vec<CyclicConfig>, TemporalCycle)> {
    let mut seen: BTreeMap<CyclicConfig, usize> = BTreeMap::new();
    let mut states: Vec<CyclicConfig> = Vec::new();
    let mut cur = x.clone();
    loop {
        if let Some(&first) = seen.get(&cur) {
            let cycle = TemporalCycle { preperiod: first, period: states.len() - first };
            return Ok((states, cycle));
        }
        seen.insert(cur.clone(), states.len());
        states.push(cur.clone());
        cur = rule.step_cyclic(&cur)?;
    }
}

/// Minimal `(p0, p)` with `F^{p0+p}(x) = F^{p0}(x)`, plus the `p`
/// configurations on the cycle. Always terminates: the state space of a
/// period-`n` configuration has at most `q^n` elements.
pub fn detect_temporal_cycle(
    rule: &RuleTable,
    x: &CyclicConfig,
) -> Result<(TemporalCycle, Vec<CyclicConfig>)> {
    let (states, cycle) = orbit_until_repeat(rule, x)?;
    let rows = states[cycle.preperiod..cycle.preperiod + cycle.period].to_vec();
    Ok((cycle, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::Alphabet;

    fn cyc(word: &[Letter]) -> CyclicConfig {
        CyclicConfig::new(Alphabet::BINARY, word.to_vec()).unwrap()
    }

    fn win(offset: i64, word: &[Letter]) -> WindowConfig {
        WindowConfig::new(Alphabet::BINARY, offset, word.to_vec()).unwrap()
    }

    #[test]
    fn identity_rule_fixes_everything() {
        let rule = RuleTable::eca(204);
        let x = cyc(&[0, 1, 1, 0, 1]);
        assert_eq!(rule.step_cyclic(&x).unwrap(), x);
    }

    #[test]
    fn shift_rule_on_period_two() {
        let rule = RuleTable::eca(170);
        assert_eq!(rule.step_cyclic(&cyc(&[0, 1])).unwrap(), cyc(&[1, 0]));
    }

    #[test]
    fn complement_rule_on_period_one() {
        // ECA 51: f(a, b, c) = 1 - b.
        let rule = RuleTable::eca(51);
        assert_eq!(rule.step_cyclic(&cyc(&[0])).unwrap(), cyc(&[1]));
    }

    #[test]
    fn window_of_neighborhood_width_yields_single_cell() {
        let rule = RuleTable::eca(110);
        let w = win(-1, &[1, 0, 1]);
        let out = rule.step_window(&w).unwrap();
        assert_eq!(out.span(), (0, 1));
        assert_eq!(out.word(), &[rule.apply(&[1, 0, 1])]);
    }

    #[test]
    fn shift_rule_shrinks_window() {
        let rule = RuleTable::eca(170);
        let out = rule.step_window(&win(0, &[0, 1, 1, 0])).unwrap();
        assert_eq!(out.offset(), 1);
        assert_eq!(out.word(), &[1, 0]);
    }

    #[test]
    fn rule_4_on_isolated_one() {
        let rule = RuleTable::eca(4);
        let out = rule.step_window(&win(-2, &[0, 0, 1, 0, 0])).unwrap();
        assert_eq!(out.offset(), -1);
        assert_eq!(out.word(), &[0, 1, 0]);
    }

    #[test]
    fn exhausted_window_is_explicit_and_empty() {
        let rule = RuleTable::eca(30);
        let out = rule.step_window(&win(0, &[1, 0])).unwrap();
        assert!(out.is_empty());
        assert_eq!(out.offset(), 1);
    }

    #[test]
    fn trace_of_identity_repeats_the_row() {
        let rule = RuleTable::eca(204);
        let t = trace(&rule, &cyc(&[0, 1, 0]).into(), -1, 4, 5).unwrap();
        assert_eq!(t.rows.len(), 6);
        assert!(t.rows.iter().all(|row| row == &t.rows[0]));
    }

    #[test]
    fn trace_of_shift_moves_cells_into_view() {
        let rule = RuleTable::eca(170);
        let w = win(0, &[0, 1, 0, 0, 0, 1, 1]);
        let t = trace(&rule, &w.into(), 3, 1, 3).unwrap();
        let rows: Vec<Letter> = t.rows.iter().map(|r| r[0]).collect();
        assert_eq!(rows, alloc::vec![0, 0, 1, 1]);
    }

    #[test]
    fn trace_of_complement_alternates() {
        let rule = RuleTable::eca(51);
        let t = trace(&rule, &cyc(&[0]).into(), 0, 3, 2).unwrap();
        assert_eq!(t.rows, alloc::vec![alloc::vec![0, 0, 0], alloc::vec![1, 1, 1], alloc::vec![0, 0, 0]]);
    }

    #[test]
    fn trace_names_the_required_interval() {
        let rule = RuleTable::eca(170);
        let w = win(0, &[0, 1, 0]);
        let err = trace(&rule, &w.into(), 1, 1, 3).unwrap_err();
        assert_eq!(err, Error::InsufficientWindow { required: (-2, 5) });
    }

    #[test]
    fn cycle_detection_on_identity() {
        let rule = RuleTable::eca(204);
        let (cycle, rows) = detect_temporal_cycle(&rule, &cyc(&[0, 1])).unwrap();
        assert_eq!(cycle, TemporalCycle { preperiod: 0, period: 1 });
        assert_eq!(rows, alloc::vec![cyc(&[0, 1])]);
    }

    #[test]
    fn cycle_detection_on_complement() {
        let rule = RuleTable::eca(51);
        let (cycle, rows) = detect_temporal_cycle(&rule, &cyc(&[0])).unwrap();
        assert_eq!(cycle, TemporalCycle { preperiod: 0, period: 2 });
        assert_eq!(rows, alloc::vec![cyc(&[0]), cyc(&[1])]);
    }

    #[test]
    fn cycle_detection_fixed_point_of_rule_4() {
        let rule = RuleTable::eca(4);
        let (cycle, _) = detect_temporal_cycle(&rule, &cyc(&[0, 1])).unwrap();
        assert_eq!(cycle, TemporalCycle { preperiod: 0, period: 1 });
    }

    #[test]
    fn cycle_detection_reports_nonzero_preperiod() {
        // ECA 4 erases adjacent ones in one step, then fixes the result.
        let rule = RuleTable::eca(4);
        let (cycle, rows) = detect_temporal_cycle(&rule, &cyc(&[1, 1, 0, 0])).unwrap();
        assert_eq!(cycle, TemporalCycle { preperiod: 1, period: 1 });
        assert_eq!(rows, alloc::vec![cyc(&[0, 0, 0, 0])]);
    }
}
