//! Correlation series, mixing tests and eigenvalue-frequency probes.
//!
//! Everything here works under the uniform measure, with two finite
//! surrogates: exact enumeration of all spatially periodic configurations of
//! a chosen period, and Monte Carlo sampling of windows wide enough for the
//! requested horizon. Correlations are centered, so mixing corresponds to
//! decay toward zero. Detected spectral peaks are matched against rationals
//! with bounded denominator; an ergodic CA is expected never to show a
//! persistent unresolved peak, and reports carry that framing explicitly.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{CyclicConfig, WindowConfig};
use crate::error::Error;
use crate::math::{cos, fabs, sin, sqrt};
use crate::rational::{best_rational_approximation, Fraction};
use crate::rule::{Letter, RuleTable};
use crate::Result;

/// Framing statement carried by spectral reports.
pub const SPECTRAL_NOTE: &str = "empirical probe: for rules passing the mixing/ergodicity \
evidence screen, persistent UNRESOLVED peaks are not expected; finite models and sampled \
series cannot prove or refute spectral statements";

/// A cylinder event: `word` read at `offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Cylinder {
    pub word: Vec<Letter>,
    pub offset: i64,
}

impl Cylinder {
    pub fn new(word: Vec<Letter>, offset: i64) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::EmptyInput("cylinder word"));
        }
        Ok(Cylinder { word, offset })
    }

    fn matches_cyclic(&self, x: &CyclicConfig) -> bool {
        self.word.iter().enumerate().all(|(k, &l)| x.get(self.offset + k as i64) == l)
    }

    fn matches_window(&self, x: &WindowConfig) -> bool {
        self.word
            .iter()
            .enumerate()
            .all(|(k, &l)| x.get(self.offset + k as i64) == Some(l))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum CorrelationMethod {
    /// Uniform measure over all `q^period` cyclic configurations, exact.
    ExactCyclic { period: usize },
    /// Uniform letters on a window covering the horizon light cone.
    MonteCarlo { samples: u64, seed: u64 },
}

/// How a series was produced; estimators record enough to judge noise.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "estimator"))]
pub enum SeriesMeta {
    ExactCyclic { period: usize },
    MonteCarlo { samples: u64, seed: u64 },
    Synthetic,
}

/// Centered correlations `c_n = P(U ∩ F^{-n} V) - P(U) P(V)` for
/// `n = 0..=horizon`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CorrelationSeries {
    pub values: Vec<f64>,
    pub meta: SeriesMeta,
}

impl CorrelationSeries {
    pub fn from_values(values: Vec<f64>, meta: SeriesMeta) -> Self {
        CorrelationSeries { values, meta }
    }
}

/// Estimate the centered correlation series of two cylinder events.
///
/// `ExactCyclic` requires the period to cover both cylinder words and the
/// enumeration `q^period` to fit `enumeration_budget`. `MonteCarlo` builds
/// windows covering the horizon light cone of `v` and the support of `u`.
pub fn correlation(
    rule: &RuleTable,
    u: &Cylinder,
    v: &Cylinder,
    horizon: usize,
    method: CorrelationMethod,
    enumeration_budget: u64,
) -> Result<CorrelationSeries> {
    rule.alphabet().check_word(&u.word)?;
    rule.alphabet().check_word(&v.word)?;
    match method {
        CorrelationMethod::ExactCyclic { period } => {
            if period < u.word.len() || period < v.word.len() {
                return Err(Error::InvalidParameter(
                    "cyclic period must cover both cylinder words",
                ));
            }
            let count = rule
                .alphabet()
                .word_count(period)
                .filter(|&n| n <= enumeration_budget)
                .ok_or(Error::BudgetExceeded {
                    needed: rule.alphabet().word_count(period).unwrap_or(u64::MAX),
                    budget: enumeration_budget,
                })?;
            let mut hits_u = 0u64;
            let mut hits_v0 = 0u64;
            let mut hits_uv = alloc::vec![0u64; horizon + 1];
            for index in 0..count {
                let x = CyclicConfig::new(rule.alphabet(), rule.alphabet().decode(index, period))?;
                let in_u = u.matches_cyclic(&x);
                if in_u {
                    hits_u += 1;
                }
                let mut cur = x;
                for n in 0..=horizon {
                    if n > 0 {
                        cur = rule.step_cyclic(&cur)?;
                    }
                    let in_v = v.matches_cyclic(&cur);
                    if n == 0 && in_v {
                        hits_v0 += 1;
                    }
                    if in_u && in_v {
                        hits_uv[n] += 1;
                    }
                }
            }
            let total = count as f64;
            let centered = (hits_u as f64 / total) * (hits_v0 as f64 / total);
            let values = hits_uv
                .iter()
                .map(|&h| h as f64 / total - centered)
                .collect();
            Ok(CorrelationSeries { values, meta: SeriesMeta::ExactCyclic { period } })
        }
        CorrelationMethod::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::InvalidParameter("sample count must be >= 1"));
            }
            let reach = (horizon * rule.radius()) as i64;
            let lo = u.offset.min(v.offset - reach);
            let hi = (u.offset + u.word.len() as i64).max(v.offset + v.word.len() as i64 + reach);
            let width = (hi - lo) as usize;
            let q = rule.alphabet().size() as u32;
            let mut hits_u = 0u64;
            let mut hits_v0 = 0u64;
            let mut hits_uv = alloc::vec![0u64; horizon + 1];
            for k in 0..samples {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(k);
                let word: Vec<Letter> =
                    (0..width).map(|_| rng.gen_range(0..q) as Letter).collect();
                let x = WindowConfig::new(rule.alphabet(), lo, word)?;
                let in_u = u.matches_window(&x);
                if in_u {
                    hits_u += 1;
                }
                let mut cur = x;
                for n in 0..=horizon {
                    if n > 0 {
                        cur = rule.step_window(&cur)?;
                    }
                    let in_v = v.matches_window(&cur);
                    if n == 0 && in_v {
                        hits_v0 += 1;
                    }
                    if in_u && in_v {
                        hits_uv[n] += 1;
                    }
                }
            }
            let total = samples as f64;
            let centered = (hits_u as f64 / total) * (hits_v0 as f64 / total);
            let values = hits_uv
                .iter()
                .map(|&h| h as f64 / total - centered)
                .collect();
            Ok(CorrelationSeries { values, meta: SeriesMeta::MonteCarlo { samples, seed } })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum MixingVerdict {
    #[cfg_attr(feature = "serde", serde(rename = "MIXING_CONSISTENT"))]
    MixingConsistent,
    #[cfg_attr(feature = "serde", serde(rename = "NOT_MIXING"))]
    NotMixing,
    #[cfg_attr(feature = "serde", serde(rename = "INCONCLUSIVE"))]
    Inconclusive,
}

/// Judge correlation decay on the tail of a series.
///
/// `NOT_MIXING` when more than half the tail exceeds the tolerance in
/// absolute value; `MIXING_CONSISTENT` when the whole tail stays within it.
/// For sampled series the tolerance must exceed the noise floor
/// `0.5 / sqrt(samples)`.
pub fn mixing_test(
    series: &CorrelationSeries,
    tail_fraction: f64,
    tolerance: f64,
) -> Result<MixingVerdict> {
    let len = series.values.len();
    if len < 8 {
        return Err(Error::SeriesTooShort { len, min: 8 });
    }
    if !(0.0 < tail_fraction && tail_fraction <= 1.0) {
        return Err(Error::InvalidParameter("tail fraction must lie in (0, 1]"));
    }
    if let SeriesMeta::MonteCarlo { samples, .. } = series.meta {
        let noise = 0.5 / sqrt(samples as f64);
        if tolerance < noise {
            return Err(Error::ToleranceBelowNoise { tolerance, noise });
        }
    }
    let tail_len = ((len as f64 * tail_fraction) as usize).clamp(1, len);
    let tail = &series.values[len - tail_len..];
    let exceed = tail.iter().filter(|&&c| fabs(c) > tolerance).count();
    if exceed > tail_len / 2 {
        Ok(MixingVerdict::NotMixing)
    } else if exceed == 0 {
        Ok(MixingVerdict::MixingConsistent)
    } else {
        Ok(MixingVerdict::Inconclusive)
    }
}

/// One detected frequency with its rationality verdict.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SpectralPeak {
    /// Frequency `bin / len` in `[0, 1/2]`.
    pub frequency: f64,
    pub bin: usize,
    pub magnitude: f64,
    pub approximation: Fraction,
    pub error: f64,
    /// `RATIONAL` when the approximation lands within tolerance, else
    /// `UNRESOLVED`.
    pub rational: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SpectralReport {
    /// Peaks sorted by magnitude, largest first.
    pub peaks: Vec<SpectralPeak>,
    pub median_magnitude: f64,
    pub threshold: f64,
    pub qmax: u64,
    pub tolerance: f64,
    pub note: &'static str,
}

/// Full complex DFT, `X_k = sum_n x_n e^{-2πi k n / L}`.
pub fn dft(values: &[f64]) -> Vec<(f64, f64)> {
    let len = values.len();
    let scale = -2.0 * core::f64::consts::PI / len as f64;
    (0..len)
        .map(|k| {
            let mut re = 0.0;
            let mut im = 0.0;
            for (n, &x) in values.iter().enumerate() {
                let angle = scale * (k as f64) * (n as f64);
                re += x * cos(angle);
                im += x * sin(angle);
            }
            (re, im)
        })
        .collect()
}

/// Scan a correlation series for dominant frequencies and match each against
/// the best rational with denominator at most `qmax`.
///
/// The series is real, so only the folded half-spectrum `k = 0..=L/2` is
/// examined; peaks are bins whose magnitude exceeds four times the median
/// magnitude of that half.
pub fn eigenvalue_scan(
    series: &CorrelationSeries,
    qmax: u64,
    tolerance: f64,
) -> Result<SpectralReport> {
    let len = series.values.len();
    if len < 16 {
        return Err(Error::SeriesTooShort { len, min: 16 });
    }
    if qmax == 0 {
        return Err(Error::InvalidParameter("qmax must be >= 1"));
    }
    let spectrum = dft(&series.values);
    let half = len / 2;
    let mags: Vec<f64> = spectrum[..=half]
        .iter()
        .map(|&(re, im)| sqrt(re * re + im * im))
        .collect();
    let mut sorted = mags.clone();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite magnitudes"));
    let median = sorted[sorted.len() / 2];
    // Absolute floor keeps numerical dust out when the median is ~0.
    let threshold = (4.0 * median).max(1e-9);

    let mut peaks: Vec<SpectralPeak> = mags
        .iter()
        .enumerate()
        .filter(|&(_, &m)| m > threshold)
        .map(|(bin, &magnitude)| {
            let approximation = best_rational_approximation(bin as u64, len as u64, qmax);
            let error = (bin as i128 * approximation.den as i128
                - approximation.num as i128 * len as i128)
                .unsigned_abs() as f64
                / (len as u64 as f64 * approximation.den as f64);
            SpectralPeak {
                frequency: bin as f64 / len as f64,
                bin,
                magnitude,
                approximation,
                error,
                rational: error <= tolerance,
            }
        })
        .collect();
    peaks.sort_by(|a, b| {
        b.magnitude
            .partial_cmp(&a.magnitude)
            .expect("finite magnitudes")
            .then(a.bin.cmp(&b.bin))
    });
    Ok(SpectralReport {
        peaks,
        median_magnitude: median,
        threshold,
        qmax,
        tolerance,
        note: SPECTRAL_NOTE,
    })
}

/// Attractor-cycle frequencies of the rule acting on all `q^period` cyclic
/// configurations: each cycle of length `l` contributes `k/l` for
/// `k = 0..l-1`. Every frequency is rational by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OrbitSpectrum {
    /// Sorted multiset of reduced frequencies.
    pub frequencies: Vec<Fraction>,
    /// `(cycle_length, how_many_cycles)`, sorted by length.
    pub cycles: Vec<(usize, usize)>,
}

pub fn orbit_spectrum_cyclic(
    rule: &RuleTable,
    period: usize,
    enumeration_budget: u64,
) -> Result<OrbitSpectrum> {
    let count = rule
        .alphabet()
        .word_count(period)
        .filter(|&n| n <= enumeration_budget)
        .ok_or(Error::BudgetExceeded {
            needed: rule.alphabet().word_count(period).unwrap_or(u64::MAX),
            budget: enumeration_budget,
        })?;
    let states = count as usize;
    let mut successor = alloc::vec![0u64; states];
    for index in 0..states {
        let x = CyclicConfig::new(rule.alphabet(), rule.alphabet().decode(index as u64, period))?;
        successor[index] = rule.alphabet().encode(rule.step_cyclic(&x)?.word());
    }

    // 0 = unvisited, 1 = on the current walk, 2 = settled.
    let mut status = alloc::vec![0u8; states];
    let mut cycle_lengths: Vec<usize> = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    for start in 0..states {
        if status[start] != 0 {
            continue;
        }
        path.clear();
        let mut cur = start;
        while status[cur] == 0 {
            status[cur] = 1;
            path.push(cur);
            cur = successor[cur] as usize;
        }
        if status[cur] == 1 {
            let entry = path.iter().rposition(|&s| s == cur).expect("cycle entry on path");
            cycle_lengths.push(path.len() - entry);
        }
        for &s in &path {
            status[s] = 2;
        }
    }
    cycle_lengths.sort_unstable();

    let mut frequencies = Vec::new();
    let mut cycles: Vec<(usize, usize)> = Vec::new();
    for &len in &cycle_lengths {
        for k in 0..len {
            frequencies.push(Fraction::new(k as u64, len as u64));
        }
        match cycles.last_mut() {
            Some(last) if last.0 == len => last.1 += 1,
            _ => cycles.push((len, 1)),
        }
    }
    frequencies.sort();
    Ok(OrbitSpectrum { frequencies, cycles })
}

/// Containment of the shift's finite-model frequency set in the rule's.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ShiftComparison {
    pub period: usize,
    pub contained: bool,
    /// Shift frequencies absent from the rule's set.
    pub missing: Vec<Fraction>,
    pub shift_frequencies: Vec<Fraction>,
    pub rule_frequencies: Vec<Fraction>,
    pub note: &'static str,
}

/// Finite-model heuristic only: the frequency sets of period-`n` cyclic
/// dynamics do not decide the measure-theoretic spectrum inclusion.
pub const SHIFT_COMPARISON_NOTE: &str = "finite-model heuristic: containment failures on \
cyclic configurations of one period do not refute the spectrum inclusion for the measurable \
dynamics";

pub fn compare_shift_spectrum(
    rule: &RuleTable,
    period: usize,
    enumeration_budget: u64,
) -> Result<ShiftComparison> {
    let shift = RuleTable::shift(rule.alphabet());
    let shift_spec = orbit_spectrum_cyclic(&shift, period, enumeration_budget)?;
    let rule_spec = orbit_spectrum_cyclic(rule, period, enumeration_budget)?;

    let dedup = |mut v: Vec<Fraction>| -> Vec<Fraction> {
        v.dedup();
        v
    };
    let shift_set = dedup(shift_spec.frequencies);
    let rule_set = dedup(rule_spec.frequencies);
    let missing: Vec<Fraction> =
        shift_set.iter().filter(|f| !rule_set.contains(f)).copied().collect();
    Ok(ShiftComparison {
        period,
        contained: missing.is_empty(),
        missing,
        shift_frequencies: shift_set,
        rule_frequencies: rule_set,
        note: SHIFT_COMPARISON_NOTE,
    })
}
