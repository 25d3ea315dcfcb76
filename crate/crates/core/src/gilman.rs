//! Monte Carlo estimation of measure-theoretic equicontinuity ratios under
//! Bernoulli measures, and the empirical class A/B/C report.
//!
//! The estimated quantity is the conditional probability that a
//! configuration agreeing with a base point on `[-n, n]` has the same column
//! trace as the base point on `[-m, m]` up to a finite horizon. The horizon
//! over-approximates the unbounded trace-class condition; it is a
//! first-class parameter and every report states it.
//!
//! Sampling is counter-based: the letter at window position `i` of sample
//! `k` is a pure function of `(seed, k, i)`. Estimates are therefore
//! independent of evaluation order, and samples for different horizons,
//! window radii, or conditioning radii share the cells they have in common.

use alloc::string::String;
use alloc::vec::Vec;

use crate::blocking::{self, BlockingCertificate};
use crate::config::{Configuration, CyclicConfig, WindowConfig};
use crate::error::Error;
use crate::math::{splitmix64, sqrt, unit_uniform};
use crate::rule::{Alphabet, Letter, RuleTable};
use crate::sim::trace;
use crate::Result;

/// Independent per-cell letter distribution.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BernoulliSpec {
    probs: Vec<f64>,
}

impl BernoulliSpec {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.len() > 256 {
            return Err(Error::InvalidDistribution);
        }
        let mut sum = 0.0;
        for &p in &probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidDistribution);
            }
            sum += p;
        }
        if crate::math::fabs(sum - 1.0) > 1e-12 {
            return Err(Error::InvalidDistribution);
        }
        Ok(BernoulliSpec { probs })
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let q = alphabet.size();
        BernoulliSpec { probs: alloc::vec![1.0 / q as f64; q] }
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Letter drawn by inverting the CDF at `u` in `[0, 1)`.
    pub fn sample(&self, u: f64) -> Letter {
        let mut acc = 0.0;
        for (letter, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return letter as Letter;
            }
        }
        (self.probs.len() - 1) as Letter
    }
}

fn cell_uniform(seed: u64, sample: u64, position: i64) -> f64 {
    let h = splitmix64(splitmix64(seed) ^ sample);
    unit_uniform(splitmix64(h ^ (position as u64)))
}

/// Draw a window agreeing with `base` on `[-n, n]` and spec-distributed
/// elsewhere. The window covers `[-(width/2), ...)` with `width` cells, so
/// `width >= 2n + 1` is required. Deterministic given `(seed, sample)`.
pub fn sample_conditioned(
    spec: &BernoulliSpec,
    base: &CyclicConfig,
    n: usize,
    width: usize,
    seed: u64,
    sample: u64,
) -> Result<WindowConfig> {
    if spec.alphabet_size() != base.alphabet().size() {
        return Err(Error::AlphabetMismatch);
    }
    if width < 2 * n + 1 {
        return Err(Error::InvalidParameter("window width must be at least 2n + 1"));
    }
    let start = -((width / 2) as i64);
    let word = (0..width as i64)
        .map(|k| {
            let pos = start + k;
            if pos.unsigned_abs() as usize <= n {
                base.get(pos)
            } else {
                spec.sample(cell_uniform(seed, sample, pos))
            }
        })
        .collect();
    WindowConfig::new(base.alphabet(), start, word)
}

/// Whether `F^j(y)` agrees with `F^j(base)` on `[-m, m]` for all
/// `0 <= j <= horizon`. Exact: `y` must cover the light cone
/// `[-m - horizon*r, m + horizon*r]`.
pub fn membership(
    rule: &RuleTable,
    base: &CyclicConfig,
    y: &WindowConfig,
    m: usize,
    horizon: usize,
) -> Result<bool> {
    let start = -(m as i64);
    let width = 2 * m + 1;
    let base_trace = trace(rule, &Configuration::Cyclic(base.clone()), start, width, horizon)?;
    let mut cur = y.clone();
    let reach = (horizon * rule.radius()) as i64;
    if !cur.covers(start - reach, start + width as i64 + reach) {
        return Err(Error::InsufficientWindow {
            required: (start - reach, start + width as i64 + reach),
        });
    }
    for row in &base_trace.rows {
        if &cur.slice(start, width)? != row {
            return Ok(false);
        }
        cur = rule.step_window(&cur)?;
    }
    Ok(true)
}

/// One estimated conditional membership ratio with a 95% Wilson interval.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EquicontinuityEstimate {
    pub m: usize,
    pub n: usize,
    pub horizon: usize,
    pub samples: u64,
    pub hits: u64,
    pub ratio: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

/// 95% Wilson score interval for `hits` successes out of `total`.
pub fn wilson_interval(hits: u64, total: u64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = total as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Estimate the membership ratio for each conditioning radius in `n_list`.
///
/// Sample `k` for radius `n` draws its cells from `(seed, k, position)`, so
/// the same `(seed, samples)` evaluated at a larger horizon or window radius
/// reuses the same configurations.
pub fn estimate_mu_equicontinuity(
    rule: &RuleTable,
    spec: &BernoulliSpec,
    base: &CyclicConfig,
    m: usize,
    n_list: &[usize],
    horizon: usize,
    samples: u64,
    seed: u64,
) -> Result<Vec<EquicontinuityEstimate>> {
    if samples == 0 {
        return Err(Error::InvalidParameter("sample count must be >= 1"));
    }
    if rule.alphabet() != base.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n < m {
            return Err(Error::InvalidParameter("conditioning radius n must be >= m"));
        }
        let width = 2 * n.max(m + horizon * rule.radius()) + 1;
        let mut hits = 0u64;
        for k in 0..samples {
            let y = sample_conditioned(spec, base, n, width, seed, k)?;
            if membership(rule, base, &y, m, horizon)? {
                hits += 1;
            }
        }
        let (ci_low, ci_high) = wilson_interval(hits, samples);
        out.push(EquicontinuityEstimate {
            m,
            n,
            horizon,
            samples,
            hits,
            ratio: hits as f64 / samples as f64,
            ci_low,
            ci_high,
            seed,
        });
    }
    Ok(out)
}

/// Parameters for [`classify_gilman`]. The 0.9/0.1 thresholds and the
/// CI-overlap trend test separate clearly at desk-scale sample sizes and are
/// deliberately configurable.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GilmanParams {
    pub m_list: Vec<usize>,
    pub n_list: Vec<usize>,
    pub horizon: usize,
    pub samples: u64,
    pub seed: u64,
    pub b_threshold: f64,
    pub c_threshold: f64,
    /// Blocking-word search budget used for the class-A check.
    pub lmax: usize,
    pub margin: Option<usize>,
    pub max_steps: usize,
}

impl Default for GilmanParams {
    fn default() -> Self {
        GilmanParams {
            m_list: alloc::vec![0, 1],
            n_list: alloc::vec![1, 2, 4],
            horizon: 16,
            samples: 400,
            seed: 0x5eed,
            b_threshold: 0.9,
            c_threshold: 0.1,
            lmax: 4,
            margin: None,
            max_steps: 4096,
        }
    }
}

/// Empirical Gilman class. Non-A verdicts are evidence, not proof.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "verdict"))]
pub enum GilmanVerdict {
    /// A blocking certificate exists: the rule is equicontinuous at some
    /// point.
    #[cfg_attr(feature = "serde", serde(rename = "A"))]
    ClassA { certificate: BlockingCertificate },
    /// Some base point shows ratios increasing toward 1 at every tested `m`.
    #[cfg_attr(feature = "serde", serde(rename = "B_EVIDENCE"))]
    ClassBEvidence { base_point: usize },
    /// For some `m`, every tested base point's ratio at the largest `n`
    /// stays below the threshold.
    #[cfg_attr(feature = "serde", serde(rename = "C_EVIDENCE"))]
    ClassCEvidence { m: usize },
    #[cfg_attr(feature = "serde", serde(rename = "INCONCLUSIVE"))]
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GilmanReport {
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub verdict: GilmanVerdict,
    /// Estimates per (base point, m), in input order.
    pub estimates: Vec<BasePointEstimates>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BasePointEstimates {
    pub base_point: Vec<Letter>,
    pub per_m: Vec<Vec<EquicontinuityEstimate>>,
}

fn trend_toward_one(estimates: &[EquicontinuityEstimate], threshold: f64) -> bool {
    let Some(last) = estimates.last() else { return false };
    if last.ratio < threshold {
        return false;
    }
    // Nondecreasing within CI overlap: no estimate significantly above its
    // successor.
    estimates.windows(2).all(|w| w[1].ci_high >= w[0].ci_low)
}

/// Classify a rule into the empirical A/B/C scheme under a Bernoulli
/// measure, probing the supplied base points.
pub fn classify_gilman(
    rule: &RuleTable,
    spec: &BernoulliSpec,
    base_points: &[CyclicConfig],
    params: &GilmanParams,
) -> Result<GilmanReport> {
    if base_points.is_empty() {
        return Err(Error::EmptyInput("base points"));
    }
    if spec.alphabet_size() != rule.alphabet().size() {
        return Err(Error::AlphabetMismatch);
    }

    // Class A is decided by certification, not sampling.
    let s = rule.radius().max(1);
    let margin = params.margin.unwrap_or(2 * rule.radius());
    let certified =
        blocking::search_blocking_words(rule, s, params.lmax, margin, params.max_steps, false)?;
    if let Some((_, certificate)) = certified.into_iter().next() {
        return Ok(GilmanReport {
            verdict: GilmanVerdict::ClassA { certificate },
            estimates: Vec::new(),
        });
    }

    let mut estimates: Vec<BasePointEstimates> = Vec::with_capacity(base_points.len());
    for base in base_points {
        let per_m = params
            .m_list
            .iter()
            .map(|&m| {
                estimate_mu_equicontinuity(
                    rule,
                    spec,
                    base,
                    m,
                    &params.n_list,
                    params.horizon,
                    params.samples,
                    params.seed,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        estimates.push(BasePointEstimates { base_point: base.word().to_vec(), per_m });
    }

    for (idx, per_point) in estimates.iter().enumerate() {
        if per_point.per_m.iter().all(|ests| trend_toward_one(ests, params.b_threshold)) {
            return Ok(GilmanReport {
                verdict: GilmanVerdict::ClassBEvidence { base_point: idx },
                estimates,
            });
        }
    }

    for (mi, &m) in params.m_list.iter().enumerate() {
        let expansive = estimates.iter().all(|per_point| {
            per_point.per_m[mi]
                .last()
                .is_some_and(|est| est.ratio < params.c_threshold)
        });
        if expansive {
            return Ok(GilmanReport {
                verdict: GilmanVerdict::ClassCEvidence { m },
                estimates,
            });
        }
    }

    Ok(GilmanReport {
        verdict: GilmanVerdict::Inconclusive {
            reason: String::from("no certificate, and sampled ratios fit neither trend"),
        },
        estimates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeros() -> CyclicConfig {
        CyclicConfig::constant(Alphabet::BINARY, 0).unwrap()
    }

    #[test]
    fn fully_conditioned_window_equals_base() {
        let spec = BernoulliSpec::uniform(Alphabet::BINARY);
        let base = CyclicConfig::new(Alphabet::BINARY, alloc::vec![0, 1, 1]).unwrap();
        let w = sample_conditioned(&spec, &base, 2, 5, 9, 0).unwrap();
        assert_eq!(w.word(), base.slice(-2, 5).as_slice());
    }

    #[test]
    fn point_mass_spec_fills_exterior_with_its_letter() {
        let spec = BernoulliSpec::new(alloc::vec![1.0, 0.0]).unwrap();
        let base = CyclicConfig::constant(Alphabet::BINARY, 1).unwrap();
        let w = sample_conditioned(&spec, &base, 0, 5, 4, 0).unwrap();
        assert_eq!(w.word(), &[0, 0, 1, 0, 0]);
    }

    #[test]
    fn conditioning_requires_wide_enough_window() {
        let spec = BernoulliSpec::uniform(Alphabet::BINARY);
        assert!(sample_conditioned(&spec, &zeros(), 2, 4, 0, 0).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_position_stable() {
        let spec = BernoulliSpec::uniform(Alphabet::BINARY);
        let narrow = sample_conditioned(&spec, &zeros(), 0, 7, 42, 3).unwrap();
        let wide = sample_conditioned(&spec, &zeros(), 0, 11, 42, 3).unwrap();
        for pos in -3..=3 {
            assert_eq!(narrow.get(pos), wide.get(pos), "position {pos}");
        }
        let again = sample_conditioned(&spec, &zeros(), 0, 7, 42, 3).unwrap();
        assert_eq!(narrow, again);
    }

    #[test]
    fn membership_true_at_horizon_zero_when_centers_agree() {
        let rule = RuleTable::eca(30);
        let y = WindowConfig::new(Alphabet::BINARY, -2, alloc::vec![1, 0, 0, 0, 1]).unwrap();
        assert!(membership(&rule, &zeros(), &y, 1, 0).unwrap());
        let z = WindowConfig::new(Alphabet::BINARY, -2, alloc::vec![1, 0, 1, 0, 1]).unwrap();
        assert!(!membership(&rule, &zeros(), &z, 1, 0).unwrap());
    }

    #[test]
    fn membership_under_rule_4_holds_whenever_centers_agree() {
        // A zero cell stays zero under rule 4, so the central window is zero
        // forever in both traces.
        let rule = RuleTable::eca(4);
        let spec = BernoulliSpec::uniform(Alphabet::BINARY);
        for k in 0..50 {
            let y = sample_conditioned(&spec, &zeros(), 1, 2 * (1 + 8) + 1, 11, k).unwrap();
            assert!(membership(&rule, &zeros(), &y, 1, 8).unwrap());
        }
    }

    #[test]
    fn membership_under_shift_sees_distant_ones() {
        let rule = RuleTable::eca(170);
        let m = 0;
        let mut word = alloc::vec![0; 11];
        word[5 + 2] = 1; // position m + 2
        let y = WindowConfig::new(Alphabet::BINARY, -5, word).unwrap();
        assert!(membership(&rule, &zeros(), &y, m, 1).unwrap());
        assert!(!membership(&rule, &zeros(), &y, m, 2).unwrap());
    }

    #[test]
    fn membership_requires_light_cone_coverage() {
        let rule = RuleTable::eca(170);
        let y = WindowConfig::new(Alphabet::BINARY, -1, alloc::vec![0, 0, 0]).unwrap();
        let err = membership(&rule, &zeros(), &y, 1, 4).unwrap_err();
        assert!(matches!(err, Error::InsufficientWindow { .. }));
    }

    #[test]
    fn estimator_is_exact_for_point_mass_spec() {
        // Degenerate spec: every sample is the all-zero extension, which the
        // shift keeps equal to the base forever.
        let rule = RuleTable::eca(170);
        let spec = BernoulliSpec::new(alloc::vec![1.0, 0.0]).unwrap();
        let ests =
            estimate_mu_equicontinuity(&rule, &spec, &zeros(), 0, &[1], 8, 50, 99).unwrap();
        assert_eq!(ests[0].ratio, 1.0);
        let ones = CyclicConfig::constant(Alphabet::BINARY, 1).unwrap();
        let ests = estimate_mu_equicontinuity(&rule, &spec, &ones, 0, &[1], 8, 50, 99).unwrap();
        assert_eq!(ests[0].ratio, 0.0);
    }

    #[test]
    fn estimator_certified_case_is_exactly_one() {
        let rule = RuleTable::eca(4);
        let spec = BernoulliSpec::uniform(Alphabet::BINARY);
        let ests =
            estimate_mu_equicontinuity(&rule, &spec, &zeros(), 1, &[1, 2], 16, 200, 5).unwrap();
        for est in ests {
            assert_eq!(est.ratio, 1.0);
            assert!(est.ci_high <= 1.0 && est.ci_low > 0.9);
        }
    }

    #[test]
    fn membership_counts_are_monotone_in_horizon_and_m() {
        let rule = RuleTable::eca(30);
        let spec = BernoulliSpec::uniform(Alphabet::BINARY);
        let count = |m: usize, horizon: usize| -> u64 {
            let width = 2 * (m + horizon) + 1;
            (0..80)
                .filter(|&k| {
                    let y = sample_conditioned(&spec, &zeros(), m, width, 17, k).unwrap();
                    membership(&rule, &zeros(), &y, m, horizon).unwrap()
                })
                .count() as u64
        };
        assert!(count(0, 5) >= count(0, 6));
        assert!(count(1, 4) <= count(0, 4));
    }

    #[test]
    fn single_sample_yields_wide_wilson_interval() {
        let (lo, hi) = wilson_interval(1, 1);
        assert_eq!(hi, 1.0);
        assert!(lo < 0.3);
    }

    #[test]
    fn trace_equivalence_is_transitive_through_the_base() {
        let rule = RuleTable::eca(110);
        let spec = BernoulliSpec::uniform(Alphabet::BINARY);
        let base = zeros();
        let (m, horizon) = (1, 4);
        let width = 2 * (m + horizon) + 1;
        let members: Vec<WindowConfig> = (0..200)
            .filter_map(|k| {
                let y = sample_conditioned(&spec, &base, m, width, 23, k).unwrap();
                membership(&rule, &base, &y, m, horizon).unwrap().then_some(y)
            })
            .collect();
        assert!(members.len() >= 2, "need at least two members to compare");
        let reference = trace(
            &rule,
            &Configuration::Window(members[0].clone()),
            -(m as i64),
            2 * m + 1,
            horizon,
        )
        .unwrap();
        for y in &members[1..] {
            let t = trace(
                &rule,
                &Configuration::Window(y.clone()),
                -(m as i64),
                2 * m + 1,
                horizon,
            )
            .unwrap();
            assert_eq!(t, reference);
        }
    }

    #[test]
    fn classify_rule_4_is_class_a() {
        let rule = RuleTable::eca(4);
        let spec = BernoulliSpec::uniform(Alphabet::BINARY);
        let report = classify_gilman(&rule, &spec, &[zeros()], &GilmanParams::default()).unwrap();
        assert!(matches!(report.verdict, GilmanVerdict::ClassA { .. }));
    }

    #[test]
    fn classify_identity_is_class_a() {
        let rule = RuleTable::eca(204);
        let spec = BernoulliSpec::uniform(Alphabet::BINARY);
        let report = classify_gilman(&rule, &spec, &[zeros()], &GilmanParams::default()).unwrap();
        assert!(matches!(report.verdict, GilmanVerdict::ClassA { .. }));
    }

    #[test]
    fn classify_shift_shows_expansive_evidence() {
        let rule = RuleTable::eca(170);
        let spec = BernoulliSpec::uniform(Alphabet::BINARY);
        let ones = CyclicConfig::constant(Alphabet::BINARY, 1).unwrap();
        let params = GilmanParams { samples: 200, ..GilmanParams::default() };
        let report = classify_gilman(&rule, &spec, &[zeros(), ones], &params).unwrap();
        assert!(matches!(report.verdict, GilmanVerdict::ClassCEvidence { m: 0 }));
    }

    #[test]
    fn invalid_distributions_are_rejected() {
        assert!(BernoulliSpec::new(alloc::vec![0.5, 0.6]).is_err());
        assert!(BernoulliSpec::new(alloc::vec![1.2, -0.2]).is_err());
        assert!(BernoulliSpec::new(alloc::vec![]).is_err());
    }
}
