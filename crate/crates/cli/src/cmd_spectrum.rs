//! `eqca spectrum correlate|scan|orbits|compare-shift`.

use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use eqca_core::spectrum::{
    compare_shift_spectrum, correlation, eigenvalue_scan, mixing_test, orbit_spectrum_cyclic,
    CorrelationMethod, CorrelationSeries, MixingVerdict, OrbitSpectrum, ShiftComparison,
    SpectralReport,
};
use serde::Serialize;

use crate::input::{parse_cylinder, RuleArgs};
use crate::report::{emit, Manifest};

#[derive(Debug, Subcommand)]
pub enum SpectrumCmd {
    /// Estimate centered cylinder correlations, with an optional mixing test
    Correlate(CorrelateArgs),
    /// Correlate, then scan for eigenvalue frequencies
    Scan(ScanArgs),
    /// Attractor-cycle frequencies on all cyclic configurations of a period
    Orbits(OrbitsArgs),
    /// Compare the shift's finite-model frequency set against the rule's
    CompareShift(CompareShiftArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SeriesArgs {
    /// First cylinder event, WORD[@OFFSET]
    #[arg(long)]
    pub u: String,
    /// Second cylinder event, WORD[@OFFSET]
    #[arg(long)]
    pub v: String,
    /// Largest time lag
    #[arg(long, default_value_t = 32)]
    pub horizon: usize,
    /// Estimator: "exact" (cyclic enumeration) or "mc" (window sampling)
    #[arg(long, default_value = "exact")]
    pub method: String,
    /// Cyclic period for the exact estimator
    #[arg(long, default_value_t = 12)]
    pub period: usize,
    /// Sample count for the Monte Carlo estimator
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Enumeration budget for the exact estimator
    #[arg(long, default_value_t = 1 << 22)]
    pub budget: u64,
}

impl SeriesArgs {
    fn compute(&self, rule: &eqca_core::RuleTable) -> Result<CorrelationSeries> {
        let u = parse_cylinder(&self.u, rule.alphabet())?;
        let v = parse_cylinder(&self.v, rule.alphabet())?;
        let method = match self.method.as_str() {
            "exact" => CorrelationMethod::ExactCyclic { period: self.period },
            "mc" => CorrelationMethod::MonteCarlo { samples: self.samples, seed: self.seed },
            other => bail!("unknown method {other:?}: expected exact or mc"),
        };
        Ok(correlation(rule, &u, &v, self.horizon, method, self.budget)?)
    }
}

#[derive(Debug, Args, Serialize)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Run the mixing test at this tolerance on the series tail
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Fraction of the series treated as tail by the mixing test
    #[arg(long, default_value_t = 0.5)]
    pub tail_fraction: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct CorrelateReport {
    series: CorrelationSeries,
    #[serde(skip_serializing_if = "Option::is_none")]
    mixing: Option<MixingReport>,
}

#[derive(Serialize)]
struct MixingReport {
    tail_fraction: f64,
    tolerance: f64,
    verdict: MixingVerdict,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Largest denominator admitted for rational matches
    #[arg(long, default_value_t = 64)]
    pub qmax: u64,
    /// Distance within which a peak counts as rational
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct ScanReport {
    series: CorrelationSeries,
    scan: SpectralReport,
}

#[derive(Debug, Args, Serialize)]
pub struct OrbitsArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    #[arg(long, default_value_t = 8)]
    pub period: usize,
    #[arg(long, default_value_t = 1 << 22)]
    pub budget: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct OrbitsReport {
    period: usize,
    spectrum: OrbitSpectrum,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareShiftArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    #[arg(long, default_value_t = 8)]
    pub period: usize,
    #[arg(long, default_value_t = 1 << 22)]
    pub budget: u64,
    #[arg(long)]
    pub json: bool,
}

pub fn run(cmd: SpectrumCmd) -> Result<ExitCode> {
    match cmd {
        SpectrumCmd::Correlate(args) => {
            let rule = args.rule.load()?;
            let series = args.series.compute(&rule)?;
            let mixing = match args.tolerance {
                Some(tolerance) => Some(MixingReport {
                    tail_fraction: args.tail_fraction,
                    tolerance,
                    verdict: mixing_test(&series, args.tail_fraction, tolerance)?,
                }),
                None => None,
            };
            let mut human = String::from("lag: correlation\n");
            for (n, c) in series.values.iter().enumerate() {
                human.push_str(&format!("{n:>4}: {c:+.6}\n"));
            }
            if let Some(m) = &mixing {
                human.push_str(&format!("mixing verdict: {:?}\n", m.verdict));
            }
            let report = CorrelateReport { series, mixing };
            let manifest = Manifest::new("spectrum correlate", Some(&rule), &args)?;
            emit(&manifest, &report, args.json, &human)?;
            Ok(ExitCode::SUCCESS)
        }
        SpectrumCmd::Scan(args) => {
            let rule = args.rule.load()?;
            let series = args.series.compute(&rule)?;
            let scan = eigenvalue_scan(&series, args.qmax, args.tolerance)?;
            let mut human = format!(
                "{} peak(s) above threshold {:.3e}\n",
                scan.peaks.len(),
                scan.threshold
            );
            for peak in &scan.peaks {
                human.push_str(&format!(
                    "  α = {:.6} (bin {}): magnitude {:.4}, {} {} (error {:.2e})\n",
                    peak.frequency,
                    peak.bin,
                    peak.magnitude,
                    if peak.rational { "RATIONAL" } else { "UNRESOLVED, nearest" },
                    peak.approximation,
                    peak.error
                ));
            }
            human.push_str(&format!("note: {}\n", scan.note));
            let report = ScanReport { series, scan };
            let manifest = Manifest::new("spectrum scan", Some(&rule), &args)?;
            emit(&manifest, &report, args.json, &human)?;
            Ok(ExitCode::SUCCESS)
        }
        SpectrumCmd::Orbits(args) => {
            let rule = args.rule.load()?;
            let spectrum = orbit_spectrum_cyclic(&rule, args.period, args.budget)?;
            let mut human = format!("cycles on period-{} configurations:\n", args.period);
            for (len, count) in &spectrum.cycles {
                human.push_str(&format!("  length {len}: {count} cycle(s)\n"));
            }
            let freq_line: Vec<String> =
                spectrum.frequencies.iter().map(|f| f.to_string()).collect();
            human.push_str(&format!("frequencies: {}\n", freq_line.join(" ")));
            let report = OrbitsReport { period: args.period, spectrum };
            let manifest = Manifest::new("spectrum orbits", Some(&rule), &args)?;
            emit(&manifest, &report, args.json, &human)?;
            Ok(ExitCode::SUCCESS)
        }
        SpectrumCmd::CompareShift(args) => {
            let rule = args.rule.load()?;
            let report: ShiftComparison =
                compare_shift_spectrum(&rule, args.period, args.budget)?;
            let missing: Vec<String> = report.missing.iter().map(|f| f.to_string()).collect();
            let human = format!(
                "shift spectrum ⊆ rule spectrum at period {}: {}{}\nnote: {}\n",
                report.period,
                if report.contained { "holds" } else { "FAILS on this finite model" },
                if missing.is_empty() {
                    String::new()
                } else {
                    format!(" (missing: {})", missing.join(" "))
                },
                report.note
            );
            let manifest = Manifest::new("spectrum compare-shift", Some(&rule), &args)?;
            emit(&manifest, &report, args.json, &human)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
