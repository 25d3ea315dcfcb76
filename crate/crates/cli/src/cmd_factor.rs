//! `eqca factor build|verify` — the equicontinuous counter factor.

use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use eqca_core::blocking::check_global_equicontinuity;
use eqca_core::config::{Configuration, CyclicConfig, WindowConfig};
use eqca_core::factor::{
    build_topological_factor, verify_commutation, CounterCA, FactorMap, PhaseSet,
};
use eqca_core::rule::{Letter, RuleTable};
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::input::{format_word, parse_word, RuleArgs};
use crate::report::{emit, Manifest};

#[derive(Debug, Subcommand)]
pub enum FactorCmd {
    /// Build the phase set, factor map and counter CA
    Build(BuildArgs),
    /// Check the commutation relation on cyclic and windowed inputs
    Verify(VerifyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct FactorSource {
    /// Source point as a cyclic word; the phase set is its minimized
    /// central-window cycle
    #[arg(long, conflicts_with = "from_witness")]
    pub point: Option<String>,
    /// Derive the phase set from a global equicontinuity witness instead
    #[arg(long)]
    pub from_witness: bool,
    /// Preperiod bound for the witness search
    #[arg(long, default_value_t = 4)]
    pub max_preperiod: usize,
    /// Period bound for the witness search
    #[arg(long, default_value_t = 8)]
    pub max_period: usize,
    #[arg(long, default_value_t = eqca_core::DEFAULT_TABLE_BUDGET)]
    pub table_budget: u64,
}

impl FactorSource {
    fn build(&self, rule: &RuleTable) -> Result<(FactorMap, CounterCA)> {
        if let Some(point) = &self.point {
            let source = CyclicConfig::new(rule.alphabet(), parse_word(point, rule.alphabet())?)?;
            let phase = PhaseSet::from_cyclic(rule, &source)?;
            let factor = FactorMap::new(rule.clone(), phase)?;
            let counter = factor.counter();
            return Ok((factor, counter));
        }
        if !self.from_witness {
            bail!("one of --point or --from-witness is required");
        }
        let witness = check_global_equicontinuity(
            rule,
            self.max_preperiod,
            self.max_period,
            self.table_budget,
        )?
        .ok_or_else(|| {
            anyhow::anyhow!(
                "no global equicontinuity witness with preperiod <= {} and period <= {}",
                self.max_preperiod,
                self.max_period
            )
        })?;
        Ok(build_topological_factor(rule, witness, self.table_budget)?)
    }
}

#[derive(Debug, Args, Serialize)]
pub struct BuildArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    #[command(flatten)]
    pub source: FactorSource,
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct FactorReport {
    p0: usize,
    p: usize,
    rows: Vec<String>,
    horizon: usize,
    rule_hash: String,
    counter_modulus: usize,
    sink_letter: Letter,
}

impl FactorReport {
    fn new(factor: &FactorMap, counter: &CounterCA) -> Self {
        FactorReport {
            p0: factor.phase().preperiod,
            p: factor.phase().period,
            rows: factor.phase().rows.iter().map(|r| format_word(r)).collect(),
            horizon: factor.horizon(),
            rule_hash: format!("{:016x}", factor.rule().content_hash()),
            counter_modulus: counter.modulus(),
            sink_letter: counter.sink(),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    #[command(flatten)]
    pub source: FactorSource,
    /// Cyclic inputs to verify; repeatable
    #[arg(long = "input")]
    pub inputs: Vec<String>,
    /// Also verify every cyclic configuration of period up to this bound
    #[arg(long)]
    pub periods: Option<usize>,
    /// Random windowed inputs to verify
    #[arg(long, default_value_t = 0)]
    pub samples: u64,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    factor: FactorReport,
    positions_checked: u64,
    mismatches: usize,
    pass: bool,
    /// First few mismatches, if any: (input index, position, lhs, rhs).
    examples: Vec<(usize, i64, Letter, Letter)>,
}

pub fn run(cmd: FactorCmd) -> Result<ExitCode> {
    match cmd {
        FactorCmd::Build(args) => {
            let rule = args.rule.load()?;
            let (factor, counter) = args.source.build(&rule)?;
            let report = FactorReport::new(&factor, &counter);
            let human = format!(
                "factor built: preperiod {}, period {}, rows [{}], counter mod {} with sink {}\n",
                report.p0,
                report.p,
                report.rows.join(", "),
                report.counter_modulus,
                report.sink_letter
            );
            let manifest = Manifest::new("factor build", Some(&rule), &args)?;
            emit(&manifest, &report, args.json, &human)?;
            Ok(ExitCode::SUCCESS)
        }
        FactorCmd::Verify(args) => {
            let rule = args.rule.load()?;
            let (factor, counter) = args.source.build(&rule)?;

            let mut inputs: Vec<Configuration> = Vec::new();
            for word in &args.inputs {
                inputs.push(
                    CyclicConfig::new(rule.alphabet(), parse_word(word, rule.alphabet())?)?
                        .into(),
                );
            }
            if let Some(max_period) = args.periods {
                let q = rule.alphabet().size() as u64;
                for period in 1..=max_period {
                    let count = q.pow(period as u32);
                    for index in 0..count {
                        let word = rule.alphabet().decode(index, period);
                        inputs.push(CyclicConfig::new(rule.alphabet(), word)?.into());
                    }
                }
            }
            if args.samples > 0 {
                let width = 2 * rule.radius() * (factor.horizon() + 2) + 16;
                let q = rule.alphabet().size() as u32;
                for k in 0..args.samples {
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
                    rng.set_stream(k);
                    let word: Vec<Letter> =
                        (0..width).map(|_| rng.gen_range(0..q) as Letter).collect();
                    inputs.push(
                        WindowConfig::new(rule.alphabet(), -(width as i64) / 2, word)?.into(),
                    );
                }
            }
            if inputs.is_empty() {
                bail!("nothing to verify: pass --input, --periods or --samples");
            }

            let result = verify_commutation(&rule, &factor, &counter, &inputs)?;
            let report = VerifyReport {
                factor: FactorReport::new(&factor, &counter),
                positions_checked: result.positions_checked,
                mismatches: result.mismatches.len(),
                pass: result.pass,
                examples: result
                    .mismatches
                    .iter()
                    .take(10)
                    .map(|m| (m.input_index, m.position, m.factor_of_image, m.counter_of_factor))
                    .collect(),
            };
            let human = if result.pass {
                format!(
                    "commutation holds at all {} checked positions\n",
                    result.positions_checked
                )
            } else {
                format!(
                    "commutation FAILED: {} mismatches out of {} positions\n",
                    result.mismatches.len(),
                    result.positions_checked
                )
            };
            let manifest = Manifest::new("factor verify", Some(&rule), &args)?;
            emit(&manifest, &report, args.json, &human)?;
            Ok(if result.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}
