//! `eqca classify` (also `eqca blocking classify`) — topological
//! classification by blocking structure.

use std::process::ExitCode;

use anyhow::Result;
use clap::Args;
use eqca_core::blocking::{classify_kurka, KurkaBudgets, KurkaVerdict};
use serde::Serialize;

use crate::input::{format_word, RuleArgs};
use crate::report::{emit, Manifest};

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    /// Longest candidate blocking word
    #[arg(long, default_value_t = 4)]
    pub lmax: usize,
    /// Full-alphabet cells per side in the set-based simulation (default 2r)
    #[arg(long)]
    pub margin: Option<usize>,
    /// Abstract step budget per certification attempt
    #[arg(long, default_value_t = 4096)]
    pub max_steps: usize,
    /// Falsification horizon
    #[arg(long, default_value_t = 32)]
    pub horizon: usize,
    /// Sample pairs per offset during falsification
    #[arg(long, default_value_t = 200)]
    pub samples: u64,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Preperiod bound for the global table check
    #[arg(long, default_value_t = 4)]
    pub max_preperiod: usize,
    /// Period bound for the global table check
    #[arg(long, default_value_t = 8)]
    pub max_period: usize,
    /// Composed table entry budget
    #[arg(long, default_value_t = eqca_core::DEFAULT_TABLE_BUDGET)]
    pub table_budget: u64,
    #[arg(long)]
    pub json: bool,
}

impl ClassifyArgs {
    pub fn budgets(&self) -> KurkaBudgets {
        KurkaBudgets {
            margin: self.margin,
            max_steps: self.max_steps,
            lmax: self.lmax,
            horizon: self.horizon,
            samples: self.samples,
            seed: self.seed,
            max_preperiod: self.max_preperiod,
            max_period: self.max_period,
            table_budget: self.table_budget,
        }
    }
}

pub fn run(args: ClassifyArgs) -> Result<ExitCode> {
    let rule = args.rule.load()?;
    let report = classify_kurka(&rule, &args.budgets())?;
    let human = match &report.verdict {
        KurkaVerdict::GloballyEquicontinuous { witness } => format!(
            "GLOBALLY_EQUICONTINUOUS: F^{} = F^{} as global maps (preperiod {}, period {})\n",
            witness.preperiod + witness.period,
            witness.preperiod,
            witness.preperiod,
            witness.period
        ),
        KurkaVerdict::HasEquicontinuousPoints { certificate } => format!(
            "HAS_EQUICONTINUOUS_POINTS: word {} is {}-blocking at offset {} \
             (abstract preperiod {}, period {})\n",
            format_word(&certificate.word),
            certificate.width,
            certificate.offset,
            certificate.preperiod,
            certificate.period
        ),
        KurkaVerdict::SensitivityEvidence { refuted_words, lmax } => format!(
            "SENSITIVITY_EVIDENCE (not a proof): all {refuted_words} candidate words up to \
             length {lmax} refuted by sampling\n"
        ),
        KurkaVerdict::Inconclusive { reason } => format!("INCONCLUSIVE: {reason}\n"),
    };
    let manifest = Manifest::new("classify", Some(&rule), &args)?;
    emit(&manifest, &report, args.json, &human)?;
    Ok(ExitCode::SUCCESS)
}
