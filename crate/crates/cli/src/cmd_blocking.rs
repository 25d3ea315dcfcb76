//! `eqca blocking certify|falsify|search|classify`.

use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Subcommand};
use eqca_core::blocking::{
    certify_blocking, falsify_blocking, search_blocking_words, BlockingCertificate,
};
use serde::Serialize;

use crate::cmd_classify::{self, ClassifyArgs};
use crate::input::{format_word, parse_word, RuleArgs};
use crate::report::{emit, Manifest};

#[derive(Debug, Subcommand)]
pub enum BlockingCmd {
    /// Soundly certify that a word blocks a column window
    Certify(CertifyArgs),
    /// Search for configurations refuting the blocking property
    Falsify(FalsifyArgs),
    /// Enumerate and certify candidate blocking words
    Search(SearchArgs),
    /// Classify the rule by its blocking structure
    Classify(ClassifyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    /// Candidate blocking word
    #[arg(long)]
    pub word: String,
    /// Width of the column window to certify (default: radius, at least 1)
    #[arg(long)]
    pub s: Option<usize>,
    /// Full-alphabet cells per side (default 2r)
    #[arg(long)]
    pub margin: Option<usize>,
    #[arg(long, default_value_t = 4096)]
    pub max_steps: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct CertifyReport {
    certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<BlockingCertificate>,
}

#[derive(Debug, Args, Serialize)]
pub struct FalsifyArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    #[arg(long)]
    pub word: String,
    #[arg(long)]
    pub s: Option<usize>,
    /// Trace comparison horizon
    #[arg(long, default_value_t = 32)]
    pub horizon: usize,
    /// Sample pairs per offset
    #[arg(long, default_value_t = 500)]
    pub samples: u64,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct FalsifyReport {
    refuted: bool,
    /// One counterexample per offset when refuted: (offset, divergence time).
    divergences: Vec<(usize, usize)>,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    #[arg(long)]
    pub s: Option<usize>,
    /// Longest word length to try
    #[arg(long, default_value_t = 4)]
    pub lmax: usize,
    #[arg(long)]
    pub margin: Option<usize>,
    #[arg(long, default_value_t = 4096)]
    pub max_steps: usize,
    /// Skip words containing an already-certified word as a factor
    #[arg(long)]
    pub dedup: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct SearchReport {
    certified: Vec<BlockingCertificate>,
}

fn default_s(rule: &eqca_core::RuleTable, s: Option<usize>) -> usize {
    s.unwrap_or_else(|| rule.radius().max(1))
}

fn default_margin(rule: &eqca_core::RuleTable, margin: Option<usize>) -> usize {
    margin.unwrap_or(2 * rule.radius())
}

pub fn run(cmd: BlockingCmd) -> Result<ExitCode> {
    match cmd {
        BlockingCmd::Certify(args) => {
            let rule = args.rule.load()?;
            let word = parse_word(&args.word, rule.alphabet())?;
            let s = default_s(&rule, args.s);
            let margin = default_margin(&rule, args.margin);
            let cert = certify_blocking(&rule, &word, s, margin, args.max_steps)?;
            let human = match &cert {
                Some(c) => format!(
                    "certified: {} is {}-blocking at offset {} (margin {}, abstract preperiod {}, period {})\n",
                    format_word(&c.word), c.width, c.offset, c.margin, c.preperiod, c.period
                ),
                None => "inconclusive: the set-based simulation could not certify this word \
                         (not a proof of non-blocking)\n"
                    .to_string(),
            };
            let report = CertifyReport { certified: cert.is_some(), certificate: cert };
            let manifest = Manifest::new("blocking certify", Some(&rule), &args)?;
            emit(&manifest, &report, args.json, &human)?;
            Ok(ExitCode::SUCCESS)
        }
        BlockingCmd::Falsify(args) => {
            let rule = args.rule.load()?;
            let word = parse_word(&args.word, rule.alphabet())?;
            let s = default_s(&rule, args.s);
            let refutation =
                falsify_blocking(&rule, &word, s, args.horizon, args.samples, args.seed)?;
            let (human, report) = match &refutation {
                Some(r) => (
                    format!(
                        "refuted: every offset has a counterexample pair (earliest divergence at time {})\n",
                        r.per_offset.iter().map(|p| p.time).min().unwrap_or(0)
                    ),
                    FalsifyReport {
                        refuted: true,
                        divergences: r.per_offset.iter().map(|p| (p.offset, p.time)).collect(),
                    },
                ),
                None => (
                    "not refuted within budget (no statement about blocking)\n".to_string(),
                    FalsifyReport { refuted: false, divergences: Vec::new() },
                ),
            };
            let manifest = Manifest::new("blocking falsify", Some(&rule), &args)?;
            emit(&manifest, &report, args.json, &human)?;
            Ok(ExitCode::SUCCESS)
        }
        BlockingCmd::Search(args) => {
            let rule = args.rule.load()?;
            let s = default_s(&rule, args.s);
            let margin = default_margin(&rule, args.margin);
            let found =
                search_blocking_words(&rule, s, args.lmax, margin, args.max_steps, args.dedup)?;
            let mut human = format!("{} certified word(s) up to length {}\n", found.len(), args.lmax);
            for (word, cert) in &found {
                human.push_str(&format!(
                    "  {} at offset {} (preperiod {}, period {})\n",
                    format_word(word),
                    cert.offset,
                    cert.preperiod,
                    cert.period
                ));
            }
            let report =
                SearchReport { certified: found.into_iter().map(|(_, c)| c).collect() };
            let manifest = Manifest::new("blocking search", Some(&rule), &args)?;
            emit(&manifest, &report, args.json, &human)?;
            Ok(ExitCode::SUCCESS)
        }
        BlockingCmd::Classify(args) => cmd_classify::run(args),
    }
}
