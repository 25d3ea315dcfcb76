//! `eqca gilman estimate|classify`.

use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Subcommand};
use eqca_core::config::CyclicConfig;
use eqca_core::gilman::{
    classify_gilman, estimate_mu_equicontinuity, EquicontinuityEstimate, GilmanParams,
    GilmanVerdict,
};
use serde::Serialize;

use crate::input::{format_word, parse_spec, parse_word, RuleArgs};
use crate::report::{emit, Manifest};

#[derive(Debug, Subcommand)]
pub enum GilmanCmd {
    /// Estimate conditional trace-agreement ratios for one base point
    Estimate(EstimateArgs),
    /// Classify the rule into the empirical A/B/C scheme
    Classify(GilmanClassifyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    /// Base point as a cyclic word
    #[arg(long)]
    pub point: String,
    /// Letter distribution: "uniform" or p0,p1,...
    #[arg(long, default_value = "uniform")]
    pub spec: String,
    /// Radius of the compared column window
    #[arg(long)]
    pub m: usize,
    /// Conditioning radius; repeatable
    #[arg(long = "n", required = true)]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 16)]
    pub horizon: usize,
    #[arg(long, default_value_t = 400)]
    pub samples: u64,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct EstimateReport {
    point: String,
    estimates: Vec<EquicontinuityEstimate>,
}

#[derive(Debug, Args, Serialize)]
pub struct GilmanClassifyArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    /// Base points as cyclic words; repeatable
    #[arg(long = "point", required = true)]
    pub points: Vec<String>,
    #[arg(long, default_value = "uniform")]
    pub spec: String,
    /// Column window radii to test; repeatable
    #[arg(long = "m", default_values_t = [0usize, 1])]
    pub m: Vec<usize>,
    /// Conditioning radii; repeatable
    #[arg(long = "n", default_values_t = [1usize, 2, 4])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 16)]
    pub horizon: usize,
    #[arg(long, default_value_t = 400)]
    pub samples: u64,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Ratio the largest-n estimate must reach for B evidence
    #[arg(long, default_value_t = 0.9)]
    pub b_threshold: f64,
    /// Ratio below which estimates count as expansive evidence
    #[arg(long, default_value_t = 0.1)]
    pub c_threshold: f64,
    /// Blocking-word search budget for the class-A check
    #[arg(long, default_value_t = 4)]
    pub lmax: usize,
    #[arg(long)]
    pub margin: Option<usize>,
    #[arg(long, default_value_t = 4096)]
    pub max_steps: usize,
    #[arg(long)]
    pub json: bool,
}

pub fn run(cmd: GilmanCmd) -> Result<ExitCode> {
    match cmd {
        GilmanCmd::Estimate(args) => {
            let rule = args.rule.load()?;
            let spec = parse_spec(&args.spec, rule.alphabet())?;
            let base =
                CyclicConfig::new(rule.alphabet(), parse_word(&args.point, rule.alphabet())?)?;
            let estimates = estimate_mu_equicontinuity(
                &rule,
                &spec,
                &base,
                args.m,
                &args.n,
                args.horizon,
                args.samples,
                args.seed,
            )?;
            let mut human = format!(
                "base point {} · m = {} · horizon {} · {} samples\n",
                args.point, args.m, args.horizon, args.samples
            );
            for est in &estimates {
                human.push_str(&format!(
                    "  n = {:>3}: ratio {:.4} (95% CI [{:.4}, {:.4}], {}/{})\n",
                    est.n, est.ratio, est.ci_low, est.ci_high, est.hits, est.samples
                ));
            }
            let report = EstimateReport { point: args.point.clone(), estimates };
            let manifest = Manifest::new("gilman estimate", Some(&rule), &args)?;
            emit(&manifest, &report, args.json, &human)?;
            Ok(ExitCode::SUCCESS)
        }
        GilmanCmd::Classify(args) => {
            let rule = args.rule.load()?;
            let spec = parse_spec(&args.spec, rule.alphabet())?;
            let points = args
                .points
                .iter()
                .map(|p| {
                    Ok(CyclicConfig::new(rule.alphabet(), parse_word(p, rule.alphabet())?)?)
                })
                .collect::<Result<Vec<_>>>()?;
            let params = GilmanParams {
                m_list: args.m.clone(),
                n_list: args.n.clone(),
                horizon: args.horizon,
                samples: args.samples,
                seed: args.seed,
                b_threshold: args.b_threshold,
                c_threshold: args.c_threshold,
                lmax: args.lmax,
                margin: args.margin,
                max_steps: args.max_steps,
            };
            let report = classify_gilman(&rule, &spec, &points, &params)?;
            let human = match &report.verdict {
                GilmanVerdict::ClassA { certificate } => format!(
                    "A: equicontinuous at some point (blocking word {})\n",
                    format_word(&certificate.word)
                ),
                GilmanVerdict::ClassBEvidence { base_point } => format!(
                    "B_EVIDENCE (not a proof): ratios trend to 1 at base point {}\n",
                    args.points[*base_point]
                ),
                GilmanVerdict::ClassCEvidence { m } => format!(
                    "C_EVIDENCE (not a proof): ratios collapse for every base point at m = {m}\n"
                ),
                GilmanVerdict::Inconclusive { reason } => format!("INCONCLUSIVE: {reason}\n"),
            };
            let manifest = Manifest::new("gilman classify", Some(&rule), &args)?;
            emit(&manifest, &report, args.json, &human)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
