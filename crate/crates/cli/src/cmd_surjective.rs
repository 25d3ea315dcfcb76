//! `eqca surjective` — surjectivity verdict with orphan witness.

use std::process::ExitCode;

use anyhow::Result;
use clap::Args;
use eqca_core::surjectivity::{is_balanced, is_surjective, Surjectivity};
use serde::Serialize;

use crate::input::{format_word, RuleArgs};
use crate::report::{emit, Manifest};

#[derive(Debug, Args, Serialize)]
pub struct SurjectiveArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct SurjectivityReport {
    surjective: bool,
    balanced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    orphan: Option<String>,
}

pub fn run(args: SurjectiveArgs) -> Result<ExitCode> {
    let rule = args.rule.load()?;
    let balanced = is_balanced(&rule);
    let verdict = is_surjective(&rule);
    let report = match &verdict {
        Surjectivity::Surjective => {
            SurjectivityReport { surjective: true, balanced, orphan: None }
        }
        Surjectivity::NotSurjective { orphan } => SurjectivityReport {
            surjective: false,
            balanced,
            orphan: Some(format_word(orphan)),
        },
    };
    let human = match &verdict {
        Surjectivity::Surjective => "surjective\n".to_string(),
        Surjectivity::NotSurjective { orphan } => format!(
            "not surjective; shortest orphan word: {} (length {}){}\n",
            format_word(orphan),
            orphan.len(),
            if balanced { "" } else { "; balance pretest already fails" }
        ),
    };
    let manifest = Manifest::new("surjective", Some(&rule), &args)?;
    emit(&manifest, &report, args.json, &human)?;
    Ok(ExitCode::SUCCESS)
}
