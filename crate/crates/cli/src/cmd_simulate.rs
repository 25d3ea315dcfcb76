//! `eqca simulate` — space-time diagrams and trace dumps.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Args;
use eqca_core::config::{Configuration, CyclicConfig, WindowConfig};
use eqca_core::render::{render_spacetime, RenderFormat};
use eqca_core::sim::trace;
use serde::Serialize;

use crate::input::{parse_interval, parse_word, RuleArgs};
use crate::report::{emit, Manifest};

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    /// Cyclic initial configuration (period word)
    #[arg(long, value_name = "WORD", conflicts_with = "window")]
    pub cyclic: Option<String>,
    /// Windowed initial configuration (exact on a finite interval)
    #[arg(long, value_name = "WORD")]
    pub window: Option<String>,
    /// Offset of the window's first cell
    #[arg(long, default_value_t = 0, requires = "window")]
    pub offset: i64,
    /// Number of steps to simulate
    #[arg(long, default_value_t = 8)]
    pub steps: usize,
    /// Trace interval START,WIDTH; defaults to the period (cyclic) or the
    /// maximal exact interval (window)
    #[arg(long)]
    pub interval: Option<String>,
    /// Output format: ascii, pgm or json
    #[arg(long, default_value = "ascii")]
    pub format: String,
    /// Write the artifact to FILE instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit the JSON trace dump (same as --format json)
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct TraceReport {
    start: i64,
    width: usize,
    horizon: usize,
    rows: Vec<Vec<u8>>,
}

pub fn run(args: SimulateArgs) -> Result<ExitCode> {
    let rule = args.rule.load()?;
    let r = rule.radius();

    let config: Configuration = if let Some(word) = &args.cyclic {
        CyclicConfig::new(rule.alphabet(), parse_word(word, rule.alphabet())?)?.into()
    } else if let Some(word) = &args.window {
        WindowConfig::new(rule.alphabet(), args.offset, parse_word(word, rule.alphabet())?)?
            .into()
    } else {
        bail!("one of --cyclic or --window is required");
    };

    let (start, width) = match &args.interval {
        Some(s) => parse_interval(s)?,
        None => match &config {
            Configuration::Cyclic(c) => (0, c.period()),
            Configuration::Window(w) => {
                let shrink = (args.steps * r) as i64;
                let (lo, hi) = w.span();
                let (lo, hi) = (lo + shrink, hi - shrink);
                if lo >= hi {
                    bail!(
                        "insufficient window: {} steps leave no exact cells (window {} wide, radius {})",
                        args.steps,
                        w.len(),
                        r
                    );
                }
                (lo, (hi - lo) as usize)
            }
        },
    };

    let t = trace(&rule, &config, start, width, args.steps)?;

    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(
            std::fs::File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))?,
        ),
        None => Box::new(std::io::stdout().lock()),
    };

    match (args.json, args.format.as_str()) {
        (true, _) | (false, "json") => {
            let manifest = Manifest::new("simulate", Some(&rule), &args)?;
            let report = TraceReport {
                start: t.start,
                width: t.width,
                horizon: t.horizon(),
                rows: t.rows.clone(),
            };
            emit(&manifest, &report, true, "")?;
        }
        (false, "ascii") => {
            let bytes = render_spacetime(&t, rule.alphabet().size(), RenderFormat::Ascii)?;
            sink.write_all(&bytes)?;
        }
        (false, "pgm") => {
            let bytes = render_spacetime(&t, rule.alphabet().size(), RenderFormat::Pgm)?;
            sink.write_all(&bytes)?;
        }
        (false, other) => bail!("unknown format {other:?}: expected ascii, pgm or json"),
    }
    Ok(ExitCode::SUCCESS)
}
