//! Rule loading and word/cylinder/spec parsing for the command line.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use eqca_core::gilman::BernoulliSpec;
use eqca_core::rule::{Alphabet, Letter, RuleTable};
use eqca_core::spectrum::Cylinder;
use serde::{Deserialize, Serialize};

/// Rule source: `--eca N` or `--rule FILE`.
#[derive(Debug, Clone, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct RuleArgs {
    /// Elementary rule number (binary alphabet, radius 1)
    #[arg(long, value_name = "N")]
    pub eca: Option<u8>,
    /// Rule file: {"alphabet_size": q, "radius": r, "table": [...]} or {"eca": n}
    #[arg(long, value_name = "FILE")]
    pub rule: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum RuleFile {
    Eca { eca: u8 },
    Table { alphabet_size: usize, radius: usize, table: Vec<Letter> },
}

impl RuleArgs {
    pub fn load(&self) -> Result<RuleTable> {
        if let Some(number) = self.eca {
            return Ok(RuleTable::eca(number));
        }
        let path = self.rule.as_ref().expect("clap guarantees one rule source");
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("unknown rule file {}", path.display()))?;
        let parsed: RuleFile = serde_json::from_str(&text)
            .with_context(|| format!("malformed rule JSON in {}", path.display()))?;
        match parsed {
            RuleFile::Eca { eca } => Ok(RuleTable::eca(eca)),
            RuleFile::Table { alphabet_size, radius, table } => {
                let alphabet = Alphabet::new(alphabet_size)?;
                Ok(RuleTable::new(alphabet, radius, table)?)
            }
        }
    }
}

/// Letters as compact glyphs: `0-9` then `a-z`, alphabets up to 36 letters.
pub fn parse_word(s: &str, alphabet: Alphabet) -> Result<Vec<Letter>> {
    s.chars()
        .map(|c| {
            let letter = match c {
                '0'..='9' => c as u8 - b'0',
                'a'..='z' => c as u8 - b'a' + 10,
                _ => bail!("invalid letter {c:?} in word {s:?}"),
            };
            if !alphabet.contains(letter) {
                bail!("letter {c:?} outside alphabet of size {}", alphabet.size());
            }
            Ok(letter)
        })
        .collect()
}

pub fn format_word(word: &[Letter]) -> String {
    word.iter()
        .map(|&l| if l < 10 { (b'0' + l) as char } else { (b'a' + l - 10) as char })
        .collect()
}

/// `WORD@OFFSET`, offset defaulting to 0.
pub fn parse_cylinder(s: &str, alphabet: Alphabet) -> Result<Cylinder> {
    let (word, offset) = match s.split_once('@') {
        Some((w, off)) => {
            (w, off.parse::<i64>().with_context(|| format!("invalid offset in {s:?}"))?)
        }
        None => (s, 0),
    };
    Ok(Cylinder::new(parse_word(word, alphabet)?, offset)?)
}

/// `uniform` or a comma-separated probability vector.
pub fn parse_spec(s: &str, alphabet: Alphabet) -> Result<BernoulliSpec> {
    if s == "uniform" {
        return Ok(BernoulliSpec::uniform(alphabet));
    }
    let probs: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("invalid probability {p:?}")))
        .collect::<Result<_>>()?;
    if probs.len() != alphabet.size() {
        bail!("spec has {} entries, alphabet has {}", probs.len(), alphabet.size());
    }
    Ok(BernoulliSpec::new(probs)?)
}

/// `START,WIDTH` intervals.
pub fn parse_interval(s: &str) -> Result<(i64, usize)> {
    let (start, width) =
        s.split_once(',').with_context(|| format!("interval {s:?} must be START,WIDTH"))?;
    Ok((
        start.trim().parse().with_context(|| format!("invalid interval start {start:?}"))?,
        width.trim().parse().with_context(|| format!("invalid interval width {width:?}"))?,
    ))
}
