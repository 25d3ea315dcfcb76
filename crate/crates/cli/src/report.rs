//! Report envelope shared by every subcommand.
//!
//! JSON output is deterministic byte-for-byte for a fixed manifest: field
//! order follows the struct definitions and the timestamp lives only in the
//! human-readable header.

use anyhow::Result;
use serde::Serialize;

pub const SCHEMA: &str = "eqca.report/v1";

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub version: &'static str,
    pub subcommand: &'static str,
    /// FNV-1a of the rule contents, when the command takes a rule.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule_hash: Option<String>,
    /// Full parameter set, seeds included.
    pub params: serde_json::Value,
    #[serde(skip)]
    pub timestamp: String,
}

impl Manifest {
    pub fn new(
        subcommand: &'static str,
        rule: Option<&eqca_core::RuleTable>,
        params: &impl Serialize,
    ) -> Result<Self> {
        Ok(Manifest {
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            rule_hash: rule.map(|r| format!("{:016x}", r.content_hash())),
            params: serde_json::to_value(params)?,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        })
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    manifest: &'a Manifest,
    report: &'a T,
}

/// Print the report: pretty JSON under `--json`, otherwise the prepared
/// human text under a one-line header.
pub fn emit<T: Serialize>(manifest: &Manifest, report: &T, json: bool, human: &str) -> Result<()> {
    if json {
        let envelope = Envelope { schema: SCHEMA, manifest, report };
        println!("{}", serde_json::to_string_pretty(&envelope)?);
    } else {
        println!(
            "# eqca {} · {} · {}",
            manifest.version, manifest.subcommand, manifest.timestamp
        );
        print!("{human}");
        if !human.ends_with('\n') {
            println!();
        }
    }
    Ok(())
}
