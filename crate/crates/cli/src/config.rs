//! Flat `key = value` settings files.
//!
//! One setting per line, `#` starts a comment, blank lines are skipped.
//! Keys are the long flag names without the dashes, so any command line
//! can be moved into a file verbatim.

use crate::CliError;
use std::collections::BTreeMap;

pub type Settings = BTreeMap<String, String>;

pub fn parse(text: &str) -> Result<Settings, CliError> {
    let mut out = Settings::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Invalid(format!("config line {}: expected key=value, got {raw:?}", i + 1)));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(CliError::Invalid(format!("config line {}: empty key", i + 1)));
        }
        if out.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::Invalid(format!("config line {}: {key} set twice", i + 1)));
        }
    }
    Ok(out)
}

/// Writes settings back in the form [`parse`] reads.
pub fn render(settings: &Settings) -> String {
    settings.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}
