//! `key=value` config files. Each key names a long flag, and the pairs are
//! spliced in ahead of the command-line flags so that explicit flags win.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};

const SUBCOMMANDS: [&str; 5] = ["decode", "table1", "msp", "ber", "dist"];

/// Parses config text into `(flag, value)` pairs. Blank lines and lines
/// starting with `#` are skipped; underscores in keys become dashes.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key=value, got `{line}`", lineno + 1);
        };
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key == "config" {
            bail!("config line {}: invalid key", lineno + 1);
        }
        pairs.push((key, value.trim().to_string()));
    }
    Ok(pairs)
}

fn config_flags(pairs: &[(String, String)]) -> Vec<OsString> {
    let mut flags = Vec::new();
    for (key, value) in pairs {
        match value.as_str() {
            // Boolean switches.
            "true" => flags.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                flags.push(format!("--{key}").into());
                flags.push(value.into());
            }
        }
    }
    flags
}

/// Removes `--config <path>` from `args` and splices the file's flags in
/// right after the subcommand name.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path: Option<OsString> = None;
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        let text = arg.to_string_lossy();
        if text == "--config" {
            path = Some(iter.next().context("--config needs a path")?);
        } else if let Some(p) = text.strip_prefix("--config=") {
            path = Some(p.into());
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = std::fs::read_to_string(Path::new(&path)).with_context(|| format!("reading config {}", Path::new(&path).display()))?;
    let flags = config_flags(&parse_config(&text)?);
    let at = rest
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
        .map_or(rest.len(), |p| p + 1);
    rest.splice(at..at, flags);
    Ok(rest)
}
