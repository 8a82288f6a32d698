//! `--config` files: one `key = value` per line, keys are long flag names.
//! Command-line flags win over the file.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use crate::CliError;

const FLAGS: &[&str] = &["identical", "single-bath", "log-spacing", "verify"];

// keys in different families of the same row cannot be combined
const FAMILIES: &[(&str, &[&str])] = &[
    ("sts", &["n1", "n2", "r"]),
    ("standard", &["b1", "b2", "c"]),
    ("explicit", &["gamma1", "nr1", "gamma2", "nr2"]),
    ("identical", &["identical"]),
    ("single", &["single-bath"]),
    ("shorthand", &["gamma", "nr"]),
];

const CONFLICTS: &[(&str, &str)] = &[
    ("sts", "standard"),
    ("explicit", "identical"),
    ("explicit", "single"),
    ("explicit", "shorthand"),
    ("identical", "single"),
];

fn family(key: &str) -> Option<&'static str> {
    FAMILIES.iter().find(|(_, keys)| keys.contains(&key)).map(|(f, _)| *f)
}

fn conflicting(a: &str, b: &str) -> bool {
    CONFLICTS.iter().any(|&(x, y)| (x == a && y == b) || (x == b && y == a))
}

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::invalid(format!("config line {}: expected key = value", lineno + 1)));
        };
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

fn user_keys(args: &[OsString]) -> Vec<String> {
    args.iter()
        .filter_map(|a| a.to_str())
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect()
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.to_str().and_then(|s| s.strip_prefix("--config=")) {
            return Some(p.into());
        }
    }
    None
}

/// Splices the entries of the `--config` file (if any) into `args` right
/// after the subcommand, skipping keys the user already set or overrode.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(Path::new(&path)).map_err(|e| {
        CliError::invalid(format!("cannot read config file {}: {e}", Path::new(&path).display()))
    })?;
    let entries = parse_config(&text)?;
    let given = user_keys(&args);
    let given_families: Vec<&str> = given.iter().filter_map(|k| family(k)).collect();

    let mut injected: Vec<OsString> = Vec::new();
    for (key, value) in entries {
        if key == "config" || given.contains(&key) {
            continue;
        }
        if let Some(f) = family(&key) {
            if given_families.iter().any(|g| conflicting(f, g)) {
                continue;
            }
        }
        if FLAGS.contains(&key.as_str()) {
            match value.as_str() {
                "true" | "yes" | "1" => injected.push(format!("--{key}").into()),
                "false" | "no" | "0" => {}
                _ => return Err(CliError::invalid(format!("config key {key} expects true or false"))),
            }
        } else {
            injected.push(format!("--{key}").into());
            injected.push(value.into());
        }
    }

    // args[0] is the program, args[1] the subcommand
    let split = args.len().min(2);
    let mut out = args[..split].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[split..]);
    Ok(out)
}
