//! Flat `key = value` configuration files. Keys are long flag names without
//! the leading dashes; `#` starts a comment. File values are injected ahead
//! of the command-line arguments so that explicit flags win.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

pub fn read_entries(path: &Path) -> Result<Vec<(String, String)>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_entries(&text)
}

pub fn parse_entries(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            return Err(format!("line {}: invalid key {key:?}", lineno + 1));
        }
        out.push((key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

/// The value of `--config`, if present.
pub fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(v.into());
        }
    }
    None
}

/// Turn entries into flags. `is_switch` reports whether a key is a boolean
/// flag taking no value; `known` filters out keys the command does not accept.
pub fn entries_to_args(
    entries: &[(String, String)],
    known: impl Fn(&str) -> bool,
    is_switch: impl Fn(&str) -> bool,
) -> Result<Vec<OsString>, String> {
    let mut out = Vec::new();
    for (key, value) in entries {
        if !known(key) {
            continue;
        }
        if is_switch(key) {
            match value.as_str() {
                "true" | "yes" | "1" => out.push(format!("--{key}").into()),
                "false" | "no" | "0" => {}
                other => return Err(format!("{key}: expected true or false, got {other:?}")),
            }
        } else {
            out.push(format!("--{key}").into());
            out.push(value.into());
        }
    }
    Ok(out)
}
