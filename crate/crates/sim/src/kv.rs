//! Flat `key = value` text format shared by config files and scenario dumps.
//! One entry per line, arrays as comma-separated lists, `#` starts a comment.
//! Values round-trip losslessly: floats are written with Rust's shortest
//! exact representation.

use std::fmt::Write as _;

use crate::SimError;

/// Parsed entries in file order. Duplicate keys are rejected.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, SimError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| SimError::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(SimError::Config(format!("line {}: empty key", lineno + 1)));
        }
        if out.iter().any(|(k, _)| *k == key) {
            return Err(SimError::Config(format!("line {}: duplicate key {key:?}", lineno + 1)));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

pub fn render(entries: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (key, value) in entries {
        let _ = writeln!(out, "{key} = {value}");
    }
    out
}

pub fn parse_f64(key: &str, value: &str) -> Result<f64, SimError> {
    value
        .parse::<f64>()
        .map_err(|_| SimError::Config(format!("{key}: not a number: {value:?}")))
        .and_then(|v| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(SimError::Config(format!("{key}: not finite: {value:?}")))
            }
        })
}

pub fn parse_u64(key: &str, value: &str) -> Result<u64, SimError> {
    value
        .parse::<u64>()
        .map_err(|_| SimError::Config(format!("{key}: not a non-negative integer: {value:?}")))
}

pub fn parse_usize(key: &str, value: &str) -> Result<usize, SimError> {
    value
        .parse::<usize>()
        .map_err(|_| SimError::Config(format!("{key}: not a non-negative integer: {value:?}")))
}

pub fn parse_f64_list(key: &str, value: &str) -> Result<Vec<f64>, SimError> {
    value.split(',').map(|item| parse_f64(key, item.trim())).collect()
}

pub fn render_f64_list(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}
