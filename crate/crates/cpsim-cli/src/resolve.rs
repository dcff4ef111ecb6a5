//! Flag/file/default resolution and the resolved-config announcement.
//!
//! Every subcommand resolves its parameters in three layers — built-in
//! defaults, then a JSON config file (`--config`), then explicit flags —
//! with later layers winning. The resolved values are printed as canonical
//! JSON together with a SHA-256 hash so any run can be identified and
//! reproduced from its log alone.

use std::fs;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

/// JSON config file mirroring the command-line flags. All fields are
/// optional; keys use the flag spelling (`T`, `K`, `N`, `dump-events`).
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileCfg {
    pub lambda: Option<f64>,
    pub range: Option<i64>,
    pub kernel: Option<String>,
    #[serde(rename = "T")]
    pub t_max: Option<f64>,
    pub grid: Option<String>,
    pub replicas: Option<u64>,
    pub seed: Option<u64>,
    pub guard: Option<i64>,
    #[serde(rename = "K")]
    pub k: Option<i64>,
    #[serde(rename = "N")]
    pub n: Option<i64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub p: Option<f64>,
    pub i: Option<i64>,
    pub out: Option<String>,
    pub threads: Option<usize>,
    #[serde(rename = "dump-events")]
    pub dump_events: Option<bool>,
    #[serde(rename = "load-events")]
    pub load_events: Option<String>,
    /// "discard" or "abort"; mirrors --discard-contaminated/--abort-contaminated.
    pub contamination: Option<String>,
    pub suite: Option<String>,
    pub cases: Option<u64>,
    pub height: Option<i64>,
    #[serde(rename = "gamma-beta")]
    pub gamma_beta: Option<f64>,
}

impl FileCfg {
    pub fn load(path: Option<&str>) -> Result<FileCfg> {
        let Some(path) = path else { return Ok(FileCfg::default()) };
        let text = fs::read_to_string(path).with_context(|| format!("reading config file {path}"))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config file {path}"))
    }
}

/// Three-layer resolution: flag beats file beats default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Two-layer resolution for parameters with no default (stay optional).
pub fn pick_opt<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

/// Parse `--grid` CSV into strictly ascending times.
pub fn parse_grid(csv: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in csv.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let t: f64 = part.parse().with_context(|| format!("grid entry {part:?} is not a number"))?;
        out.push(t);
    }
    if out.is_empty() {
        bail!("--grid needs at least one time");
    }
    Ok(out)
}

/// Parse `--kernel` CSV: relative weights for displacements 1..=M, mirrored
/// to -1..=-M and normalized so the total mass is one.
pub fn parse_kernel_weights(csv: &str) -> Result<Vec<(i64, f64)>> {
    let mut raw = Vec::new();
    for part in csv.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let w: f64 = part.parse().with_context(|| format!("kernel weight {part:?} is not a number"))?;
        if !(w.is_finite() && w >= 0.0) {
            bail!("kernel weight {w} must be finite and >= 0");
        }
        raw.push(w);
    }
    let total: f64 = raw.iter().sum();
    if raw.is_empty() || total <= 0.0 {
        bail!("--kernel needs at least one positive weight");
    }
    let mut weights = Vec::new();
    for (j, &w) in raw.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let d = (j + 1) as i64;
        let p = w / (2.0 * total);
        weights.push((-d, p));
        weights.push((d, p));
    }
    weights.sort_by_key(|&(d, _)| d);
    Ok(weights)
}

/// Print the resolved configuration and return its hash. The JSON is
/// canonical (sorted keys, shortest-round-trip floats), so identical
/// resolved parameters always hash identically.
pub fn announce(subcommand: &str, resolved: &Map<String, Value>) -> String {
    let canonical = Value::Object(resolved.clone()).to_string();
    let hash = hex_sha256(canonical.as_bytes());
    println!("command: {subcommand}");
    println!("config: {canonical}");
    println!("config-hash: {hash}");
    hash
}

pub fn hex_sha256(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut s = String::with_capacity(64);
    for b in digest {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// Convenience for building the resolved-config map in declaration order
/// (serde_json's map sorts keys, which keeps the output canonical).
pub fn value_map(entries: Vec<(&str, Value)>) -> Map<String, Value> {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
