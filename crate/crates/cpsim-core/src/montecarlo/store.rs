//! Replica sample storage, estimation tables, and on-disk persistence.
//!
//! A store is the full, replayable record of one experiment: the config
//! (and its hash), plus one record per replica holding the seed, the
//! contamination flag, and the sampled observable rows. Estimators never
//! silently change the sample size — contaminated or value-less replicas
//! are excluded with counts reported alongside every estimate.
//!
//! On disk a store is a directory of three files, schemas versioned by
//! `SCHEMA_VERSION`:
//!   config.json  — canonical config serialization (hash preimage);
//!   samples.csv  — `replica,seed,time,r,l,rho,rho_plus,rho_minus,contaminated`,
//!                  one row per (replica, grid time), empty cells for
//!                  observables the run did not produce;
//!   summary.json — schema version, hash, counts, per-time aggregates.
//! Files are written to a temporary name and renamed into place, so a
//! crash never leaves a partial file behind.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Result, SimError};

use super::experiment::ExperimentConfig;
use super::stats::{mean_ci, wilson};

/// Version tag written into summaries; bump when any file schema changes.
pub const SCHEMA_VERSION: u32 = 1;

/// One sampled grid row of one replica. `None` marks either an observable
/// the run did not compute or a value lost to truncation (the row is then
/// flagged).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRow {
    pub time: f64,
    /// Right edge of the half-line trajectory.
    pub r: Option<i64>,
    /// Leftmost disagreement with the full-lattice trajectory.
    pub l: Option<i64>,
    /// r - l.
    pub rho: Option<i64>,
    pub contaminated: bool,
}

/// Everything recorded about one replica.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicaRecord {
    pub index: u64,
    pub seed: u64,
    /// Some row was contaminated (flags are sticky, so this equals the
    /// last row's flag for interface runs).
    pub contaminated: bool,
    pub rows: Vec<SampleRow>,
}

/// In-memory result of a whole experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleStore {
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub replicas: Vec<ReplicaRecord>,
}

/// One line of a tail-probability table: P(|rho_t| > l) at one (t, l).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TailRow {
    pub time: f64,
    pub l: i64,
    pub count: u64,
    /// Replicas entering the estimate (uncontaminated with a rho value).
    pub n: u64,
    /// Replicas excluded (contaminated or without rho at this time).
    pub excluded: u64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

/// Edge-speed estimate at one horizon: mean of r_T / T with a normal CI.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpeedEstimate {
    pub time: f64,
    pub alpha_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Replicas entering the mean.
    pub used: u64,
    /// Replicas excluded (contaminated, died, or no value at this time).
    pub excluded: u64,
}

/// Mean of r/t over finite edge values with a 95% CI; `excluded` counts the
/// `None` entries (died or missing edges). Errors when nothing remains.
pub fn speed_estimate(time: f64, r_values: &[Option<f64>]) -> Result<SpeedEstimate> {
    if !(time > 0.0) {
        return Err(SimError::InvalidConfig(format!("speed needs a positive time, got {time}")));
    }
    let mut ratios: Vec<f64> = r_values.iter().flatten().map(|r| r / time).collect();
    let excluded = (r_values.len() - ratios.len()) as u64;
    if ratios.is_empty() {
        return Err(SimError::EmptySample(format!(
            "no usable edge values at t = {time} ({excluded} excluded)"
        )));
    }
    // Canonical accumulation order makes the estimate exactly invariant
    // under replica permutations, not just up to rounding.
    ratios.sort_by(f64::total_cmp);
    let (alpha_hat, ci_lo, ci_hi) = mean_ci(&ratios, 1.96)?;
    Ok(SpeedEstimate { time, alpha_hat, ci_lo, ci_hi, used: ratios.len() as u64, excluded })
}

#[derive(Serialize)]
struct PerTimeSummary {
    time: f64,
    n: u64,
    mean_r: Option<f64>,
    mean_rho: Option<f64>,
    mean_abs_rho: Option<f64>,
    max_abs_rho: Option<i64>,
}

#[derive(Serialize)]
struct Summary<'a> {
    schema_version: u32,
    config_hash: &'a str,
    replicas: u64,
    contaminated: u64,
    effective: u64,
    grid: &'a [f64],
    per_time: Vec<PerTimeSummary>,
}

impl SampleStore {
    pub fn total(&self) -> u64 {
        self.replicas.len() as u64
    }

    /// Replicas flagged contaminated.
    pub fn contaminated(&self) -> u64 {
        self.replicas.iter().filter(|r| r.contaminated).count() as u64
    }

    /// Replicas usable by estimators.
    pub fn effective(&self) -> u64 {
        self.total() - self.contaminated()
    }

    fn grid_index(&self, time: f64) -> Result<usize> {
        self.config
            .grid
            .iter()
            .position(|&t| t == time)
            .ok_or_else(|| SimError::InvalidConfig(format!("time {time} is not on the grid")))
    }

    /// rho values at a grid time across uncontaminated replicas, plus the
    /// number of replicas that contributed nothing.
    pub fn rho_at(&self, time: f64) -> Result<(Vec<i64>, u64)> {
        let idx = self.grid_index(time)?;
        let mut values = Vec::new();
        let mut excluded = 0u64;
        for rep in &self.replicas {
            let row = rep.rows[idx];
            match (rep.contaminated || row.contaminated, row.rho) {
                (false, Some(v)) => values.push(v),
                _ => excluded += 1,
            }
        }
        Ok((values, excluded))
    }

    /// Edge values at a grid time: `None` for contaminated replicas.
    pub fn r_at(&self, time: f64) -> Result<Vec<Option<f64>>> {
        let idx = self.grid_index(time)?;
        Ok(self
            .replicas
            .iter()
            .map(|rep| {
                let row = rep.rows[idx];
                if rep.contaminated || row.contaminated {
                    None
                } else {
                    row.r.map(|r| r as f64)
                }
            })
            .collect())
    }

    /// Tail table P(|rho_t| > L) over every grid time and every L in
    /// `l_grid`, with Wilson 95% intervals. Requires at least 30 usable
    /// replicas at each grid time.
    pub fn tail_estimates(&self, l_grid: &[i64]) -> Result<Vec<TailRow>> {
        if l_grid.is_empty() {
            return Err(SimError::InvalidConfig("tail table needs a nonempty L grid".into()));
        }
        let mut rows = Vec::with_capacity(self.config.grid.len() * l_grid.len());
        for &t in &self.config.grid {
            let (values, excluded) = self.rho_at(t)?;
            let n = values.len() as u64;
            if n < 30 {
                return Err(SimError::EmptySample(format!(
                    "tail estimate at t = {t} has only {n} usable replicas (need 30)"
                )));
            }
            for &l in l_grid {
                let count = values.iter().filter(|&&v| v.abs() > l).count() as u64;
                let p_hat = count as f64 / n as f64;
                let (ci_lo, ci_hi) = wilson(count, n, 1.96);
                rows.push(TailRow { time: t, l, count, n, excluded, p_hat, ci_lo, ci_hi });
            }
        }
        Ok(rows)
    }

    /// Edge-speed estimate at one grid time.
    pub fn speed_at(&self, time: f64) -> Result<SpeedEstimate> {
        speed_estimate(time, &self.r_at(time)?)
    }

    /// Fixed-schema CSV of every replica row (flagged rows included; the
    /// flag is a column, exclusion is the estimators' job).
    pub fn to_csv(&self) -> String {
        fn cell<T: std::fmt::Display>(v: Option<T>) -> String {
            v.map_or(String::new(), |x| x.to_string())
        }
        let mut s = String::from("replica,seed,time,r,l,rho,rho_plus,rho_minus,contaminated\n");
        for rep in &self.replicas {
            for row in &rep.rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    rep.index,
                    rep.seed,
                    row.time,
                    cell(row.r),
                    cell(row.l),
                    cell(row.rho),
                    cell(row.rho.map(|v| v.max(0))),
                    cell(row.rho.map(|v| (-v).max(0))),
                    row.contaminated as u8
                );
            }
        }
        s
    }

    /// Versioned summary: counts plus per-grid-time aggregates over
    /// uncontaminated replicas.
    pub fn summary_json(&self) -> Result<String> {
        let mut per_time = Vec::with_capacity(self.config.grid.len());
        for (idx, &t) in self.config.grid.iter().enumerate() {
            let mut rs = Vec::new();
            let mut rhos = Vec::new();
            for rep in &self.replicas {
                let row = rep.rows[idx];
                if rep.contaminated || row.contaminated {
                    continue;
                }
                if let Some(r) = row.r {
                    rs.push(r as f64);
                }
                if let Some(rho) = row.rho {
                    rhos.push(rho);
                }
            }
            let mean = |v: &[f64]| {
                if v.is_empty() {
                    None
                } else {
                    Some(v.iter().sum::<f64>() / v.len() as f64)
                }
            };
            let abs: Vec<f64> = rhos.iter().map(|&v| v.abs() as f64).collect();
            per_time.push(PerTimeSummary {
                time: t,
                n: rs.len().max(rhos.len()) as u64,
                mean_r: mean(&rs),
                mean_rho: mean(&rhos.iter().map(|&v| v as f64).collect::<Vec<_>>()),
                mean_abs_rho: mean(&abs),
                max_abs_rho: rhos.iter().map(|&v| v.abs()).max(),
            });
        }
        let summary = Summary {
            schema_version: SCHEMA_VERSION,
            config_hash: &self.config_hash,
            replicas: self.total(),
            contaminated: self.contaminated(),
            effective: self.effective(),
            grid: &self.config.grid,
            per_time,
        };
        serde_json::to_string_pretty(&summary)
            .map_err(|e| SimError::InvalidConfig(format!("summary serialization: {e}")))
    }

    /// Persist as a directory: `config.json`, `samples.csv`, `summary.json`.
    /// Each file goes to a temporary name first and is renamed into place.
    pub fn persist(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        write_atomically(&dir.join("config.json"), self.config.canonical_json().as_bytes())?;
        write_atomically(&dir.join("samples.csv"), self.to_csv().as_bytes())?;
        write_atomically(&dir.join("summary.json"), self.summary_json()?.as_bytes())?;
        Ok(())
    }
}

/// Write via a sibling temporary file and an atomic rename.
pub fn write_atomically(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().ok_or_else(|| {
        SimError::InvalidConfig(format!("output path {} has no parent directory", path.display()))
    })?;
    let name = path
        .file_name()
        .ok_or_else(|| SimError::InvalidConfig(format!("output path {} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
