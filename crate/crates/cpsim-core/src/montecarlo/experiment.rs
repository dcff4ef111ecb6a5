//! Experiment configuration and the replica driver.
//!
//! An experiment is a batch of independent replicas: each replica samples
//! its own event set from a per-replica seed (`seed_base ^ index`, fed to
//! the counter-based stream keying, so streams never collide) and evolves
//! the requested observables on a shared time grid. Everything downstream
//! of the configuration is deterministic: rerunning a config reproduces
//! every replica bit for bit, regardless of thread count, because replica
//! results are reduced in index order.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::contact::{edge_series, interface_series, Configuration};
use crate::error::{Result, SimError};
use crate::graphical::{sample_harris, Kernel, Window};

use super::store::{ReplicaRecord, SampleRow, SampleStore};

/// Serializable description of an infection kernel; the validated runtime
/// form is built on demand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    /// Total arrow rate per site (the kernel weights sum to one).
    pub lambda: f64,
    /// (displacement, probability) pairs; symmetric and summing to one.
    pub weights: Vec<(i64, f64)>,
}

impl KernelSpec {
    pub fn nearest_neighbor(lambda: f64) -> KernelSpec {
        KernelSpec { lambda, weights: vec![(-1, 0.5), (1, 0.5)] }
    }

    pub fn uniform(lambda: f64, range: i64) -> Result<KernelSpec> {
        Ok(KernelSpec::from_kernel(&Kernel::uniform(lambda, range)?))
    }

    pub fn from_kernel(k: &Kernel) -> KernelSpec {
        KernelSpec { lambda: k.lambda(), weights: k.weights().to_vec() }
    }

    pub fn build(&self) -> Result<Kernel> {
        Kernel::from_weights(self.lambda, &self.weights)
    }
}

/// Observables computed per replica. The half-line right edge `r` is shared:
/// it is a column of the interface statistics and the whole of the edge ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// Coupled half-line/full-lattice run: r, l, rho per grid time.
    Interface,
    /// Half-line run only: r per grid time.
    Edge,
}

/// What to do when truncation contaminates a replica.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ContaminationPolicy {
    /// Keep the replica, flagged; estimators exclude it and report counts.
    #[default]
    Discard,
    /// Fail the whole experiment on the first contaminated replica.
    Abort,
}

/// Full description of a replica batch. Serializes to the canonical JSON
/// that is hashed for provenance and persisted as `config.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kernel: KernelSpec,
    /// Horizon of every replica's window.
    pub t_max: f64,
    /// Sampling times, strictly ascending, within [0, t_max].
    pub grid: Vec<f64>,
    pub replicas: u64,
    pub seed_base: u64,
    /// Half-width of the lattice window; `None` picks the default guard
    /// band, wide enough that influence from the cut edges rarely reaches
    /// the observables within the horizon.
    #[serde(default)]
    pub guard: Option<i64>,
    pub observables: Vec<Observable>,
    #[serde(default)]
    pub contamination: ContaminationPolicy,
}

impl ExperimentConfig {
    /// Default window half-width: edge influence travels at most one kernel
    /// range per arrow, at total rate lambda, so `lambda * M * t_max` sites
    /// bound the mean drift; four extra ranges of slack cover fluctuations
    /// cheaply. Contamination flags remain the correctness mechanism — the
    /// guard band only controls how often they fire.
    pub fn default_guard(kernel: &KernelSpec, t_max: f64) -> i64 {
        let m = kernel.weights.iter().map(|(d, _)| d.abs()).max().unwrap_or(1).max(1);
        (kernel.lambda * m as f64 * t_max).ceil() as i64 + 4 * m
    }

    pub fn guard_band(&self) -> i64 {
        self.guard.unwrap_or_else(|| Self::default_guard(&self.kernel, self.t_max))
    }

    pub fn window(&self) -> Result<Window> {
        let g = self.guard_band();
        Window::new(-g, g, self.t_max)
    }

    pub fn validate(&self) -> Result<()> {
        self.kernel.build()?;
        if self.replicas == 0 {
            return Err(SimError::InvalidConfig("experiment needs at least one replica".into()));
        }
        if self.grid.is_empty() {
            return Err(SimError::InvalidConfig("experiment needs a nonempty time grid".into()));
        }
        for pair in self.grid.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(SimError::InvalidConfig("time grid must be strictly ascending".into()));
            }
        }
        let first = self.grid[0];
        let last = *self.grid.last().unwrap();
        if !(first >= 0.0 && last <= self.t_max) {
            return Err(SimError::InvalidConfig(format!(
                "time grid [{first}, {last}] escapes the horizon [0, {}]",
                self.t_max
            )));
        }
        if self.observables.is_empty() {
            return Err(SimError::InvalidConfig("experiment needs at least one observable".into()));
        }
        let mut seen = self.observables.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.observables.len() {
            return Err(SimError::InvalidConfig("duplicate observables in the list".into()));
        }
        if self.guard_band() < 1 {
            return Err(SimError::InvalidConfig("guard band must be at least 1".into()));
        }
        self.window()?.validate()
    }

    /// Canonical serialized form: serde field order with shortest
    /// round-trip float formatting, so equal configs hash equally.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Hex SHA-256 of the canonical form; identifies the experiment in
    /// stores, summaries, and console output.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical_json().as_bytes());
        let digest = hasher.finalize();
        let mut s = String::with_capacity(64);
        for b in digest {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }

    /// Seed of replica `i` under the disjoint-stream scheme.
    pub fn replica_seed(&self, i: u64) -> u64 {
        self.seed_base ^ i
    }
}

fn run_replica(cfg: &ExperimentConfig, kernel: &Kernel, window: &Window, i: u64) -> Result<ReplicaRecord> {
    let seed = cfg.replica_seed(i);
    let h = sample_harris(kernel, window, seed)?;
    let want_interface = cfg.observables.contains(&Observable::Interface);
    let mut rows = Vec::with_capacity(cfg.grid.len());
    let mut contaminated = false;
    if want_interface {
        let series = interface_series(&h, &cfg.grid)?;
        for row in &series.rows {
            // Sentinel coordinates (died / no disagreement in window) carry
            // no usable value; rows holding them are already flagged.
            let r = (row.r >= window.x_min).then_some(row.r);
            let l = (row.l <= window.x_max).then_some(row.l);
            let rho = r.zip(l).map(|(r, l)| r - l);
            rows.push(SampleRow { time: row.time, r, l, rho, contaminated: row.contaminated });
            contaminated |= row.contaminated;
        }
    } else {
        let init = Configuration::half_line_left(window);
        let series = edge_series(&h, &init, cfg.t_max)?;
        for &t in &cfg.grid {
            let r = series.value_at(t);
            let flagged = series.contaminated || r.is_none();
            rows.push(SampleRow { time: t, r, l: None, rho: None, contaminated: flagged });
            contaminated |= flagged;
        }
    }
    if contaminated && cfg.contamination == ContaminationPolicy::Abort {
        return Err(SimError::ContaminatedRun(format!(
            "replica {i} (seed {seed}) touched the window guard band"
        )));
    }
    Ok(ReplicaRecord { index: i, seed, contaminated, rows })
}

/// Run every replica of `cfg` and collect the results in index order.
///
/// `threads` = 1 runs sequentially; 0 uses the process-wide default pool;
/// any other value builds a dedicated pool of that size. The store is
/// identical in all cases: replicas share no state and the reduction is by
/// index.
///
/// Errors: invalid config; a contaminated replica under the abort policy
/// (the lowest-index offender is reported); every replica contaminated
/// under the discard policy.
pub fn run_experiment(cfg: &ExperimentConfig, threads: usize) -> Result<SampleStore> {
    cfg.validate()?;
    let kernel = cfg.kernel.build()?;
    let window = cfg.window()?;

    let run = |i: u64| run_replica(cfg, &kernel, &window, i);
    let results: Vec<Result<ReplicaRecord>> = if threads == 1 {
        (0..cfg.replicas).map(run).collect()
    } else {
        use rayon::prelude::*;
        let work = || (0..cfg.replicas).into_par_iter().map(run).collect();
        if threads == 0 {
            work()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| SimError::InvalidConfig(format!("thread pool: {e}")))?;
            pool.install(work)
        }
    };

    let mut records = Vec::with_capacity(results.len());
    for res in results {
        records.push(res?);
    }
    if records.iter().all(|r| r.contaminated) {
        return Err(SimError::ContaminatedRun(
            "every replica was contaminated; enlarge the guard band".into(),
        ));
    }
    Ok(SampleStore { config: cfg.clone(), config_hash: cfg.hash(), replicas: records })
}
