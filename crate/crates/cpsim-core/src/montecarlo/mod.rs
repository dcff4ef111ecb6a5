//! Replica orchestration and statistical reporting: experiment configs,
//! deterministic replica batches, sample stores with estimation tables,
//! and small fitting helpers.

pub mod experiment;
pub mod stats;
pub mod store;

pub use experiment::{run_experiment, ContaminationPolicy, ExperimentConfig, KernelSpec, Observable};
pub use stats::{decay_fit, mean_ci, wilson, DecayFit, DecayTransform};
pub use store::{
    speed_estimate, write_atomically, ReplicaRecord, SampleRow, SampleStore, SpeedEstimate,
    TailRow, SCHEMA_VERSION,
};
