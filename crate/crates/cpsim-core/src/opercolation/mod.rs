//! Oriented site percolation on the even sublattice: fields, open-path
//! reachability, the two-sided cone-avoiding path event, and empirical
//! closure estimation for dependent-field ensembles.

pub mod closure;
pub mod field;
pub mod gamma;
pub mod reach;

pub use closure::{closure_estimate, ClosureEstimate, MIN_TRIALS};
pub use field::{sample_field, PercField};
pub use gamma::{gamma_event, CellPath, GammaOutcome};
pub use reach::{open_reach, percolates_to, LevelSets};
