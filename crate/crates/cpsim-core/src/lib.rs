//! Simulator for the one-dimensional finite-range contact process, built on
//! the graphical construction: death marks and infection arrows realized as
//! keyed Poisson streams on a space-time window.
//!
//! Layers, bottom to top:
//!
//! * [`graphical`] — event sampling, shifts, and reachability sweeps;
//! * [`contact`] — trajectories, coupled evolutions, interface statistics;
//! * [`renorm`] — block conditions on space-time cells, expansion and
//!   barrier checks built from them;
//! * [`opercolation`] — oriented site percolation on the block lattice;
//! * [`montecarlo`] — replica harness, estimators, and sample stores.

pub mod contact;
pub mod error;
pub mod graphical;
pub mod montecarlo;
pub mod opercolation;
pub mod renorm;
pub mod sites;
pub mod streams;

pub use error::{Result, SimError};
