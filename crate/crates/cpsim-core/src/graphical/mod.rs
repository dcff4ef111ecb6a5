//! Graphical construction of the contact process: Poisson death marks and
//! infection arrows on a space-time window, plus reachability along
//! infection paths.

pub mod events;
pub mod kernel;
pub mod oracle;
pub mod region;
pub mod sweep;
pub mod window;

pub use events::{sample_harris, Event, EventKind, HarrisEvents};
pub use kernel::Kernel;
pub use oracle::{brute_force_connects, DEFAULT_ORACLE_CAP};
pub use region::{RegionBlock, SpaceTimeRegion};
pub use sweep::{boundary_band, boundary_bands, connects, forward_closure, ReachMap};
pub use window::Window;
