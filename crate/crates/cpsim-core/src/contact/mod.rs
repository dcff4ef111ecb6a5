//! Contact-process trajectories over a realized event set: coupled
//! evolution, interface statistics, edge observables, and the three-state
//! competition recoding.

pub mod chi;
pub mod config;
pub mod edge;
pub mod interface;
pub mod trajectory;

pub use chi::{chi_direct, chi_from_coupling, ChiConfig, ChiTrajectory};
pub use config::Configuration;
pub use edge::{
    edge_series, is_gamma_slow, right_path_inside_event, running_max_edge, EdgeSeries,
};
pub use interface::{interface_series, InterfaceRow, InterfaceSeries};
pub use trajectory::{couple, evolve, Trajectory};
