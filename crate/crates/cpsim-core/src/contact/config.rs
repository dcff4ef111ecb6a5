//! Initial configurations for trajectories.

use crate::error::{Result, SimError};
use crate::graphical::Window;
use crate::sites::SiteSet;

/// Occupancy on a window, with flags recording that the configuration is the
/// window truncation of a state extending to -infinity (left) or +infinity
/// (right). The flags drive edge sentinels: a left-filled trajectory whose
/// window empties has its right edge somewhere left of the window, not at
/// -infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub sites: SiteSet,
    pub left_filled: bool,
    pub right_filled: bool,
}

impl Configuration {
    pub fn from_sites(sites: SiteSet) -> Configuration {
        Configuration { sites, left_filled: false, right_filled: false }
    }

    /// Everything occupied (truncation of the all-ones state).
    pub fn all_ones(window: &Window) -> Configuration {
        Configuration { sites: window.full_set(), left_filled: true, right_filled: true }
    }

    /// Occupied exactly on (-inf, 0], truncated to the window.
    pub fn half_line_left(window: &Window) -> Configuration {
        Configuration { sites: window.range_set(window.x_min, 0), left_filled: true, right_filled: false }
    }

    /// A single occupied site.
    pub fn single(window: &Window, x: i64) -> Result<Configuration> {
        if !window.contains_site(x) {
            return Err(SimError::QueryOutOfWindow(format!("initial site {x}")));
        }
        let mut sites = window.empty_set();
        sites.insert(x);
        Ok(Configuration::from_sites(sites))
    }
}
