//! Space-time source regions: finite unions of (site set) x [t0, t1] blocks.
//!
//! A path may begin at any point of the region. Operationally a region site
//! counts as reached at every instant the region covers it — a death during
//! the covered interval does not un-reach it, because the point itself
//! restarts a path. Time intervals are closed on both ends.

use crate::error::{Result, SimError};
use crate::sites::SiteSet;

use super::window::Window;

#[derive(Debug, Clone)]
pub struct RegionBlock {
    pub sites: SiteSet,
    pub t0: f64,
    pub t1: f64,
}

#[derive(Debug, Clone)]
pub struct SpaceTimeRegion {
    blocks: Vec<RegionBlock>,
}

impl SpaceTimeRegion {
    pub fn new(window: &Window, blocks: Vec<RegionBlock>) -> Result<SpaceTimeRegion> {
        for b in &blocks {
            if !(b.t0 <= b.t1) {
                return Err(SimError::InvalidConfig(format!(
                    "region block with t0 {} > t1 {}",
                    b.t0, b.t1
                )));
            }
            if b.t0 < 0.0 || b.t1 > window.t_max {
                return Err(SimError::QueryOutOfWindow(format!(
                    "region block [{}, {}] outside [0, {}]",
                    b.t0, b.t1, window.t_max
                )));
            }
            if b.sites.x_min() != window.x_min || b.sites.width() != window.n_sites() {
                return Err(SimError::InvalidConfig("region sites shaped for a different window".into()));
            }
        }
        Ok(SpaceTimeRegion { blocks })
    }

    /// Single point (x, t).
    pub fn point(window: &Window, x: i64, t: f64) -> Result<SpaceTimeRegion> {
        if !window.contains(x, t) {
            return Err(SimError::QueryOutOfWindow(format!("point ({x}, {t})")));
        }
        let mut sites = window.empty_set();
        sites.insert(x);
        SpaceTimeRegion::new(window, vec![RegionBlock { sites, t0: t, t1: t }])
    }

    /// A set of sites at one instant.
    pub fn sites_at(window: &Window, sites: SiteSet, t: f64) -> Result<SpaceTimeRegion> {
        SpaceTimeRegion::new(window, vec![RegionBlock { sites, t0: t, t1: t }])
    }

    /// A set of sites held as a source throughout [t0, t1].
    pub fn band(window: &Window, sites: SiteSet, t0: f64, t1: f64) -> Result<SpaceTimeRegion> {
        SpaceTimeRegion::new(window, vec![RegionBlock { sites, t0, t1 }])
    }

    pub fn blocks(&self) -> &[RegionBlock] {
        &self.blocks
    }

    pub fn contains(&self, x: i64, t: f64) -> bool {
        self.blocks
            .iter()
            .any(|b| t >= b.t0 && t <= b.t1 && b.sites.contains(x))
    }

    /// True when some block covers (x, t); cheap form used inside the sweep.
    #[inline]
    pub fn active(&self, x: i64, t: f64) -> bool {
        self.contains(x, t)
    }

    /// Earliest activation time of any block.
    pub fn earliest(&self) -> Option<f64> {
        self.blocks.iter().map(|b| b.t0).min_by(f64::total_cmp)
    }
}
