//! Three-state competition process on the window sites.
//!
//! Each site carries a value in {0, 1, 2}: vacant, first-class occupied,
//! second-class occupied. Deaths vacate; an arrow x -> y propagates x's class
//! to y unless y already holds a stronger one — 1s displace 2s, 2s never
//! displace 1s, nothing spreads from vacant sites. Started from 1s on
//! (-inf, 0] and 2s on (0, inf), the 2s at any time are exactly the sites
//! occupied in the fully-started trajectory but not in the half-line one, so
//! this process carries the interface information in a single state.

use crate::error::{Result, SimError};
use crate::graphical::{EventKind, HarrisEvents, Window};
use crate::sites::SiteSet;

use super::trajectory::Trajectory;

/// Initial assignment of classes; `ones` and `twos` are disjoint site sets
/// shaped to the same window, everything else is vacant.
#[derive(Debug, Clone)]
pub struct ChiConfig {
    pub ones: SiteSet,
    pub twos: SiteSet,
}

impl ChiConfig {
    pub fn new(ones: SiteSet, twos: SiteSet) -> Result<Self> {
        if ones.x_min() != twos.x_min() || ones.width() != twos.width() {
            return Err(SimError::InvalidConfig("class sets shaped for different windows".into()));
        }
        if ones.intersects(&twos) {
            return Err(SimError::InvalidConfig("class sets must be disjoint".into()));
        }
        Ok(ChiConfig { ones, twos })
    }

    /// 1s on x <= 0, 2s on x > 0 (clipped to the window).
    pub fn standard(w: &Window) -> Self {
        ChiConfig { ones: w.range_set(w.x_min, 0), twos: w.range_set(1, w.x_max) }
    }
}

/// Class assignments sampled on a time grid.
#[derive(Debug, Clone)]
pub struct ChiTrajectory {
    pub times: Vec<f64>,
    pub ones: Vec<SiteSet>,
    pub twos: Vec<SiteSet>,
}

impl ChiTrajectory {
    /// Class of site `x` at sample index `i`.
    pub fn class_at(&self, i: usize, x: i64) -> u8 {
        if self.ones[i].contains(x) {
            1
        } else if self.twos[i].contains(x) {
            2
        } else {
            0
        }
    }

    /// Leftmost site of class 2 at sample index `i`.
    pub fn min_two(&self, i: usize) -> Option<i64> {
        self.twos[i].min_site()
    }
}

/// Evolve the three-state process by direct application of the update rules.
pub fn chi_direct(h: &HarrisEvents, init: &ChiConfig, sample_times: &[f64]) -> Result<ChiTrajectory> {
    let w = h.window();
    if init.ones.x_min() != w.x_min || init.ones.width() != w.n_sites() {
        return Err(SimError::InvalidConfig("class sets shaped for a different window".into()));
    }
    for pair in sample_times.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(SimError::InvalidConfig("sample times must be strictly ascending".into()));
        }
    }
    for &t in sample_times {
        if !(0.0..=w.t_max).contains(&t) {
            return Err(SimError::QueryOutOfWindow(format!("sample time {t} outside [0, {}]", w.t_max)));
        }
    }

    let mut ones = init.ones.clone();
    let mut twos = init.twos.clone();
    let events = h.events();
    let mut ei = 0usize;
    let mut out = ChiTrajectory { times: Vec::new(), ones: Vec::new(), twos: Vec::new() };
    for &qt in sample_times {
        while let Some(e) = events.get(ei) {
            if e.time > qt {
                break;
            }
            ei += 1;
            match e.kind {
                EventKind::Death { site } => {
                    ones.remove(site);
                    twos.remove(site);
                }
                EventKind::Arrow { from, to } => {
                    if ones.contains(from) {
                        if !ones.contains(to) {
                            twos.remove(to);
                            ones.insert(to);
                        }
                    } else if twos.contains(from) && !ones.contains(to) && !twos.contains(to) {
                        twos.insert(to);
                    }
                }
            }
        }
        out.times.push(qt);
        out.ones.push(ones.clone());
        out.twos.push(twos.clone());
    }
    Ok(out)
}

/// Recode a coupled pair of trajectories (lower inside upper) as classes:
/// 1 where the lower is occupied, 2 where only the upper is, 0 elsewhere.
pub fn chi_from_coupling(lower: &Trajectory, upper: &Trajectory) -> Result<ChiTrajectory> {
    if lower.times != upper.times {
        return Err(SimError::InvalidConfig("trajectories sampled on different grids".into()));
    }
    let mut out = ChiTrajectory { times: lower.times.clone(), ones: Vec::new(), twos: Vec::new() };
    for (lo, up) in lower.states.iter().zip(&upper.states) {
        if !lo.sites.is_subset_of(&up.sites) {
            return Err(SimError::InvalidConfig("lower trajectory not inside upper".into()));
        }
        let mut twos = up.sites.clone();
        twos.subtract(&lo.sites);
        out.ones.push(lo.sites.clone());
        out.twos.push(twos);
    }
    Ok(out)
}
