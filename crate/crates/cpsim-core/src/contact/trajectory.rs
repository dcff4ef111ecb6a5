//! Trajectories driven by a realized event set.
//!
//! All initial states evolve through the same events — the standard coupling.
//! Pathwise consequences used throughout: occupancy is additive over initial
//! states (the trajectory of a union is the union of trajectories) and
//! monotone (a larger initial state stays larger forever).

use crate::error::{Result, SimError};
use crate::graphical::sweep::boundary_band;
use crate::graphical::{EventKind, HarrisEvents};

use super::config::Configuration;

/// Sampled occupancy states of one initial configuration.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Configuration>,
    /// True when occupancy ever entered the window's exposed boundary band;
    /// from then on the truncation may distort this trajectory.
    pub contaminated: bool,
}

/// Evolve several initial states through the same events, sampling each at
/// `sample_times` (ascending, within [0, t_max]).
pub fn couple(
    h: &HarrisEvents,
    inits: &[Configuration],
    sample_times: &[f64],
) -> Result<Vec<Trajectory>> {
    let w = h.window();
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
    for init in inits {
        if init.sites.x_min() != w.x_min || init.sites.width() != w.n_sites() {
            return Err(SimError::InvalidConfig("initial state shaped for a different window".into()));
        }
    }

    let band = boundary_band(h);
    let mut tracks: Vec<_> = inits.iter().map(|c| c.sites.clone()).collect();
    // A left/right-filled start occupies its band by construction; that is
    // not contamination, so the flag only reacts to band *entries* below.
    let mut out: Vec<Trajectory> = inits
        .iter()
        .map(|_| Trajectory { times: Vec::new(), states: Vec::new(), contaminated: false })
        .collect();

    let events = h.events();
    let mut ei = 0usize;
    for &qt in sample_times {
        while let Some(e) = events.get(ei) {
            if e.time > qt {
                break;
            }
            ei += 1;
            match e.kind {
                EventKind::Death { site } => {
                    for track in tracks.iter_mut() {
                        track.remove(site);
                    }
                }
                EventKind::Arrow { from, to } => {
                    for (k, track) in tracks.iter_mut().enumerate() {
                        if track.contains(from) && !track.contains(to) {
                            track.insert(to);
                            if band.contains(to) {
                                out[k].contaminated = true;
                            }
                        }
                    }
                }
            }
        }
        for (k, track) in tracks.iter().enumerate() {
            out[k].times.push(qt);
            out[k].states.push(Configuration {
                sites: track.clone(),
                left_filled: inits[k].left_filled,
                right_filled: inits[k].right_filled,
            });
        }
    }
    Ok(out)
}

/// Evolve a single initial state.
pub fn evolve(h: &HarrisEvents, init: &Configuration, sample_times: &[f64]) -> Result<Trajectory> {
    Ok(couple(h, std::slice::from_ref(init), sample_times)?.pop().unwrap())
}
