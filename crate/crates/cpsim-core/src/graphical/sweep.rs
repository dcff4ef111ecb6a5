//! Forward reachability sweep over the sorted event list.
//!
//! Maintains the set R(t) of sites reachable from a source region along
//! infection paths: piecewise-constant trajectories that may jump only along
//! arrows and die on any death mark they sit on (endpoints included). The
//! processing rules, in composite event order:
//!
//!   * block activation at t0: the block's sites join R;
//!   * death at x at time r: x leaves R unless (x, r) is still covered by the
//!     source region (the point itself restarts a path);
//!   * arrow x -> y at r: if x is in R (or (x, r) is a source point), y joins R.
//!
//! Activations sort before deaths at equal times, and deaths before arrows
//! (kind order). A query at time t reflects every event with time <= t: a
//! death at exactly t kills, an arrow at exactly t delivers. With an `inside`
//! restriction every path must keep its whole image in the restriction, so
//! sources and arrow targets outside it are ignored.

use crate::error::{Result, SimError};
use crate::sites::SiteSet;

use super::events::{EventKind, HarrisEvents};
use super::region::SpaceTimeRegion;

/// Reached-site snapshots at the requested query times.
#[derive(Debug, Clone)]
pub struct ReachMap {
    pub query_times: Vec<f64>,
    pub snapshots: Vec<SiteSet>,
    /// True when the reach ever entered the window's exposed boundary band
    /// (within kernel range of an edge); observables may then be distorted
    /// by the truncation.
    pub touched_boundary: bool,
}

impl ReachMap {
    pub fn at(&self, i: usize) -> &SiteSet {
        &self.snapshots[i]
    }
}

/// Sites within kernel range of a window edge; arrows crossing the edge
/// (which the truncation dropped) would have touched exactly these.
pub fn boundary_band(h: &HarrisEvents) -> SiteSet {
    let (mut left, right) = boundary_bands(h);
    left.union_with(&right);
    left
}

/// The two edge bands separately (left, right).
pub fn boundary_bands(h: &HarrisEvents) -> (SiteSet, SiteSet) {
    let w = h.window();
    let m = h.kernel().range();
    let mut left = w.empty_set();
    left.insert_range(w.x_min, w.x_min + m - 1);
    let mut right = w.empty_set();
    right.insert_range(w.x_max - m + 1, w.x_max);
    (left, right)
}

/// Reach sets of `sources` at each of `query_times` (strictly ascending,
/// within [0, t_max]), optionally restricted to paths inside `inside`.
pub fn forward_closure(
    h: &HarrisEvents,
    sources: &SpaceTimeRegion,
    query_times: &[f64],
    inside: Option<&SiteSet>,
) -> Result<ReachMap> {
    let w = h.window();
    for pair in query_times.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(SimError::InvalidConfig("query times must be strictly ascending".into()));
        }
    }
    for &t in query_times {
        if !(0.0..=w.t_max).contains(&t) {
            return Err(SimError::QueryOutOfWindow(format!("query time {t} outside [0, {}]", w.t_max)));
        }
    }

    // Activation list: (t0, block index), ascending.
    let mut activations: Vec<(f64, usize)> =
        sources.blocks().iter().enumerate().map(|(i, b)| (b.t0, i)).collect();
    activations.sort_by(|a, b| a.0.total_cmp(&b.0));

    let band = boundary_band(h);
    let mut reached = w.empty_set();
    let mut touched = false;
    let events = h.events();
    let mut ei = 0usize;
    let mut ai = 0usize;
    let mut snapshots = Vec::with_capacity(query_times.len());

    let source_active = |x: i64, t: f64, inside: Option<&SiteSet>| -> bool {
        sources.active(x, t) && inside.is_none_or(|c| c.contains(x))
    };

    for &qt in query_times {
        loop {
            let next_act = activations.get(ai).map(|&(t, _)| t);
            let next_ev = events.get(ei).map(|e| e.time);
            // Activations first on ties: a block point exists at its own t0
            // before any event at that instant is resolved.
            let take_act = match (next_act, next_ev) {
                (Some(ta), Some(te)) => ta <= te && ta <= qt,
                (Some(ta), None) => ta <= qt,
                _ => false,
            };
            if take_act {
                let (_, bi) = activations[ai];
                ai += 1;
                let block = &sources.blocks()[bi];
                match inside {
                    None => reached.union_with(&block.sites),
                    Some(c) => {
                        let mut s = block.sites.clone();
                        s.intersect_with(c);
                        reached.union_with(&s);
                    }
                }
                if reached.intersects(&band) {
                    touched = true;
                }
                continue;
            }
            match events.get(ei) {
                Some(e) if e.time <= qt => {
                    ei += 1;
                    match e.kind {
                        EventKind::Death { site } => {
                            if !source_active(site, e.time, inside) {
                                reached.remove(site);
                            }
                        }
                        EventKind::Arrow { from, to } => {
                            let from_ok = reached.contains(from) || source_active(from, e.time, inside);
                            if from_ok && inside.is_none_or(|c| c.contains(to)) {
                                reached.insert(to);
                                if band.contains(to) {
                                    touched = true;
                                }
                            }
                        }
                    }
                }
                _ => break,
            }
        }
        snapshots.push(reached.clone());
    }
    Ok(ReachMap { query_times: query_times.to_vec(), snapshots, touched_boundary: touched })
}

/// Is there an infection path from (x, s) to (y, t)? Equal times demand equal
/// sites; reversed times are an error.
pub fn connects(h: &HarrisEvents, from: (i64, f64), to: (i64, f64)) -> Result<bool> {
    let (x, s) = from;
    let (y, t) = to;
    let w = h.window();
    if !w.contains(x, s) {
        return Err(SimError::QueryOutOfWindow(format!("source ({x}, {s})")));
    }
    if !w.contains(y, t) {
        return Err(SimError::QueryOutOfWindow(format!("target ({y}, {t})")));
    }
    if t < s {
        return Err(SimError::ReversedTimes { from: s, to: t });
    }
    if t == s {
        return Ok(x == y);
    }
    let sources = SpaceTimeRegion::point(w, x, s)?;
    let reach = forward_closure(h, &sources, &[t], None)?;
    Ok(reach.at(0).contains(y))
}
