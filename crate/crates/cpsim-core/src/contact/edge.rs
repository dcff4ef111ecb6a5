//! Right-edge observables at event resolution.
//!
//! The right edge of a trajectory only moves when an event touches a site
//! within kernel range of it, so recording the edge at its change points is
//! exact — no grid sampling. That exactness is what lets the speed bound
//! "edge at or below gamma * t for all t up to T" be checked by inspecting
//! finitely many times: the edge is constant between entries while the bound
//! grows, so a violation anywhere implies one at an entry time.
//!
//! Truncation flags mirror the interface module's reasoning: the computed
//! state under-approximates the true one, and everything the dropped outside
//! world could add is reachable from an always-active edge band. For a
//! left-tail-filled start the run is flagged once the left-band closure holds
//! sites right of the edge, the edge enters the right band (out-and-back
//! paths), or the in-window state dies (the true one cannot). Finite starts
//! have no outside occupation, so they are flagged only when their own
//! occupation reaches a band (re-entry becomes possible).

use crate::error::{Result, SimError};
use crate::graphical::sweep::boundary_bands;
use crate::graphical::{EventKind, HarrisEvents};

use super::config::Configuration;

/// Right-edge positions at their change points. `values[i]` holds from
/// `times[i]` until the next entry; `None` means the state is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSeries {
    pub times: Vec<f64>,
    pub values: Vec<Option<i64>>,
    pub contaminated: bool,
}

impl EdgeSeries {
    /// Edge value in force at time `t` (entries are change points).
    pub fn value_at(&self, t: f64) -> Option<i64> {
        let mut cur = None;
        for (time, v) in self.times.iter().zip(&self.values) {
            if *time > t {
                break;
            }
            cur = *v;
        }
        cur
    }

    /// Largest edge value attained at or before `t`; `None` if the state was
    /// always empty.
    pub fn max_edge_up_to(&self, t: f64) -> Option<i64> {
        self.times
            .iter()
            .zip(&self.values)
            .take_while(|(time, _)| **time <= t)
            .filter_map(|(_, v)| *v)
            .max()
    }

    /// True when every recorded edge position respects value <= gamma * time.
    pub fn is_gamma_slow(&self, gamma: f64) -> bool {
        self.times
            .iter()
            .zip(&self.values)
            .all(|(t, v)| v.map_or(true, |r| r as f64 <= gamma * t))
    }
}

/// Track the right edge of `init` through `h` up to `t_end`, recording every
/// change. The first entry is at time 0.
pub fn edge_series(h: &HarrisEvents, init: &Configuration, t_end: f64) -> Result<EdgeSeries> {
    let w = h.window();
    if !(t_end > 0.0 && t_end <= w.t_max) {
        return Err(SimError::QueryOutOfWindow(format!("t_end {t_end} outside (0, {}]", w.t_max)));
    }
    if init.sites.x_min() != w.x_min || init.sites.width() != w.n_sites() {
        return Err(SimError::InvalidConfig("initial state shaped for a different window".into()));
    }
    if init.right_filled {
        return Err(SimError::InvalidConfig(
            "right-tail-filled configurations have no finite right edge".into(),
        ));
    }

    let (band_l, band_r) = boundary_bands(h);
    let band_r_min = band_r.min_site().expect("nonempty band");
    let mut state = init.sites.clone();
    let mut clo_l = band_l.clone();
    let tail_filled = init.left_filled;

    let mut series = EdgeSeries {
        times: vec![0.0],
        values: vec![state.max_site()],
        contaminated: false,
    };
    let mut edge = state.max_site();
    let check = |edge: Option<i64>, state: &crate::sites::SiteSet, clo_l: &crate::sites::SiteSet| {
        if tail_filled {
            match edge {
                None => true,
                Some(r) => r >= band_r_min || clo_l.max_site().map_or(false, |m| m > r),
            }
        } else {
            state.intersects(&band_l) || state.intersects(&band_r)
        }
    };
    series.contaminated = check(edge, &state, &clo_l);

    for e in h.events() {
        if e.time > t_end {
            break;
        }
        match e.kind {
            EventKind::Death { site } => {
                state.remove(site);
                if !band_l.contains(site) {
                    clo_l.remove(site);
                }
            }
            EventKind::Arrow { from, to } => {
                if state.contains(from) {
                    state.insert(to);
                }
                if clo_l.contains(from) {
                    clo_l.insert(to);
                }
            }
        }
        let new_edge = state.max_site();
        if new_edge != edge {
            edge = new_edge;
            series.times.push(e.time);
            series.values.push(edge);
        }
        series.contaminated |= check(edge, &state, &clo_l);
    }
    Ok(series)
}

/// Prefix maxima of an edge series, recorded at their own change points.
pub fn running_max_edge(series: &EdgeSeries) -> EdgeSeries {
    let mut out = EdgeSeries { times: Vec::new(), values: Vec::new(), contaminated: series.contaminated };
    let mut best: Option<i64> = None;
    for (t, v) in series.times.iter().zip(&series.values) {
        let next = match (best, *v) {
            (None, v) => v,
            (Some(b), Some(v)) => Some(b.max(v)),
            (b, None) => b,
        };
        if next != best || out.times.is_empty() {
            best = next;
            out.times.push(*t);
            out.values.push(best);
        }
    }
    out
}

/// Whether the half-line-start edge stays at or below `gamma * t` for every
/// t in [0, T], checked exactly at its change points.
pub fn is_gamma_slow(h: &HarrisEvents, gamma: f64, t_end: f64) -> Result<bool> {
    let init = Configuration::half_line_left(h.window());
    let series = edge_series(h, &init, t_end)?;
    if series.contaminated {
        return Err(SimError::ContaminatedRun("edge run touched the window guard band".into()));
    }
    Ok(series.is_gamma_slow(gamma))
}

/// Whether an infection path from the half-line at time 0 reaches
/// [0, l_target] at `t_end` while staying inside the half-line.
///
/// `include_origin` selects which half-line: true keeps {x >= 0} (sources
/// [0, x_max]), false keeps the strictly positive variant {x >= 1} (sources
/// [1, x_max]). Both readings of "inside the right half-line" are exposed;
/// results for the two bracket the intended event.
///
/// Truncation only removes paths, so a computed hit is certain. A computed
/// miss is certain only when no path entering through the right edge band
/// could have reached the target either; otherwise the run errs out as
/// contaminated. The left edge never matters: the inside restriction already
/// cuts everything left of the half-line.
pub fn right_path_inside_event(
    h: &HarrisEvents,
    l_target: i64,
    t_end: f64,
    include_origin: bool,
) -> Result<bool> {
    use crate::graphical::{forward_closure, RegionBlock, SpaceTimeRegion};
    let w = h.window();
    let lo = if include_origin { 0 } else { 1 };
    if w.x_min > lo || w.x_max < l_target || l_target < lo {
        return Err(SimError::InvalidWindow(format!(
            "window must cover [{lo}, {l_target}] for the right-path event"
        )));
    }
    if !(t_end > 0.0 && t_end <= w.t_max) {
        return Err(SimError::QueryOutOfWindow(format!("t_end {t_end} outside (0, {}]", w.t_max)));
    }
    let inside = w.range_set(lo, w.x_max);
    let target_sites = w.range_set(lo, l_target);

    let sources = SpaceTimeRegion::new(
        w,
        vec![RegionBlock { sites: w.range_set(lo, w.x_max), t0: 0.0, t1: 0.0 }],
    )?;
    let reach = forward_closure(h, &sources, &[t_end], Some(&inside))?;
    let mut hit = reach.at(0).clone();
    hit.intersect_with(&target_sites);
    if !hit.is_empty() {
        return Ok(true);
    }

    // Could a dropped path re-enter through the right band and still make it?
    let (_, band_r) = boundary_bands(h);
    let band_sources = SpaceTimeRegion::band(w, band_r, 0.0, t_end)?;
    let leak = forward_closure(h, &band_sources, &[t_end], Some(&inside))?;
    let mut leak_hit = leak.at(0).clone();
    leak_hit.intersect_with(&target_sites);
    if !leak_hit.is_empty() {
        return Err(SimError::ContaminatedRun(
            "right-path miss not certifiable: a path through the right edge could hit".into(),
        ));
    }
    Ok(false)
}
