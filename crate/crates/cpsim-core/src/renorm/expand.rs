//! The expanding-origin event: local transmission conditions on [0, 1]
//! plus block-level percolation of the shifted construction.
//!
//! The origin is expanding up to horizon index `i` when four things hold:
//!
//! 1. transmission — whenever any source point (x, 0), x != y, infects a
//!    site y of I_{-2} u I_0 u I_2 at a time t <= 1, the origin (0, 0)
//!    infects (y, t) as well;
//! 2. no-death — the origin's death clock is silent on [0, 1];
//! 3. full descent — (0, 0) reaches (z, 1) for every z in the three
//!    intervals;
//! 4. percolation — the psi field of the construction shifted to start at
//!    time 1 realizes the two-sided escape event up to level `i`.
//!
//! Checks 1-3 only read events on [0, 1]; `expand_local_conditions` exposes
//! them separately as a cheap rejection stage before the field computation.
//! Transmission and full descent are decided exactly by set closures updated
//! at event times: memberships are constant between events, so checking
//! after each event covers every real time.

use serde::Serialize;

use crate::error::{Result, SimError};
use crate::graphical::{EventKind, HarrisEvents};
use crate::opercolation::gamma_event;

use super::field::block_field;
use super::geometry::{BlockParams, LambdaWindow};

/// Outcome of the expanding-origin test, one boolean per condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpandReport {
    pub cond_transmission: bool,
    pub cond_no_death: bool,
    pub cond_full_descent: bool,
    pub cond_percolation: bool,
    pub horizon_i: i64,
    pub overall: bool,
}

/// The three on-[0, 1] conditions, in report order: (transmission,
/// no-death, full descent). Cheap relative to the field computation — one
/// sweep over the events of [0, 1] — so callers doing rejection sampling
/// should consult this before `is_beta_expanding`.
pub fn expand_local_conditions(h: &HarrisEvents, params: &BlockParams) -> Result<(bool, bool, bool)> {
    params.validate_for_kernel(h.kernel())?;
    let w = h.window();
    let (lo2, _) = params.interval_sites(-2);
    let (_, hi2) = params.interval_sites(2);
    if lo2 < w.x_min || hi2 > w.x_max || w.t_max < 1.0 {
        return Err(SimError::WindowCoverage(format!(
            "expanding-origin test needs sites [{lo2}, {hi2}] through time 1, window is [{}, {}] x [0, {}]",
            w.x_min, w.x_max, w.t_max
        )));
    }

    let cond_no_death = h.deaths_at(0, 0.0, 1.0).is_empty();

    // Target sites: the three intervals around the origin.
    let mut targets = Vec::new();
    for m in [-2i64, 0, 2] {
        let (lo, hi) = params.interval_sites(m);
        targets.extend(lo..=hi);
    }

    // Origin closure O and, per target y, the closure D(y) of every site
    // except y. A transmission violation is y in D(y) \ O after some event.
    let mut origin = w.empty_set();
    origin.insert(0);
    let mut tracks: Vec<(i64, crate::sites::SiteSet)> = targets
        .iter()
        .map(|&y| {
            let mut d = w.full_set();
            d.remove(y);
            (y, d)
        })
        .collect();

    let mut cond_transmission = true;
    for e in h.events_between(0.0, 1.0) {
        match e.kind {
            EventKind::Death { site } => {
                origin.remove(site);
                if cond_transmission {
                    for (_, d) in tracks.iter_mut() {
                        d.remove(site);
                    }
                }
            }
            EventKind::Arrow { from, to } => {
                if origin.contains(from) {
                    origin.insert(to);
                }
                if cond_transmission {
                    for (_, d) in tracks.iter_mut() {
                        if d.contains(from) {
                            d.insert(to);
                        }
                    }
                }
            }
        }
        if cond_transmission {
            for (y, d) in tracks.iter() {
                if d.contains(*y) && !origin.contains(*y) {
                    cond_transmission = false;
                    break;
                }
            }
        }
    }

    let cond_full_descent = targets.iter().all(|&z| origin.contains(z));
    Ok((cond_transmission, cond_no_death, cond_full_descent))
}

/// Full expanding-origin test up to horizon index `horizon_i` >= 1. The
/// percolation condition computes the block field of the construction
/// shifted by (0, 1) on a lattice window wide and tall enough for every
/// escape path up to level `horizon_i`, which requires the underlying
/// window to cover time 1 + KN(horizon_i + 1); shortfalls are errors.
pub fn is_beta_expanding(
    h: &HarrisEvents,
    params: &BlockParams,
    horizon_i: i64,
) -> Result<ExpandReport> {
    if horizon_i < 1 {
        return Err(SimError::InvalidConfig(format!(
            "horizon index must be >= 1, got {horizon_i}"
        )));
    }
    let (cond_transmission, cond_no_death, cond_full_descent) = expand_local_conditions(h, params)?;
    let shifted = h.shift(0, 1.0)?;
    let lw = LambdaWindow::new(horizon_i + 2, horizon_i)?;
    let field = block_field(&shifted, params, lw)?;
    let perc = field.to_perc_field()?;
    let outcome = gamma_event(&perc, params.beta, horizon_i)?;
    Ok(ExpandReport {
        cond_transmission,
        cond_no_death,
        cond_full_descent,
        cond_percolation: outcome.holds,
        horizon_i,
        overall: cond_transmission && cond_no_death && cond_full_descent && outcome.holds,
    })
}
