//! Independent recomputation of a single cell's block conditions.
//!
//! Two implementations that share nothing with the field sweep beyond the
//! event list itself: an exhaustive path-search check for constructions
//! small enough for the oracle (every reachability claim re-derived by
//! enumerating paths), and a dense boolean-array replay for everything else.
//! The report notes which one ran.

use serde::Serialize;

use crate::error::Result;
use crate::graphical::{brute_force_connects, EventKind, HarrisEvents, DEFAULT_ORACLE_CAP};

use super::geometry::BlockParams;

/// Per-condition outcome for one cell. `local_ok` is the conjunction; the
/// parent gate of rows n >= 1 is recursion bookkeeping, not a local
/// condition, and is left to the field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub cell: (i64, i64),
    pub no_vacancy: bool,
    pub descendancy: bool,
    pub no_intrusion: bool,
    pub local_ok: bool,
    /// True when the exhaustive path search did the reachability work; false
    /// means the construction exceeded the oracle cap and the dense replay
    /// ran instead.
    pub brute_force: bool,
}

/// Largest event count (up to the slab end) handed to the exhaustive search.
pub const VERIFY_ORACLE_CAP: usize = DEFAULT_ORACLE_CAP;

/// Re-derive the local conditions of `cell` from scratch and report each
/// one. Agreement with `block_field` (local_ok == (phi == 1) wherever the
/// parent gate passed) is the dual-implementation correctness check.
pub fn verify_block_cell(
    h: &HarrisEvents,
    params: &BlockParams,
    cell: (i64, i64),
) -> Result<ConditionReport> {
    params.validate_for_kernel(h.kernel())?;
    let (m, n) = cell;
    if n < 0 {
        return Err(crate::error::SimError::InvalidConfig(format!(
            "cell ({m}, {n}) below the lattice"
        )));
    }
    let w = h.window();
    let (flo, fhi) = params.flank_sites(m);
    let (_t0, t1) = params.slab(n);
    if flo < w.x_min || fhi > w.x_max || t1 > w.t_max {
        return Err(crate::error::SimError::WindowCoverage(format!(
            "cell ({m}, {n}): needs sites [{flo}, {fhi}] through time {t1}, window is [{}, {}] x [0, {}]",
            w.x_min, w.x_max, w.t_max
        )));
    }

    let prefix_events = h.events().partition_point(|e| e.time <= t1);
    let (no_vacancy, descendancy, no_intrusion, brute_force) = if prefix_events <= VERIFY_ORACLE_CAP
    {
        let (a, b, c) = oracle_conditions(h, params, m, n)?;
        (a, b, c, true)
    } else {
        let (a, b, c) = dense_conditions(h, params, m, n);
        (a, b, c, false)
    };
    Ok(ConditionReport {
        cell,
        no_vacancy,
        descendancy,
        no_intrusion,
        local_ok: no_vacancy && descendancy && no_intrusion,
        brute_force,
    })
}

fn vacancy_somewhere(occupied: impl Fn(i64) -> bool, lo: i64, hi: i64, len: i64) -> bool {
    let mut run = 0i64;
    for z in lo..=hi {
        if occupied(z) {
            run = 0;
        } else {
            run += 1;
            if run >= len {
                return true;
            }
        }
    }
    false
}

/// Dense boolean replay: one pass over the events up to the slab end keeping
/// plain per-site arrays for the all-ones trajectory, the descendant track
/// and the outside track.
fn dense_conditions(h: &HarrisEvents, params: &BlockParams, m: i64, n: i64) -> (bool, bool, bool) {
    let w = h.window();
    let width = w.n_sites();
    let at = |z: i64| (z - w.x_min) as usize;
    let (ilo, ihi) = params.interval_sites(m);
    let (flo, fhi) = params.flank_sites(m);
    let ((jlo, jhi), (t0, t1)) = params.jbox(h.kernel().range(), m, n);
    let in_interval = |z: i64| (ilo..=ihi).contains(&z);

    // All-ones trajectory to the slab start, then to the slab end.
    let mut occ = vec![true; width];
    let mut start_occ: Option<Vec<bool>> = None;
    for e in h.events() {
        if e.time > t1 {
            break;
        }
        if e.time > t0 && start_occ.is_none() {
            start_occ = Some(occ.clone());
        }
        match e.kind {
            EventKind::Death { site } => occ[at(site)] = false,
            EventKind::Arrow { from, to } => {
                if occ[at(from)] {
                    occ[at(to)] = true;
                }
            }
        }
    }
    let start_occ = start_occ.unwrap_or_else(|| occ.clone());
    let end_occ = occ;

    // Slab replay of the two tracks, checking the box after every event.
    let mut desc = vec![false; width];
    for z in ilo..=ihi {
        if n == 0 || start_occ[at(z)] {
            desc[at(z)] = true;
        }
    }
    let mut out: Vec<bool> = (0..width).map(|i| !in_interval(w.x_min + i as i64)).collect();
    let mut intrusion = false;
    let check_box = |out: &[bool], desc: &[bool]| -> bool {
        (jlo..=jhi).any(|z| out[at(z)] && !desc[at(z)])
    };
    intrusion |= check_box(&out, &desc);
    for e in h.events_between(t0, t1) {
        match e.kind {
            EventKind::Death { site } => {
                desc[at(site)] = false;
                if in_interval(site) {
                    out[at(site)] = false;
                }
            }
            EventKind::Arrow { from, to } => {
                if desc[at(from)] {
                    desc[at(to)] = true;
                }
                if out[at(from)] {
                    out[at(to)] = true;
                }
            }
        }
        intrusion |= check_box(&out, &desc);
    }

    let descendancy = (flo..=fhi).all(|z| !end_occ[at(z)] || desc[at(z)]);
    let no_vacancy = !vacancy_somewhere(|z| end_occ[at(z)], flo, fhi, params.vacant_len);
    (no_vacancy, descendancy, !intrusion)
}

/// Exhaustive-search recomputation for small constructions: every
/// occupancy and reachability fact is derived by enumerating paths.
fn oracle_conditions(
    h: &HarrisEvents,
    params: &BlockParams,
    m: i64,
    n: i64,
) -> Result<(bool, bool, bool)> {
    let w = h.window();
    let (ilo, ihi) = params.interval_sites(m);
    let (flo, fhi) = params.flank_sites(m);
    let ((jlo, jhi), (t0, t1)) = params.jbox(h.kernel().range(), m, n);
    let cap = VERIFY_ORACLE_CAP;

    // Occupied in the all-ones trajectory at (z, t): some site reaches it.
    let occupied = |z: i64, t: f64| -> Result<bool> {
        for x in w.sites() {
            if brute_force_connects(h, (x, 0.0), (z, t), cap)? {
                return Ok(true);
            }
        }
        Ok(false)
    };
    // Descendant of the cell's sources at (z, t).
    let from_sources = |z: i64, t: f64| -> Result<bool> {
        for x in ilo..=ihi {
            if n == 0 || occupied(x, t0)? {
                if brute_force_connects(h, (x, t0), (z, t), cap)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    };
    // Reachable from outside the interval sourced throughout [t0, s]: paths
    // can only start at t0 or just after an event, so those instants cover
    // every continuous starting time.
    let mut starts = vec![t0];
    starts.extend(h.events_between(t0, t1).iter().map(|e| e.time));
    let from_outside = |z: i64, s: f64, starts: &[f64]| -> Result<bool> {
        for x in w.sites() {
            if (ilo..=ihi).contains(&x) {
                continue;
            }
            for &tp in starts.iter().take_while(|&&tp| tp <= s) {
                if brute_force_connects(h, (x, tp), (z, s), cap)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    };

    let mut intrusion = false;
    let mut checks = starts.clone();
    checks.push(t1);
    'boxscan: for &s in &checks {
        for z in jlo..=jhi {
            if from_outside(z, s, &starts)? && !from_sources(z, s)? {
                intrusion = true;
                break 'boxscan;
            }
        }
    }

    let mut descendancy = true;
    let mut end_occ = Vec::new();
    for z in flo..=fhi {
        let o = occupied(z, t1)?;
        end_occ.push(o);
        if o && !from_sources(z, t1)? {
            descendancy = false;
        }
    }
    let no_vacancy = !vacancy_somewhere(|z| end_occ[(z - flo) as usize], flo, fhi, params.vacant_len);
    Ok((no_vacancy, descendancy, !intrusion))
}
