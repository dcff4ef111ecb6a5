//! Exhaustive path search used as an oracle for the forward sweep.
//!
//! Walks the composite-ordered event list with a depth-first search over all
//! take/skip choices at arrows, memoized on (site, next event index). The
//! only shared convention with the sweep is the event order and the death
//! rules; the search itself enumerates paths rather than propagating sets.

use crate::error::{Result, SimError};

use super::events::{EventKind, HarrisEvents};

/// Default cap on the number of events the oracle will consider.
pub const DEFAULT_ORACLE_CAP: usize = 20;

/// Decide (x, s) -> (y, t) by exhaustive search. Errors when the number of
/// events in [s, t] exceeds `cap` (the search is exponential in arrows).
pub fn brute_force_connects(
    h: &HarrisEvents,
    from: (i64, f64),
    to: (i64, f64),
    cap: usize,
) -> Result<bool> {
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
    // Events in [s, t]; a death at exactly s at the start site is survived
    // (the source point restarts a path), a death at exactly t kills, an
    // arrow at exactly t still delivers — matching the sweep convention.
    let all = h.events();
    let lo = all.partition_point(|e| e.time < s);
    let hi = all.partition_point(|e| e.time <= t);
    let sub = &all[lo..hi];
    if sub.len() > cap {
        return Err(SimError::OracleCapExceeded { events: sub.len(), cap });
    }

    let width = w.n_sites();
    let offset = w.x_min;
    // memo[site][i]: Some(answer) for "path currently at site, events sub[i..] pending".
    let mut memo: Vec<Option<bool>> = vec![None; width * (sub.len() + 1)];

    fn search(
        cur: i64,
        i: usize,
        sub: &[EventRec],
        start: (i64, f64),
        target: i64,
        offset: i64,
        width: usize,
        memo: &mut [Option<bool>],
    ) -> bool {
        let slot = (cur - offset) as usize * (sub.len() + 1) + i;
        if let Some(v) = memo[slot] {
            return v;
        }
        let ans = if i == sub.len() {
            cur == target
        } else {
            match sub[i] {
                EventRec::Death { site, time } => {
                    if site == cur && !(cur == start.0 && time == start.1) {
                        false
                    } else {
                        search(cur, i + 1, sub, start, target, offset, width, memo)
                    }
                }
                EventRec::Arrow { from, to, .. } if from == cur => {
                    search(to, i + 1, sub, start, target, offset, width, memo)
                        || search(cur, i + 1, sub, start, target, offset, width, memo)
                }
                _ => search(cur, i + 1, sub, start, target, offset, width, memo),
            }
        };
        memo[slot] = Some(ans);
        ans
    }

    let recs: Vec<EventRec> = sub
        .iter()
        .map(|e| match e.kind {
            EventKind::Death { site } => EventRec::Death { site, time: e.time },
            EventKind::Arrow { from, to } => EventRec::Arrow { from, to },
        })
        .collect();
    Ok(search(x, 0, &recs, (x, s), y, offset, width, &mut memo))
}

#[derive(Clone, Copy)]
enum EventRec {
    Death { site: i64, time: f64 },
    Arrow { from: i64, to: i64 },
}
