//! Good space-time points: simultaneously slow and expanding.
//!
//! A point (x, t) is good when, on the construction re-rooted at (x, t),
//! the origin is both gamma-slow up to the horizon (the right edge of the
//! left half-line process never outruns the line gamma * s) and expanding
//! up to the same horizon. The slow check is one half-line sweep and runs
//! first; the expanding check carries the block-field computation.

use crate::contact::is_gamma_slow;
use crate::error::Result;
use crate::graphical::HarrisEvents;

use super::expand::is_beta_expanding;
use super::geometry::BlockParams;

/// Decide whether `point` is a good point of `h` for slope `gamma` and the
/// expansion horizon containing `t_horizon` (which must exceed 1). Window
/// coverage shortfalls after re-rooting are errors, not a false.
pub fn is_good_point(
    h: &HarrisEvents,
    point: (i64, f64),
    params: &BlockParams,
    gamma: f64,
    t_horizon: f64,
) -> Result<bool> {
    let shifted = h.shift(point.0, point.1)?;
    if !is_gamma_slow(&shifted, gamma, t_horizon)? {
        return Ok(false);
    }
    let horizon_i = params.horizon_index(t_horizon)?;
    let report = is_beta_expanding(&shifted, params, horizon_i)?;
    Ok(report.overall)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphical::{Event, Kernel, Window};

    #[test]
    fn a_death_right_after_the_point_disqualifies_it() {
        let params = BlockParams::new(2, 4, 0.5).unwrap();
        let kernel = Kernel::nearest_neighbor(1.5);
        let w = Window::new(-15, 15, 20.0).unwrap();
        // Death lands at (0, 0.5) after re-rooting at (5, 2).
        let h = HarrisEvents::from_events(&kernel, &w, 0, vec![Event::death(2.5, 5)]).unwrap();
        assert!(!is_good_point(&h, (5, 2.0), &params, 0.5, 9.0).unwrap());
    }

    #[test]
    fn re_rooting_outside_the_window_is_an_error() {
        let params = BlockParams::new(2, 4, 0.5).unwrap();
        let kernel = Kernel::nearest_neighbor(1.5);
        let w = Window::new(-15, 15, 20.0).unwrap();
        let h = HarrisEvents::from_events(&kernel, &w, 0, Vec::new()).unwrap();
        assert!(is_good_point(&h, (0, 25.0), &params, 0.5, 9.0).is_err());
    }
}
