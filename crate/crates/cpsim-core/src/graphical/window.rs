//! Space-time simulation window.

use crate::error::{Result, SimError};
use crate::sites::SiteSet;
use serde::{Deserialize, Serialize};

/// Finite region [x_min, x_max] x [0, t_max] on which events are realized.
/// Everything outside is truncated; simulations flag runs whose observables
/// may have felt that truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: i64,
    pub x_max: i64,
    pub t_max: f64,
}

impl Window {
    pub fn new(x_min: i64, x_max: i64, t_max: f64) -> Result<Window> {
        let w = Window { x_min, x_max, t_max };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x_min >= self.x_max {
            return Err(SimError::InvalidWindow(format!(
                "x_min {} must be < x_max {}",
                self.x_min, self.x_max
            )));
        }
        if !self.t_max.is_finite() || self.t_max <= 0.0 {
            return Err(SimError::InvalidWindow(format!("t_max {} must be positive", self.t_max)));
        }
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        (self.x_max - self.x_min + 1) as usize
    }

    pub fn contains_site(&self, x: i64) -> bool {
        x >= self.x_min && x <= self.x_max
    }

    pub fn contains(&self, x: i64, t: f64) -> bool {
        self.contains_site(x) && (0.0..=self.t_max).contains(&t)
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> {
        self.x_min..=self.x_max
    }

    /// Empty site set shaped for this window.
    pub fn empty_set(&self) -> SiteSet {
        SiteSet::new(self.x_min, self.n_sites())
    }

    /// Site set holding the inclusive range [lo, hi] clipped to the window.
    pub fn range_set(&self, lo: i64, hi: i64) -> SiteSet {
        let mut s = self.empty_set();
        s.insert_range(lo, hi);
        s
    }

    /// Site set holding every window site.
    pub fn full_set(&self) -> SiteSet {
        self.range_set(self.x_min, self.x_max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Window::new(-5, 5, 10.0).is_ok());
        assert!(Window::new(5, 5, 10.0).is_err());
        assert!(Window::new(-5, 5, 0.0).is_err());
        assert!(Window::new(-5, 5, f64::NAN).is_err());
    }

    #[test]
    fn membership_and_sets() {
        let w = Window::new(-2, 3, 1.0).unwrap();
        assert_eq!(w.n_sites(), 6);
        assert!(w.contains(-2, 0.0) && w.contains(3, 1.0));
        assert!(!w.contains(4, 0.5) && !w.contains(0, 1.5));
        assert_eq!(w.full_set().count(), 6);
        assert_eq!(w.range_set(2, 9).iter().collect::<Vec<_>>(), vec![2, 3]);
    }
}
