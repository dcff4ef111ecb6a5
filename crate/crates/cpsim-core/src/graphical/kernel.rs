//! Infection kernel: total rate lambda spread over a finite, symmetric set of
//! displacements.

use crate::error::{Result, SimError};
use serde::{Deserialize, Serialize};

/// Finite-range jump distribution for infection arrows. A site x sends an
/// arrow to x + d at rate `lambda * p(d)`; deaths fire at rate 1 everywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    lambda: f64,
    /// Displacements with positive weight, sorted ascending; never contains 0.
    weights: Vec<(i64, f64)>,
}

impl Kernel {
    /// Nearest-neighbour kernel: p(1) = p(-1) = 1/2.
    pub fn nearest_neighbor(lambda: f64) -> Kernel {
        Kernel::from_weights(lambda, &[(-1, 0.5), (1, 0.5)]).unwrap()
    }

    /// Uniform kernel on 1 <= |d| <= range.
    pub fn uniform(lambda: f64, range: i64) -> Result<Kernel> {
        if range < 1 {
            return Err(SimError::InvalidKernel(format!("range {range} < 1")));
        }
        let p = 1.0 / (2 * range) as f64;
        let weights: Vec<(i64, f64)> =
            (-range..=range).filter(|&d| d != 0).map(|d| (d, p)).collect();
        Kernel::from_weights(lambda, &weights)
    }

    /// Build from explicit (displacement, weight) pairs. Weights must be
    /// positive, symmetric under d -> -d, and sum to 1 (small float drift is
    /// renormalized away).
    pub fn from_weights(lambda: f64, weights: &[(i64, f64)]) -> Result<Kernel> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(SimError::InvalidKernel(format!("lambda {lambda} must be finite and >= 0")));
        }
        if weights.is_empty() {
            return Err(SimError::InvalidKernel("no displacements".into()));
        }
        let mut ws: Vec<(i64, f64)> = weights.to_vec();
        ws.sort_by_key(|&(d, _)| d);
        for pair in ws.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(SimError::InvalidKernel(format!("duplicate displacement {}", pair[0].0)));
            }
        }
        for &(d, p) in &ws {
            if d == 0 {
                return Err(SimError::InvalidKernel("self-displacement 0 not allowed".into()));
            }
            if !p.is_finite() || p <= 0.0 {
                return Err(SimError::InvalidKernel(format!("weight p({d}) = {p} must be positive")));
            }
        }
        // Symmetry: every d must have a mirror with (nearly) equal weight;
        // store the exact average so p(d) == p(-d) holds bit-for-bit.
        let mut sym = ws.clone();
        for (d, p) in sym.iter_mut() {
            let mirror = ws
                .iter()
                .find(|&&(e, _)| e == -*d)
                .ok_or_else(|| SimError::InvalidKernel(format!("missing mirror of displacement {d}")))?;
            if (*p - mirror.1).abs() > 1e-9 * p.max(mirror.1) {
                return Err(SimError::InvalidKernel(format!(
                    "asymmetric weights: p({d}) = {p}, p({}) = {}",
                    -*d, mirror.1
                )));
            }
            *p = 0.5 * (*p + mirror.1);
        }
        let sum: f64 = sym.iter().map(|&(_, p)| p).sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(SimError::InvalidKernel(format!("weights sum to {sum}, expected 1")));
        }
        for (_, p) in sym.iter_mut() {
            *p /= sum;
        }
        Ok(Kernel { lambda, weights: sym })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Maximal displacement M; arrows never jump farther than this.
    pub fn range(&self) -> i64 {
        self.weights.iter().map(|&(d, _)| d.abs()).max().unwrap()
    }

    pub fn weights(&self) -> &[(i64, f64)] {
        &self.weights
    }

    /// Arrow rate from any site along displacement d.
    pub fn rate(&self, d: i64) -> f64 {
        self.weights
            .iter()
            .find(|&&(e, _)| e == d)
            .map_or(0.0, |&(_, p)| self.lambda * p)
    }

    /// Compact text form used in event-dump headers, e.g.
    /// `lambda=2,weights=-1:0.5,1:0.5`.
    pub fn header_string(&self) -> String {
        let ws: Vec<String> = self.weights.iter().map(|(d, p)| format!("{d}:{p}")).collect();
        format!("lambda={},weights={}", self.lambda, ws.join(","))
    }

    pub fn from_header_string(s: &str) -> Result<Kernel> {
        let rest = s
            .strip_prefix("lambda=")
            .ok_or_else(|| SimError::Parse(format!("bad kernel header: {s}")))?;
        let (lam, ws) = rest
            .split_once(",weights=")
            .ok_or_else(|| SimError::Parse(format!("bad kernel header: {s}")))?;
        let lambda: f64 = lam.parse().map_err(|_| SimError::Parse(format!("bad lambda: {lam}")))?;
        let mut weights = Vec::new();
        for part in ws.split(',') {
            let (d, p) = part
                .split_once(':')
                .ok_or_else(|| SimError::Parse(format!("bad weight entry: {part}")))?;
            weights.push((
                d.parse().map_err(|_| SimError::Parse(format!("bad displacement: {d}")))?,
                p.parse().map_err(|_| SimError::Parse(format!("bad weight: {p}")))?,
            ));
        }
        Kernel::from_weights(lambda, &weights)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_neighbor_shape() {
        let k = Kernel::nearest_neighbor(2.0);
        assert_eq!(k.range(), 1);
        assert_eq!(k.rate(1), 1.0);
        assert_eq!(k.rate(-1), 1.0);
        assert_eq!(k.rate(2), 0.0);
    }

    #[test]
    fn uniform_range_three() {
        let k = Kernel::uniform(3.0, 3).unwrap();
        assert_eq!(k.range(), 3);
        assert_eq!(k.weights().len(), 6);
        assert!((k.rate(2) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_kernels() {
        assert!(Kernel::from_weights(1.0, &[(0, 1.0)]).is_err());
        assert!(Kernel::from_weights(1.0, &[(1, 1.0)]).is_err(), "no mirror");
        assert!(Kernel::from_weights(1.0, &[(1, 0.7), (-1, 0.3)]).is_err(), "asymmetric");
        assert!(Kernel::from_weights(1.0, &[(1, 0.2), (-1, 0.2)]).is_err(), "sum != 1");
        assert!(Kernel::from_weights(-1.0, &[(1, 0.5), (-1, 0.5)]).is_err());
        assert!(Kernel::from_weights(0.0, &[(1, 0.5), (-1, 0.5)]).is_ok(), "lambda 0 is degenerate but legal");
    }

    #[test]
    fn header_round_trip() {
        let k = Kernel::from_weights(1.5, &[(-2, 0.25), (-1, 0.25), (1, 0.25), (2, 0.25)]).unwrap();
        let s = k.header_string();
        let back = Kernel::from_header_string(&s).unwrap();
        assert_eq!(k, back);
    }
}
