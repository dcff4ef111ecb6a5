//! Small estimation helpers shared by the reporting layers.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Wilson score interval for a binomial proportion. Valid near 0 and 1,
/// where tail-event frequencies live; always contains count/n.
pub fn wilson(count: u64, n: u64, z: f64) -> (f64, f64) {
    assert!(count <= n && n > 0, "need 0 <= count <= n, n > 0");
    let (c, n) = (count as f64, n as f64);
    let p = c / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // At p = 0 or 1 the exact endpoint equals p; rounding may land a few
    // ulps inside, so clamp to keep the containment guarantee literal.
    (((center - half).min(p)).max(0.0), ((center + half).max(p)).min(1.0))
}

/// Sample mean with a normal-approximation confidence interval.
pub fn mean_ci(values: &[f64], z: f64) -> Result<(f64, f64, f64)> {
    if values.is_empty() {
        return Err(SimError::EmptySample("mean of an empty sample".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    let half = z * (var / n).sqrt();
    Ok((mean, mean - half, mean + half))
}

/// Abscissa transform for exponential-decay fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayTransform {
    /// log p against x: fits p ~ C e^(slope * x).
    Identity,
    /// log p against sqrt(x): fits p ~ C e^(slope * sqrt(x)).
    Sqrt,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Points entering the fit after dropping non-positive probabilities.
    pub used: usize,
    pub dropped: usize,
}

/// Least squares of log-probabilities against the transformed abscissa.
/// Zero (or negative) probabilities cannot enter a log fit and are dropped;
/// the count of dropped points is reported, never hidden.
pub fn decay_fit(xs: &[f64], ps: &[f64], transform: DecayTransform) -> Result<DecayFit> {
    if xs.len() != ps.len() {
        return Err(SimError::InvalidConfig("decay fit needs matching x/p lengths".into()));
    }
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut dropped = 0usize;
    for (&x, &p) in xs.iter().zip(ps) {
        if p > 0.0 && p <= 1.0 {
            let t = match transform {
                DecayTransform::Identity => x,
                DecayTransform::Sqrt => x.sqrt(),
            };
            pts.push((t, p.ln()));
        } else {
            dropped += 1;
        }
    }
    if pts.len() < 3 {
        return Err(SimError::EmptySample(format!(
            "decay fit needs at least 3 positive probabilities, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|(x, _)| x).sum::<f64>() / n;
    let my = pts.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum::<f64>();
    let sxy = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>();
    if sxx == 0.0 {
        return Err(SimError::InvalidConfig("decay fit abscissa is constant".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts.iter().map(|(x, y)| {
        let e = y - (intercept + slope * x);
        e * e
    }).sum();
    let ss_tot: f64 = pts.iter().map(|(_, y)| (y - my) * (y - my)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(DecayFit { slope, intercept, r_squared, used: pts.len(), dropped })
}
