//! Block geometry: the interval/box layout on the renormalized lattice and
//! the cone used by the barrier properties.
//!
//! Sites are grouped into half-overlapping intervals I_m of N consecutive
//! sites centered (in the half-open sense) at m·N/2; each lattice cell
//! (m, n) also carries a narrow space-time box J of 2M+1 columns around that
//! center spanning the time slab [K·N·n, K·N·(n+1)]. All endpoints are exact
//! integer arithmetic on doubled coordinates, so odd N and odd m·N need no
//! floating point.

use serde::Serialize;

use crate::error::{Result, SimError};
use crate::graphical::Kernel;

/// Parameters of the block construction: slab factor K, block length N, the
/// percolation cone slope beta, and the vacant-run length that disqualifies
/// a block (ceil of sqrt(N)).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockParams {
    pub k: i64,
    pub n: i64,
    pub beta: f64,
    pub vacant_len: i64,
}

impl BlockParams {
    pub fn new(k: i64, n: i64, beta: f64) -> Result<BlockParams> {
        if k < 1 || n < 1 {
            return Err(SimError::InvalidBlockParams(format!(
                "K and N must be positive, got K={k}, N={n}"
            )));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(SimError::InvalidBlockParams(format!("beta must lie in (0,1), got {beta}")));
        }
        let vacant_len = (n as f64).sqrt().ceil() as i64;
        Ok(BlockParams { k, n, beta, vacant_len })
    }

    /// The block scales only make sense well above the kernel range: N must
    /// exceed 2M (box columns stay inside their interval) and both K and N
    /// must exceed M.
    pub fn validate_for_kernel(&self, kernel: &Kernel) -> Result<()> {
        let m = kernel.range();
        if self.n <= 2 * m {
            return Err(SimError::InvalidBlockParams(format!(
                "N={} must exceed twice the kernel range 2*{m}",
                self.n
            )));
        }
        if self.k <= m {
            return Err(SimError::InvalidBlockParams(format!(
                "K={} must exceed the kernel range {m}",
                self.k
            )));
        }
        Ok(())
    }

    /// Slab duration K·N.
    pub fn slab_len(&self) -> f64 {
        (self.k * self.n) as f64
    }

    /// The time slab of row n: [K·N·n, K·N·(n+1)].
    pub fn slab(&self, n: i64) -> (f64, f64) {
        let kn = self.k * self.n;
        ((kn * n) as f64, (kn * (n + 1)) as f64)
    }

    /// Inclusive site endpoints of I_m = (mN/2 - N/2, mN/2 + N/2]: the
    /// integers z with m·N - N < 2z <= m·N + N.
    pub fn interval_sites(&self, m: i64) -> (i64, i64) {
        let c2 = m * self.n; // doubled center
        let lo = (c2 - self.n).div_euclid(2) + 1;
        let hi = (c2 + self.n).div_euclid(2);
        (lo, hi)
    }

    /// Inclusive site endpoints of I_{m-1} ∪ I_{m+1} = (mN/2 - N, mN/2 + N],
    /// which is always a single run of 2N consecutive sites.
    pub fn flank_sites(&self, m: i64) -> (i64, i64) {
        let c2 = m * self.n;
        let lo = (c2 - 2 * self.n).div_euclid(2) + 1;
        let hi = (c2 + 2 * self.n).div_euclid(2);
        (lo, hi)
    }

    /// The box J_(m,n): column range [mN/2 - M, mN/2 + M] (inclusive site
    /// endpoints; M is the kernel range) and time range [K·N·n, K·N·(n+1)].
    pub fn jbox(&self, kernel_range: i64, m: i64, n: i64) -> ((i64, i64), (f64, f64)) {
        let c2 = m * self.n;
        let lo = (c2 - 2 * kernel_range + 1).div_euclid(2); // ceil((c2 - 2M)/2)
        let hi = (c2 + 2 * kernel_range).div_euclid(2);
        (((lo), (hi)), self.slab(n))
    }

    /// Height index i such that a time horizon T > 1 falls in
    /// (1 + KN(i-1), 1 + KNi].
    pub fn horizon_index(&self, t: f64) -> Result<i64> {
        if !(t > 1.0) {
            return Err(SimError::InvalidConfig(format!(
                "horizon time {t} must exceed 1 (blocks start after the unit seeding step)"
            )));
        }
        let kn = self.slab_len();
        Ok(((t - 1.0) / kn).ceil() as i64)
    }
}

/// A finite piece of the renormalized lattice: cells (m, n) with m + n even,
/// |m| <= m_max, 0 <= n <= n_max.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LambdaWindow {
    pub m_max: i64,
    pub n_max: i64,
}

impl LambdaWindow {
    pub fn new(m_max: i64, n_max: i64) -> Result<LambdaWindow> {
        if m_max < 0 || n_max < 0 {
            return Err(SimError::InvalidConfig(format!(
                "lattice window needs m_max, n_max >= 0, got ({m_max}, {n_max})"
            )));
        }
        Ok(LambdaWindow { m_max, n_max })
    }

    pub fn contains(&self, m: i64, n: i64) -> bool {
        m.abs() <= self.m_max && (0..=self.n_max).contains(&n) && (m + n) % 2 == 0
    }

    /// Lattice cells in row n, ascending.
    pub fn row_cells(&self, n: i64) -> impl Iterator<Item = i64> {
        let lo = if (self.m_max + n) % 2 == 0 { -self.m_max } else { -self.m_max + 1 };
        (lo..=self.m_max).step_by(2)
    }

    /// All cells, row-major (n ascending, m ascending).
    pub fn cells(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (0..=self.n_max).flat_map(move |n| self.row_cells(n).map(move |m| (m, n)))
    }

    pub fn n_cells(&self) -> usize {
        self.cells().count()
    }
}

/// Membership in the cone V(rho) = {(z, s): s >= 0, -rho·s <= z <= rho·s}.
pub fn cone_contains(rho: f64, point: (i64, f64)) -> bool {
    let (z, s) = point;
    s >= 0.0 && -rho * s <= z as f64 && (z as f64) <= rho * s
}

/// The integer sites in the time-s section of the translated cone
/// (a, s0) + V(rho); empty before the apex.
pub fn cone_section(rho: f64, apex: (i64, f64), s: f64) -> Option<(i64, i64)> {
    let (a, s0) = apex;
    if s < s0 {
        return None;
    }
    let half = rho * (s - s0);
    let lo = (a as f64 - half).ceil() as i64;
    let hi = (a as f64 + half).floor() as i64;
    (lo <= hi).then_some((lo, hi))
}

/// First time the sections of (a, s) + V(rho) and (b, t) + V(rho) meet, for
/// a <= b and s < t: either t itself (when (b, t) already lies in the first
/// cone) or the crossing time of the inner cone edges,
/// (b - a + rho(t + s)) / (2 rho).
pub fn zeta_star(first: (i64, f64), second: (i64, f64), rho: f64) -> Result<f64> {
    let ((a, s), (b, t)) = (first, second);
    if !(rho > 0.0) {
        return Err(SimError::InvalidConfig(format!("cone slope must be positive, got {rho}")));
    }
    if a > b || s >= t {
        return Err(SimError::InvalidConfig(format!(
            "zeta_star needs a <= b and s < t, got ({a}, {s}) and ({b}, {t})"
        )));
    }
    Ok(t.max(((b - a) as f64 + rho * (t + s)) / (2.0 * rho)))
}
