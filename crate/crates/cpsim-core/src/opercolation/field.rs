//! Oriented-site-percolation fields on the even sublattice.
//!
//! Cells are pairs (m, n) with n >= 0 and m + n even; paths move one level up
//! per step with |delta m| = 1, so a cell's parents live at (m -+ 1, n - 1).

use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Result, SimError};
use crate::sites::SiteSet;
use crate::streams::{stream_rng, StreamKind};

/// Open/closed states for all cells (m, n) with |m| <= m_max, 0 <= n <= n_max
/// and matching parity. `source` records how the field was produced.
#[derive(Debug, Clone)]
pub struct PercField {
    m_max: i64,
    n_max: i64,
    /// One site-set per level; only matching-parity sites are ever set.
    rows: Vec<SiteSet>,
    source: String,
}

impl PercField {
    /// All-closed field.
    pub fn closed(m_max: i64, n_max: i64, source: impl Into<String>) -> Result<PercField> {
        if m_max < 0 || n_max < 0 {
            return Err(SimError::InvalidConfig("field dimensions must be nonnegative".into()));
        }
        let width = (2 * m_max + 1) as usize;
        Ok(PercField {
            m_max,
            n_max,
            rows: (0..=n_max).map(|_| SiteSet::new(-m_max, width)).collect(),
            source: source.into(),
        })
    }

    pub fn m_max(&self) -> i64 {
        self.m_max
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Whether (m, n) is a cell of the lattice rectangle.
    pub fn valid(&self, m: i64, n: i64) -> bool {
        m.abs() <= self.m_max && (0..=self.n_max).contains(&n) && (m + n) % 2 == 0
    }

    pub fn is_open(&self, m: i64, n: i64) -> bool {
        self.valid(m, n) && self.rows[n as usize].contains(m)
    }

    pub fn set_open(&mut self, m: i64, n: i64) -> Result<()> {
        if !self.valid(m, n) {
            return Err(SimError::InvalidConfig(format!("({m}, {n}) is not a lattice cell")));
        }
        self.rows[n as usize].insert(m);
        Ok(())
    }

    pub fn set_closed(&mut self, m: i64, n: i64) -> Result<()> {
        if !self.valid(m, n) {
            return Err(SimError::InvalidConfig(format!("({m}, {n}) is not a lattice cell")));
        }
        self.rows[n as usize].remove(m);
        Ok(())
    }

    /// Open cells of one level as a site set over m.
    pub fn row(&self, n: i64) -> &SiteSet {
        &self.rows[n as usize]
    }

    /// Cells of one level in order.
    pub fn cells_in_row(&self, n: i64) -> impl Iterator<Item = i64> + '_ {
        let lo = if (self.m_max + n) % 2 == 0 { -self.m_max } else { -self.m_max + 1 };
        (0..).map(move |j| lo + 2 * j).take_while(move |m| *m <= self.m_max)
    }

    pub fn n_cells(&self) -> usize {
        (0..=self.n_max).map(|n| self.cells_in_row(n).count()).sum()
    }

    pub fn n_open(&self) -> usize {
        self.rows.iter().map(|r| r.count()).sum()
    }

    /// CSV rows `m,n,open`, all lattice cells, row-major.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,n,open\n");
        for n in 0..=self.n_max {
            for m in self.cells_in_row(n) {
                let _ = writeln!(s, "{},{},{}", m, n, u8::from(self.is_open(m, n)));
            }
        }
        s
    }
}

/// Independent Bernoulli(p) states per cell, deterministic in the seed.
pub fn sample_field(p: f64, m_max: i64, n_max: i64, seed: u64) -> Result<PercField> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SimError::InvalidConfig(format!("cell probability {p} outside [0, 1]")));
    }
    let mut field = PercField::closed(m_max, n_max, format!("bernoulli(p={p}, seed={seed})"))?;
    let mut rng = stream_rng(seed, StreamKind::Cell, 0, 0);
    for n in 0..=n_max {
        let lo = if (m_max + n) % 2 == 0 { -m_max } else { -m_max + 1 };
        let mut m = lo;
        while m <= m_max {
            if rng.gen::<f64>() < p {
                field.rows[n as usize].insert(m);
            }
            m += 2;
        }
    }
    Ok(field)
}
