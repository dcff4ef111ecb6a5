//! Open-path reachability by level dynamic programming.

use crate::error::{Result, SimError};
use crate::sites::SiteSet;

use super::field::PercField;

/// Per-level sets of cells connected from the sources by open paths, plus
/// the rightmost connected cell of each level.
#[derive(Debug, Clone)]
pub struct LevelSets {
    /// `levels[j]` is the set at height `start_level + j`.
    pub start_level: i64,
    pub levels: Vec<SiteSet>,
}

impl LevelSets {
    /// Set at absolute height `n`.
    pub fn at(&self, n: i64) -> &SiteSet {
        &self.levels[(n - self.start_level) as usize]
    }

    /// Rightmost connected cell at absolute height `n`.
    pub fn rightmost(&self, n: i64) -> Option<i64> {
        self.at(n).max_site()
    }
}

/// Cells connected from `sources` (at height `start_level`) by open paths,
/// level by level up to the top of the field. A path starts on an open
/// source cell and moves one level up per step with |delta m| = 1.
pub fn open_reach(field: &PercField, sources: &[i64], start_level: i64) -> Result<LevelSets> {
    if !(0..=field.n_max()).contains(&start_level) {
        return Err(SimError::InvalidConfig(format!("start level {start_level} outside field")));
    }
    for &m in sources {
        if !field.valid(m, start_level) {
            return Err(SimError::InvalidConfig(format!(
                "source ({m}, {start_level}) is not a lattice cell"
            )));
        }
    }
    let mut first = SiteSet::new(-field.m_max(), (2 * field.m_max() + 1) as usize);
    for &m in sources {
        if field.is_open(m, start_level) {
            first.insert(m);
        }
    }
    let mut levels = vec![first];
    for n in start_level + 1..=field.n_max() {
        let prev = levels.last().unwrap();
        let mut next = prev.shifted(1);
        next.union_with(&prev.shifted(-1));
        next.intersect_with(field.row(n));
        levels.push(next);
    }
    Ok(LevelSets { start_level, levels })
}

/// Whether `cell` is connected by an open path to some cell at height `n`.
pub fn percolates_to(field: &PercField, cell: (i64, i64), n: i64) -> Result<bool> {
    if n < cell.1 || n > field.n_max() {
        return Err(SimError::InvalidConfig(format!("target height {n} out of range")));
    }
    let reach = open_reach(field, &[cell.0], cell.1)?;
    Ok(!reach.at(n).is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::field::sample_field;

    #[test]
    fn full_cone_on_all_open_field() {
        let f = sample_field(1.0, 12, 10, 0).unwrap();
        let reach = open_reach(&f, &[0], 0).unwrap();
        for n in 0..=10 {
            let want: Vec<i64> = (-n..=n).step_by(2).collect();
            assert_eq!(reach.at(n).iter().collect::<Vec<_>>(), want, "level {n}");
            assert_eq!(reach.rightmost(n), Some(n));
        }
    }

    #[test]
    fn closed_source_reaches_nothing() {
        let mut f = sample_field(1.0, 5, 5, 0).unwrap();
        f.set_closed(0, 0).unwrap();
        let reach = open_reach(&f, &[0], 0).unwrap();
        for n in 0..=5 {
            assert!(reach.at(n).is_empty(), "level {n}");
        }
        assert!(!percolates_to(&f, (0, 0), 5).unwrap());
    }

    #[test]
    fn fully_closed_row_blocks_percolation() {
        let mut f = sample_field(1.0, 6, 8, 0).unwrap();
        for m in f.cells_in_row(4).collect::<Vec<_>>() {
            f.set_closed(m, 4).unwrap();
        }
        assert!(percolates_to(&f, (0, 0), 3).unwrap());
        for n in 4..=8 {
            assert!(!percolates_to(&f, (0, 0), n).unwrap(), "height {n}");
        }
    }

    #[test]
    fn rightmost_moves_by_at_most_one_up() {
        for seed in 0..50u64 {
            let f = sample_field(0.8, 20, 20, seed).unwrap();
            let reach = open_reach(&f, &[0], 0).unwrap();
            let mut prev = reach.rightmost(0);
            for n in 1..=20 {
                let cur = reach.rightmost(n);
                if let (Some(p), Some(c)) = (prev, cur) {
                    assert!(c <= p + 1, "seed {seed} level {n}: {c} > {p}+1");
                }
                if prev.is_none() {
                    assert!(cur.is_none(), "reach cannot restart once extinct");
                }
                prev = cur;
            }
        }
    }

    #[test]
    fn opening_a_cell_never_shrinks_reach() {
        for seed in 0..30u64 {
            let f = sample_field(0.6, 10, 10, seed).unwrap();
            let base = open_reach(&f, &[0], 0).unwrap();
            // Open the first closed cell found.
            let mut opened = f.clone();
            'outer: for n in 0..=10 {
                for m in f.cells_in_row(n).collect::<Vec<_>>() {
                    if !f.is_open(m, n) {
                        opened.set_open(m, n).unwrap();
                        break 'outer;
                    }
                }
            }
            let more = open_reach(&opened, &[0], 0).unwrap();
            for n in 0..=10 {
                assert!(base.at(n).is_subset_of(more.at(n)), "seed {seed} level {n}");
            }
        }
    }
}
