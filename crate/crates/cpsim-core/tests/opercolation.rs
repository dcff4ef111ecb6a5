//! Reachability DP checked against honest path enumeration, plus ensemble
//! behavior of the percolation and cone-avoidance events.

use std::collections::HashSet;

use cpsim_core::opercolation::{
    closure_estimate, gamma_event, open_reach, percolates_to, sample_field, PercField,
};

/// Exhaustive open-path enumeration: walk every open prefix from every
/// source, recording visited cells. No pruning beyond closed cells, so this
/// is a genuinely independent oracle for the level DP.
fn enumerate_reach(field: &PercField, sources: &[i64]) -> Vec<HashSet<i64>> {
    fn walk(field: &PercField, m: i64, n: i64, out: &mut Vec<HashSet<i64>>) {
        if !field.is_open(m, n) {
            return;
        }
        out[n as usize].insert(m);
        if n < field.n_max() {
            walk(field, m - 1, n + 1, out);
            walk(field, m + 1, n + 1, out);
        }
    }
    let mut out = vec![HashSet::new(); (field.n_max() + 1) as usize];
    for &m in sources {
        walk(field, m, 0, &mut out);
    }
    out
}

#[test]
fn dp_equals_path_enumeration_on_small_fields() {
    let mut checked = 0usize;
    for seed in 0..10_000u64 {
        let p = 0.3 + 0.5 * ((seed % 7) as f64 / 6.0);
        let f = sample_field(p, 8, 8, seed).unwrap();
        let sources: Vec<i64> = match seed % 3 {
            0 => vec![0],
            1 => vec![-2, 2],
            _ => f.cells_in_row(0).collect(),
        };
        let dp = open_reach(&f, &sources, 0).unwrap();
        let brute = enumerate_reach(&f, &sources);
        for n in 0..=8i64 {
            let got: HashSet<i64> = dp.at(n).iter().collect();
            assert_eq!(got, brute[n as usize], "seed {seed} level {n}");
            checked += 1;
        }
    }
    assert_eq!(checked, 90_000);
}

#[test]
fn dense_fields_percolate_often() {
    // Far above the oriented-percolation threshold the origin should reach
    // height 100 more often than not; the measured value is pinned tighter
    // by the acceptance suite.
    let mut hits = 0u32;
    let n = 300u64;
    for seed in 0..n {
        let f = sample_field(0.9, 101, 100, seed).unwrap();
        if percolates_to(&f, (0, 0), 100).unwrap() {
            hits += 1;
        }
    }
    let freq = f64::from(hits) / n as f64;
    assert!(freq > 0.5, "percolation frequency {freq} too small at p = 0.9");
}

#[test]
fn opening_cells_never_hurts_gamma_event() {
    for seed in 0..60u64 {
        let f = sample_field(0.8, 25, 12, seed).unwrap();
        let base = gamma_event(&f, 0.25, 12).unwrap().holds;
        let mut opened = f.clone();
        let mut changed = false;
        'outer: for n in 0..=12 {
            for m in f.cells_in_row(n).collect::<Vec<_>>() {
                if !f.is_open(m, n) {
                    opened.set_open(m, n).unwrap();
                    changed = true;
                    break 'outer;
                }
            }
        }
        if changed {
            let more = gamma_event(&opened, 0.25, 12).unwrap().holds;
            assert!(!base || more, "seed {seed}: opening a cell broke the event");
        }
    }
}

#[test]
fn closure_estimates_track_bernoulli_parameter() {
    for (p, expected) in [(0.9f64, 0.1f64), (0.97, 0.03)] {
        let fields: Vec<PercField> =
            (0..150u64).map(|s| sample_field(p, 60, 60, 30_000 + s).unwrap()).collect();
        let est = closure_estimate(&fields, 1, 2).unwrap();
        for row in &est {
            assert!(
                row.ci_lo <= expected && expected <= row.ci_hi,
                "p={p} r={}: interval [{}, {}] misses {expected}",
                row.r,
                row.ci_lo,
                row.ci_hi,
            );
        }
    }
}
