//! Pathwise properties of coupled trajectories and edge observables, checked
//! against independently evolved runs and closed-form oracles.

use cpsim_core::contact::{
    chi_direct, chi_from_coupling, couple, edge_series, evolve, interface_series,
    right_path_inside_event, running_max_edge, ChiConfig, Configuration,
};
use cpsim_core::graphical::{sample_harris, Event, HarrisEvents, Kernel, Window};

#[test]
fn additivity_of_unions_across_random_events() {
    let k = Kernel::nearest_neighbor(1.5);
    let w = Window::new(-30, 30, 4.0).unwrap();
    let grid = [1.0, 2.5, 4.0];
    let mut cases = 0usize;
    for seed in 0..1000u64 {
        let h = sample_harris(&k, &w, seed).unwrap();
        let a = Configuration::from_sites(w.range_set(-4, 0));
        let b = Configuration::from_sites(w.range_set(-1, 3));
        let mut ab_sites = a.sites.clone();
        ab_sites.union_with(&b.sites);
        let ab = Configuration::from_sites(ab_sites);
        let ta = evolve(&h, &a, &grid).unwrap();
        let tb = evolve(&h, &b, &grid).unwrap();
        let tab = evolve(&h, &ab, &grid).unwrap();
        for i in 0..grid.len() {
            let mut union = ta.states[i].sites.clone();
            union.union_with(&tb.states[i].sites);
            assert_eq!(union, tab.states[i].sites, "additivity failed, seed {seed}");
            cases += 1;
        }
    }
    assert_eq!(cases, 3000);
}

#[test]
fn monotone_coupling_across_random_events() {
    let k = Kernel::uniform(1.4, 2).unwrap();
    let w = Window::new(-25, 25, 4.0).unwrap();
    let grid = [1.0, 2.0, 4.0];
    for seed in 0..1000u64 {
        let h = sample_harris(&k, &w, seed).unwrap();
        let small = Configuration::single(&w, 0).unwrap();
        let mut big_sites = w.empty_set();
        big_sites.insert(0);
        big_sites.insert(1);
        let big = Configuration::from_sites(big_sites);
        let trs = couple(&h, &[small, big], &grid).unwrap();
        for i in 0..grid.len() {
            assert!(
                trs[0].states[i].sites.is_subset_of(&trs[1].states[i].sites),
                "containment failed, seed {seed}"
            );
        }
    }
}

#[test]
fn half_line_stays_inside_full_start() {
    let k = Kernel::nearest_neighbor(2.0);
    let w = Window::new(-40, 40, 6.0).unwrap();
    let grid = [2.0, 4.0, 6.0];
    for seed in 0..200u64 {
        let h = sample_harris(&k, &w, seed).unwrap();
        let lower = Configuration::half_line_left(&w);
        let upper = Configuration::all_ones(&w);
        let trs = couple(&h, &[lower, upper], &grid).unwrap();
        for i in 0..grid.len() {
            assert!(trs[0].states[i].sites.is_subset_of(&trs[1].states[i].sites), "seed {seed}");
        }
    }
}

#[test]
fn empty_start_stays_empty() {
    let k = Kernel::nearest_neighbor(1.5);
    let w = Window::new(-10, 10, 3.0).unwrap();
    let h = sample_harris(&k, &w, 42).unwrap();
    let empty = Configuration::from_sites(w.empty_set());
    let anything = Configuration::from_sites(w.range_set(-5, 5));
    let trs = couple(&h, &[empty, anything], &[1.0, 3.0]).unwrap();
    for st in &trs[0].states {
        assert!(st.sites.is_empty());
    }
}

#[test]
fn single_death_empties_single_site() {
    let k = Kernel::nearest_neighbor(1.0);
    let w = Window::new(-5, 5, 2.0).unwrap();
    let h = HarrisEvents::from_events(&k, &w, 0, vec![Event::death(0.3, 0)]).unwrap();
    let init = Configuration::single(&w, 0).unwrap();
    let tr = evolve(&h, &init, &[0.2, 0.3, 1.0, 2.0]).unwrap();
    assert!(!tr.states[0].sites.is_empty());
    for st in &tr.states[1..] {
        assert!(st.sites.is_empty(), "state must stay empty from the death on");
    }
}

#[test]
fn markov_restart_matches_direct_run() {
    let k = Kernel::uniform(1.6, 2).unwrap();
    let w = Window::new(-20, 20, 6.0).unwrap();
    for seed in 0..100u64 {
        let h = sample_harris(&k, &w, seed).unwrap();
        let init = Configuration::from_sites(w.range_set(-3, 3));
        let first = evolve(&h, &init, &[2.5]).unwrap();
        let restarted = h.shift(0, 2.5).unwrap();
        let mid = Configuration::from_sites(first.states[0].sites.clone());
        let second = evolve(&restarted, &mid, &[3.5]).unwrap();
        let direct = evolve(&h, &init, &[6.0]).unwrap();
        assert_eq!(second.states[0].sites, direct.states[0].sites, "seed {seed}");
    }
}

#[test]
fn three_state_recode_equals_direct_rules() {
    let k = Kernel::uniform(1.9, 2).unwrap();
    let w = Window::new(-25, 25, 5.0).unwrap();
    let grid = [0.0, 1.0, 2.5, 5.0];
    for seed in 0..500u64 {
        let h = sample_harris(&k, &w, seed).unwrap();
        let lower0 = Configuration::half_line_left(&w);
        let upper0 = Configuration::all_ones(&w);
        let trs = couple(&h, &[lower0, upper0], &grid).unwrap();
        let recoded = chi_from_coupling(&trs[0], &trs[1]).unwrap();
        let direct = chi_direct(&h, &ChiConfig::standard(&w), &grid).unwrap();
        for i in 0..grid.len() {
            assert_eq!(recoded.ones[i], direct.ones[i], "seed {seed} idx {i}");
            assert_eq!(recoded.twos[i], direct.twos[i], "seed {seed} idx {i}");
        }
    }
}

#[test]
fn interface_left_endpoint_is_least_second_class_site() {
    let k = Kernel::nearest_neighbor(2.0);
    let w = Window::new(-50, 50, 8.0).unwrap();
    let grid: Vec<f64> = (1..=8).map(f64::from).collect();
    let mut checked = 0usize;
    for seed in 0..100u64 {
        let h = sample_harris(&k, &w, seed).unwrap();
        let series = interface_series(&h, &grid).unwrap();
        let chi = chi_direct(&h, &ChiConfig::standard(&w), &grid).unwrap();
        for (i, row) in series.rows.iter().enumerate() {
            if row.contaminated {
                continue;
            }
            assert_eq!(Some(row.l), chi.min_two(i), "seed {seed} t {}", row.time);
            checked += 1;
        }
    }
    assert!(checked > 400, "too few uncontaminated rows ({checked}) to be meaningful");
}

#[test]
fn running_max_dominates_edge_and_excess_frequency_decays() {
    let k = Kernel::nearest_neighbor(2.0);
    let w = Window::new(-40, 40, 6.0).unwrap();
    let t_end = 6.0;
    let levels = [0i64, 1, 2, 4];
    let mut counts = [0usize; 4];
    let mut used = 0usize;
    for seed in 0..400u64 {
        let h = sample_harris(&k, &w, seed).unwrap();
        let init = Configuration::half_line_left(&w);
        let s = edge_series(&h, &init, t_end).unwrap();
        if s.contaminated {
            continue;
        }
        used += 1;
        let q = running_max_edge(&s);
        let r_t = s.value_at(t_end).expect("uncontaminated half-line run has an edge");
        let q_t = q.value_at(t_end).expect("running max defined");
        assert!(q_t >= r_t, "running max must dominate the endpoint, seed {seed}");
        for (j, &l) in levels.iter().enumerate() {
            if q_t > r_t + l {
                counts[j] += 1;
            }
        }
    }
    assert!(used > 350, "too many contaminated runs ({} used)", used);
    for j in 1..levels.len() {
        assert!(
            counts[j] <= counts[j - 1],
            "excess frequency must be non-increasing in the level: {counts:?}"
        );
    }
    assert!(counts[0] > 0, "max should exceed the endpoint sometimes at this rate");
}

#[test]
fn right_path_event_matches_no_arrow_oracle() {
    // Without arrows the event reduces to one of the target sites carrying no
    // death mark through [0, T]; per site that misses with probability
    // exp(-T), independently across sites.
    let t_end: f64 = 5.0;
    let p_site = (-t_end).exp();
    let k = Kernel::nearest_neighbor(0.0);
    let w = Window::new(0, 30, t_end).unwrap();
    let n = 10_000u64;

    let mut hits_strict = 0u64;
    let mut hits_origin = 0u64;
    for seed in 0..n {
        let h = sample_harris(&k, &w, seed).unwrap();
        if right_path_inside_event(&h, 2, t_end, false).unwrap() {
            hits_strict += 1;
        }
        if right_path_inside_event(&h, 2, t_end, true).unwrap() {
            hits_origin += 1;
        }
    }

    // Strict half-line {x >= 1}: target sites {1, 2}.
    let p2 = 1.0 - (1.0 - p_site).powi(2);
    // Origin included {x >= 0}: target sites {0, 1, 2}.
    let p3 = 1.0 - (1.0 - p_site).powi(3);
    let tol = |p: f64| 4.0 * (p * (1.0 - p) / n as f64).sqrt();

    let f_strict = hits_strict as f64 / n as f64;
    let f_origin = hits_origin as f64 / n as f64;
    assert!(
        (f_strict - p2).abs() <= tol(p2),
        "strict variant: frequency {f_strict} vs oracle {p2} (tol {})",
        tol(p2)
    );
    assert!(
        (f_origin - p3).abs() <= tol(p3),
        "origin variant: frequency {f_origin} vs oracle {p3} (tol {})",
        tol(p3)
    );
}
