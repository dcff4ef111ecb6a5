//! Implementations of the six subcommands.
//!
//! Each command resolves its parameters (defaults < config file < flags),
//! announces the resolved configuration with a hash, runs, prints a human
//! summary, and writes any declared output files atomically.

use std::fmt::Write as _;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde_json::json;

use cpsim_core::contact::{
    chi_direct, chi_from_coupling, couple, edge_series, is_gamma_slow, ChiConfig, Configuration,
};
use cpsim_core::graphical::{
    brute_force_connects, connects, sample_harris, HarrisEvents, Kernel, Window,
};
use cpsim_core::montecarlo::{
    run_experiment, speed_estimate, wilson, write_atomically, ContaminationPolicy,
    ExperimentConfig, KernelSpec, Observable,
};
use cpsim_core::opercolation::{gamma_event, percolates_to, sample_field};
use cpsim_core::renorm::{block_field, verify_block_cell, BlockParams, LambdaWindow};

use crate::plot::{dat_dump, svg_line_plot, Series};
use crate::resolve::{
    announce, parse_grid, parse_kernel_weights, pick, pick_opt, value_map, FileCfg,
};
use crate::{
    BlocksArgs, InterfaceArgs, PercolateArgs, PlotArgs, SimulateArgs, VerifyArgs,
};

/// Resolve the infection kernel from `--lambda`, `--range`, `--kernel`.
fn resolve_kernel(
    lambda: Option<f64>,
    range: Option<i64>,
    kernel_csv: Option<String>,
    file: &FileCfg,
    default_lambda: f64,
) -> Result<KernelSpec> {
    let lambda = pick(lambda, file.lambda, default_lambda);
    let range = pick(range, file.range, 1);
    let spec = match pick_opt(kernel_csv, file.kernel.clone()) {
        Some(csv) => KernelSpec { lambda, weights: parse_kernel_weights(&csv)? },
        None => KernelSpec::uniform(lambda, range).context("building uniform kernel")?,
    };
    spec.build().context("validating kernel")?;
    Ok(spec)
}

fn resolve_contamination(
    discard: bool,
    abort: bool,
    file: &FileCfg,
) -> Result<ContaminationPolicy> {
    if discard && abort {
        bail!("--discard-contaminated and --abort-contaminated are mutually exclusive");
    }
    if discard {
        return Ok(ContaminationPolicy::Discard);
    }
    if abort {
        return Ok(ContaminationPolicy::Abort);
    }
    match file.contamination.as_deref() {
        None | Some("discard") => Ok(ContaminationPolicy::Discard),
        Some("abort") => Ok(ContaminationPolicy::Abort),
        Some(other) => bail!("contamination policy {other:?} in config file; valid: discard, abort"),
    }
}

fn cell<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

fn wrote(path: &Path) {
    println!("wrote {}", path.display());
}

// ---------------------------------------------------------------- simulate

pub fn simulate(a: SimulateArgs) -> Result<()> {
    let file = FileCfg::load(a.config.as_deref())?;
    let seed = pick(a.seed, file.seed, 0);
    let t_flag = pick_opt(a.t, file.t_max);
    let dump_events = a.dump_events || file.dump_events.unwrap_or(false);
    let load = pick_opt(a.load_events, file.load_events.clone());
    let gamma = pick_opt(a.gamma, file.gamma);
    let out = pick_opt(a.out, file.out.clone());

    let (h, t_end) = match &load {
        Some(path) => {
            let f = fs::File::open(path).with_context(|| format!("opening event file {path}"))?;
            let h = HarrisEvents::load(BufReader::new(f))
                .with_context(|| format!("parsing event file {path}"))?;
            let t_end = t_flag.map_or(h.window().t_max, |t| t.min(h.window().t_max));
            (h, t_end)
        }
        None => {
            let spec = resolve_kernel(a.lambda, a.range, a.kernel, &file, 4.0)?;
            let t_max = t_flag.unwrap_or(20.0);
            let cfg = ExperimentConfig {
                kernel: spec.clone(),
                t_max,
                grid: vec![t_max],
                replicas: 1,
                seed_base: seed,
                guard: pick_opt(a.guard, file.guard),
                observables: vec![Observable::Edge],
                contamination: ContaminationPolicy::Discard,
            };
            cfg.validate()?;
            let w = cfg.window()?;
            let h = sample_harris(&spec.build()?, &w, seed)?;
            (h, t_max)
        }
    };

    let w = *h.window();
    let resolved = value_map(vec![
        ("mode", json!(if load.is_some() { "replay" } else { "sample" })),
        ("load-events", json!(load)),
        ("kernel", serde_json::to_value(KernelSpec::from_kernel(h.kernel()))?),
        ("T", json!(t_end)),
        ("seed", json!(seed)),
        ("window", json!([w.x_min, w.x_max, w.t_max])),
        ("gamma", json!(gamma)),
        ("dump-events", json!(dump_events)),
        ("out", json!(out)),
    ]);
    announce("simulate", &resolved);

    let init = Configuration::half_line_left(&w);
    let series = edge_series(&h, &init, t_end)?;
    println!("events: {}", h.events().len());
    println!("edge changes: {}", series.times.len());
    println!("edge r({t_end}) = {}", cell(series.value_at(t_end)));
    println!("contaminated: {}", series.contaminated);
    if let Some(g) = gamma {
        println!("gamma-slow (gamma = {g}, up to {t_end}): {}", is_gamma_slow(&h, g, t_end)?);
    }

    if let Some(dir) = out {
        let dir = PathBuf::from(dir);
        fs::create_dir_all(&dir)?;
        let mut csv = String::from("time,r\n");
        for (t, v) in series.times.iter().zip(&series.values) {
            let _ = writeln!(csv, "{t},{}", cell(*v));
        }
        let path = dir.join("edge.csv");
        write_atomically(&path, csv.as_bytes())?;
        wrote(&path);
        if dump_events {
            let mut buf = Vec::new();
            h.dump(&mut buf)?;
            let path = dir.join("events.txt");
            write_atomically(&path, &buf)?;
            wrote(&path);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- interface

pub fn interface(a: InterfaceArgs) -> Result<()> {
    let file = FileCfg::load(a.config.as_deref())?;
    let spec = resolve_kernel(a.lambda, a.range, a.kernel, &file, 4.0)?;
    let t_max = pick(a.t, file.t_max, 40.0);
    let grid = match pick_opt(a.grid, file.grid.clone()) {
        Some(csv) => parse_grid(&csv)?,
        None => vec![0.25 * t_max, 0.5 * t_max, 0.75 * t_max, t_max],
    };
    let cfg = ExperimentConfig {
        kernel: spec,
        t_max,
        grid,
        replicas: pick(a.replicas, file.replicas, 200),
        seed_base: pick(a.seed, file.seed, 0),
        guard: pick_opt(a.guard, file.guard),
        observables: vec![Observable::Interface],
        contamination: resolve_contamination(a.discard_contaminated, a.abort_contaminated, &file)?,
    };
    cfg.validate()?;
    let threads = pick(a.threads, file.threads, 0);
    let out = pick_opt(a.out, file.out.clone());

    let resolved = value_map(vec![
        ("experiment", serde_json::to_value(&cfg)?),
        ("guard-band", json!(cfg.guard_band())),
        ("threads", json!(threads)),
        ("out", json!(out)),
    ]);
    announce("interface", &resolved);
    println!("experiment-hash: {}", cfg.hash());

    let store = run_experiment(&cfg, threads)?;
    println!(
        "replicas: {} total, {} contaminated, {} effective",
        store.total(),
        store.contaminated(),
        store.effective()
    );
    for &t in &store.config.grid {
        let (rhos, excluded) = store.rho_at(t)?;
        if rhos.is_empty() {
            println!("t = {t}: no usable interface samples ({excluded} excluded)");
            continue;
        }
        let n = rhos.len() as f64;
        let mean_abs = rhos.iter().map(|&v| v.abs() as f64).sum::<f64>() / n;
        let max_abs = rhos.iter().map(|&v| v.abs()).max().unwrap_or(0);
        match store.speed_at(t) {
            Ok(sp) if t > 0.0 => println!(
                "t = {t}: n = {}, mean |rho| = {mean_abs:.3}, max |rho| = {max_abs}, alpha = {:.4} [{:.4}, {:.4}]",
                rhos.len(),
                sp.alpha_hat,
                sp.ci_lo,
                sp.ci_hi
            ),
            _ => println!(
                "t = {t}: n = {}, mean |rho| = {mean_abs:.3}, max |rho| = {max_abs}",
                rhos.len()
            ),
        }
    }

    if let Some(dir) = out {
        let dir = PathBuf::from(dir);
        store.persist(&dir)?;
        for name in ["config.json", "samples.csv", "summary.json"] {
            wrote(&dir.join(name));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- blocks

pub fn blocks(a: BlocksArgs) -> Result<()> {
    let file = FileCfg::load(a.config.as_deref())?;
    let spec = resolve_kernel(a.lambda, a.range, a.kernel, &file, 10.0)?;
    let kernel = spec.build()?;
    let k = pick(a.k, file.k, 2);
    let n = pick(a.n, file.n, 25);
    let beta = pick(a.beta, file.beta, 0.5);
    let level = pick(a.i, file.i, 2);
    let seed = pick(a.seed, file.seed, 0);
    let out = pick_opt(a.out, file.out.clone());
    if level < 0 {
        bail!("--i must be >= 0");
    }

    let params = BlockParams::new(k, n, beta)?;
    let n_max = level;
    let m_max = level + 4;
    let lw = LambdaWindow::new(m_max, n_max)?;
    let (flo, _) = params.flank_sites(-(m_max + 1));
    let (_, fhi) = params.flank_sites(m_max + 1);
    let margin = kernel.range() + 1;
    let t_end = params.slab(n_max + 1).1 + 2.0;
    let w = Window::new(flo - margin, fhi + margin, t_end)?;

    let resolved = value_map(vec![
        ("kernel", serde_json::to_value(&spec)?),
        ("K", json!(k)),
        ("N", json!(n)),
        ("beta", json!(beta)),
        ("i", json!(level)),
        ("seed", json!(seed)),
        ("block-window", json!([m_max, n_max])),
        ("window", json!([w.x_min, w.x_max, w.t_max])),
        ("out", json!(out)),
    ]);
    announce("blocks", &resolved);

    let h = sample_harris(&kernel, &w, seed)?;
    let field = block_field(&h, &params, lw)?;
    for row in 0..=n_max {
        let (mut cells_n, mut phi_open, mut phi_closed, mut gate_failed, mut psi_open) =
            (0u64, 0u64, 0u64, 0u64, 0u64);
        for (m, nn) in lw.cells() {
            if nn != row {
                continue;
            }
            cells_n += 1;
            match field.phi(m, nn) {
                1 => phi_open += 1,
                0 => phi_closed += 1,
                _ => gate_failed += 1,
            }
            psi_open += u64::from(field.psi(m, nn) == 1);
        }
        println!(
            "row {row}: {cells_n} cells, phi open {phi_open}, phi closed {phi_closed}, \
             parent-gate failed {gate_failed}, psi open {psi_open}"
        );
    }
    let perc = field.to_perc_field()?;
    let outcome = gamma_event(&perc, beta, level)?;
    println!("Gamma({level}) on the psi field (beta = {beta}): {}", outcome.holds);

    if let Some(dir) = out {
        let dir = PathBuf::from(dir);
        fs::create_dir_all(&dir)?;
        let path = dir.join("blocks.csv");
        write_atomically(&path, field.to_csv().as_bytes())?;
        wrote(&path);
        let path = dir.join("field.csv");
        write_atomically(&path, perc.to_csv().as_bytes())?;
        wrote(&path);
    }
    Ok(())
}

// ---------------------------------------------------------------- percolate

pub fn percolate(a: PercolateArgs) -> Result<()> {
    let file = FileCfg::load(a.config.as_deref())?;
    let p = pick(a.p, file.p, 0.95);
    let height = pick(a.height, file.height, 20);
    let level = pick(a.i, file.i, height);
    let beta = pick(a.gamma_beta, file.gamma_beta, 0.5);
    let replicas = pick(a.replicas, file.replicas, 200);
    let seed = pick(a.seed, file.seed, 0);
    let out = pick_opt(a.out, file.out.clone());
    if height < 0 || level < 0 {
        bail!("--height and --i must be >= 0");
    }
    if replicas == 0 {
        bail!("--replicas must be >= 1");
    }
    let n_max = height.max(level);
    let m_max = n_max + 2;

    let resolved = value_map(vec![
        ("p", json!(p)),
        ("height", json!(height)),
        ("i", json!(level)),
        ("gamma-beta", json!(beta)),
        ("replicas", json!(replicas)),
        ("seed", json!(seed)),
        ("field", json!([m_max, n_max])),
        ("out", json!(out)),
    ]);
    announce("percolate", &resolved);

    let mut gamma_count = 0u64;
    let mut perc_count = 0u64;
    let mut csv = String::from("replica,seed,gamma,percolates\n");
    for rep in 0..replicas {
        let s = seed ^ rep;
        let field = sample_field(p, m_max, n_max, s)?;
        let gamma_holds = gamma_event(&field, beta, level)?.holds;
        let percolates = percolates_to(&field, (0, 0), height)?;
        gamma_count += u64::from(gamma_holds);
        perc_count += u64::from(percolates);
        let _ = writeln!(csv, "{rep},{s},{},{}", u8::from(gamma_holds), u8::from(percolates));
    }
    let (g_lo, g_hi) = wilson(gamma_count, replicas, 1.96);
    let (p_lo, p_hi) = wilson(perc_count, replicas, 1.96);
    let g_freq = gamma_count as f64 / replicas as f64;
    let p_freq = perc_count as f64 / replicas as f64;
    println!(
        "Gamma({level}) frequency: {gamma_count}/{replicas} = {g_freq:.4} (95% CI [{g_lo:.4}, {g_hi:.4}])"
    );
    println!(
        "percolation from the origin to level {height}: {perc_count}/{replicas} = {p_freq:.4} \
         (95% CI [{p_lo:.4}, {p_hi:.4}])"
    );

    if let Some(dir) = out {
        let dir = PathBuf::from(dir);
        fs::create_dir_all(&dir)?;
        let path = dir.join("percolate.csv");
        write_atomically(&path, csv.as_bytes())?;
        wrote(&path);
        let results = json!({
            "p": p,
            "height": height,
            "i": level,
            "gamma-beta": beta,
            "replicas": replicas,
            "seed": seed,
            "gamma": {"count": gamma_count, "freq": g_freq, "ci": [g_lo, g_hi]},
            "percolates": {"count": perc_count, "freq": p_freq, "ci": [p_lo, p_hi]},
        });
        let path = dir.join("results.json");
        write_atomically(&path, serde_json::to_string_pretty(&results)?.as_bytes())?;
        wrote(&path);
    }
    Ok(())
}

// ---------------------------------------------------------------- verify

pub fn verify(a: VerifyArgs) -> Result<()> {
    let file = FileCfg::load(a.config.as_deref())?;
    let suite = pick(a.suite, file.suite.clone(), "coupling".to_string());
    let cases = pick(a.cases, file.cases, 500);
    let seed = pick(a.seed, file.seed, 0);
    if cases == 0 {
        bail!("--cases must be >= 1");
    }

    let resolved = value_map(vec![
        ("suite", json!(suite)),
        ("cases", json!(cases)),
        ("seed", json!(seed)),
    ]);
    announce("verify", &resolved);

    let (checked, violations) = match suite.as_str() {
        "oracle" => suite_oracle(cases, seed)?,
        "coupling" => suite_coupling(cases, seed)?,
        "chi" => {
            let lambda = pick(a.lambda, file.lambda, 1.5);
            suite_chi(cases, seed, lambda)?
        }
        "blocks" => {
            let lambda = pick(a.lambda, file.lambda, 10.0);
            let k = pick(a.k, file.k, 2);
            let n = pick(a.n, file.n, 25);
            suite_blocks(cases, seed, lambda, k, n)?
        }
        other => bail!("unknown suite {other:?}; valid suites: oracle, coupling, chi, blocks"),
    };
    println!("suite {suite}: {checked} cases checked, {violations} violations");
    if violations > 0 {
        bail!("suite {suite} found {violations} violations");
    }
    Ok(())
}

/// Reachability: sweep versus exhaustive path search on small windows.
fn suite_oracle(cases: u64, seed: u64) -> Result<(u64, u64)> {
    let kernel = Kernel::nearest_neighbor(1.0);
    let w = Window::new(-2, 3, 0.75)?;
    let grid: Vec<f64> = (0..5).map(|j| w.t_max * j as f64 / 4.0).collect();
    let mut accepted = 0u64;
    let mut violations = 0u64;
    let mut s = seed;
    while accepted < cases {
        let h = sample_harris(&kernel, &w, s)?;
        s = s.wrapping_add(1);
        if h.events().len() > 12 {
            continue;
        }
        accepted += 1;
        for (i, &ts) in grid.iter().enumerate() {
            for &tt in &grid[i..] {
                for x in w.x_min..=w.x_max {
                    for y in w.x_min..=w.x_max {
                        let fast = connects(&h, (x, ts), (y, tt))?;
                        let slow = brute_force_connects(&h, (x, ts), (y, tt), 20)?;
                        if fast != slow {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    Ok((cases, violations))
}

/// Monotonicity and additivity of coupled trajectories.
fn suite_coupling(cases: u64, seed: u64) -> Result<(u64, u64)> {
    let w = Window::new(-50, 50, 20.0)?;
    let grid = [0.0, 5.0, 10.0, 15.0, 20.0];
    let lambdas = [0.8, 1.2, 2.0];
    let mut violations = 0u64;
    for idx in 0..cases {
        let lambda = lambdas[(idx % 3) as usize];
        let h = sample_harris(&Kernel::nearest_neighbor(lambda), &w, seed.wrapping_add(idx))?;
        let single0 = Configuration::single(&w, 0)?;
        let half = Configuration::half_line_left(&w);
        let ones = Configuration::all_ones(&w);
        let single5 = Configuration::single(&w, 5)?;
        let mut union_sites = half.sites.clone();
        union_sites.union_with(&single5.sites);
        let union = Configuration { sites: union_sites, left_filled: true, right_filled: false };
        let trs = couple(&h, &[single0, half.clone(), ones, single5, union], &grid)?;
        for j in 0..grid.len() {
            if !trs[0].states[j].sites.is_subset_of(&trs[1].states[j].sites) {
                violations += 1;
            }
            if !trs[1].states[j].sites.is_subset_of(&trs[2].states[j].sites) {
                violations += 1;
            }
            let mut expected = trs[1].states[j].sites.clone();
            expected.union_with(&trs[3].states[j].sites);
            if expected != trs[4].states[j].sites {
                violations += 1;
            }
        }
    }
    Ok((cases, violations))
}

/// Three-state recoding versus the direct chi rules.
fn suite_chi(cases: u64, seed: u64, lambda: f64) -> Result<(u64, u64)> {
    let w = Window::new(-40, 40, 10.0)?;
    let grid = [0.0, 2.5, 5.0, 7.5, 10.0];
    let kernel = Kernel::nearest_neighbor(lambda);
    let mut violations = 0u64;
    for idx in 0..cases {
        let h = sample_harris(&kernel, &w, seed.wrapping_add(idx))?;
        let lower = Configuration::half_line_left(&w);
        let upper = Configuration::all_ones(&w);
        let trs = couple(&h, &[lower, upper], &grid)?;
        let recoded = chi_from_coupling(&trs[0], &trs[1])?;
        let direct = chi_direct(&h, &ChiConfig::standard(&w), &grid)?;
        for j in 0..grid.len() {
            if recoded.ones[j] != direct.ones[j] {
                violations += 1;
            }
            if recoded.twos[j] != direct.twos[j] {
                violations += 1;
            }
        }
    }
    Ok((cases, violations))
}

/// Block-field sweep versus the from-scratch cell verifier.
fn suite_blocks(cases: u64, seed: u64, lambda: f64, k: i64, n: i64) -> Result<(u64, u64)> {
    let params = BlockParams::new(k, n, 0.5)?;
    let lw = LambdaWindow::new(2, 1)?;
    let kernel = Kernel::nearest_neighbor(lambda);
    let (flo, _) = params.flank_sites(-(lw.m_max + 1));
    let (_, fhi) = params.flank_sites(lw.m_max + 1);
    let margin = kernel.range() + 1;
    let t_end = params.slab(lw.n_max + 1).1 + 2.0;
    let w = Window::new(flo - margin, fhi + margin, t_end)?;
    let mut checked = 0u64;
    let mut violations = 0u64;
    let mut s = seed;
    while checked < cases {
        let h = sample_harris(&kernel, &w, s)?;
        s = s.wrapping_add(1);
        let field = block_field(&h, &params, lw)?;
        for (m, row) in lw.cells() {
            if checked >= cases {
                break;
            }
            if field.phi(m, row) == 2 {
                continue;
            }
            let report = verify_block_cell(&h, &params, (m, row))?;
            checked += 1;
            if report.local_ok != (field.phi(m, row) == 1) {
                violations += 1;
            }
        }
    }
    Ok((checked, violations))
}

// ---------------------------------------------------------------- plot

struct TimeBucket {
    time: f64,
    rs: Vec<Option<f64>>,
    rhos: Vec<i64>,
}

fn read_samples(path: &Path) -> Result<Vec<TimeBucket>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let header = lines.next().context("samples.csv is empty")?;
    if header != "replica,seed,time,r,l,rho,rho_plus,rho_minus,contaminated" {
        bail!("unexpected samples.csv header: {header}");
    }
    let mut buckets: Vec<TimeBucket> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            bail!("samples.csv line {}: expected 9 fields, got {}", lineno + 2, fields.len());
        }
        let time: f64 = fields[2].parse().context("bad time field")?;
        let contaminated = fields[8] == "1";
        let parse_opt = |s: &str| -> Result<Option<i64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                Ok(Some(s.parse::<i64>().context("bad integer field")?))
            }
        };
        let r = parse_opt(fields[3])?;
        let rho = parse_opt(fields[5])?;
        let bucket = match buckets.iter_mut().find(|b| b.time == time) {
            Some(b) => b,
            None => {
                buckets.push(TimeBucket { time, rs: Vec::new(), rhos: Vec::new() });
                buckets.last_mut().unwrap()
            }
        };
        if contaminated {
            bucket.rs.push(None);
        } else {
            bucket.rs.push(r.map(|v| v as f64));
            if let Some(v) = rho {
                bucket.rhos.push(v);
            }
        }
    }
    buckets.sort_by(|a, b| a.time.total_cmp(&b.time));
    Ok(buckets)
}

pub fn plot(a: PlotArgs) -> Result<()> {
    let file = FileCfg::load(a.config.as_deref())?;
    let out = pick_opt(a.out, file.out.clone())
        .context("--out <dir> is required: it names the sample-store directory to plot")?;
    let dir = PathBuf::from(out);

    let resolved = value_map(vec![("out", json!(dir.display().to_string()))]);
    announce("plot", &resolved);

    let buckets = read_samples(&dir.join("samples.csv"))?;

    // Tail curves: P(|rho| > L) against L, one series per grid time.
    let l_max = buckets.iter().flat_map(|b| b.rhos.iter().map(|v| v.abs())).max().unwrap_or(0);
    let step = (l_max / 40).max(1);
    let mut tails = Vec::new();
    for b in &buckets {
        if b.rhos.is_empty() {
            continue;
        }
        let n = b.rhos.len() as f64;
        let points: Vec<(f64, f64)> = (0..=l_max)
            .step_by(step as usize)
            .map(|l| (l as f64, b.rhos.iter().filter(|v| v.abs() > l).count() as f64 / n))
            .collect();
        tails.push(Series { name: format!("T={}", b.time), points });
    }
    if tails.is_empty() {
        println!("no interface samples found; skipping tail plot");
    } else {
        let path = dir.join("tails.svg");
        write_atomically(&path, svg_line_plot("interface tails", "L", "P(|rho| > L)", &tails).as_bytes())?;
        wrote(&path);
        let path = dir.join("tails.dat");
        write_atomically(&path, dat_dump(&tails).as_bytes())?;
        wrote(&path);
    }

    // Edge speed: mean r/t per grid time with its confidence band.
    let mut alpha = Vec::new();
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for b in &buckets {
        if !(b.time > 0.0) {
            continue;
        }
        if let Ok(sp) = speed_estimate(b.time, &b.rs) {
            alpha.push((b.time, sp.alpha_hat));
            lo.push((b.time, sp.ci_lo));
            hi.push((b.time, sp.ci_hi));
        }
    }
    if alpha.is_empty() {
        println!("no edge samples found; skipping speed plot");
    } else {
        let series = vec![
            Series { name: "alpha".into(), points: alpha },
            Series { name: "ci-lo".into(), points: lo },
            Series { name: "ci-hi".into(), points: hi },
        ];
        let path = dir.join("speed.svg");
        write_atomically(&path, svg_line_plot("edge speed", "t", "r_t / t", &series).as_bytes())?;
        wrote(&path);
        let path = dir.join("speed.dat");
        write_atomically(&path, dat_dump(&series).as_bytes())?;
        wrote(&path);
    }
    Ok(())
}
