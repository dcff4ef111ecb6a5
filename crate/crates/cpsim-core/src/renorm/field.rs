//! The coarse-grained block field on the renormalized lattice.
//!
//! Each lattice cell (m, n) watches the all-ones trajectory over the time
//! slab [KNn, KN(n+1)] and earns a 1 when the block behaves well locally:
//!
//!   * descendancy — every occupied site of the flank I_{m-1} ∪ I_{m+1} at
//!     the slab end descends from the cell's own sources (row 0: all of
//!     I_m at time 0; higher rows: the occupied part of I_m at the slab
//!     start);
//!   * no vacancy — the flank holds no run of ceil(sqrt(N)) consecutive
//!     vacant sites at the slab end;
//!   * no intrusion — no point of the box J_(m,n) is reachable from outside
//!     I_m (sites outside act as sources throughout the slab) without also
//!     being reachable from the cell's sources.
//!
//! From row 1 up the value is gated by the previous row: with no parent
//! carrying a 1, the cell is marked 2 (conditionally open but unsupported)
//! without evaluating the local conditions; with a parent 1 the local
//! conditions decide between 1 and 0. Cells outside the computed window
//! contribute no parent support. The derived 0/1 field psi is the indicator
//! of "not 0".
//!
//! Reachability is computed on the events of the given construction, so the
//! field is exact for the window it was handed; both the intrusion sources
//! ("outside I_m") and the paths themselves are clipped to that window.

use serde::Serialize;

use crate::contact::{evolve, Configuration};
use crate::error::{Result, SimError};
use crate::graphical::{EventKind, HarrisEvents, Window};
use crate::opercolation::PercField;
use crate::sites::SiteSet;

use super::geometry::{BlockParams, LambdaWindow};

/// Values of the three-state block field (and its 0/1 projection psi) over a
/// finite lattice window, with the parameters and provenance that produced
/// them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockField {
    pub params: BlockParams,
    pub lw: LambdaWindow,
    /// Kernel range of the construction the field was computed from; fixes
    /// the box geometry.
    pub kernel_range: i64,
    pub seed: u64,
    phi: Vec<u8>,
}

impl BlockField {
    /// Assemble a field from an explicit phi table (row-major in the order
    /// of `lw.cells()`). Values must be 0, 1 or 2. Fields built this way
    /// carry no recursion guarantee; `block_field` output does.
    pub fn from_parts(
        params: BlockParams,
        lw: LambdaWindow,
        kernel_range: i64,
        seed: u64,
        cell_phi: Vec<u8>,
    ) -> Result<BlockField> {
        if cell_phi.len() != lw.n_cells() {
            return Err(SimError::InvalidConfig(format!(
                "phi table holds {} values for {} cells",
                cell_phi.len(),
                lw.n_cells()
            )));
        }
        if let Some(bad) = cell_phi.iter().find(|v| **v > 2) {
            return Err(SimError::InvalidConfig(format!("phi value {bad} outside {{0,1,2}}")));
        }
        let mut field = BlockField::blank(params, lw, kernel_range, seed);
        for ((m, n), v) in lw.cells().zip(cell_phi) {
            let at = field.index(m, n);
            field.phi[at] = v;
        }
        Ok(field)
    }

    fn blank(params: BlockParams, lw: LambdaWindow, kernel_range: i64, seed: u64) -> BlockField {
        let stride = (2 * lw.m_max + 1) as usize;
        let phi = vec![0u8; stride * (lw.n_max + 1) as usize];
        BlockField { params, lw, kernel_range, seed, phi }
    }

    fn index(&self, m: i64, n: i64) -> usize {
        assert!(self.lw.contains(m, n), "({m}, {n}) is not a lattice cell of this window");
        let stride = (2 * self.lw.m_max + 1) as usize;
        n as usize * stride + (m + self.lw.m_max) as usize
    }

    /// Three-state value at a lattice cell; panics off-lattice.
    pub fn phi(&self, m: i64, n: i64) -> u8 {
        self.phi[self.index(m, n)]
    }

    /// 0/1 projection: 1 unless phi is 0.
    pub fn psi(&self, m: i64, n: i64) -> u8 {
        (self.phi(m, n) != 0) as u8
    }

    /// The psi field as an oriented-percolation field.
    pub fn to_perc_field(&self) -> Result<PercField> {
        let source = format!(
            "psi(seed={}, K={}, N={}, kernel_range={})",
            self.seed, self.params.k, self.params.n, self.kernel_range
        );
        let mut pf = PercField::closed(self.lw.m_max, self.lw.n_max, source)?;
        for (m, n) in self.lw.cells() {
            if self.psi(m, n) == 1 {
                pf.set_open(m, n)?;
            }
        }
        Ok(pf)
    }

    /// CSV rows `m,n,phi,psi`, row-major.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,phi,psi\n");
        for (m, n) in self.lw.cells() {
            out.push_str(&format!("{m},{n},{},{}\n", self.phi(m, n), self.psi(m, n)));
        }
        out
    }
}

fn check_coverage(w: &Window, params: &BlockParams, lw: &LambdaWindow) -> Result<()> {
    for (m, n) in lw.cells() {
        let (flo, fhi) = params.flank_sites(m);
        let (_, t1) = params.slab(n);
        if flo < w.x_min || fhi > w.x_max || t1 > w.t_max {
            return Err(SimError::WindowCoverage(format!(
                "cell ({m}, {n}): needs sites [{flo}, {fhi}] through time {t1}, window is [{}, {}] x [0, {}]",
                w.x_min, w.x_max, w.t_max
            )));
        }
    }
    Ok(())
}

/// True when the flank interval [lo, hi] holds a run of at least
/// `vacant_len` consecutive sites all vacant in `occupied`.
fn has_vacant_run(occupied: &SiteSet, lo: i64, hi: i64, vacant_len: i64) -> bool {
    let mut run = 0i64;
    for z in lo..=hi {
        if occupied.contains(z) {
            run = 0;
        } else {
            run += 1;
            if run >= vacant_len {
                return true;
            }
        }
    }
    false
}

/// Evaluate the local conditions of one cell by sweeping the slab events
/// once with two tracks: descendants of the cell's sources, and everything
/// reachable when every site outside I_m feeds paths throughout the slab.
/// Returns (no_vacancy, descendancy, no_intrusion).
fn local_conditions(
    h: &HarrisEvents,
    params: &BlockParams,
    m: i64,
    n: i64,
    eta_start: &SiteSet,
    eta_end: &SiteSet,
    stop_on_intrusion: bool,
) -> (bool, bool, bool) {
    let w = h.window();
    let (ilo, ihi) = params.interval_sites(m);
    let interval = w.range_set(ilo, ihi);
    let ((jlo, jhi), (t0, t1)) = params.jbox(h.kernel().range(), m, n);
    let jcols = w.range_set(jlo, jhi);

    let mut desc = if n == 0 {
        interval.clone()
    } else {
        let mut d = interval.clone();
        d.intersect_with(eta_start);
        d
    };
    let mut out = w.full_set();
    out.subtract(&interval);
    let always_sourced = out.clone();

    let mut intrusion = out.intersects_minus(&jcols, &desc);
    for e in h.events_between(t0, t1) {
        match e.kind {
            EventKind::Death { site } => {
                desc.remove(site);
                if !always_sourced.contains(site) {
                    out.remove(site);
                }
            }
            EventKind::Arrow { from, to } => {
                if desc.contains(from) {
                    desc.insert(to);
                }
                if out.contains(from) {
                    out.insert(to);
                }
            }
        }
        if !intrusion && out.intersects_minus(&jcols, &desc) {
            intrusion = true;
            if stop_on_intrusion {
                return (false, false, false);
            }
        }
    }

    let (flo, fhi) = params.flank_sites(m);
    let mut occupied_flank = eta_end.clone();
    occupied_flank.intersect_with(&w.range_set(flo, fhi));
    let descendancy = occupied_flank.is_subset_of(&desc);
    let no_vacancy = !has_vacant_run(eta_end, flo, fhi, params.vacant_len);
    (no_vacancy, descendancy, !intrusion)
}

/// Compute the block field over `lw` from the given construction. The
/// window must cover every cell's flank intervals and its full time slab.
pub fn block_field(h: &HarrisEvents, params: &BlockParams, lw: LambdaWindow) -> Result<BlockField> {
    params.validate_for_kernel(h.kernel())?;
    let w = h.window();
    check_coverage(w, params, &lw)?;

    // All-ones trajectory snapshots at every slab boundary.
    let times: Vec<f64> = (0..=lw.n_max + 1).map(|j| params.slab_len() * j as f64).collect();
    let eta = evolve(h, &Configuration::all_ones(w), &times)?;

    let mut field = BlockField::blank(params.clone(), lw, h.kernel().range(), h.seed());
    for (m, n) in lw.cells() {
        let at = field.index(m, n);
        if n > 0 {
            let open_parent = [m - 1, m + 1]
                .into_iter()
                .any(|pm| lw.contains(pm, n - 1) && field.phi(pm, n - 1) == 1);
            if !open_parent {
                field.phi[at] = 2;
                continue;
            }
        }
        let eta_start = &eta.states[n as usize].sites;
        let eta_end = &eta.states[(n + 1) as usize].sites;
        let (no_vacancy, descendancy, no_intrusion) =
            local_conditions(h, params, m, n, eta_start, eta_end, true);
        field.phi[at] = (no_vacancy && descendancy && no_intrusion) as u8;
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphical::{sample_harris, Event, Kernel};

    fn fixture_events() -> Vec<Event> {
        vec![
            Event::arrow(1.0, 2, 3),
            Event::arrow(2.0, 3, 4),
            Event::arrow(3.0, -1, -2),
            Event::arrow(4.0, -2, -3),
        ]
    }

    #[test]
    fn deaths_only_kill_row_zero_and_mark_higher_rows_unsupported() {
        let params = BlockParams::new(2, 9, 0.5).unwrap(); // KN = 18
        let kernel = Kernel::nearest_neighbor(0.0);
        let w = Window::new(-19, 19, 36.0).unwrap();
        let h = sample_harris(&kernel, &w, 7).unwrap();
        let lw = LambdaWindow::new(2, 1).unwrap();
        let field = block_field(&h, &params, lw).unwrap();
        for m in [-2, 0, 2] {
            assert_eq!(field.phi(m, 0), 0, "with no arrows everything is vacant by time KN");
            assert_eq!(field.psi(m, 0), 0);
        }
        for m in [-1, 1] {
            assert_eq!(field.phi(m, 1), 2, "no parent 1 marks the cell 2");
            assert_eq!(field.psi(m, 1), 1);
        }
    }

    #[test]
    fn hand_built_block_earns_a_one() {
        let params = BlockParams::new(2, 4, 0.5).unwrap(); // KN = 8, I_0 = {-1..2}
        let kernel = Kernel::nearest_neighbor(1.5);
        let w = Window::new(-6, 6, 8.0).unwrap();
        let h = HarrisEvents::from_events(&kernel, &w, 0, fixture_events()).unwrap();
        let field = block_field(&h, &params, LambdaWindow::new(0, 0).unwrap()).unwrap();
        assert_eq!(field.phi(0, 0), 1);
        assert_eq!(field.to_csv(), "m,n,phi,psi\n0,0,1,1\n");
    }

    #[test]
    fn far_events_do_not_change_a_cell() {
        let params = BlockParams::new(2, 4, 0.5).unwrap();
        let kernel = Kernel::nearest_neighbor(1.5);
        let w = Window::new(-30, 30, 8.0).unwrap();
        let lw = LambdaWindow::new(0, 0).unwrap();
        let base = HarrisEvents::from_events(&kernel, &w, 0, fixture_events()).unwrap();
        let mut perturbed = fixture_events();
        perturbed.push(Event::death(4.5, 25));
        perturbed.push(Event::arrow(5.0, 20, 21));
        perturbed.push(Event::death(0.5, -17));
        let more = HarrisEvents::from_events(&kernel, &w, 0, perturbed).unwrap();
        let f1 = block_field(&base, &params, lw).unwrap();
        let f2 = block_field(&more, &params, lw).unwrap();
        assert_eq!(f1.phi(0, 0), f2.phi(0, 0));
        assert_eq!(f1.to_csv(), f2.to_csv());
    }

    #[test]
    fn insufficient_window_names_the_first_cell() {
        let params = BlockParams::new(2, 9, 0.5).unwrap();
        let kernel = Kernel::nearest_neighbor(2.0);
        let w = Window::new(-10, 10, 36.0).unwrap();
        let h = sample_harris(&kernel, &w, 1).unwrap();
        let err = block_field(&h, &params, LambdaWindow::new(2, 1).unwrap()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("cell (-2, 0)"), "error should name the first uncoverable cell: {msg}");
    }

    #[test]
    fn phi_table_round_trips_through_from_parts() {
        let params = BlockParams::new(2, 9, 0.5).unwrap();
        let lw = LambdaWindow::new(2, 2).unwrap();
        let values: Vec<u8> = (0..lw.n_cells()).map(|i| (i % 3) as u8).collect();
        let f = BlockField::from_parts(params.clone(), lw, 1, 9, values.clone()).unwrap();
        let collected: Vec<u8> = lw.cells().map(|(m, n)| f.phi(m, n)).collect();
        assert_eq!(collected, values);
        assert!(BlockField::from_parts(params.clone(), lw, 1, 9, vec![0u8; 3]).is_err());
        assert!(BlockField::from_parts(params, lw, 1, 9, vec![3u8; lw.n_cells()]).is_err());
    }

    #[test]
    fn psi_projects_into_a_percolation_field() {
        let params = BlockParams::new(2, 9, 0.5).unwrap();
        let lw = LambdaWindow::new(2, 1).unwrap();
        // Row 0: phi = 0 everywhere; row 1: phi = 2 everywhere.
        let f = BlockField::from_parts(params, lw, 1, 3, vec![0, 0, 0, 2, 2]).unwrap();
        let pf = f.to_perc_field().unwrap();
        for m in [-2i64, 0, 2] {
            assert!(!pf.is_open(m, 0));
        }
        for m in [-1i64, 1] {
            assert!(pf.is_open(m, 1));
        }
        assert!(pf.source().starts_with("psi(seed=3"));
    }
}
