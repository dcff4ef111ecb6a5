//! Realized event sets: death marks and infection arrows on a window.
//!
//! Ordering convention. Events are totally ordered by the composite key
//! (time, kind with death < arrow, site, displacement). Simultaneous distinct
//! events have probability zero; when they do occur (or are constructed by
//! hand) every consumer — the forward sweep, the brute-force oracle, the
//! trajectory couplings — resolves them in this same fixed order, so results
//! conditional on a tie are an arbitrary but consistent convention.

use std::io::{BufRead, Write};

use crate::error::{Result, SimError};
use crate::streams::{poisson_times, StreamKind};

use super::kernel::Kernel;
use super::window::Window;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    /// Death mark at `site`: any path occupying the site at that instant dies.
    Death { site: i64 },
    /// Arrow from `from` to `to`: a path at `from` may jump to `to`.
    Arrow { from: i64, to: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
}

impl Event {
    pub fn death(time: f64, site: i64) -> Event {
        Event { time, kind: EventKind::Death { site } }
    }

    pub fn arrow(time: f64, from: i64, to: i64) -> Event {
        Event { time, kind: EventKind::Arrow { from, to } }
    }

    /// Composite ordering key; see the module docs.
    #[inline]
    pub fn key(&self) -> (f64, u8, i64, i64) {
        match self.kind {
            EventKind::Death { site } => (self.time, 0, site, 0),
            EventKind::Arrow { from, to } => (self.time, 1, from, to - from),
        }
    }

    #[inline]
    pub fn site(&self) -> i64 {
        match self.kind {
            EventKind::Death { site } => site,
            EventKind::Arrow { from, .. } => from,
        }
    }
}

fn key_cmp(a: &Event, b: &Event) -> std::cmp::Ordering {
    let (ta, ka, sa, da) = a.key();
    let (tb, kb, sb, db) = b.key();
    ta.total_cmp(&tb).then_with(|| (ka, sa, da).cmp(&(kb, sb, db)))
}

/// A fully realized graphical construction on a window: every death and arrow
/// inside it, sorted by the composite key. Identified by (kernel, window,
/// seed); the per-site and per-pair event streams are keyed independently of
/// the window, so enlarging the window reproduces the same events inside the
/// old one.
#[derive(Debug, Clone)]
pub struct HarrisEvents {
    window: Window,
    kernel: Kernel,
    seed: u64,
    /// Total shift applied relative to the originally sampled construction.
    origin_shift: (i64, f64),
    events: Vec<Event>,
}

/// Draw the construction on `window` from the stream family of `seed`.
pub fn sample_harris(kernel: &Kernel, window: &Window, seed: u64) -> Result<HarrisEvents> {
    window.validate()?;
    let mut events = Vec::new();
    for x in window.sites() {
        for t in poisson_times(seed, StreamKind::Death, x, 0, 1.0, window.t_max) {
            events.push(Event { time: t, kind: EventKind::Death { site: x } });
        }
        for &(d, _) in kernel.weights() {
            let y = x + d;
            if !window.contains_site(y) {
                continue; // both endpoints must lie inside the window
            }
            for t in poisson_times(seed, StreamKind::Arrow, x, d, kernel.rate(d), window.t_max) {
                events.push(Event { time: t, kind: EventKind::Arrow { from: x, to: y } });
            }
        }
    }
    let mut h = HarrisEvents {
        window: *window,
        kernel: kernel.clone(),
        seed,
        origin_shift: (0, 0.0),
        events,
    };
    h.sort_and_check()?;
    Ok(h)
}

impl HarrisEvents {
    fn sort_and_check(&mut self) -> Result<()> {
        self.events.sort_unstable_by(key_cmp);
        for pair in self.events.windows(2) {
            if pair[0].key() == pair[1].key() {
                return Err(SimError::InvalidConfig(format!(
                    "duplicate event key at t = {}",
                    pair[0].time
                )));
            }
        }
        Ok(())
    }

    /// Assemble a construction from an explicit event list (tests, loading).
    pub fn from_events(kernel: &Kernel, window: &Window, seed: u64, events: Vec<Event>) -> Result<HarrisEvents> {
        window.validate()?;
        for e in &events {
            let (from, to) = match e.kind {
                EventKind::Death { site } => (site, site),
                EventKind::Arrow { from, to } => (from, to),
            };
            if !window.contains_site(from) || !window.contains_site(to) {
                return Err(SimError::InvalidWindow(format!(
                    "event at t = {} touches site outside [{}, {}]",
                    e.time, window.x_min, window.x_max
                )));
            }
            if !(0.0..=window.t_max).contains(&e.time) {
                return Err(SimError::InvalidWindow(format!(
                    "event time {} outside [0, {}]",
                    e.time, window.t_max
                )));
            }
            if let EventKind::Arrow { from, to } = e.kind {
                if from == to {
                    return Err(SimError::InvalidConfig("arrow with zero displacement".into()));
                }
            }
        }
        let mut h = HarrisEvents {
            window: *window,
            kernel: kernel.clone(),
            seed,
            origin_shift: (0, 0.0),
            events,
        };
        h.sort_and_check()?;
        Ok(h)
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn origin_shift(&self) -> (i64, f64) {
        self.origin_shift
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Events with time in (t0, t1], by position in the sorted list.
    /// With t0 = 0.0 the half-open interval also admits events at exactly 0.
    pub fn events_between(&self, t0: f64, t1: f64) -> &[Event] {
        let lo = if t0 <= 0.0 {
            0
        } else {
            self.events.partition_point(|e| e.time <= t0)
        };
        let hi = self.events.partition_point(|e| e.time <= t1);
        &self.events[lo..hi]
    }

    /// Death times at one site within [t0, t1].
    pub fn deaths_at(&self, site: i64, t0: f64, t1: f64) -> Vec<f64> {
        self.events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::Death { site: s } if s == site))
            .map(|e| e.time)
            .filter(|&t| t >= t0 && t <= t1)
            .collect()
    }

    /// The same construction seen from the space-time point (x, t): site z at
    /// time s in the result corresponds to (z + x, s + t) in the original.
    /// Events before t are dropped; the window shrinks in time accordingly.
    pub fn shift(&self, x: i64, t: f64) -> Result<HarrisEvents> {
        if t < 0.0 || t >= self.window.t_max {
            return Err(SimError::ShiftOutOfWindow(format!(
                "time shift {t} leaves no window (t_max = {}); clipped region would be [{t}, {}]",
                self.window.t_max, self.window.t_max
            )));
        }
        let window = Window::new(self.window.x_min - x, self.window.x_max - x, self.window.t_max - t)?;
        let start = self.events.partition_point(|e| e.time < t);
        let mut events: Vec<Event> = self.events[start..]
            .iter()
            .map(|e| {
                let kind = match e.kind {
                    EventKind::Death { site } => EventKind::Death { site: site - x },
                    EventKind::Arrow { from, to } => EventKind::Arrow { from: from - x, to: to - x },
                };
                Event { time: e.time - t, kind }
            })
            .collect();
        // Subtracting t preserves order but can (in contrived cases) collapse
        // two distinct times onto one float; nudge to keep keys unique.
        for i in 1..events.len() {
            if events[i].key() == events[i - 1].key() {
                events[i].time = events[i].time.next_up();
            }
        }
        let mut h = HarrisEvents {
            window,
            kernel: self.kernel.clone(),
            seed: self.seed,
            origin_shift: (self.origin_shift.0 + x, self.origin_shift.1 + t),
            events,
        };
        h.sort_and_check()?;
        Ok(h)
    }

    /// Restriction to a sub-window: keeps events whose sites all lie inside
    /// and whose time fits. Used to verify window-extension invariance.
    pub fn restrict(&self, window: &Window) -> Result<HarrisEvents> {
        window.validate()?;
        if window.x_min < self.window.x_min
            || window.x_max > self.window.x_max
            || window.t_max > self.window.t_max
        {
            return Err(SimError::InvalidWindow("restriction window exceeds original".into()));
        }
        let events: Vec<Event> = self
            .events
            .iter()
            .filter(|e| {
                let ok_site = match e.kind {
                    EventKind::Death { site } => window.contains_site(site),
                    EventKind::Arrow { from, to } => {
                        window.contains_site(from) && window.contains_site(to)
                    }
                };
                ok_site && e.time <= window.t_max
            })
            .copied()
            .collect();
        let mut h = HarrisEvents {
            window: *window,
            kernel: self.kernel.clone(),
            seed: self.seed,
            origin_shift: self.origin_shift,
            events,
        };
        h.sort_and_check()?;
        Ok(h)
    }

    /// Text dump: one header line, then one `D x t` or `A x y t` line per
    /// event in composite order. Floats print in shortest round-trip form.
    pub fn dump<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "# cpsim-harris v1 seed={} window={},{},{} shift={},{} kernel={}",
            self.seed,
            self.window.x_min,
            self.window.x_max,
            self.window.t_max,
            self.origin_shift.0,
            self.origin_shift.1,
            self.kernel.header_string()
        )?;
        for e in &self.events {
            match e.kind {
                EventKind::Death { site } => writeln!(w, "D {site} {}", e.time)?,
                EventKind::Arrow { from, to } => writeln!(w, "A {from} {to} {}", e.time)?,
            }
        }
        Ok(())
    }

    pub fn load<R: BufRead>(r: R) -> Result<HarrisEvents> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| SimError::Parse("empty event dump".into()))??;
        let rest = header
            .strip_prefix("# cpsim-harris v1 ")
            .ok_or_else(|| SimError::Parse(format!("bad dump header: {header}")))?;
        let mut seed = None;
        let mut window = None;
        let mut shift = None;
        let mut kernel = None;
        for field in rest.splitn(4, ' ') {
            if let Some(v) = field.strip_prefix("seed=") {
                seed = Some(v.parse::<u64>().map_err(|_| SimError::Parse(format!("bad seed: {v}")))?);
            } else if let Some(v) = field.strip_prefix("window=") {
                let parts: Vec<&str> = v.split(',').collect();
                if parts.len() != 3 {
                    return Err(SimError::Parse(format!("bad window: {v}")));
                }
                window = Some(Window::new(
                    parts[0].parse().map_err(|_| SimError::Parse(format!("bad x_min: {}", parts[0])))?,
                    parts[1].parse().map_err(|_| SimError::Parse(format!("bad x_max: {}", parts[1])))?,
                    parts[2].parse().map_err(|_| SimError::Parse(format!("bad t_max: {}", parts[2])))?,
                )?);
            } else if let Some(v) = field.strip_prefix("shift=") {
                let (a, b) = v
                    .split_once(',')
                    .ok_or_else(|| SimError::Parse(format!("bad shift: {v}")))?;
                shift = Some((
                    a.parse::<i64>().map_err(|_| SimError::Parse(format!("bad shift x: {a}")))?,
                    b.parse::<f64>().map_err(|_| SimError::Parse(format!("bad shift t: {b}")))?,
                ));
            } else if let Some(v) = field.strip_prefix("kernel=") {
                kernel = Some(Kernel::from_header_string(v)?);
            }
        }
        let (seed, window, kernel) = match (seed, window, kernel) {
            (Some(s), Some(w), Some(k)) => (s, w, k),
            _ => return Err(SimError::Parse("dump header missing seed/window/kernel".into())),
        };
        let mut events = Vec::new();
        for line in lines {
            let line = line?;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["D", x, t] => events.push(Event {
                    time: t.parse().map_err(|_| SimError::Parse(format!("bad time: {t}")))?,
                    kind: EventKind::Death {
                        site: x.parse().map_err(|_| SimError::Parse(format!("bad site: {x}")))?,
                    },
                }),
                ["A", x, y, t] => events.push(Event {
                    time: t.parse().map_err(|_| SimError::Parse(format!("bad time: {t}")))?,
                    kind: EventKind::Arrow {
                        from: x.parse().map_err(|_| SimError::Parse(format!("bad site: {x}")))?,
                        to: y.parse().map_err(|_| SimError::Parse(format!("bad site: {y}")))?,
                    },
                }),
                _ => return Err(SimError::Parse(format!("bad event line: {line}"))),
            }
        }
        let mut h = HarrisEvents::from_events(&kernel, &window, seed, events)?;
        h.origin_shift = shift.unwrap_or((0, 0.0));
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nn_window() -> (Kernel, Window) {
        (Kernel::nearest_neighbor(2.0), Window::new(-20, 20, 10.0).unwrap())
    }

    #[test]
    fn sampling_is_deterministic() {
        let (k, w) = nn_window();
        let a = sample_harris(&k, &w, 42).unwrap();
        let b = sample_harris(&k, &w, 42).unwrap();
        assert_eq!(a.events(), b.events());
        let c = sample_harris(&k, &w, 43).unwrap();
        assert_ne!(a.events(), c.events());
        assert!(!a.is_empty());
    }

    #[test]
    fn events_are_sorted_and_inside() {
        let (k, w) = nn_window();
        let h = sample_harris(&k, &w, 7).unwrap();
        for pair in h.events().windows(2) {
            assert!(key_cmp(&pair[0], &pair[1]) == std::cmp::Ordering::Less);
        }
        for e in h.events() {
            assert!(e.time > 0.0 && e.time <= w.t_max);
            match e.kind {
                EventKind::Death { site } => assert!(w.contains_site(site)),
                EventKind::Arrow { from, to } => {
                    assert!(w.contains_site(from) && w.contains_site(to));
                    assert_eq!((to - from).abs(), 1);
                }
            }
        }
    }

    #[test]
    fn window_extension_reproduces_interior_events() {
        let k = Kernel::nearest_neighbor(1.5);
        let small = Window::new(-5, 5, 4.0).unwrap();
        let big = Window::new(-15, 15, 9.0).unwrap();
        let hs = sample_harris(&k, &small, 99).unwrap();
        let hb = sample_harris(&k, &big, 99).unwrap();
        let restricted = hb.restrict(&small).unwrap();
        assert_eq!(hs.events(), restricted.events());
    }

    #[test]
    fn event_counts_match_rates() {
        // Deaths: rate 1 per site. Arrows: rate lambda/2 per ordered
        // neighbour pair. Averaged over seeds the counts concentrate.
        let k = Kernel::nearest_neighbor(2.0);
        let w = Window::new(0, 9, 50.0).unwrap(); // 10 sites, 18 ordered pairs
        let mut deaths = 0usize;
        let mut arrows = 0usize;
        let n = 200;
        for seed in 0..n {
            let h = sample_harris(&k, &w, seed).unwrap();
            for e in h.events() {
                match e.kind {
                    EventKind::Death { .. } => deaths += 1,
                    EventKind::Arrow { .. } => arrows += 1,
                }
            }
        }
        let mean_deaths = deaths as f64 / n as f64;
        let mean_arrows = arrows as f64 / n as f64;
        // Expected 500 deaths, 900 arrows per construction.
        assert!((mean_deaths - 500.0).abs() < 5.0 * (500.0f64 / n as f64).sqrt());
        assert!((mean_arrows - 900.0).abs() < 5.0 * (900.0f64 / n as f64).sqrt());
    }

    #[test]
    fn shift_relabels_and_composes() {
        let (k, w) = nn_window();
        let h = sample_harris(&k, &w, 5).unwrap();
        let s1 = h.shift(3, 2.0).unwrap();
        assert_eq!(s1.window().x_min, -23);
        assert_eq!(s1.window().x_max, 17);
        assert!((s1.window().t_max - 8.0).abs() < 1e-12);
        assert_eq!(s1.origin_shift(), (3, 2.0));
        // Events correspond 1:1 with originals at time >= 2.
        let originals: Vec<Event> = h.events().iter().copied().filter(|e| e.time >= 2.0).collect();
        assert_eq!(s1.len(), originals.len());
        for (se, oe) in s1.events().iter().zip(&originals) {
            assert!((se.time - (oe.time - 2.0)).abs() < 1e-12);
            assert_eq!(se.site(), oe.site() - 3);
        }
        // Composition of shifts equals one combined shift.
        let s2 = s1.shift(-1, 3.0).unwrap();
        let direct = h.shift(2, 5.0).unwrap();
        assert_eq!(s2.events(), direct.events());
        assert_eq!(s2.origin_shift(), (2, 5.0));
        // Shifting past the horizon errors.
        assert!(h.shift(0, 10.0).is_err());
    }

    #[test]
    fn dump_load_round_trip() {
        let (k, w) = nn_window();
        let h = sample_harris(&k, &w, 31).unwrap();
        let mut buf = Vec::new();
        h.dump(&mut buf).unwrap();
        let back = HarrisEvents::load(std::io::BufReader::new(&buf[..])).unwrap();
        assert_eq!(h.events(), back.events());
        assert_eq!(h.window(), back.window());
        assert_eq!(h.seed(), back.seed());
        assert_eq!(h.kernel(), back.kernel());
        // Dumping the reloaded copy reproduces the bytes.
        let mut buf2 = Vec::new();
        back.dump(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn lambda_zero_has_no_arrows() {
        let k = Kernel::from_weights(0.0, &[(-1, 0.5), (1, 0.5)]).unwrap();
        let w = Window::new(0, 5, 10.0).unwrap();
        let h = sample_harris(&k, &w, 1).unwrap();
        assert!(h.events().iter().all(|e| matches!(e.kind, EventKind::Death { .. })));
    }
}
