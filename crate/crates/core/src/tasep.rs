//! Colored TASEP through its finite projections.
//!
//! The colored TASEP starts from the identity configuration (site `x` holds
//! color `x`). The uncolored process μ^A calls colors `<= A` particles. Its
//! `C` rightmost particles form a finite system: `C` particles on sites
//! `A-C+1..=A`, relabelled `1..=C`, holes everywhere else. Every passage time
//! `T^{A'}_{B',C'}` with `A' <= A` and `A'-C' >= A-C` is a function of that
//! finite colored system, and only of clocks on edges left of `A'+B'`, so a
//! wall placed at or beyond `A'+B'` changes nothing.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::clockfield::{ClockField, SiteWindow};
use crate::engine::{SwapEngine, SwapEvent, HOLE};
use crate::error::{Error, Result};

/// The `C` rightmost particles of μ^A, as a colored system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionSpec {
    pub base_color: i64,
    pub particle_count: usize,
}

impl ProjectionSpec {
    pub fn new(base_color: i64, particle_count: usize) -> Result<Self> {
        if particle_count == 0 {
            return Err(Error::Config("projection needs at least one particle".into()));
        }
        Ok(Self {
            base_color,
            particle_count,
        })
    }

    /// Leftmost initially occupied site.
    pub fn first_site(&self) -> i64 {
        self.base_color - self.particle_count as i64 + 1
    }
}

/// A colored configuration on a window at a given time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoredTasepState {
    pub window: SiteWindow,
    /// `colors[i]` is the color at site `window.min + i`; [`HOLE`] for empty.
    pub colors: Vec<i64>,
    pub time: f64,
}

impl ColoredTasepState {
    /// The identity configuration: site `x` holds color `x`.
    pub fn identity(window: SiteWindow) -> Self {
        Self {
            window,
            colors: (window.min..=window.max).collect(),
            time: 0.0,
        }
    }

    pub fn color(&self, x: i64) -> Option<i64> {
        self.window
            .contains(x)
            .then(|| self.colors[(x - self.window.min) as usize])
    }

    pub fn position_of(&self, color: i64) -> Option<i64> {
        self.colors
            .iter()
            .position(|&c| c == color)
            .map(|i| self.window.min + i as i64)
    }

    fn apply(&mut self, ev: &SwapEvent) {
        let i = (ev.site - self.window.min) as usize;
        self.colors.swap(i, i + 1);
        self.time = ev.time;
    }
}

/// `h_{A,B}`: number of colors `<= a` at sites `>= b`.
pub fn height_function(state: &ColoredTasepState, a: i64, b: i64) -> Result<usize> {
    if !state.window.contains(b) {
        return Err(Error::Domain(format!("site {b} outside window")));
    }
    let from = (b - state.window.min) as usize;
    Ok(state.colors[from..].iter().filter(|&&c| c <= a).count())
}

/// Event log of the projected system `ĥμ^{A,C}` on `[A-C+1, right]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectionRun {
    pub spec: ProjectionSpec,
    pub right: i64,
    pub horizon: f64,
    pub events: Vec<SwapEvent>,
}

/// Simulates `ĥμ^{A,C}` with a wall after site `right`, up to `horizon`.
///
/// An infinite horizon runs until the system jams against the wall.
pub fn simulate_finite_colored(
    field: &mut ClockField,
    spec: ProjectionSpec,
    right: i64,
    horizon: f64,
) -> Result<ProjectionRun> {
    if horizon < 0.0 || horizon.is_nan() {
        return Err(Error::Domain(format!("negative horizon {horizon}")));
    }
    if right < spec.base_color {
        return Err(Error::Domain(format!(
            "wall {right} left of base color {}",
            spec.base_color
        )));
    }
    let run = ProjectionRun {
        spec,
        right,
        horizon,
        events: Vec::new(),
    };
    let events = SwapEngine::new(field, spec.first_site(), run.initial_state().colors)?.run(horizon)?;
    Ok(ProjectionRun { events, ..run })
}

impl ProjectionRun {
    pub fn window(&self) -> SiteWindow {
        SiteWindow {
            min: self.spec.first_site(),
            max: self.right,
        }
    }

    pub fn initial_state(&self) -> ColoredTasepState {
        let w = self.window();
        let colors = (w.min..=w.max)
            .map(|x| {
                if x <= self.spec.base_color {
                    x - w.min + 1
                } else {
                    HOLE
                }
            })
            .collect();
        ColoredTasepState {
            window: w,
            colors,
            time: 0.0,
        }
    }

    /// Configuration after all events at times `<= t`.
    pub fn state_at(&self, t: f64) -> ColoredTasepState {
        let mut s = self.initial_state();
        for ev in self.events.iter().take_while(|e| e.time <= t) {
            s.apply(ev);
        }
        s.time = t;
        s
    }

    /// Answers passage-time queries `(A', B', C')` from the log.
    ///
    /// `None` means the event did not happen before the horizon.
    pub fn passage_times(&self, queries: &[PassageQuery]) -> Result<Vec<Option<f64>>> {
        let (a, c) = (self.spec.base_color, self.spec.particle_count as i64);
        let mut targets = Vec::with_capacity(queries.len());
        for q in queries {
            if q.b == 0 || q.c == 0 {
                return Err(Error::Domain(format!("{q:?}: B and C must be positive")));
            }
            if q.a > a || q.a - (q.c as i64) < a - c {
                return Err(Error::Domain(format!(
                    "{q:?} not determined by the projection (A={a}, C={c})"
                )));
            }
            if q.a + q.b as i64 > self.right {
                return Err(Error::Domain(format!("{q:?} reaches past the wall {}", self.right)));
            }
            let threshold = q.a - a + c;
            let edge = q.a + q.b as i64 - q.c as i64;
            // Particles that start right of the edge never cross it, so the
            // C'-th particle makes the min(B', C')-th crossing.
            targets.push((threshold, edge, q.b.min(q.c)));
        }
        let mut out = vec![None; queries.len()];
        let mut crossings = vec![0usize; queries.len()];
        for ev in &self.events {
            for (qi, &(k, edge, cq)) in targets.iter().enumerate() {
                if ev.site == edge && ev.moved_right <= k && k < ev.moved_left {
                    crossings[qi] += 1;
                    if crossings[qi] == cq {
                        out[qi] = Some(ev.time);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// A passage time `T^A_{B,C}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassageQuery {
    pub a: i64,
    pub b: usize,
    pub c: usize,
}

/// The smallest projection that determines all queries, with its wall.
pub fn projection_for(queries: &[PassageQuery]) -> Result<(ProjectionSpec, i64)> {
    let a = queries
        .iter()
        .map(|q| q.a)
        .max()
        .ok_or_else(|| Error::Config("no passage-time queries".into()))?;
    let low = queries.iter().map(|q| q.a - q.c as i64).min().unwrap();
    let right = queries.iter().map(|q| q.a + q.b as i64).max().unwrap() + 1;
    Ok((ProjectionSpec::new(a, (a - low) as usize)?, right))
}

/// Window of sites needed to evaluate `queries` in one shared-clock run.
pub fn window_for(queries: &[PassageQuery]) -> Result<SiteWindow> {
    let (spec, right) = projection_for(queries)?;
    SiteWindow::new(spec.first_site(), right)
}

/// Evaluates several passage times, possibly for different base colors,
/// from one projected run on the field. All times are finite.
pub fn coupled_passage_times(field: &mut ClockField, queries: &[PassageQuery]) -> Result<Vec<f64>> {
    let (spec, right) = projection_for(queries)?;
    let run = simulate_finite_colored(field, spec, right, f64::INFINITY)?;
    run.passage_times(queries)?
        .into_iter()
        .zip(queries)
        .map(|(t, q)| t.ok_or_else(|| Error::Invariant(format!("{q:?} never reached"))))
        .collect()
}

/// `T^A_{B,C}` on `[1,B_max] x [1,C_max]` for one base color.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassageTimeTable {
    pub base_color: i64,
    pub b_max: usize,
    pub c_max: usize,
    /// Row-major in `B`: entry `(B, C)` at `(B-1) * c_max + (C-1)`.
    pub times: Vec<f64>,
}

impl PassageTimeTable {
    /// `T(B, C)`, with `T = 0` when either index is 0.
    pub fn get(&self, b: usize, c: usize) -> f64 {
        if b == 0 || c == 0 {
            0.0
        } else {
            self.times[(b - 1) * self.c_max + (c - 1)]
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["B", "C", "time"])?;
        for b in 1..=self.b_max {
            for c in 1..=self.c_max {
                wr.serialize((b, c, self.get(b, c)))?;
            }
        }
        wr.flush()?;
        Ok(())
    }
}

/// Sites touched by [`passage_time_table`].
pub fn table_window(a: i64, b_max: usize, c_max: usize) -> SiteWindow {
    SiteWindow {
        min: a - c_max as i64 + 1,
        max: a + b_max as i64 + 1,
    }
}

/// Exact `T^A_{B,C}` table from the projection `ĥμ^{A,C_max}`.
pub fn passage_time_table(
    field: &mut ClockField,
    a: i64,
    b_max: usize,
    c_max: usize,
) -> Result<PassageTimeTable> {
    if b_max == 0 || c_max == 0 {
        return Err(Error::Config("table dimensions must be positive".into()));
    }
    let spec = ProjectionSpec::new(a, c_max)?;
    let right = table_window(a, b_max, c_max).max;
    let run = simulate_finite_colored(field, spec, right, f64::INFINITY)?;
    // The n-th particle-hole swap at edge x moves particle c = n + max(0, A-x)
    // (those starting right of x never cross it) and is T(B, c), B = x - A + c.
    let w = run.window();
    let mut crossings = vec![0usize; w.edge_count()];
    let mut times = vec![f64::NAN; b_max * c_max];
    for ev in &run.events {
        if ev.moved_left != HOLE {
            continue;
        }
        let n = &mut crossings[(ev.site - w.min) as usize];
        *n += 1;
        let c = *n + (a - ev.site).max(0) as usize;
        let b = ev.site - a + c as i64;
        if (1..=b_max as i64).contains(&b) && c <= c_max {
            times[(b as usize - 1) * c_max + (c - 1)] = ev.time;
        }
    }
    if times.iter().any(|t| t.is_nan()) {
        return Err(Error::Invariant("passage-time table incomplete".into()));
    }
    Ok(PassageTimeTable {
        base_color: a,
        b_max,
        c_max,
        times,
    })
}

/// Exact infinite-volume `h_{A,B}(t)` for the colored TASEP driven by `seed`.
///
/// Projections with a growing number of particles are tried until one of
/// them certifies that no further particle of color `<= A` reaches `B`.
pub fn height_at(seed: u64, a: i64, b: i64, t: f64) -> Result<usize> {
    let mut c = (a - b + 1).max(0) as usize + 8;
    loop {
        let spec = ProjectionSpec::new(a, c)?;
        let right = (b + c as i64).max(a + 1);
        let mut field = ClockField::new(seed, SiteWindow::new(spec.first_site(), right)?)?;
        let state = simulate_finite_colored(&mut field, spec, right, t)?.state_at(t);
        let h = height_function(&state, c as i64, b)?;
        if h < c {
            return Ok(h);
        }
        c *= 2;
    }
}

/// Rectangle `R^A_{B,C}`, stored by its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectangleSpec {
    pub a: i64,
    pub b: usize,
    pub c: usize,
}

impl RectangleSpec {
    pub fn new(a: i64, b: usize, c: usize) -> Self {
        Self { a, b, c }
    }

    pub fn query(&self) -> PassageQuery {
        PassageQuery {
            a: self.a,
            b: self.b,
            c: self.c,
        }
    }
}

/// `r1 <= r2` in the rectangle ordering.
pub fn rectangle_leq(r1: RectangleSpec, r2: RectangleSpec) -> bool {
    r1.a <= r2.a
        && r1.a + r1.b as i64 >= r2.a + r2.b as i64
        && r1.a - r1.c as i64 >= r2.a - r2.c as i64
}
