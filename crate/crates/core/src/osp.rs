//! Oriented swap process on `{1, ..., N}` and the cut-off / push-back operators.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::clockfield::ClockField;
use crate::engine::{SwapEngine, HOLE};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OspEvent {
    pub time: f64,
    /// The swap happened across `(edge, edge+1)`.
    pub edge: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OspTrajectory {
    pub n: usize,
    pub events: Vec<OspEvent>,
    /// `U_N(k)` for `k = 1..N-1`, stored at index `k-1`.
    pub finishing_times: Vec<f64>,
    pub last_swap_location: usize,
    pub absorbing_time: f64,
}

/// Runs the OSP from the identity until it reaches the reversal.
///
/// Uses the clocks of edges `(k, k+1)`, `1 <= k < N`.
pub fn simulate_osp(field: &mut ClockField, n: usize) -> Result<OspTrajectory> {
    if n < 2 {
        return Err(Error::Config(format!("OSP needs N >= 2, got {n}")));
    }
    let mut engine = SwapEngine::new(field, 1, (1..=n as i64).collect())?;
    let raw = engine.run(f64::INFINITY)?;
    if !engine.colors().iter().rev().copied().eq(1..=n as i64) {
        return Err(Error::Invariant("OSP absorbed away from the reversal".into()));
    }
    if raw.len() != n * (n - 1) / 2 {
        return Err(Error::Invariant(format!(
            "{} swaps, expected {}",
            raw.len(),
            n * (n - 1) / 2
        )));
    }
    let events: Vec<OspEvent> = raw
        .iter()
        .map(|e| OspEvent {
            time: e.time,
            edge: e.site as usize,
        })
        .collect();
    let mut finishing_times = vec![0.0; n - 1];
    for e in &events {
        finishing_times[e.edge - 1] = e.time;
    }
    let last = events.last().expect("N >= 2 has at least one swap");
    Ok(OspTrajectory {
        n,
        finishing_times,
        last_swap_location: last.edge,
        absorbing_time: last.time,
        events,
    })
}

impl OspTrajectory {
    /// `U_N(k)` with `U_N(0) = U_N(N) = 0`.
    pub fn finishing_time(&self, k: usize) -> f64 {
        if k == 0 || k >= self.n {
            0.0
        } else {
            self.finishing_times[k - 1]
        }
    }

    /// Absorption time of the projection with particles on `1..=a`
    /// (numbers `<= a` as particles). Its last jump is across edge `N-a`.
    pub fn projection_absorption(&self, a: usize) -> Result<f64> {
        if a == 0 || a >= self.n {
            return Err(Error::Domain(format!("A = {a} outside [1, {}]", self.n - 1)));
        }
        Ok(self.finishing_time(self.n - a))
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["time", "edge"])?;
        for e in &self.events {
            wr.serialize((e.time, e.edge))?;
        }
        wr.flush()?;
        Ok(())
    }
}

pub fn finishing_vector(traj: &OspTrajectory) -> Vec<f64> {
    traj.finishing_times.clone()
}

/// Whether the last jump of the number `k` is to the left.
pub fn lal_indicator(traj: &OspTrajectory, k: usize) -> Result<bool> {
    if k == 0 || k > traj.n {
        return Err(Error::Domain(format!("k = {k} outside [1, {}]", traj.n)));
    }
    let n = traj.n;
    Ok(traj.finishing_time(n + 1 - k) > traj.finishing_time(n - k))
}

/// Finitely many particles on `Z`, as their sorted positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteConfig {
    pub particles: Vec<i64>,
}

impl FiniteConfig {
    pub fn new(mut particles: Vec<i64>) -> Result<Self> {
        particles.sort_unstable();
        if particles.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invariant("two particles on one site".into()));
        }
        Ok(Self { particles })
    }

    fn from_colors(left: i64, colors: &[i64]) -> Self {
        Self {
            particles: colors
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != HOLE)
                .map(|(i, _)| left + i as i64)
                .collect(),
        }
    }
}

/// `R_k`: keeps the `k` rightmost particles.
pub fn cutoff(config: &FiniteConfig, k: usize) -> Result<FiniteConfig> {
    if k == 0 {
        return Err(Error::Domain("cut-off needs k >= 1".into()));
    }
    let skip = config.particles.len().saturating_sub(k);
    Ok(FiniteConfig {
        particles: config.particles[skip..].to_vec(),
    })
}

/// `B_n`: the `j`-th rightmost particle moves from `x` to `min(x, n+1-j)`.
pub fn pushback(config: &FiniteConfig, n: i64) -> FiniteConfig {
    let len = config.particles.len();
    let particles = config
        .particles
        .iter()
        .enumerate()
        .map(|(i, &x)| x.min(n + 1 - (len - i) as i64))
        .collect();
    FiniteConfig { particles }
}

/// Checks, event by event up to `horizon`, that `B_N R_A μ^A` restricted to
/// `{1..N}` equals the projection `ν^{N,A}` of the OSP, both driven by `field`.
///
/// `μ^A` only needs its `A` rightmost particles, which start on `1..=A`; they
/// move freely up to the right end of the field's window. Reaching that end
/// before `horizon` is a truncation error.
pub fn check_cbopera(field: &mut ClockField, n: usize, a: usize, horizon: f64) -> Result<bool> {
    if a == 0 || a >= n {
        return Err(Error::Domain(format!("A = {a} outside [1, {}]", n - 1)));
    }
    if !horizon.is_finite() || horizon < 0.0 {
        return Err(Error::Domain(format!("horizon {horizon} must be finite and >= 0")));
    }
    let wall = field.window().max;
    if wall <= n as i64 {
        return Err(Error::Domain(format!("clock window must extend past {n}")));
    }
    let initial = |len: i64| -> Vec<i64> {
        (1..=len).map(|x| if x <= a as i64 { 0 } else { HOLE }).collect()
    };
    let mu = SwapEngine::new(field, 1, initial(wall))?.run(horizon)?;
    if mu.iter().any(|e| e.site == wall - 1) {
        return Err(Error::Truncation(format!(
            "a particle reached the window end {wall} before time {horizon}"
        )));
    }
    let nu = SwapEngine::new(field, 1, initial(n as i64))?.run(horizon)?;

    let mut mu_colors = initial(wall);
    let mut nu_colors = initial(n as i64);
    let agree = |mu_colors: &[i64], nu_colors: &[i64]| -> Result<bool> {
        let lhs = pushback(&cutoff(&FiniteConfig::from_colors(1, mu_colors), a)?, n as i64);
        Ok(lhs == FiniteConfig::from_colors(1, nu_colors))
    };
    if !agree(&mu_colors, &nu_colors)? {
        return Ok(false);
    }
    let (mut i, mut j) = (0, 0);
    while i < mu.len() || j < nu.len() {
        let take_mu = j == nu.len() || (i < mu.len() && mu[i].time <= nu[j].time);
        let t = if take_mu { mu[i].time } else { nu[j].time };
        // Apply every event at this instant before comparing.
        while i < mu.len() && mu[i].time == t {
            let s = (mu[i].site - 1) as usize;
            mu_colors.swap(s, s + 1);
            i += 1;
        }
        while j < nu.len() && nu[j].time == t {
            let s = (nu[j].site - 1) as usize;
            nu_colors.swap(s, s + 1);
            j += 1;
        }
        if !agree(&mu_colors, &nu_colors)? {
            return Ok(false);
        }
    }
    Ok(true)
}
