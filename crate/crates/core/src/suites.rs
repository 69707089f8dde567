//! Named verification suites, their JSON configuration and reports.
//!
//! Every suite derives all randomness from the configured master seed, so a
//! given configuration always produces the same report.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::clockfield::{derive_seed, ClockField, SiteWindow};
use crate::egcomb::verify_fg_identity;
use crate::error::{Error, Result};
use crate::lpp::{extract_weight_field, geodesic, passage_grid, sample_field};
use crate::osp::{check_cbopera, lal_indicator, simulate_osp, OspTrajectory};
use crate::par::try_map_trials;
use crate::sim::SimConfig;
use crate::sixvertex::{check_params, height_6v, sample_six_vertex, GalConfig, HeightPoint};
use crate::stats::{
    chi_square_two_sample, compare_samples, ks_distance, ks_one_sample, ks_two_sample, moments,
    EnergyOptions, Expectation, IncrementLaw, SampleMatrix, TestReport, ALPHA,
};
use crate::tasep::{
    coupled_passage_times, height_at, passage_time_table, rectangle_leq, table_window, window_for,
    PassageQuery, RectangleSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ShiftDe,
    ShiftSa,
    OspLpp,
    Geodesic,
    Sixvertex,
    Fg,
    Coupling,
    Asymptotics,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::ShiftDe,
        Suite::ShiftSa,
        Suite::OspLpp,
        Suite::Geodesic,
        Suite::Sixvertex,
        Suite::Fg,
        Suite::Coupling,
        Suite::Asymptotics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ShiftDe => "shift-de",
            Suite::ShiftSa => "shift-sa",
            Suite::OspLpp => "osp-lpp",
            Suite::Geodesic => "geodesic",
            Suite::Sixvertex => "sixvertex",
            Suite::Fg => "fg",
            Suite::Coupling => "coupling",
            Suite::Asymptotics => "asymptotics",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::Config(format!("unknown suite {name:?}")))
    }
}

/// A scalar decision that is not a two-sample test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Human-readable acceptance rule.
    pub target: String,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, target: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            value,
            target: target.into(),
            pass,
        }
    }

    fn p_above(name: impl Into<String>, p: f64) -> Self {
        Self::new(name, p, format!("p > {ALPHA}"), p > ALPHA)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub tests: Vec<TestReport>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: Suite, seed: u64, tests: Vec<TestReport>, checks: Vec<Check>) -> Self {
        let pass = tests.iter().all(|t| t.pass) && checks.iter().all(|c| c.pass);
        Self {
            suite,
            seed,
            tests,
            checks,
            pass,
        }
    }

    /// One line per decision.
    pub fn lines(&self) -> Vec<String> {
        let mark = |p: bool| if p { "PASS" } else { "FAIL" };
        let mut out: Vec<String> = self
            .tests
            .iter()
            .map(|t| {
                let joint = t
                    .joint
                    .map(|j| format!(", energy p = {:.4}", j.p_value))
                    .unwrap_or_default();
                format!(
                    "{} {} ({:?}; min KS p = {:.4}{joint})",
                    mark(t.pass),
                    t.name,
                    t.expectation,
                    t.marginals.iter().map(|m| m.p_value).fold(1.0, f64::min),
                )
            })
            .collect();
        out.extend(
            self.checks
                .iter()
                .map(|c| format!("{} {}: {:.6} ({})", mark(c.pass), c.name, c.value, c.target)),
        );
        out
    }

    /// Rows `kind, name, value, target, pass`; tests report their smallest p-value.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["kind", "name", "value", "target", "pass"])?;
        for t in &self.tests {
            let target = match t.expectation {
                Expectation::Equal => format!("all p > {ALPHA}"),
                Expectation::Differ => format!("some adjusted p < {ALPHA}"),
            };
            wr.serialize(("test", &t.name, t.min_p(), target, t.pass))?;
        }
        for c in &self.checks {
            wr.serialize(("check", &c.name, c.value, &c.target, c.pass))?;
        }
        wr.flush()?;
        Ok(())
    }
}

// ---------------------------------------------------------------- config

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub permutations: usize,
    /// Rows per side entering the energy test.
    pub max_points: usize,
    pub shift_de: ShiftDeConfig,
    pub shift_sa: ShiftSaConfig,
    pub osp_lpp: OspLppConfig,
    pub sixvertex: SixVertexConfig,
    pub fg: FgConfig,
    pub coupling: CouplingConfig,
    pub asymptotics: AsymptoticsConfig,
    pub sim: SimConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            permutations: 2000,
            max_points: 1000,
            shift_de: ShiftDeConfig::default(),
            shift_sa: ShiftSaConfig::default(),
            osp_lpp: OspLppConfig::default(),
            sixvertex: SixVertexConfig::default(),
            fg: FgConfig::default(),
            coupling: CouplingConfig::default(),
            asymptotics: AsymptoticsConfig::default(),
            sim: SimConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.permutations == 0 || self.max_points < 2 {
            return Err(Error::Config("need permutations >= 1 and max_points >= 2".into()));
        }
        for inst in &self.shift_de.instances {
            inst.validate()?;
        }
        self.shift_sa.validate()?;
        if self.osp_lpp.n < 2 {
            return Err(Error::Config("osp_lpp.n must be >= 2".into()));
        }
        check_params(self.sixvertex.b1, self.sixvertex.b2)?;
        for g in &self.sixvertex.instances {
            g.validate()?;
        }
        if self.coupling.n < 2 {
            return Err(Error::Config("coupling.n must be >= 2".into()));
        }
        self.asymptotics.validate()?;
        self.sim.validate()
    }

    /// Replaces the main trial count of `suite`.
    pub fn set_trials(&mut self, suite: Suite, trials: usize) {
        match suite {
            Suite::ShiftDe => self.shift_de.trials = trials,
            Suite::ShiftSa | Suite::Geodesic => self.shift_sa.trials = trials,
            Suite::OspLpp => self.osp_lpp.trials = trials,
            Suite::Sixvertex => self.sixvertex.trials = trials,
            Suite::Fg => self.fg.points = trials,
            Suite::Coupling => self.coupling.seeds = trials,
            Suite::Asymptotics => self.asymptotics.set_trials(trials),
        }
    }

    fn energy(&self, seed: u64) -> EnergyOptions {
        EnergyOptions {
            permutations: self.permutations,
            max_points: self.max_points,
            seed,
        }
    }
}

fn labels<S: ToString>(names: impl IntoIterator<Item = S>) -> Vec<String> {
    names.into_iter().map(|s| s.to_string()).collect()
}

// ---------------------------------------------------------------- shift-de

/// Groups of rectangles; groups after `iota` (1-based) are shifted by one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftDeInstance {
    pub name: String,
    pub groups: Vec<Vec<RectangleSpec>>,
    pub iota: usize,
}

/// The first inequality of `r1 <= r2` that fails, if any.
fn leq_violation(r1: RectangleSpec, r2: RectangleSpec) -> Option<String> {
    let (a1, b1, c1) = (r1.a, r1.b as i64, r1.c as i64);
    let (a2, b2, c2) = (r2.a, r2.b as i64, r2.c as i64);
    if a1 > a2 {
        Some(format!("A <= A' fails ({a1} > {a2})"))
    } else if a1 + b1 < a2 + b2 {
        Some(format!("A+B >= A'+B' fails ({} < {})", a1 + b1, a2 + b2))
    } else if a1 - c1 < a2 - c2 {
        Some(format!("A-C >= A'-C' fails ({} < {})", a1 - c1, a2 - c2))
    } else {
        debug_assert!(rectangle_leq(r1, r2));
        None
    }
}

impl ShiftDeInstance {
    fn shifted(&self) -> Vec<Vec<RectangleSpec>> {
        self.groups
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let up = i64::from(i >= self.iota);
                g.iter().map(|r| RectangleSpec::new(r.a + up, r.b, r.c)).collect()
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let g = self.groups.len();
        if g < 2 || self.iota == 0 || self.iota >= g {
            return Err(Error::Config(format!(
                "{}: need g >= 2 and 1 <= iota < g (g = {g}, iota = {})",
                self.name, self.iota
            )));
        }
        if self.groups.iter().flatten().any(|r| r.b == 0 || r.c == 0) || self.groups.iter().any(|v| v.is_empty()) {
            return Err(Error::Config(format!("{}: empty group or zero B/C", self.name)));
        }
        for (label, groups) in [("original", self.groups.clone()), ("shifted", self.shifted())] {
            for i in 0..g {
                for i2 in i + 1..g {
                    for r1 in &groups[i] {
                        for r2 in &groups[i2] {
                            if let Some(why) = leq_violation(*r1, *r2) {
                                return Err(Error::Config(format!(
                                    "{}: {label} rectangles {r1:?} (group {}) and {r2:?} (group {}) not ordered: {why}",
                                    self.name,
                                    i + 1,
                                    i2 + 1
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `P[T^0_{B,1} <= t1, T^A_{1,C} <= t2]` compared between `A = 0` and `A = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimpleProbability {
    pub b: usize,
    pub c: usize,
    pub t1: f64,
    pub t2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShiftDeConfig {
    pub instances: Vec<ShiftDeInstance>,
    pub trials: usize,
    pub repetitions: usize,
    pub simple_probability: Option<SimpleProbability>,
    pub negative_control: bool,
    /// Trials for the closed-form density histograms; 0 disables them.
    pub density_trials: usize,
    pub density_bin: f64,
    pub density_range: f64,
}

impl Default for ShiftDeConfig {
    fn default() -> Self {
        let r = RectangleSpec::new;
        Self {
            instances: vec![
                ShiftDeInstance {
                    name: "two-point".into(),
                    groups: vec![vec![r(0, 3, 1)], vec![r(0, 1, 3)]],
                    iota: 1,
                },
                ShiftDeInstance {
                    name: "three-group".into(),
                    groups: vec![vec![r(0, 5, 1), r(0, 4, 2)], vec![r(0, 2, 3)], vec![r(1, 1, 5)]],
                    iota: 1,
                },
            ],
            trials: 100_000,
            repetitions: 1,
            simple_probability: Some(SimpleProbability {
                b: 3,
                c: 3,
                t1: 1.0,
                t2: 2.0,
            }),
            negative_control: true,
            density_trials: 1_000_000,
            density_bin: 0.5,
            density_range: 6.0,
        }
    }
}

fn passage_sample(queries: &[PassageQuery], trials: usize, master: u64) -> Result<Vec<Vec<f64>>> {
    let window = window_for(queries)?;
    try_map_trials(trials, |t| {
        let mut f = ClockField::new(derive_seed(master, t as u64), window)?;
        coupled_passage_times(&mut f, queries)
    })
}

fn group_maxima(groups: &[Vec<RectangleSpec>], trials: usize, master: u64) -> Result<Vec<Vec<f64>>> {
    let queries: Vec<PassageQuery> = groups.iter().flatten().map(|r| r.query()).collect();
    let raw = passage_sample(&queries, trials, master)?;
    Ok(raw
        .into_iter()
        .map(|row| {
            let mut it = row.into_iter();
            groups
                .iter()
                .map(|g| (&mut it).take(g.len()).fold(0.0, f64::max))
                .collect()
        })
        .collect())
}

/// Joint density of `(T^0_{3,1}, T^0_{1,2})`, equal to that of `(T^0_{3,1}, T^1_{1,2})`.
pub fn density_unshifted(t1: f64, t2: f64) -> f64 {
    if t1 <= t2 {
        (-t2).exp() - (-t1 - t2).exp() * (1.0 + t1)
    } else {
        (-t1).exp() * (t1 - t2 + 1.0) - (-t1 - t2).exp() * (1.0 + t1)
    }
}

/// Joint density of `(T^0_{3,1}, T^2_{1,2})`.
pub fn density_shifted_by_two(t1: f64, t2: f64) -> f64 {
    if t1 <= t2 {
        (-t2).exp() - (-t1 - t2).exp() * (1.0 + t1)
    } else {
        2.0 * (-t1).exp() + (-t1 - t2).exp() * (t2 * (t1 - t2).powi(2) / 2.0 - 2.0 * (t2 + 1.0))
    }
}

/// Composite 5-point Gauss-Legendre rule; never evaluates the endpoints.
fn gauss<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    const NODES: [(f64, f64); 5] = [
        (0.0, 0.568_888_888_888_888_9),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let mid = a + (i as f64 + 0.5) * h;
            NODES.iter().map(|(x, w)| w * f(mid + x * h / 2.0)).sum::<f64>() * h / 2.0
        })
        .sum()
}

/// Mass of `[x0,x1] x [y0,y1]` under a density that is smooth on each
/// side of the diagonal; the inner integral is split at `y = x`.
pub fn cell_mass<F: Fn(f64, f64) -> f64>(f: F, x0: f64, x1: f64, y0: f64, y1: f64, n: usize) -> f64 {
    gauss(
        |x| {
            if y0 < x && x < y1 {
                gauss(|y| f(x, y), y0, x, n) + gauss(|y| f(x, y), x, y1, n)
            } else {
                gauss(|y| f(x, y), y0, y1, n)
            }
        },
        x0,
        x1,
        n,
    )
}

/// Largest per-bin z-score of a 2-D histogram against a density, over bins
/// with at least 20 expected counts; also returns the number of such bins.
pub fn histogram_max_z<F: Fn(f64, f64) -> f64>(
    points: &[(f64, f64)],
    density: F,
    bin: f64,
    range: f64,
) -> (f64, usize) {
    let k = (range / bin).round() as usize;
    let mut counts = vec![0usize; k * k];
    for &(x, y) in points {
        let (i, j) = ((x / bin) as usize, (y / bin) as usize);
        if i < k && j < k {
            counts[i * k + j] += 1;
        }
    }
    let n = points.len() as f64;
    let mut max_z = 0.0f64;
    let mut used = 0;
    for i in 0..k {
        for j in 0..k {
            let (x0, y0) = (i as f64 * bin, j as f64 * bin);
            let p = cell_mass(&density, x0, x0 + bin, y0, y0 + bin, 4);
            if p * n < 20.0 {
                continue;
            }
            used += 1;
            let z = (counts[i * k + j] as f64 / n - p) / (p * (1.0 - p) / n).sqrt();
            max_z = max_z.max(z.abs());
        }
    }
    (max_z, used)
}

pub fn run_shift_de(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let c = &cfg.shift_de;
    let mut tests = Vec::new();
    let mut checks = Vec::new();
    for (ii, inst) in c.instances.iter().enumerate() {
        inst.validate()?;
        let g = inst.groups.len();
        let names = labels((1..=g).map(|i| format!("group{i}")));
        for rep in 0..c.repetitions {
            let base = derive_seed(derive_seed(cfg.seed, ii as u64), rep as u64);
            let a = group_maxima(&inst.groups, c.trials, derive_seed(base, 0))?;
            let b = group_maxima(&inst.shifted(), c.trials, derive_seed(base, 1))?;
            tests.push(compare_samples(
                &format!("{} rep {rep}", inst.name),
                &SampleMatrix::new(names.clone(), a)?,
                &SampleMatrix::new(names.clone(), b)?,
                Expectation::Equal,
                Some(cfg.energy(derive_seed(base, 2))),
            )?);
        }
    }
    let base = derive_seed(cfg.seed, 1000);
    if let Some(sp) = c.simple_probability {
        let q = |a| {
            [
                PassageQuery { a: 0, b: sp.b, c: 1 },
                PassageQuery { a, b: 1, c: sp.c },
            ]
        };
        let hit = |rows: Vec<Vec<f64>>| -> Vec<f64> {
            rows.iter()
                .map(|r| f64::from(u8::from(r[0] <= sp.t1 && r[1] <= sp.t2)))
                .collect()
        };
        let p0 = moments(&hit(passage_sample(&q(0), c.trials, derive_seed(base, 0))?));
        let p1 = moments(&hit(passage_sample(&q(1), c.trials, derive_seed(base, 1))?));
        let z = (p0.mean - p1.mean).abs() / (p0.std_error.powi(2) + p1.std_error.powi(2)).sqrt();
        checks.push(Check::new(
            format!(
                "P[T0_({},1)<={}, T_(1,{})<={}] shift z-score ({:.4} vs {:.4})",
                sp.b, sp.t1, sp.c, sp.t2, p0.mean, p1.mean
            ),
            z,
            "|z| <= 4",
            z <= 4.0,
        ));
    }
    if c.negative_control {
        let q = |a| [PassageQuery { a: 0, b: 3, c: 1 }, PassageQuery { a, b: 1, c: 2 }];
        let with_diff = |rows: Vec<Vec<f64>>, upper: bool| -> Vec<Vec<f64>> {
            rows.into_iter()
                .filter(|r| (r[0] > r[1]) == upper)
                .map(|r| vec![r[0], r[1], r[0] - r[1]])
                .collect()
        };
        let a = passage_sample(&q(0), c.trials, derive_seed(base, 2))?;
        let b = passage_sample(&q(2), c.trials, derive_seed(base, 3))?;
        let names = labels(["t1", "t2", "t1-t2"]);
        for (upper, expectation, name) in [
            (true, Expectation::Differ, "T2 shift breaking the ordering, t1 > t2"),
            (false, Expectation::Equal, "T2 shift breaking the ordering, t1 <= t2"),
        ] {
            tests.push(compare_samples(
                name,
                &SampleMatrix::new(names.clone(), with_diff(a.clone(), upper))?,
                &SampleMatrix::new(names.clone(), with_diff(b.clone(), upper))?,
                expectation,
                Some(cfg.energy(derive_seed(base, 4))),
            )?);
        }
    }
    if c.density_trials > 0 {
        let q = [
            PassageQuery { a: 0, b: 3, c: 1 },
            PassageQuery { a: 0, b: 1, c: 2 },
            PassageQuery { a: 2, b: 1, c: 2 },
        ];
        let rows = passage_sample(&q, c.density_trials, derive_seed(base, 5))?;
        let p01: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
        let p02: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[2])).collect();
        for (name, pts, dens) in [
            ("density of (T0_(3,1), T0_(1,2)): max bin z", &p01, density_unshifted as fn(f64, f64) -> f64),
            ("density of (T0_(3,1), T2_(1,2)): max bin z", &p02, density_shifted_by_two),
        ] {
            let (z, bins) = histogram_max_z(pts, dens, c.density_bin, c.density_range);
            checks.push(Check::new(
                format!("{name} over {bins} bins"),
                z,
                "max |z| <= 4",
                z <= 4.0 && bins > 0,
            ));
        }
    }
    Ok(SuiteReport::new(Suite::ShiftDe, cfg.seed, tests, checks))
}

// ---------------------------------------------------------------- shift-sa

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaRectangle {
    pub a: i64,
    pub a_prime: i64,
    pub b: usize,
    pub c: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShiftSaConfig {
    pub rectangles: Vec<SaRectangle>,
    pub trials: usize,
    pub repetitions: usize,
}

impl Default for ShiftSaConfig {
    fn default() -> Self {
        let r = |a, a_prime, b, c| SaRectangle { a, a_prime, b, c };
        Self {
            rectangles: vec![r(0, 0, 6, 2), r(0, 1, 4, 4), r(0, 2, 2, 6)],
            trials: 20_000,
            repetitions: 1,
        }
    }
}

fn ordered(r1: RectangleSpec, r2: RectangleSpec) -> bool {
    rectangle_leq(r1, r2) || rectangle_leq(r2, r1)
}

impl ShiftSaConfig {
    /// `V_i`: points of `[1,B_i] x [1,C_i]` whose rectangles are ordered with
    /// every other configured rectangle, before and after the shift.
    pub fn v_sets(&self) -> Vec<Vec<(usize, usize)>> {
        let rs = &self.rectangles;
        (0..rs.len())
            .map(|i| {
                let mut v = Vec::new();
                for b in 1..=rs[i].b {
                    for c in 1..=rs[i].c {
                        let ok = rs.iter().enumerate().filter(|(j, _)| *j != i).all(|(_, rj)| {
                            ordered(RectangleSpec::new(rj.a, rj.b, rj.c), RectangleSpec::new(rs[i].a, b, c))
                                && ordered(
                                    RectangleSpec::new(rj.a_prime, rj.b, rj.c),
                                    RectangleSpec::new(rs[i].a_prime, b, c),
                                )
                        });
                        if ok {
                            v.push((b, c));
                        }
                    }
                }
                v
            })
            .collect()
    }

    /// `W_i`: points of `V_i` whose lower and left neighbours in the quadrant
    /// are in `V_i` too.
    pub fn w_sets(&self) -> Vec<Vec<(usize, usize)>> {
        self.v_sets()
            .into_iter()
            .map(|v| {
                let set: BTreeSet<(usize, usize)> = v.iter().copied().collect();
                v.iter()
                    .copied()
                    .filter(|&(b, c)| {
                        (b == 1 || set.contains(&(b - 1, c))) && (c == 1 || set.contains(&(b, c - 1)))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.rectangles.iter().any(|r| r.b == 0 || r.c == 0) {
            return Err(Error::Config("shift_sa: B and C must be positive".into()));
        }
        if let Some(i) = self.v_sets().iter().position(|v| v.is_empty()) {
            return Err(Error::Config(format!(
                "shift_sa: V_{} is empty, no point is ordered with all other rectangles",
                i + 1
            )));
        }
        Ok(())
    }

    fn queries(&self, primed: bool) -> Vec<PassageQuery> {
        self.v_sets()
            .iter()
            .zip(&self.rectangles)
            .flat_map(|(v, r)| {
                let a = if primed { r.a_prime } else { r.a };
                v.iter().map(move |&(b, c)| PassageQuery { a, b, c })
            })
            .collect()
    }
}

pub fn run_shift_sa(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let c = &cfg.shift_sa;
    c.validate()?;
    let names = labels(
        c.v_sets()
            .iter()
            .enumerate()
            .flat_map(|(i, v)| v.iter().map(move |(b, cc)| format!("V{}({b},{cc})", i + 1))),
    );
    let mut tests = Vec::new();
    for rep in 0..c.repetitions {
        let base = derive_seed(derive_seed(cfg.seed, 2000), rep as u64);
        let a = passage_sample(&c.queries(false), c.trials, derive_seed(base, 0))?;
        let b = passage_sample(&c.queries(true), c.trials, derive_seed(base, 1))?;
        tests.push(compare_samples(
            &format!("V-rectangles rep {rep}"),
            &SampleMatrix::new(names.clone(), a)?,
            &SampleMatrix::new(names.clone(), b)?,
            Expectation::Equal,
            Some(cfg.energy(derive_seed(base, 2))),
        )?);
    }
    Ok(SuiteReport::new(Suite::ShiftSa, cfg.seed, tests, Vec::new()))
}

/// Per trial, the parts of the geodesics `Γ^{A_i}_{B_i,C_i}` inside `W_i`,
/// each encoded as a bit mask over `W_i`.
fn geodesic_sample(c: &ShiftSaConfig, primed: bool, master: u64) -> Result<Vec<Vec<u64>>> {
    let w_sets = c.w_sets();
    let tables: Vec<(i64, usize, usize)> = c
        .rectangles
        .iter()
        .map(|r| (if primed { r.a_prime } else { r.a }, r.b, r.c))
        .collect();
    let min = tables.iter().map(|&(a, b, cc)| table_window(a, b, cc).min).min().unwrap_or(0);
    let max = tables.iter().map(|&(a, b, cc)| table_window(a, b, cc).max).max().unwrap_or(1);
    let window = SiteWindow::new(min, max)?;
    try_map_trials(c.trials, |t| {
        let mut f = ClockField::new(derive_seed(master, t as u64), window)?;
        tables
            .iter()
            .zip(&w_sets)
            .map(|(&(a, b, cc), w)| {
                let table = passage_time_table(&mut f, a, b, cc)?;
                let path = geodesic(&extract_weight_field(&table)?, (1, 1), (b, cc))?.path;
                Ok(w.iter()
                    .enumerate()
                    .filter(|(_, v)| path.contains(v))
                    .fold(0u64, |m, (k, _)| m | 1 << k))
            })
            .collect()
    })
}

pub fn run_geodesic(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let c = &cfg.shift_sa;
    c.validate()?;
    let w_sets = c.w_sets();
    if w_sets.iter().all(|w| w.is_empty()) || w_sets.iter().any(|w| w.len() > 64) {
        return Err(Error::Config("shift_sa: W sets must be nonempty and hold at most 64 points".into()));
    }
    let mut checks = Vec::new();
    for rep in 0..c.repetitions {
        let base = derive_seed(derive_seed(cfg.seed, 3000), rep as u64);
        let a = geodesic_sample(c, false, derive_seed(base, 0))?;
        let b = geodesic_sample(c, true, derive_seed(base, 1))?;
        let r = chi_square_two_sample(&a, &b)?;
        checks.push(Check::p_above(
            format!("geodesic shapes in W, chi-square (dof {}) rep {rep}", r.dof),
            r.p_value,
        ));
    }
    Ok(SuiteReport::new(Suite::Geodesic, cfg.seed, Vec::new(), checks))
}

// ---------------------------------------------------------------- osp-lpp

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OspLppConfig {
    pub n: usize,
    pub trials: usize,
    pub repetitions: usize,
}

impl Default for OspLppConfig {
    fn default() -> Self {
        Self {
            n: 6,
            trials: 20_000,
            repetitions: 5,
        }
    }
}

/// Runs `trials` OSPs and keeps only `summary` of each; full event logs grow
/// like `N^2` and are dropped per trial.
fn osp_map<T, F>(n: usize, trials: usize, master: u64, summary: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(OspTrajectory) -> Result<T> + Sync + Send,
{
    let window = SiteWindow::new(1, n as i64)?;
    try_map_trials(trials, |t| {
        let mut f = ClockField::new(derive_seed(master, t as u64), window)?;
        summary(simulate_osp(&mut f, n)?)
    })
}

fn argmax(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &x)| if x > best.1 { (i, x) } else { best })
        .0
        + 1
}

pub fn run_osp_lpp(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let c = &cfg.osp_lpp;
    let n = c.n;
    let names = labels((1..n).map(|k| format!("k={k}")));
    let mut tests = Vec::new();
    let mut checks = Vec::new();
    for rep in 0..c.repetitions {
        let base = derive_seed(derive_seed(cfg.seed, 4000), rep as u64);
        let u: Vec<Vec<f64>> = osp_map(n, c.trials, derive_seed(base, 0), |t| Ok(t.finishing_times))?;
        let lpp_master = derive_seed(base, 1);
        let l: Vec<Vec<f64>> = try_map_trials(c.trials, |t| {
            let field = sample_field(derive_seed(lpp_master, t as u64), n - 1, n - 1)?;
            let grid = passage_grid(&field, (1, 1))?;
            Ok::<_, Error>((1..n).map(|k| grid.get(k, n - k)).collect())
        })?;
        let umax: Vec<f64> = u.iter().map(|r| r.iter().cloned().fold(0.0, f64::max)).collect();
        let lmax: Vec<f64> = l.iter().map(|r| r.iter().cloned().fold(0.0, f64::max)).collect();
        let uarg: Vec<usize> = u.iter().map(|r| argmax(r)).collect();
        let larg: Vec<usize> = l.iter().map(|r| argmax(r)).collect();
        if rep == 0 {
            let m = moments(&u.iter().map(|r| r[0]).collect::<Vec<_>>());
            let z = (m.mean - (n - 1) as f64) / m.std_error;
            checks.push(Check::new(
                format!("E[U_N(1)] = N-1 z-score (mean {:.4})", m.mean),
                z,
                "|z| <= 4",
                z.abs() <= 4.0,
            ));
        }
        tests.push(compare_samples(
            &format!("finishing times vs LPP, N={n}, rep {rep}"),
            &SampleMatrix::new(names.clone(), u)?,
            &SampleMatrix::new(names.clone(), l)?,
            Expectation::Equal,
            Some(cfg.energy(derive_seed(base, 2))),
        )?);
        checks.push(Check::p_above(
            format!("absorbing time vs max LPP, KS, rep {rep}"),
            ks_two_sample(&umax, &lmax)?.p_value,
        ));
        checks.push(Check::p_above(
            format!("last swap location vs LPP argmax, chi-square, rep {rep}"),
            chi_square_two_sample(&uarg, &larg)?.p_value,
        ));
    }
    Ok(SuiteReport::new(Suite::OspLpp, cfg.seed, tests, checks))
}

// ---------------------------------------------------------------- six-vertex

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SmokeConfig {
    pub epsilons: Vec<f64>,
    pub a: i64,
    pub b: i64,
    pub t: f64,
    pub trials: usize,
}

impl Default for SmokeConfig {
    fn default() -> Self {
        Self {
            epsilons: vec![0.05, 0.02],
            // The first particle must make three jumps, so the discrete-time
            // bias at eps = 0.05 is well above the sampling noise.
            a: 0,
            b: 3,
            t: 3.0,
            trials: 50_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SixVertexConfig {
    pub b1: f64,
    pub b2: f64,
    pub trials: usize,
    pub repetitions: usize,
    pub instances: Vec<GalConfig>,
    pub smoke: Option<SmokeConfig>,
}

impl Default for SixVertexConfig {
    fn default() -> Self {
        let p = |m, x, y| HeightPoint { m, x, y };
        Self {
            b1: 0.6,
            b2: 0.3,
            trials: 20_000,
            repetitions: 1,
            instances: vec![
                GalConfig {
                    shifted: vec![p(2, 5.5, 4.5)],
                    fixed: vec![],
                },
                GalConfig {
                    shifted: vec![p(2, 3.5, 6.5)],
                    fixed: vec![p(4, 6.5, 4.5)],
                },
            ],
            smoke: Some(SmokeConfig::default()),
        }
    }
}

/// Six-vertex approximation of `h_{A,B}(t)` at `b1 = eps`, `b2 = 0`.
fn smoke_height(seed: u64, s: &SmokeConfig, eps: f64) -> Result<f64> {
    let n = (s.t / eps).floor() as usize;
    let rows = (n as i64 + s.b - 1).max(0) as usize;
    let sample = sample_six_vertex(seed, n.max(1), rows.max(1), eps, 0.0)?;
    let m = u32::try_from(s.a + 1).map_err(|_| Error::Config("smoke test needs A >= 0".into()))?;
    let h = height_6v(&sample, m, n as f64 + 0.5, rows as f64 + 0.5)?;
    Ok(h as f64 + (s.a - s.b + 1) as f64)
}

pub fn run_sixvertex(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let c = &cfg.sixvertex;
    check_params(c.b1, c.b2)?;
    let mut tests = Vec::new();
    let mut checks = Vec::new();
    for (ii, inst) in c.instances.iter().enumerate() {
        inst.validate()?;
        let (x, y) = inst.box_size();
        let names = labels(
            inst.shifted
                .iter()
                .chain(&inst.fixed)
                .map(|p| format!("H^{}({},{})", p.m, p.x, p.y)),
        );
        for rep in 0..c.repetitions {
            let base = derive_seed(derive_seed(derive_seed(cfg.seed, 5000), ii as u64), rep as u64);
            let side = |shifted: bool, master: u64| {
                try_map_trials(c.trials, |t| {
                    let s = sample_six_vertex(derive_seed(master, t as u64), x, y, c.b1, c.b2)?;
                    if shifted {
                        inst.shifted_vector(&s)
                    } else {
                        inst.original(&s)
                    }
                })
            };
            tests.push(compare_samples(
                &format!("six-vertex instance {} rep {rep}", ii + 1),
                &SampleMatrix::new(names.clone(), side(false, derive_seed(base, 0))?)?,
                &SampleMatrix::new(names.clone(), side(true, derive_seed(base, 1))?)?,
                Expectation::Equal,
                Some(cfg.energy(derive_seed(base, 2))),
            )?);
        }
    }
    if let Some(s) = &c.smoke {
        let base = derive_seed(cfg.seed, 5500);
        let tasep_master = derive_seed(base, 0);
        let h: Vec<f64> = try_map_trials(s.trials, |t| {
            height_at(derive_seed(tasep_master, t as u64), s.a, s.b, s.t).map(|h| h as f64)
        })?;
        let mut distances = Vec::new();
        for (k, &eps) in s.epsilons.iter().enumerate() {
            let master = derive_seed(base, 1 + k as u64);
            let v: Vec<f64> = try_map_trials(s.trials, |t| smoke_height(derive_seed(master, t as u64), s, eps))?;
            let d = ks_distance(&v, &h);
            checks.push(Check::new(
                format!("KS distance to TASEP height law at eps = {eps}"),
                d,
                "reported",
                true,
            ));
            distances.push(d);
        }
        let decreasing = distances.windows(2).all(|w| w[1] < w[0]);
        checks.push(Check::new(
            "KS distance decreases as eps decreases",
            f64::from(u8::from(decreasing)),
            "1 = decreasing",
            decreasing,
        ));
    }
    Ok(SuiteReport::new(Suite::Sixvertex, cfg.seed, tests, checks))
}

// ---------------------------------------------------------------- fg

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FgConfig {
    pub ns: Vec<usize>,
    pub points: usize,
}

impl Default for FgConfig {
    fn default() -> Self {
        Self {
            ns: vec![2, 3, 4, 5],
            points: 20,
        }
    }
}

pub fn run_fg(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for &n in &cfg.fg.ns {
        let r = verify_fg_identity(n, cfg.fg.points, derive_seed(cfg.seed, 6000 + n as u64))?;
        let sigmas_ok = r.per_sigma.iter().filter(|s| s.equal).count();
        checks.push(Check::new(
            format!(
                "F = G at N={n}: {sigmas_ok}/{} permutations, {} tableaux, {} networks, hook length {}",
                r.per_sigma.len(),
                r.tableaux,
                r.networks,
                r.hook_length
            ),
            sigmas_ok as f64,
            format!("all {} equal, counts match", r.per_sigma.len()),
            r.pass,
        ));
    }
    Ok(SuiteReport::new(Suite::Fg, cfg.seed, Vec::new(), checks))
}

// ---------------------------------------------------------------- coupling

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CouplingConfig {
    pub n: usize,
    pub seeds: usize,
    /// Table size for the extraction round trip.
    pub table_b: usize,
    pub table_c: usize,
    pub horizon: f64,
    /// Right end of the clock window for the cut-off / push-back comparison.
    pub window_end: i64,
}

impl Default for CouplingConfig {
    fn default() -> Self {
        Self {
            n: 8,
            seeds: 100,
            table_b: 7,
            table_c: 6,
            horizon: 30.0,
            window_end: 200,
        }
    }
}

pub fn run_coupling(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let c = &cfg.coupling;
    let n = c.n;
    let base = derive_seed(cfg.seed, 7000);
    let seeds = c.seeds;

    let round_trip: Vec<bool> = try_map_trials(seeds, |s| -> Result<bool> {
        let a = (s % 5) as i64 - 2;
        let mut f = ClockField::new(derive_seed(base, s as u64), table_window(a, c.table_b, c.table_c))?;
        let table = passage_time_table(&mut f, a, c.table_b, c.table_c)?;
        let grid = passage_grid(&extract_weight_field(&table)?, (1, 1))?;
        Ok((1..=c.table_b).all(|b| (1..=c.table_c).all(|cc| grid.get(b, cc) == table.get(b, cc))))
    })?;
    let cut_push: Vec<bool> = try_map_trials(seeds * (n - 1), |k| -> Result<bool> {
        let (s, a) = (k / (n - 1), 1 + k % (n - 1));
        let mut f = ClockField::new(derive_seed(base, (1 << 32) + s as u64), SiteWindow::new(1, c.window_end)?)?;
        check_cbopera(&mut f, n, a, c.horizon)
    })?;
    let finishing: Vec<bool> = try_map_trials(seeds, |s| -> Result<bool> {
        let seed = derive_seed(base, (2 << 32) + s as u64);
        let mut f = ClockField::new(seed, SiteWindow::new(1, n as i64 + 1)?)?;
        let traj = simulate_osp(&mut f, n)?;
        for a in 1..n {
            let q = PassageQuery { a: a as i64, b: n - a, c: a };
            if traj.projection_absorption(a)? != coupled_passage_times(&mut f, &[q])?[0] {
                return Ok(false);
            }
        }
        Ok(true)
    })?;
    let count = |v: &[bool]| v.iter().filter(|&&x| x).count();
    let checks = vec![
        Check::new(
            format!("passage table rebuilt from extracted weights: {}/{} exact", count(&round_trip), seeds),
            count(&round_trip) as f64,
            format!("= {seeds}"),
            count(&round_trip) == seeds,
        ),
        Check::new(
            format!(
                "cut-off/push-back of the infinite TASEP equals the OSP projection, N={n}, all A: {}/{}",
                count(&cut_push),
                cut_push.len()
            ),
            count(&cut_push) as f64,
            format!("= {}", cut_push.len()),
            count(&cut_push) == cut_push.len(),
        ),
        Check::new(
            format!(
                "projection absorption time equals T^A_(N-A,A), N={n}, all A: {}/{}",
                count(&finishing),
                seeds
            ),
            count(&finishing) as f64,
            format!("= {seeds}"),
            count(&finishing) == seeds,
        ),
    ];
    Ok(SuiteReport::new(Suite::Coupling, cfg.seed, Vec::new(), checks))
}

// ---------------------------------------------------------------- asymptotics

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LalConfig {
    pub n: usize,
    pub ys: Vec<f64>,
    pub trials: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IncrementConfig {
    pub n: usize,
    pub y: f64,
    pub trials: usize,
    /// Increments `U(k+1) - U(k)` are taken for `k` within this distance of `yN`.
    pub half_window: usize,
    pub variance_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaxMeanConfig {
    pub n: usize,
    pub trials: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArgmaxConfig {
    pub ns: Vec<usize>,
    pub trials: usize,
    pub band: [f64; 2],
    pub max_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AsymptoticsConfig {
    pub lal: Option<LalConfig>,
    pub increments: Option<IncrementConfig>,
    pub max_mean: Option<MaxMeanConfig>,
    pub argmax: Option<ArgmaxConfig>,
}

impl Default for LalConfig {
    fn default() -> Self {
        Self {
            n: 200,
            ys: vec![0.5, 0.8],
            trials: 5000,
            tolerance: 0.05,
        }
    }
}

impl Default for IncrementConfig {
    fn default() -> Self {
        Self {
            n: 500,
            y: 0.5,
            trials: 5000,
            half_window: 10,
            variance_tolerance: 0.3,
        }
    }
}

impl Default for MaxMeanConfig {
    fn default() -> Self {
        Self {
            n: 300,
            trials: 200,
            tolerance: 0.1,
        }
    }
}

impl Default for ArgmaxConfig {
    fn default() -> Self {
        Self {
            ns: vec![100, 200, 400],
            trials: 300,
            band: [0.1, 1.0],
            max_ratio: 2.0,
        }
    }
}

impl Default for AsymptoticsConfig {
    fn default() -> Self {
        Self {
            lal: Some(LalConfig::default()),
            increments: Some(IncrementConfig::default()),
            max_mean: Some(MaxMeanConfig::default()),
            argmax: Some(ArgmaxConfig::default()),
        }
    }
}

impl AsymptoticsConfig {
    /// Sets the trial count of every enabled part.
    fn set_trials(&mut self, trials: usize) {
        if let Some(l) = &mut self.lal {
            l.trials = trials;
        }
        if let Some(i) = &mut self.increments {
            i.trials = trials;
        }
        if let Some(m) = &mut self.max_mean {
            m.trials = trials;
        }
        if let Some(a) = &mut self.argmax {
            a.trials = trials;
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(l) = &self.lal {
            if l.n < 2 || l.ys.iter().any(|y| !(0.0 < *y && *y < 1.0)) {
                return Err(Error::Config("lal: need n >= 2 and every y in (0, 1)".into()));
            }
        }
        if let Some(i) = &self.increments {
            IncrementLaw::new(i.y)?;
            let k = (i.y * i.n as f64).floor() as usize;
            if k < i.half_window + 1 || k + i.half_window >= i.n {
                return Err(Error::Config("increments: window leaves [1, N-1]".into()));
            }
        }
        Ok(())
    }
}

pub fn run_asymptotics(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let c = &cfg.asymptotics;
    c.validate()?;
    let base = derive_seed(cfg.seed, 8000);
    let mut checks = Vec::new();
    if let Some(l) = &c.lal {
        let ks: Vec<usize> = l.ys.iter().map(|y| ((y * l.n as f64).round() as usize).clamp(1, l.n)).collect();
        let hits: Vec<Vec<bool>> = osp_map(l.n, l.trials, derive_seed(base, 0), |t| {
            ks.iter().map(|&k| lal_indicator(&t, k)).collect()
        })?;
        for (i, (&y, &k)) in l.ys.iter().zip(&ks).enumerate() {
            let p = hits.iter().filter(|h| h[i]).count() as f64 / hits.len() as f64;
            let limit = y.sqrt() / (y.sqrt() + (1.0 - y).sqrt());
            checks.push(Check::new(
                format!("P[last jump of k={k} is left], N={}, y={y}", l.n),
                p,
                format!("within {} of {limit:.4}", l.tolerance),
                (p - limit).abs() <= l.tolerance,
            ));
        }
    }
    if let Some(inc) = &c.increments {
        let law = IncrementLaw::new(inc.y)?;
        let k0 = (inc.y * inc.n as f64).floor() as usize;
        let x: Vec<f64> = osp_map(inc.n, inc.trials, derive_seed(base, 1), |t| {
            Ok((k0 - inc.half_window..k0 + inc.half_window)
                .map(|k| t.finishing_time(k + 1) - t.finishing_time(k))
                .collect::<Vec<f64>>())
        })?
        .concat();
        let ks = ks_one_sample(&x, |t| law.cdf(t))?;
        checks.push(Check::p_above(
            format!("increments near k={k0}, N={}, vs two-sided exponential law: KS", inc.n),
            ks.p_value,
        ));
        let v = moments(&x).variance;
        checks.push(Check::new(
            format!("increment variance over {} increments", x.len()),
            v,
            format!("{:.3} +- {}", law.variance(), inc.variance_tolerance),
            (v - law.variance()).abs() <= inc.variance_tolerance,
        ));
    }
    if let Some(mm) = &c.max_mean {
        let times = osp_map(mm.n, mm.trials, derive_seed(base, 2), |t| Ok(t.absorbing_time))?;
        let ratio = times.iter().sum::<f64>() / (times.len() * mm.n) as f64;
        checks.push(Check::new(
            format!("mean absorbing time / N at N={}", mm.n),
            ratio,
            format!("within {}% of 2", mm.tolerance * 100.0),
            (ratio / 2.0 - 1.0).abs() <= mm.tolerance,
        ));
    }
    if let Some(am) = &c.argmax {
        let mut scaled = Vec::new();
        for (i, &n) in am.ns.iter().enumerate() {
            let dev = osp_map(n, am.trials, derive_seed(base, 3 + i as u64), |t| {
                Ok(t.last_swap_location as f64 - n as f64 / 2.0)
            })?;
            let s = moments(&dev).variance.sqrt() / (n as f64).powf(2.0 / 3.0);
            checks.push(Check::new(
                format!("std(k* - N/2) / N^(2/3) at N={n}"),
                s,
                format!("in [{}, {}]", am.band[0], am.band[1]),
                am.band[0] <= s && s <= am.band[1],
            ));
            scaled.push(s);
        }
        if !scaled.is_empty() {
            let hi = scaled.iter().cloned().fold(f64::MIN, f64::max);
            let lo = scaled.iter().cloned().fold(f64::MAX, f64::min);
            checks.push(Check::new(
                "spread of the scaled k* deviation across N (max/min)",
                hi / lo,
                format!("<= {}", am.max_ratio),
                hi / lo <= am.max_ratio,
            ));
        }
    }
    Ok(SuiteReport::new(Suite::Asymptotics, cfg.seed, Vec::new(), checks))
}

pub fn run_suite(suite: Suite, cfg: &ExperimentConfig) -> Result<SuiteReport> {
    match suite {
        Suite::ShiftDe => run_shift_de(cfg),
        Suite::ShiftSa => run_shift_sa(cfg),
        Suite::OspLpp => run_osp_lpp(cfg),
        Suite::Geodesic => run_geodesic(cfg),
        Suite::Sixvertex => run_sixvertex(cfg),
        Suite::Fg => run_fg(cfg),
        Suite::Coupling => run_coupling(cfg),
        Suite::Asymptotics => run_asymptotics(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_round_trips() {
        let cfg = ExperimentConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
        assert_eq!(ExperimentConfig::from_json("{}").unwrap(), cfg);
        assert!(matches!(ExperimentConfig::from_json("{\"sed\": 1}"), Err(Error::Config(_))));
    }

    #[test]
    fn ordering_violation_is_explained() {
        let bad = ShiftDeInstance {
            name: "bad".into(),
            groups: vec![vec![RectangleSpec::new(0, 1, 3)], vec![RectangleSpec::new(0, 3, 1)]],
            iota: 1,
        };
        let msg = bad.validate().unwrap_err().to_string();
        assert!(msg.contains("A+B >= A'+B'"), "{msg}");
        let no_split = ShiftDeInstance { iota: 2, ..bad };
        assert!(no_split.validate().is_err());
    }

    #[test]
    fn v_and_w_sets() {
        let c = ShiftSaConfig::default();
        let v = c.v_sets();
        assert_eq!(v[0], vec![(5, 1), (5, 2), (6, 1), (6, 2)]);
        assert_eq!(v[1], vec![(3, 3), (3, 4), (4, 3), (4, 4)]);
        assert_eq!(c.w_sets()[0], vec![(6, 1), (6, 2)]);
        // A single rectangle is ordered with nothing else, so V is the whole box.
        let one = ShiftSaConfig {
            rectangles: vec![SaRectangle { a: 0, a_prime: 3, b: 2, c: 3 }],
            ..Default::default()
        };
        assert_eq!(one.v_sets()[0].len(), 6);
        assert_eq!(one.w_sets()[0].len(), 6);
    }

    #[test]
    fn densities_integrate_to_one() {
        for f in [density_unshifted as fn(f64, f64) -> f64, density_shifted_by_two] {
            let total: f64 = (0..40)
                .flat_map(|i| (0..40).map(move |j| (i, j)))
                .map(|(i, j)| {
                    let (x, y) = (i as f64, j as f64);
                    cell_mass(f, x, x + 1.0, y, y + 1.0, 4)
                })
                .sum();
            assert!((total - 1.0).abs() < 1e-8, "{total}");
        }
    }

    #[test]
    fn unshifted_density_matches_its_convolution() {
        // T^0_{3,1} = E1+E2+E3 and T^0_{1,2} = E1+E4: condition on E1 = s.
        for i in 0..12 {
            for j in 0..12 {
                let (t1, t2) = (0.37 + 0.5 * i as f64, 0.21 + 0.5 * j as f64);
                let conv = gauss(
                    |s| (-s).exp() * (t1 - s) * (-(t1 - s)).exp() * (-(t2 - s)).exp(),
                    0.0,
                    t1.min(t2),
                    8,
                );
                assert!((conv - density_unshifted(t1, t2)).abs() < 1e-10, "({t1}, {t2})");
            }
        }
    }

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()).unwrap(), s);
        }
        assert!(Suite::from_name("nope").is_err());
    }
}
