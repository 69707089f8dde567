//! Two-sample tests and reference laws.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp, Exp1};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::clockfield::{derive_seed, seeded_rng};
use crate::error::{Error, Result};

/// Significance level used for every decision.
pub const ALPHA: f64 = 1e-3;

/// Trials in rows, one column per observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMatrix {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SampleMatrix {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != labels.len()) {
            return Err(Error::Config("rows and labels differ in dimension".into()));
        }
        Ok(Self { labels, rows })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(&self.labels)?;
        for r in &self.rows {
            wr.serialize(r)?;
        }
        wr.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

pub fn moments(x: &[f64]) -> Moments {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let variance = if x.len() > 1 {
        x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Moments {
        mean,
        variance,
        std_error: (variance / n).sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Survival function of the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.0 {
        // Theta-function form, fast for small arguments.
        let c = -std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let s: f64 = (1..=20)
            .map(|j| (c * ((2 * j - 1) as f64).powi(2)).exp())
            .sum();
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0);
    }
    let mut s = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        s += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

fn sorted(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Largest gap between the two empirical CDFs; ties handled jointly.
pub fn ks_distance(a: &[f64], b: &[f64]) -> f64 {
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] == v {
            i += 1;
        }
        while j < b.len() && b[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Classical two-sample Kolmogorov–Smirnov test with asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("KS test needs two nonempty samples".into()));
    }
    let d = ks_distance(a, b);
    let ne = (a.len() * b.len()) as f64 / (a.len() + b.len()) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok(KsResult {
        statistic: d,
        p_value: if d == 0.0 { 1.0 } else { kolmogorov_survival(lambda) },
    })
}

/// One-sample KS test of `x` against a continuous CDF, asymptotic p-value.
pub fn ks_one_sample<F: Fn(f64) -> f64>(x: &[f64], cdf: F) -> Result<KsResult> {
    if x.is_empty() {
        return Err(Error::Domain("KS test needs a nonempty sample".into()));
    }
    let v = sorted(x);
    let n = v.len() as f64;
    let mut d = 0.0f64;
    for (i, &t) in v.iter().enumerate() {
        let f = cdf(t);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_survival(lambda),
    })
}

/// Options for [`energy_permutation_test`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyOptions {
    pub permutations: usize,
    /// Only the first rows of each side enter the test (the cost is quadratic).
    pub max_points: usize,
    pub seed: u64,
}

impl Default for EnergyOptions {
    fn default() -> Self {
        Self {
            permutations: 2000,
            max_points: 1000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult {
    pub statistic: f64,
    pub p_value: f64,
    pub permutations: usize,
    pub n_a: usize,
    pub n_b: usize,
}

/// Energy-distance two-sample test calibrated by label permutations.
///
/// Columns are scaled by their pooled standard deviation first, which does
/// not depend on the labels and so keeps the permutation null exact.
pub fn energy_permutation_test(
    a: &SampleMatrix,
    b: &SampleMatrix,
    opts: EnergyOptions,
) -> Result<EnergyResult> {
    if a.dim() != b.dim() {
        return Err(Error::Domain(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let n = a.len().min(opts.max_points);
    let m = b.len().min(opts.max_points);
    if n < 2 || m < 2 {
        return Err(Error::Domain("energy test needs at least two rows per side".into()));
    }
    let pts: Vec<&Vec<f64>> = a.rows[..n].iter().chain(&b.rows[..m]).collect();
    let total = n + m;
    let dim = a.dim();
    let scale: Vec<f64> = (0..dim)
        .map(|j| {
            let col: Vec<f64> = pts.iter().map(|r| r[j]).collect();
            let sd = moments(&col).variance.sqrt();
            if sd > 0.0 {
                1.0 / sd
            } else {
                1.0
            }
        })
        .collect();
    let scaled: Vec<Vec<f64>> = pts
        .iter()
        .map(|r| r.iter().zip(&scale).map(|(v, s)| v * s).collect())
        .collect();
    // Full symmetric distance matrix, row-major.
    let mut dist = vec![0.0; total * total];
    for i in 0..total {
        for j in i + 1..total {
            let d = scaled[i]
                .iter()
                .zip(&scaled[j])
                .map(|(x, y)| (x - y).powi(2))
                .sum::<f64>()
                .sqrt();
            dist[i * total + j] = d;
            dist[j * total + i] = d;
        }
    }
    let row_sums: Vec<f64> = (0..total)
        .map(|i| dist[i * total..(i + 1) * total].iter().sum())
        .collect();
    let grand: f64 = row_sums.iter().sum::<f64>() / 2.0;
    // With `s_a` the within-a distance sum and `r_a` the a-rows' total, the
    // cross and within-b sums follow without touching b-b pairs.
    let stat = |side_a: &[usize]| -> f64 {
        let mut s_a = 0.0;
        let mut r_a = 0.0;
        for &i in side_a {
            let row = &dist[i * total..(i + 1) * total];
            s_a += side_a.iter().map(|&j| row[j]).sum::<f64>();
            r_a += row_sums[i];
        }
        let s_a = s_a / 2.0;
        let s_ab = r_a - 2.0 * s_a;
        let s_b = grand - s_a - s_ab;
        let (nf, mf) = (n as f64, m as f64);
        let e = 2.0 * s_ab / (nf * mf) - 2.0 * s_a / (nf * nf) - 2.0 * s_b / (mf * mf);
        nf * mf / (nf + mf) * e
    };
    let observed = stat(&(0..n).collect::<Vec<_>>());
    let exceed: usize = crate::par::map_trials(opts.permutations, |p| {
        let mut idx: Vec<usize> = (0..total).collect();
        idx.shuffle(&mut seeded_rng(derive_seed(opts.seed, p as u64)));
        usize::from(stat(&idx[..n]) >= observed)
    })
    .into_iter()
    .sum();
    Ok(EnergyResult {
        statistic: observed,
        p_value: (1 + exceed) as f64 / (opts.permutations + 1) as f64,
        permutations: opts.permutations,
        n_a: n,
        n_b: m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Chi-square test of homogeneity for two categorical samples.
///
/// Categories with expected count below 5 under the pooled law are merged
/// into one bin.
pub fn chi_square_two_sample<T: Ord + Clone>(a: &[T], b: &[T]) -> Result<ChiSquareResult> {
    use std::collections::BTreeMap;
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("chi-square test needs two nonempty samples".into()));
    }
    let mut counts: BTreeMap<T, (f64, f64)> = BTreeMap::new();
    for x in a {
        counts.entry(x.clone()).or_default().0 += 1.0;
    }
    for x in b {
        counts.entry(x.clone()).or_default().1 += 1.0;
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let min_side = na.min(nb) / (na + nb);
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut rare = (0.0, 0.0);
    for &(ca, cb) in counts.values() {
        if (ca + cb) * min_side < 5.0 {
            rare.0 += ca;
            rare.1 += cb;
        } else {
            bins.push((ca, cb));
        }
    }
    if rare.0 + rare.1 > 0.0 {
        bins.push(rare);
    }
    if bins.len() < 2 {
        return Ok(ChiSquareResult {
            statistic: 0.0,
            dof: 0,
            p_value: 1.0,
        });
    }
    let mut stat = 0.0;
    for &(ca, cb) in &bins {
        let tot = ca + cb;
        let ea = tot * na / (na + nb);
        let eb = tot * nb / (na + nb);
        stat += (ca - ea).powi(2) / ea + (cb - eb).powi(2) / eb;
    }
    let dof = bins.len() - 1;
    let chi = ChiSquared::new(dof as f64).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(ChiSquareResult {
        statistic: stat,
        dof,
        p_value: chi.sf(stat),
    })
}

/// Two-sided exponential law of the increments of the finishing-time walk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncrementLaw {
    pub y: f64,
}

impl IncrementLaw {
    pub fn new(y: f64) -> Result<Self> {
        if !(0.0 < y && y < 1.0) {
            return Err(Error::Config(format!("y = {y} outside (0, 1)")));
        }
        Ok(Self { y })
    }

    pub fn prefactor(&self) -> f64 {
        let r = (self.y * (1.0 - self.y)).sqrt();
        r / (1.0 + 2.0 * r)
    }

    /// Decay rate of the density on `t > 0`.
    pub fn right_rate(&self) -> f64 {
        let (s, c) = (self.y.sqrt(), (1.0 - self.y).sqrt());
        s / (s + c)
    }

    /// Decay rate of the density on `t < 0`.
    pub fn left_rate(&self) -> f64 {
        let (s, c) = (self.y.sqrt(), (1.0 - self.y).sqrt());
        c / (s + c)
    }

    pub fn right_mass(&self) -> f64 {
        self.prefactor() / self.right_rate()
    }

    pub fn left_mass(&self) -> f64 {
        self.prefactor() / self.left_rate()
    }

    pub fn mean(&self) -> f64 {
        self.right_mass() / self.right_rate() - self.left_mass() / self.left_rate()
    }

    pub fn variance(&self) -> f64 {
        let second = 2.0 * self.right_mass() / self.right_rate().powi(2)
            + 2.0 * self.left_mass() / self.left_rate().powi(2);
        second - self.mean().powi(2)
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t < 0.0 {
            self.left_mass() * (self.left_rate() * t).exp()
        } else {
            self.left_mass() + self.right_mass() * (1.0 - (-self.right_rate() * t).exp())
        }
    }
}

/// I.i.d. draws from the increment law.
pub fn sample_increment_law(law: IncrementLaw, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = seeded_rng(seed);
    let right = Exp::new(law.right_rate()).expect("positive rate");
    let left = Exp::new(law.left_rate()).expect("positive rate");
    let p_right = law.right_mass();
    (0..n)
        .map(|_| {
            if rng.random::<f64>() < p_right {
                right.sample(&mut rng)
            } else {
                -left.sample(&mut rng)
            }
        })
        .collect()
}

/// Whether two samples are expected to share a law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Equal,
    Differ,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalKs {
    pub label: String,
    pub statistic: f64,
    pub p_value: f64,
    /// Bonferroni-adjusted over the marginals of one report.
    pub adjusted_p: f64,
    pub moments_a: Moments,
    pub moments_b: Moments,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub name: String,
    pub expectation: Expectation,
    pub alpha: f64,
    pub n_a: usize,
    pub n_b: usize,
    pub marginals: Vec<MarginalKs>,
    pub joint: Option<EnergyResult>,
    pub pass: bool,
}

impl TestReport {
    pub fn min_p(&self) -> f64 {
        self.marginals
            .iter()
            .map(|m| m.p_value)
            .chain(self.joint.map(|j| j.p_value))
            .fold(1.0, f64::min)
    }
}

/// Marginal KS on every column plus, for dimension > 1, the joint energy test.
///
/// Expected-equal laws pass when every raw p-value exceeds [`ALPHA`];
/// expected-different laws pass when some Bonferroni-adjusted p-value is
/// below it.
pub fn compare_samples(
    name: &str,
    a: &SampleMatrix,
    b: &SampleMatrix,
    expectation: Expectation,
    energy: Option<EnergyOptions>,
) -> Result<TestReport> {
    if a.dim() != b.dim() {
        return Err(Error::Domain(format!(
            "{name}: dimension mismatch {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let tests = a.dim() + usize::from(energy.is_some() && a.dim() > 1);
    let mut marginals = Vec::with_capacity(a.dim());
    for j in 0..a.dim() {
        let (ca, cb) = (a.column(j), b.column(j));
        let ks = ks_two_sample(&ca, &cb)?;
        marginals.push(MarginalKs {
            label: a.labels[j].clone(),
            statistic: ks.statistic,
            p_value: ks.p_value,
            adjusted_p: (ks.p_value * tests as f64).min(1.0),
            moments_a: moments(&ca),
            moments_b: moments(&cb),
        });
    }
    let joint = match energy {
        Some(opts) if a.dim() > 1 => Some(energy_permutation_test(a, b, opts)?),
        _ => None,
    };
    let raw: Vec<f64> = marginals
        .iter()
        .map(|m| m.p_value)
        .chain(joint.map(|j| j.p_value))
        .collect();
    let pass = match expectation {
        Expectation::Equal => raw.iter().all(|&p| p > ALPHA),
        Expectation::Differ => raw.iter().any(|&p| (p * tests as f64).min(1.0) < ALPHA),
    };
    Ok(TestReport {
        name: name.to_string(),
        expectation,
        alpha: ALPHA,
        n_a: a.len(),
        n_b: b.len(),
        marginals,
        joint,
        pass,
    })
}

/// Number of standard errors separating two independent sample means.
pub fn mean_z(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (moments(a), moments(b));
    (ma.mean - mb.mean) / (ma.std_error.powi(2) + mb.std_error.powi(2)).sqrt()
}

/// False-rejection rates of the KS and energy tests on same-law samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub repetitions: usize,
    pub level: f64,
    pub ks_rate: f64,
    pub energy_rate: f64,
}

/// Runs both tests `repetitions` times on pairs of independent samples of
/// `n` draws from one law (Exp(1) for KS, a correlated 2-D law for energy).
pub fn null_calibration(
    repetitions: usize,
    n: usize,
    permutations: usize,
    level: f64,
    seed: u64,
) -> Result<Calibration> {
    let draw = |s: u64| -> Vec<Vec<f64>> {
        let mut rng = seeded_rng(s);
        (0..n)
            .map(|_| {
                let u: f64 = Exp1.sample(&mut rng);
                let v: f64 = Exp1.sample(&mut rng);
                vec![u, u + v]
            })
            .collect()
    };
    let labels = vec!["u".to_string(), "u+v".to_string()];
    let mut ks_hits = 0;
    let mut energy_hits = 0;
    for r in 0..repetitions as u64 {
        let a = SampleMatrix::new(labels.clone(), draw(derive_seed(seed, 3 * r)))?;
        let b = SampleMatrix::new(labels.clone(), draw(derive_seed(seed, 3 * r + 1)))?;
        if ks_two_sample(&a.column(0), &b.column(0))?.p_value < level {
            ks_hits += 1;
        }
        let opts = EnergyOptions {
            permutations,
            max_points: n,
            seed: derive_seed(seed, 3 * r + 2),
        };
        if energy_permutation_test(&a, &b, opts)?.p_value < level {
            energy_hits += 1;
        }
    }
    Ok(Calibration {
        repetitions,
        level,
        ks_rate: ks_hits as f64 / repetitions as f64,
        energy_rate: energy_hits as f64 / repetitions as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::StandardNormal;

    fn exp_sample(rate: f64, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = seeded_rng(seed);
        let d = Exp::new(rate).unwrap();
        (0..n).map(|_| d.sample(&mut rng)).collect()
    }

    #[test]
    fn ks_identical_and_distinct() {
        let a = exp_sample(1.0, 10_000, 1);
        let r = ks_two_sample(&a, &a).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
        let b = exp_sample(2.0, 10_000, 2);
        assert!(ks_two_sample(&a, &b).unwrap().p_value < 1e-6);
        assert!(ks_two_sample(&a, &[]).is_err());
    }

    #[test]
    fn kolmogorov_branches_agree() {
        // No jump at the switch between the two series.
        let lo = kolmogorov_survival(1.0 - 1e-9);
        let hi = kolmogorov_survival(1.0);
        assert!((lo - hi).abs() < 1e-8, "{lo} vs {hi}");
        assert!((kolmogorov_survival(1.358) - 0.05).abs() < 1e-3);
    }

    #[test]
    fn ks_with_ties() {
        let a = [1.0, 1.0, 2.0, 3.0];
        let b = [1.0, 2.0, 2.0, 3.0];
        assert!((ks_distance(&a, &b) - 0.25).abs() < 1e-12);
    }

    fn gaussian_rows(n: usize, shift: f64, seed: u64) -> SampleMatrix {
        let mut rng = seeded_rng(seed);
        let rows = (0..n)
            .map(|_| {
                let x: f64 = rng.sample(StandardNormal);
                let y: f64 = rng.sample(StandardNormal);
                vec![x + shift, y]
            })
            .collect();
        SampleMatrix::new(vec!["x".into(), "y".into()], rows).unwrap()
    }

    #[test]
    fn energy_power_and_identity() {
        let a = gaussian_rows(300, 0.0, 1);
        let same = energy_permutation_test(&a, &a, EnergyOptions { permutations: 199, ..Default::default() }).unwrap();
        assert!(same.p_value > 0.3);
        let b = gaussian_rows(300, 1.0, 2);
        let diff = energy_permutation_test(&a, &b, EnergyOptions { permutations: 1999, ..Default::default() }).unwrap();
        assert!(diff.p_value < 1e-3);
        let c = SampleMatrix::new(vec!["x".into()], vec![vec![0.0]; 5]).unwrap();
        assert!(energy_permutation_test(&a, &c, EnergyOptions::default()).is_err());
    }

    #[test]
    fn increment_law_closed_forms() {
        for y in [0.2, 0.5, 0.8] {
            let law = IncrementLaw::new(y).unwrap();
            assert!((law.left_mass() + law.right_mass() - 1.0).abs() < 1e-12);
            assert!((law.cdf(1e9) - 1.0).abs() < 1e-12);
        }
        let half = IncrementLaw::new(0.5).unwrap();
        assert!((half.variance() - 8.0).abs() < 1e-12);
        assert!(half.mean().abs() < 1e-12);
        assert!(IncrementLaw::new(1.0).is_err());
    }

    #[test]
    fn increment_sampler_matches_law() {
        let law = IncrementLaw::new(0.5).unwrap();
        let x = sample_increment_law(law, 100_000, 3);
        let m = moments(&x);
        assert!(m.mean.abs() < 4.0 * m.std_error);
        // Laplace with scale 2: fourth moment 384, so the sample variance has s.e. ~ 0.057.
        assert!((m.variance - 8.0).abs() < 0.3, "variance {}", m.variance);
    }

    #[test]
    fn chi_square_detects_shift() {
        let a: Vec<u8> = (0..2000).map(|i| (i % 4) as u8).collect();
        let b: Vec<u8> = (0..2000).map(|i| (i % 4) as u8).collect();
        assert!(chi_square_two_sample(&a, &b).unwrap().p_value > 0.99);
        let c: Vec<u8> = (0..2000).map(|i| if i % 3 == 0 { 0 } else { 1 }).collect();
        assert!(chi_square_two_sample(&a, &c).unwrap().p_value < 1e-6);
    }
}
