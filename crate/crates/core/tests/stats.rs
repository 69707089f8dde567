use tasep_lab::clockfield::seeded_rng;
use tasep_lab::stats::{
    chi_square_two_sample, compare_samples, kolmogorov_survival, ks_two_sample, null_calibration,
    EnergyOptions, Expectation, SampleMatrix,
};
use rand::Rng;

#[test]
fn null_rejection_rate_is_near_level() {
    let c = null_calibration(100, 200, 199, 0.05, 7).unwrap();
    assert!((0.01..=0.12).contains(&c.ks_rate), "{c:?}");
    assert!((0.01..=0.12).contains(&c.energy_rate), "{c:?}");
}

#[test]
fn kolmogorov_tail_values() {
    // Reference values of the Kolmogorov distribution.
    for (lambda, p) in [(0.5, 0.963_945), (1.0, 0.269_999), (1.36, 0.049_45), (1.63, 0.010_09)] {
        assert!((kolmogorov_survival(lambda) - p).abs() < 5e-4, "{lambda}");
    }
}

fn uniform_rows(n: usize, seed: u64, warp: f64) -> Vec<Vec<f64>> {
    let mut rng = seeded_rng(seed);
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            let pick: f64 = rng.random();
            // Same marginals for every `warp`; the copula changes.
            let w = if pick < warp { u } else { v };
            vec![u, w]
        })
        .collect()
}

#[test]
fn energy_sees_dependence_that_marginals_miss() {
    let labels = vec!["u".to_string(), "w".to_string()];
    let a = SampleMatrix::new(labels.clone(), uniform_rows(400, 1, 0.0)).unwrap();
    let b = SampleMatrix::new(labels.clone(), uniform_rows(400, 2, 0.5)).unwrap();
    let opts = EnergyOptions { permutations: 3999, max_points: 400, seed: 3 };
    let r = compare_samples("copula", &a, &b, Expectation::Differ, Some(opts)).unwrap();
    assert!(r.marginals.iter().all(|m| m.p_value > 1e-3), "{r:?}");
    assert!(r.pass, "{r:?}");
    let c = SampleMatrix::new(labels, uniform_rows(400, 4, 0.0)).unwrap();
    let r = compare_samples("same", &a, &c, Expectation::Equal, Some(opts)).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn chi_square_merges_rare_categories() {
    let mut a: Vec<u32> = (0..1000).map(|i| i % 3).collect();
    let mut b = a.clone();
    a.extend([100, 101, 102]);
    b.extend([103, 104]);
    let r = chi_square_two_sample(&a, &b).unwrap();
    assert_eq!(r.dof, 3);
    assert!(r.p_value > 0.5);
}

#[test]
fn ks_requires_data() {
    assert!(ks_two_sample(&[], &[1.0]).is_err());
}

/// Energy statistic straight from its definition, with the same pooled scaling.
fn naive_energy(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let dim = a[0].len();
    let pooled: Vec<&Vec<f64>> = a.iter().chain(b).collect();
    let sd: Vec<f64> = (0..dim)
        .map(|j| {
            let col: Vec<f64> = pooled.iter().map(|r| r[j]).collect();
            tasep_lab::stats::moments(&col).variance.sqrt()
        })
        .collect();
    let dist = |x: &Vec<f64>, y: &Vec<f64>| -> f64 {
        (0..dim).map(|j| ((x[j] - y[j]) / sd[j]).powi(2)).sum::<f64>().sqrt()
    };
    let mean = |p: &[Vec<f64>], q: &[Vec<f64>]| -> f64 {
        let s: f64 = p.iter().flat_map(|x| q.iter().map(move |y| dist(x, y))).sum();
        s / (p.len() * q.len()) as f64
    };
    let (n, m) = (a.len() as f64, b.len() as f64);
    n * m / (n + m) * (2.0 * mean(a, b) - mean(a, a) - mean(b, b))
}

#[test]
fn energy_statistic_matches_definition() {
    let labels = vec!["u".to_string(), "w".to_string()];
    let ra = uniform_rows(120, 8, 0.3);
    let rb = uniform_rows(90, 9, 0.0);
    let a = SampleMatrix::new(labels.clone(), ra.clone()).unwrap();
    let b = SampleMatrix::new(labels, rb.clone()).unwrap();
    let r = tasep_lab::stats::energy_permutation_test(&a, &b, EnergyOptions { permutations: 9, max_points: 1000, seed: 1 })
        .unwrap();
    let want = naive_energy(&ra, &rb);
    assert!((r.statistic - want).abs() < 1e-9 * want.abs().max(1.0), "{} vs {want}", r.statistic);
}

#[test]
fn one_sample_ks() {
    let x: Vec<f64> = uniform_rows(5000, 10, 0.0).into_iter().map(|r| r[0]).collect();
    let uniform = |t: f64| t.clamp(0.0, 1.0);
    assert!(tasep_lab::stats::ks_one_sample(&x, uniform).unwrap().p_value > 1e-3);
    let sq: Vec<f64> = x.iter().map(|v| v * v).collect();
    assert!(tasep_lab::stats::ks_one_sample(&sq, uniform).unwrap().p_value < 1e-6);
}
