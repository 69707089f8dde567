use tasep_lab::clockfield::derive_seed;
use tasep_lab::sixvertex::{height_6v, sample_six_vertex, GalConfig, HeightPoint};
use tasep_lab::stats::{compare_samples, ks_two_sample, moments, EnergyOptions, Expectation, SampleMatrix};

const B1: f64 = 0.6;
const B2: f64 = 0.3;

fn heights(cfg: &GalConfig, trials: u64, master: u64, shifted: bool) -> Vec<Vec<f64>> {
    let (x, y) = cfg.box_size();
    (0..trials)
        .map(|s| {
            let sample = sample_six_vertex(derive_seed(master, s), x, y + 1, B1, B2).unwrap();
            if shifted {
                cfg.shifted_vector(&sample).unwrap()
            } else {
                cfg.original(&sample).unwrap()
            }
        })
        .collect()
}

fn p(m: u32, x: f64, y: f64) -> HeightPoint {
    HeightPoint { m, x, y }
}

#[test]
fn first_vertex_goes_straight_with_b1() {
    let n = 40_000u64;
    let hits: Vec<f64> = (0..n)
        .map(|s| {
            let sample = sample_six_vertex(derive_seed(30, s), 2, 2, B1, B2).unwrap();
            height_6v(&sample, 1, 1.5, 1.5).unwrap() as f64
        })
        .collect();
    let m = moments(&hits);
    assert!((m.mean - B1).abs() < 4.0 * m.std_error, "{}", m.mean);
}

#[test]
fn samples_are_reproducible() {
    let a = sample_six_vertex(5, 6, 6, B1, B2).unwrap();
    assert_eq!(a, sample_six_vertex(5, 6, 6, B1, B2).unwrap());
    assert_ne!(a, sample_six_vertex(6, 6, 6, B1, B2).unwrap());
}

#[test]
fn single_point_shift() {
    let cfg = GalConfig { shifted: vec![p(2, 5.5, 4.5)], fixed: vec![] };
    cfg.validate().unwrap();
    let a: Vec<f64> = heights(&cfg, 10_000, 31, false).into_iter().map(|r| r[0]).collect();
    let b: Vec<f64> = heights(&cfg, 10_000, 32, true).into_iter().map(|r| r[0]).collect();
    assert!(ks_two_sample(&a, &b).unwrap().p_value > 1e-3);
}

#[test]
fn color_shift_alone_is_detected() {
    // Raising the color without moving the point up changes the law.
    let n = 10_000;
    let a: Vec<f64> = (0..n)
        .map(|s| {
            let sample = sample_six_vertex(derive_seed(33, s), 5, 5, B1, B2).unwrap();
            height_6v(&sample, 2, 5.5, 4.5).unwrap() as f64
        })
        .collect();
    let b: Vec<f64> = (0..n)
        .map(|s| {
            let sample = sample_six_vertex(derive_seed(34, s), 5, 5, B1, B2).unwrap();
            height_6v(&sample, 3, 5.5, 4.5).unwrap() as f64
        })
        .collect();
    assert!(ks_two_sample(&a, &b).unwrap().p_value < 1e-6);
}

#[test]
fn nested_configuration_is_invariant() {
    let cfg = GalConfig { shifted: vec![p(2, 3.5, 6.5)], fixed: vec![p(4, 6.5, 4.5)] };
    cfg.validate().unwrap();
    let labels = vec!["shifted".to_string(), "fixed".to_string()];
    let a = SampleMatrix::new(labels.clone(), heights(&cfg, 10_000, 35, false)).unwrap();
    let b = SampleMatrix::new(labels, heights(&cfg, 10_000, 36, true)).unwrap();
    let opts = EnergyOptions { permutations: 999, max_points: 600, seed: 37 };
    let r = compare_samples("nested", &a, &b, Expectation::Equal, Some(opts)).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn config_json_round_trip() {
    let cfg = GalConfig { shifted: vec![p(1, 2.5, 3.5)], fixed: vec![p(3, 4.5, 1.5)] };
    let text = serde_json::to_string(&cfg).unwrap();
    let back: GalConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cfg);
}
