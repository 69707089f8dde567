use tasep_lab::clockfield::{derive_seed, ClockField, SiteWindow};
use tasep_lab::osp::{check_cbopera, lal_indicator, simulate_osp, FiniteConfig};
use tasep_lab::stats::{ks_two_sample, moments};
use tasep_lab::tasep::{coupled_passage_times, PassageQuery};

#[test]
fn finishing_times_equal_passage_times() {
    let n = 8;
    for seed in 0..100 {
        let mut f = ClockField::new(seed, SiteWindow::new(1, n as i64 + 1).unwrap()).unwrap();
        let traj = simulate_osp(&mut f, n).unwrap();
        for a in 1..n {
            assert_eq!(traj.projection_absorption(a).unwrap(), traj.finishing_time(n - a));
            let q = PassageQuery { a: a as i64, b: n - a, c: a };
            let t = coupled_passage_times(&mut f, &[q]).unwrap()[0];
            assert_eq!(traj.projection_absorption(a).unwrap(), t, "seed {seed} A={a}");
        }
    }
}

#[test]
fn cut_push_coupling_holds() {
    for seed in 0..100 {
        for a in 1..8 {
            let mut f = ClockField::new(seed, SiteWindow::new(1, 200).unwrap()).unwrap();
            assert!(check_cbopera(&mut f, 8, a, 30.0).unwrap(), "seed {seed} A={a}");
        }
    }
}

#[test]
fn cut_push_detects_mismatch() {
    // Sanity check of the comparison itself: a different N on the OSP side.
    let mut f = ClockField::new(3, SiteWindow::new(1, 200).unwrap()).unwrap();
    let lhs = tasep_lab::osp::pushback(&FiniteConfig::new(vec![1, 2, 9]).unwrap(), 4);
    assert_ne!(lhs, FiniteConfig::new(vec![1, 2, 3]).unwrap());
    assert!(check_cbopera(&mut f, 8, 0, 5.0).is_err());
    assert!(check_cbopera(&mut f, 8, 8, 5.0).is_err());
}

#[test]
fn replay_sorts_with_ascents_only() {
    for seed in 0..50 {
        let n = 7;
        let mut f = ClockField::new(seed, SiteWindow::new(1, n as i64).unwrap()).unwrap();
        let traj = simulate_osp(&mut f, n).unwrap();
        let mut v: Vec<usize> = (1..=n).collect();
        for e in &traj.events {
            assert!(v[e.edge - 1] < v[e.edge]);
            v.swap(e.edge - 1, e.edge);
        }
        assert_eq!(v, (1..=n).rev().collect::<Vec<_>>());
    }
}

fn runs(n: usize, trials: u64, master: u64) -> Vec<tasep_lab::osp::OspTrajectory> {
    (0..trials)
        .map(|s| {
            let mut f = ClockField::new(derive_seed(master, s), SiteWindow::new(1, n as i64).unwrap()).unwrap();
            simulate_osp(&mut f, n).unwrap()
        })
        .collect()
}

#[test]
fn two_site_finishing_time_is_exponential() {
    let u: Vec<f64> = runs(2, 100_000, 1).iter().map(|t| t.finishing_times[0]).collect();
    let m = moments(&u);
    assert!((m.mean - 1.0).abs() < 4.0 * m.std_error);
}

#[test]
fn first_finishing_time_mean() {
    // U_6(1) has the law of a sum of five Exp(1).
    let u: Vec<f64> = runs(6, 100_000, 2).iter().map(|t| t.finishing_times[0]).collect();
    let m = moments(&u);
    assert!((m.mean - 5.0).abs() < 4.0 * m.std_error, "mean {}", m.mean);
}

#[test]
fn reversal_symmetry() {
    let trajs = runs(6, 20_000, 3);
    let u1: Vec<f64> = trajs.iter().map(|t| t.finishing_time(1)).collect();
    let u5: Vec<f64> = trajs.iter().map(|t| t.finishing_time(5)).collect();
    let u2: Vec<f64> = trajs.iter().map(|t| t.finishing_time(2)).collect();
    let u4: Vec<f64> = runs(6, 20_000, 4).iter().map(|t| t.finishing_time(4)).collect();
    assert!(ks_two_sample(&u1, &u5).unwrap().p_value > 1e-3);
    assert!(ks_two_sample(&u2, &u4).unwrap().p_value > 1e-3);
}

#[test]
fn lal_is_half_at_the_middle_of_a_symmetric_run() {
    let trajs = runs(2, 10, 5);
    for t in &trajs {
        assert!(!lal_indicator(t, 1).unwrap());
        assert!(lal_indicator(t, 2).unwrap());
    }
}
