use tasep_lab::clockfield::{derive_seed, ClockField, SiteWindow};
use tasep_lab::lpp::{
    extract_weight_field, geodesic, passage_grid, passage_time, sample_field, shift_couple, FreshExp,
    LppField,
};
use tasep_lab::stats::{compare_samples, ks_two_sample, moments, EnergyOptions, Expectation, SampleMatrix};
use tasep_lab::tasep::{passage_time_table, table_window};

/// Maximum over all up-right paths, enumerated as step sequences.
fn brute_force(field: &LppField, u: (usize, usize), v: (usize, usize)) -> (f64, Vec<(usize, usize)>) {
    let (db, dc) = (v.0 - u.0, v.1 - u.1);
    let steps = db + dc;
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for mask in 0u32..(1 << steps) {
        if mask.count_ones() as usize != db {
            continue;
        }
        let mut w = u;
        let mut path = vec![w];
        let mut total = field.weight(w.0, w.1);
        for s in 0..steps {
            w = if mask >> s & 1 == 1 { (w.0 + 1, w.1) } else { (w.0, w.1 + 1) };
            total += field.weight(w.0, w.1);
            path.push(w);
        }
        if total > best.0 {
            best = (total, path);
        }
    }
    best
}

#[test]
fn dynamic_program_matches_path_enumeration() {
    for seed in 0..40 {
        let f = sample_field(seed, 4, 4).unwrap();
        for u in [(1, 1), (2, 1), (1, 3), (2, 2)] {
            for b in u.0..=4 {
                for c in u.1..=4 {
                    let (w, path) = brute_force(&f, u, (b, c));
                    let got = passage_time(&f, u, (b, c)).unwrap();
                    assert!((got - w).abs() < 1e-12, "seed {seed} {u:?}->({b},{c})");
                    assert_eq!(geodesic(&f, u, (b, c)).unwrap().path, path);
                }
            }
        }
    }
}

#[test]
fn small_passage_time_means() {
    // L_{(1,1),(2,2)} = w11 + max(w12, w21) + w22 has mean 1 + 3/2 + 1.
    let n = 50_000;
    let (l22, w): (Vec<f64>, Vec<f64>) = (0..n)
        .map(|s| {
            let f = sample_field(derive_seed(11, s), 2, 2).unwrap();
            (passage_time(&f, (1, 1), (2, 2)).unwrap(), f.weight(1, 2))
        })
        .unzip();
    let (m, mw) = (moments(&l22), moments(&w));
    assert!((m.mean - 3.5).abs() < 4.0 * m.std_error, "mean {}", m.mean);
    assert!((mw.mean - 1.0).abs() < 4.0 * mw.std_error);
}

#[test]
fn extraction_round_trips_exactly() {
    for seed in 0..100 {
        let (a, bm, cm) = ((seed % 5) as i64 - 2, 7, 6);
        let mut f = ClockField::new(seed, table_window(a, bm, cm)).unwrap();
        let table = passage_time_table(&mut f, a, bm, cm).unwrap();
        let omega = extract_weight_field(&table).unwrap();
        let grid = passage_grid(&omega, (1, 1)).unwrap();
        for b in 1..=bm {
            for c in 1..=cm {
                assert_eq!(grid.get(b, c), table.get(b, c), "seed {seed} ({b},{c})");
            }
        }
    }
}

fn tasep_table(seed: u64, a: i64, bm: usize, cm: usize) -> tasep_lab::tasep::PassageTimeTable {
    let mut f = ClockField::new(seed, table_window(a, bm, cm)).unwrap();
    passage_time_table(&mut f, a, bm, cm).unwrap()
}

#[test]
fn extracted_weights_are_exponential() {
    let n = 20_000;
    let mut by_cell = vec![Vec::new(); 3];
    for s in 0..n as u64 {
        let omega = extract_weight_field(&tasep_table(derive_seed(12, s), 0, 3, 3)).unwrap();
        by_cell[0].push(omega.weight(1, 1));
        by_cell[1].push(omega.weight(2, 3));
        by_cell[2].push(omega.weight(3, 3));
    }
    let reference: Vec<f64> = (0..n as u64)
        .map(|s| sample_field(derive_seed(13, s), 1, 1).unwrap().weight(1, 1))
        .collect();
    for cell in &by_cell {
        assert!(ks_two_sample(cell, &reference).unwrap().p_value > 1e-3);
    }
}

#[test]
fn shift_coupling_reproduces_adjacent_tasep_pair() {
    let n = 10_000u64;
    let pick = |t0: &dyn Fn(usize, usize) -> f64, t1: &dyn Fn(usize, usize) -> f64| {
        vec![t0(2, 2), t0(3, 1), t1(2, 2), t1(1, 3), t1(3, 3), t1(2, 2) - t0(2, 2)]
    };
    let coupled: Vec<Vec<f64>> = (0..n)
        .map(|s| {
            let omega = sample_field(derive_seed(14, s), 4, 4).unwrap();
            let fresh = FreshExp { seed: derive_seed(15, s) };
            let out = shift_couple(&omega, |i, j| fresh.get(i, j)).unwrap();
            let l0 = passage_grid(&omega, (1, 1)).unwrap();
            pick(&|b, c| l0.get(b, c), &|b, c| out.table.get(b, c))
        })
        .collect();
    let direct: Vec<Vec<f64>> = (0..n)
        .map(|s| {
            let mut f = ClockField::new(derive_seed(16, s), SiteWindow::new(-3, 6).unwrap()).unwrap();
            let t0 = passage_time_table(&mut f, 0, 4, 4).unwrap();
            let t1 = passage_time_table(&mut f, 1, 4, 4).unwrap();
            pick(&|b, c| t0.get(b, c), &|b, c| t1.get(b, c))
        })
        .collect();
    let labels: Vec<String> = ["L0(2,2)", "L0(3,1)", "L1(2,2)", "L1(1,3)", "L1(3,3)", "L1(2,2)-L0(2,2)"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let a = SampleMatrix::new(labels.clone(), coupled).unwrap();
    let b = SampleMatrix::new(labels.clone(), direct).unwrap();
    let opts = EnergyOptions { permutations: 999, max_points: 800, seed: 17 };
    let report = compare_samples("shift", &a, &b, Expectation::Equal, Some(opts)).unwrap();
    assert!(report.pass, "{report:#?}");

    // Decoupling the two levels keeps every single-level marginal but not the
    // difference column.
    let decoupled: Vec<Vec<f64>> = (0..n)
        .map(|s| {
            let l0 = passage_grid(&sample_field(derive_seed(21, s), 4, 4).unwrap(), (1, 1)).unwrap();
            let l1 = passage_grid(&sample_field(derive_seed(22, s), 3, 3).unwrap(), (1, 1)).unwrap();
            pick(&|b, c| l0.get(b, c), &|b, c| l1.get(b, c))
        })
        .collect();
    let c = SampleMatrix::new(labels, decoupled).unwrap();
    let report = compare_samples("decoupled", &c, &b, Expectation::Differ, Some(opts)).unwrap();
    assert!(report.pass, "{report:#?}");
}

#[test]
fn shifted_weights_are_exponential() {
    let n = 20_000u64;
    let mut cells = vec![Vec::new(); 3];
    for s in 0..n {
        let omega = sample_field(derive_seed(18, s), 5, 5).unwrap();
        let fresh = FreshExp { seed: derive_seed(19, s) };
        let out = shift_couple(&omega, |i, j| fresh.get(i, j)).unwrap();
        cells[0].push(out.field.weight(1, 1));
        cells[1].push(out.field.weight(2, 3));
        cells[2].push(out.field.weight(4, 4));
    }
    let reference: Vec<f64> = (0..n)
        .map(|s| sample_field(derive_seed(20, s), 1, 1).unwrap().weight(1, 1))
        .collect();
    for cell in &cells {
        assert!(ks_two_sample(cell, &reference).unwrap().p_value > 1e-3);
    }
}
