//! Exponential last-passage percolation on a finite grid.
//!
//! Vertices are `(B, C)` pairs, 1-based. Up-right paths step by `(1,0)` or
//! `(0,1)`, and the passage time of a path is the sum of the weights it visits.

use std::io::Write;

use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::clockfield::{derive_seed, seeded_rng};
use crate::error::{Error, Result};
use crate::tasep::PassageTimeTable;

/// Grid vertex `(B, C)`.
pub type Vertex = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Sampled { seed: u64 },
    Extracted { base_color: i64 },
    Shifted { base_color: i64 },
    Given,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LppField {
    pub b_max: usize,
    pub c_max: usize,
    /// Row-major in `B`.
    pub weights: Vec<f64>,
    pub provenance: Provenance,
}

impl LppField {
    pub fn from_weights(b_max: usize, c_max: usize, weights: Vec<f64>) -> Result<Self> {
        if b_max == 0 || c_max == 0 || weights.len() != b_max * c_max {
            return Err(Error::Config(format!(
                "{} weights do not fill a {b_max}x{c_max} grid",
                weights.len()
            )));
        }
        if weights.iter().any(|w| w.is_nan() || *w < 0.0) {
            return Err(Error::Invariant("weights must be nonnegative".into()));
        }
        Ok(Self {
            b_max,
            c_max,
            weights,
            provenance: Provenance::Given,
        })
    }

    pub fn weight(&self, b: usize, c: usize) -> f64 {
        self.weights[(b - 1) * self.c_max + (c - 1)]
    }

    fn check(&self, v: Vertex) -> Result<()> {
        if v.0 == 0 || v.1 == 0 || v.0 > self.b_max || v.1 > self.c_max {
            return Err(Error::Domain(format!(
                "{v:?} outside {}x{} grid",
                self.b_max, self.c_max
            )));
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["B", "C", "weight"])?;
        for b in 1..=self.b_max {
            for c in 1..=self.c_max {
                wr.serialize((b, c, self.weight(b, c)))?;
            }
        }
        wr.flush()?;
        Ok(())
    }
}

/// I.i.d. Exp(1) weights, reproducible from `seed`.
pub fn sample_field(seed: u64, b_max: usize, c_max: usize) -> Result<LppField> {
    if b_max == 0 || c_max == 0 {
        return Err(Error::Config("grid dimensions must be positive".into()));
    }
    let mut rng = seeded_rng(seed);
    let weights = (0..b_max * c_max).map(|_| Exp1.sample(&mut rng)).collect();
    Ok(LppField {
        b_max,
        c_max,
        weights,
        provenance: Provenance::Sampled { seed },
    })
}

/// Point-to-point passage times from a fixed origin `u`.
///
/// `get(b, c)` is `L_{u,(b,c)}`; it is 0 outside the quadrant above `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct PassageGrid {
    origin: Vertex,
    b_max: usize,
    c_max: usize,
    values: Vec<f64>,
}

impl PassageGrid {
    pub fn get(&self, b: usize, c: usize) -> f64 {
        if b < self.origin.0 || c < self.origin.1 || b > self.b_max || c > self.c_max {
            return 0.0;
        }
        self.values[(b - self.origin.0) * self.width() + (c - self.origin.1)]
    }

    fn width(&self) -> usize {
        self.c_max - self.origin.1 + 1
    }
}

/// Passage times from `u` to every vertex of the grid up-right of it.
pub fn passage_grid(field: &LppField, u: Vertex) -> Result<PassageGrid> {
    field.check(u)?;
    let mut grid = PassageGrid {
        origin: u,
        b_max: field.b_max,
        c_max: field.c_max,
        values: Vec::new(),
    };
    let width = grid.width();
    let rows = field.b_max - u.0 + 1;
    grid.values = vec![0.0; rows * width];
    for i in 0..rows {
        for j in 0..width {
            let below = if i > 0 { grid.values[(i - 1) * width + j] } else { 0.0 };
            let left = if j > 0 { grid.values[i * width + j - 1] } else { 0.0 };
            grid.values[i * width + j] = field.weight(u.0 + i, u.1 + j) + below.max(left);
        }
    }
    Ok(grid)
}

/// `L_{u,v}`: the maximal path weight from `u` to `v`.
pub fn passage_time(field: &LppField, u: Vertex, v: Vertex) -> Result<f64> {
    field.check(v)?;
    if u.0 > v.0 || u.1 > v.1 {
        return Err(Error::Domain(format!("{u:?} is not below-left of {v:?}")));
    }
    Ok(passage_grid(field, u)?.get(v.0, v.1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geodesic {
    pub from: Vertex,
    pub to: Vertex,
    pub path: Vec<Vertex>,
}

/// The maximizing up-right path from `u` to `v`.
pub fn geodesic(field: &LppField, u: Vertex, v: Vertex) -> Result<Geodesic> {
    field.check(v)?;
    if u.0 > v.0 || u.1 > v.1 {
        return Err(Error::Domain(format!("{u:?} is not below-left of {v:?}")));
    }
    let grid = passage_grid(field, u)?;
    let mut path = vec![v];
    let mut w = v;
    while w != u {
        w = if w.0 == u.0 {
            (w.0, w.1 - 1)
        } else if w.1 == u.1 {
            (w.0 - 1, w.1)
        } else {
            let down = grid.get(w.0 - 1, w.1);
            let left = grid.get(w.0, w.1 - 1);
            if down == left {
                return Err(Error::Tie { b: w.0, c: w.1 });
            }
            if down > left {
                (w.0 - 1, w.1)
            } else {
                (w.0, w.1 - 1)
            }
        };
        path.push(w);
    }
    path.reverse();
    Ok(Geodesic { from: u, to: v, path })
}

/// Recovers the waiting times `ω^A` from a passage-time table.
pub fn extract_weight_field(table: &PassageTimeTable) -> Result<LppField> {
    let mut weights = Vec::with_capacity(table.b_max * table.c_max);
    for b in 1..=table.b_max {
        for c in 1..=table.c_max {
            let w = table.get(b, c) - table.get(b - 1, c).max(table.get(b, c - 1));
            if w.is_nan() || w < 0.0 {
                return Err(Error::Invariant(format!(
                    "table decreases into ({b}, {c})"
                )));
            }
            weights.push(w);
        }
    }
    Ok(LppField {
        b_max: table.b_max,
        c_max: table.c_max,
        weights,
        provenance: Provenance::Extracted {
            base_color: table.base_color,
        },
    })
}

/// I.i.d. Exp(1) variables `E_{i,j}` keyed by their index, not by draw order.
#[derive(Debug, Clone, Copy)]
pub struct FreshExp {
    pub seed: u64,
}

impl FreshExp {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let key = ((i as u64) << 32) | j as u64;
        Exp1.sample(&mut seeded_rng(derive_seed(self.seed, key)))
    }
}

/// The recursion data `π(i)`, `J_i` for `i = 0..=B_max-1`.
///
/// `None` marks indices where `π` has left the grid; from there on every
/// output entry is taken from the `C < π(B)` branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftCouplingState {
    pub pi: Vec<Option<usize>>,
    pub j: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftCoupling {
    pub state: ShiftCouplingState,
    /// `ω^{A+1}` on `[1, B_max-1] x [1, C_max-1]`.
    pub field: LppField,
    /// `L^{A+1}_{(1,1),(B,C)}` on the same sub-grid.
    pub table: PassageTimeTable,
}

/// Builds `ω^{A+1}` from `ω^A` and fresh exponentials.
///
/// Only the sub-grid one row and one column short of the input is produced,
/// which every branch of the assembly can fill from inside the input.
pub fn shift_couple<F>(field: &LppField, mut fresh: F) -> Result<ShiftCoupling>
where
    F: FnMut(usize, usize) -> f64,
{
    let (bm, cm) = (field.b_max, field.c_max);
    if bm < 2 || cm < 2 {
        return Err(Error::Truncation(format!(
            "{bm}x{cm} grid leaves nothing after the boundary margin"
        )));
    }
    let base = match field.provenance {
        Provenance::Extracted { base_color } | Provenance::Shifted { base_color } => base_color,
        _ => 0,
    };
    let l = passage_grid(field, (1, 1))?;
    let (bo, co) = (bm - 1, cm - 1);
    let mut pi = vec![Some(1)];
    let mut jv = vec![Some(0.0)];
    for i in 0..bo {
        let (next_pi, next_j) = match (pi[i], jv[i]) {
            (Some(start), Some(ji)) => {
                let mut found = None;
                for j in start..=cm {
                    let gap = l.get(i + 1, j) - l.get(i + 2, j - 1).max(ji);
                    let e = fresh(i + 1, j);
                    if gap >= e {
                        found = Some((j, l.get(i + 2, j - 1).max(ji) + e));
                        break;
                    }
                }
                match found {
                    Some((j, jn)) => (Some(j), Some(jn)),
                    None => (None, None),
                }
            }
            _ => (None, None),
        };
        pi.push(next_pi);
        jv.push(next_j);
    }
    let mut times = Vec::with_capacity(bo * co);
    for b in 1..=bo {
        for c in 1..=co {
            let t = match (pi[b], jv[b]) {
                (Some(p), _) if c > p => l.get(b, c - 1),
                (Some(p), Some(jb)) if c == p => jb,
                _ => l.get(b + 1, c),
            };
            times.push(t);
        }
    }
    let table = PassageTimeTable {
        base_color: base + 1,
        b_max: bo,
        c_max: co,
        times,
    };
    let mut out = extract_weight_field(&table)?;
    out.provenance = Provenance::Shifted {
        base_color: base + 1,
    };
    Ok(ShiftCoupling {
        state: ShiftCouplingState { pi, j: jv },
        field: out,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(b: usize, c: usize) -> LppField {
        LppField::from_weights(b, c, vec![1.0; b * c]).unwrap()
    }

    #[test]
    fn single_vertex_and_constant_field() {
        let f = sample_field(3, 4, 4).unwrap();
        assert_eq!(passage_time(&f, (2, 3), (2, 3)).unwrap(), f.weight(2, 3));
        assert_eq!(passage_time(&ones(3, 2), (1, 1), (3, 2)).unwrap(), 4.0);
        assert!(passage_time(&f, (2, 2), (1, 3)).is_err());
        assert!(passage_time(&f, (1, 1), (5, 1)).is_err());
    }

    #[test]
    fn geodesic_on_small_field() {
        let f = LppField::from_weights(2, 2, vec![1.0, 3.0, 2.0, 1.0]).unwrap();
        let g = geodesic(&f, (1, 1), (2, 2)).unwrap();
        assert_eq!(g.path, vec![(1, 1), (1, 2), (2, 2)]);
        assert_eq!(geodesic(&f, (2, 1), (2, 1)).unwrap().path, vec![(2, 1)]);
        assert!(matches!(
            geodesic(&ones(2, 2), (1, 1), (2, 2)),
            Err(Error::Tie { b: 2, c: 2 })
        ));
    }

    #[test]
    fn sampled_fields_are_reproducible() {
        let a = sample_field(5, 10, 10).unwrap();
        assert_eq!(a, sample_field(5, 10, 10).unwrap());
        assert_ne!(a, sample_field(6, 10, 10).unwrap());
        assert!(a.weights.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn extraction_rejects_decreasing_table() {
        let t = PassageTimeTable {
            base_color: 0,
            b_max: 1,
            c_max: 2,
            times: vec![2.0, 1.0],
        };
        assert!(matches!(extract_weight_field(&t), Err(Error::Invariant(_))));
    }

    #[test]
    fn shift_state_is_monotone() {
        for seed in 0..50 {
            let f = sample_field(seed, 6, 6).unwrap();
            let fresh = FreshExp { seed: seed + 1000 };
            let out = shift_couple(&f, |i, j| fresh.get(i, j)).unwrap();
            let st = &out.state;
            assert_eq!(st.pi[0], Some(1));
            assert_eq!(st.j[0], Some(0.0));
            let known: Vec<usize> = st.pi.iter().flatten().copied().collect();
            assert!(known.windows(2).all(|w| w[0] <= w[1]));
            let js: Vec<f64> = st.j.iter().flatten().copied().collect();
            assert!(js.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!((out.field.b_max, out.field.c_max), (5, 5));
        }
    }
}
