//! Raw sample output for the `sim` commands.
//!
//! CSV output is long format with a leading `trial` column; JSON output is an
//! array with one object per trial.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::clockfield::{derive_seed, ClockField, SiteWindow};
use crate::error::{Error, Result};
use crate::lpp::{passage_grid, sample_field, LppField};
use crate::osp::{simulate_osp, OspTrajectory};
use crate::par::try_map_trials;
use crate::sixvertex::{check_params, sample_six_vertex, SixVertexSample};
use crate::tasep::{passage_time_table, table_window, PassageTimeTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Tasep,
    Osp,
    Lpp,
    Sixvertex,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Tasep => "tasep",
            Model::Osp => "osp",
            Model::Lpp => "lpp",
            Model::Sixvertex => "sixvertex",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub trials: usize,
    /// Base color `A` of the TASEP passage-time table.
    pub tasep_a: i64,
    pub tasep_b: usize,
    pub tasep_c: usize,
    pub osp_n: usize,
    pub lpp_b: usize,
    pub lpp_c: usize,
    pub sixvertex_x: usize,
    pub sixvertex_y: usize,
    pub b1: f64,
    pub b2: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            trials: 10,
            tasep_a: 0,
            tasep_b: 5,
            tasep_c: 5,
            osp_n: 10,
            lpp_b: 5,
            lpp_c: 5,
            sixvertex_x: 8,
            sixvertex_y: 8,
            b1: 0.6,
            b2: 0.3,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let dims = [
            self.tasep_b,
            self.tasep_c,
            self.lpp_b,
            self.lpp_c,
            self.sixvertex_x,
            self.sixvertex_y,
        ];
        if dims.contains(&0) || self.osp_n < 2 {
            return Err(Error::Config("sim: grid sizes must be >= 1 and osp_n >= 2".into()));
        }
        check_params(self.b1, self.b2)
    }
}

#[derive(Debug, Clone, Serialize)]
struct LppTrial {
    field: LppField,
    /// `L_{(1,1),(B,C)}`, row-major in `B`.
    passage: Vec<f64>,
}

/// Writes `cfg.trials` samples of `model`; trial `t` uses seed `derive_seed(seed, t)`.
pub fn write_samples<W: Write>(model: Model, cfg: &SimConfig, seed: u64, format: Format, out: W) -> Result<()> {
    cfg.validate()?;
    let n = cfg.trials;
    let s = |t: usize| derive_seed(seed, t as u64);
    match model {
        Model::Tasep => {
            let window = table_window(cfg.tasep_a, cfg.tasep_b, cfg.tasep_c);
            let tables: Vec<PassageTimeTable> = try_map_trials(n, |t| {
                let mut f = ClockField::new(s(t), window)?;
                passage_time_table(&mut f, cfg.tasep_a, cfg.tasep_b, cfg.tasep_c)
            })?;
            emit(format, out, &tables, &["trial", "A", "B", "C", "time"], |t, tab, wr| {
                for b in 1..=tab.b_max {
                    for c in 1..=tab.c_max {
                        wr.serialize((t, tab.base_color, b, c, tab.get(b, c)))?;
                    }
                }
                Ok(())
            })
        }
        Model::Osp => {
            let nn = cfg.osp_n;
            let window = SiteWindow::new(1, nn as i64)?;
            let runs: Vec<OspTrajectory> = try_map_trials(n, |t| {
                let mut f = ClockField::new(s(t), window)?;
                simulate_osp(&mut f, nn)
            })?;
            let mut header = vec!["trial".to_string()];
            header.extend((1..nn).map(|k| format!("U{k}")));
            header.extend(["last_swap_location".into(), "absorbing_time".into()]);
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            emit(format, out, &runs, &header, |t, r, wr| {
                let mut rec = vec![t.to_string()];
                rec.extend(r.finishing_times.iter().map(f64::to_string));
                rec.push(r.last_swap_location.to_string());
                rec.push(r.absorbing_time.to_string());
                wr.write_record(&rec)?;
                Ok(())
            })
        }
        Model::Lpp => {
            let trials: Vec<LppTrial> = try_map_trials(n, |t| {
                let field = sample_field(s(t), cfg.lpp_b, cfg.lpp_c)?;
                let grid = passage_grid(&field, (1, 1))?;
                let passage = (1..=cfg.lpp_b)
                    .flat_map(|b| (1..=cfg.lpp_c).map(move |c| (b, c)))
                    .map(|(b, c)| grid.get(b, c))
                    .collect();
                Ok::<_, Error>(LppTrial { field, passage })
            })?;
            emit(format, out, &trials, &["trial", "B", "C", "weight", "passage"], |t, tr, wr| {
                for b in 1..=tr.field.b_max {
                    for c in 1..=tr.field.c_max {
                        let p = tr.passage[(b - 1) * tr.field.c_max + (c - 1)];
                        wr.serialize((t, b, c, tr.field.weight(b, c), p))?;
                    }
                }
                Ok(())
            })
        }
        Model::Sixvertex => {
            let samples: Vec<SixVertexSample> = try_map_trials(n, |t| {
                sample_six_vertex(s(t), cfg.sixvertex_x, cfg.sixvertex_y, cfg.b1, cfg.b2)
            })?;
            emit(
                format,
                out,
                &samples,
                &["trial", "x", "y", "bottom", "left", "top", "right"],
                |t, sv, wr| {
                    for y in 1..=sv.y_max {
                        for x in 1..=sv.x_max {
                            let (b, l, tp, r) = sv.vertex(x, y);
                            wr.serialize((t, x, y, b, l, tp, r))?;
                        }
                    }
                    Ok(())
                },
            )
        }
    }
}

fn emit<T, W, F>(format: Format, mut out: W, items: &[T], header: &[&str], mut row: F) -> Result<()>
where
    T: Serialize,
    W: Write,
    F: FnMut(usize, &T, &mut csv::Writer<&mut W>) -> Result<()>,
{
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, items)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut wr = csv::Writer::from_writer(&mut out);
            wr.write_record(header)?;
            for (t, item) in items.iter().enumerate() {
                row(t, item, &mut wr)?;
            }
            wr.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(model: Model, format: Format) -> String {
        let cfg = SimConfig {
            trials: 3,
            ..Default::default()
        };
        let mut buf = Vec::new();
        write_samples(model, &cfg, 9, format, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn csv_row_counts() {
        assert_eq!(render(Model::Tasep, Format::Csv).lines().count(), 1 + 3 * 25);
        assert_eq!(render(Model::Osp, Format::Csv).lines().count(), 1 + 3);
        assert_eq!(render(Model::Lpp, Format::Csv).lines().count(), 1 + 3 * 25);
        assert_eq!(render(Model::Sixvertex, Format::Csv).lines().count(), 1 + 3 * 64);
    }

    #[test]
    fn json_is_an_array_per_trial() {
        for m in [Model::Tasep, Model::Osp, Model::Lpp, Model::Sixvertex] {
            let v: serde_json::Value = serde_json::from_str(&render(m, Format::Json)).unwrap();
            assert_eq!(v.as_array().unwrap().len(), 3, "{}", m.name());
        }
    }

    #[test]
    fn output_is_reproducible() {
        assert_eq!(render(Model::Osp, Format::Csv), render(Model::Osp, Format::Csv));
    }
}
