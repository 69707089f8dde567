//! Colored stochastic six-vertex model on the quadrant `[1, X] x [1, Y]`.
//!
//! A path of color `i` enters from the left in row `i`; color 0 means no path.
//! At a vertex with color `i` coming from below and `j` from the left:
//! if `i <= j`, with probability `b1` the colors go straight (`i` up, `j`
//! right), otherwise they turn (`j` up, `i` right); if `i > j` the same with
//! `b2`. Paths only move up and right, so the sample on a finite box is exact.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::clockfield::{derive_seed, mix64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SixVertexSample {
    pub x_max: usize,
    pub y_max: usize,
    pub b1: f64,
    pub b2: f64,
    /// Color leaving vertex `(x, y)` to the right, at `(y-1) * x_max + (x-1)`.
    right: Vec<u32>,
    /// Color leaving vertex `(x, y)` upward.
    top: Vec<u32>,
}

pub fn check_params(b1: f64, b2: f64) -> Result<()> {
    if !(0.0 <= b2 && b2 < b1 && b1 < 1.0) {
        return Err(Error::Config(format!(
            "need 0 <= b2 < b1 < 1, got b1 = {b1}, b2 = {b2}"
        )));
    }
    Ok(())
}

fn vertex_uniform(seed: u64, x: usize, y: usize) -> f64 {
    let bits = mix64(derive_seed(seed, ((x as u64) << 32) | y as u64));
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The outgoing `(top, right)` colors for incoming `bottom`, `left`.
pub fn resolve_vertex(bottom: u32, left: u32, b1: f64, b2: f64, u: f64) -> (u32, u32) {
    let straight = if bottom <= left { b1 } else { b2 };
    if u < straight {
        (bottom, left)
    } else {
        (left, bottom)
    }
}

pub fn sample_six_vertex(
    seed: u64,
    x_max: usize,
    y_max: usize,
    b1: f64,
    b2: f64,
) -> Result<SixVertexSample> {
    check_params(b1, b2)?;
    if x_max == 0 || y_max == 0 {
        return Err(Error::Config("six-vertex box must be nonempty".into()));
    }
    let mut right = vec![0; x_max * y_max];
    let mut top = vec![0; x_max * y_max];
    // Row by row is a valid order: inputs come from the left and from below.
    for y in 1..=y_max {
        for x in 1..=x_max {
            let idx = (y - 1) * x_max + (x - 1);
            let bottom = if y == 1 { 0 } else { top[idx - x_max] };
            let left = if x == 1 { y as u32 } else { right[idx - 1] };
            let (t, r) = resolve_vertex(bottom, left, b1, b2, vertex_uniform(seed, x, y));
            top[idx] = t;
            right[idx] = r;
        }
    }
    Ok(SixVertexSample {
        x_max,
        y_max,
        b1,
        b2,
        right,
        top,
    })
}

fn half_integer(v: f64) -> Option<usize> {
    let k = v - 0.5;
    (k >= 0.0 && k.fract() == 0.0).then_some(k as usize)
}

impl SixVertexSample {
    /// `(bottom, left, top, right)` colors at vertex `(x, y)`.
    pub fn vertex(&self, x: usize, y: usize) -> (u32, u32, u32, u32) {
        let idx = (y - 1) * self.x_max + (x - 1);
        let bottom = if y == 1 { 0 } else { self.top[idx - self.x_max] };
        let left = if x == 1 { y as u32 } else { self.right[idx - 1] };
        (bottom, left, self.top[idx], self.right[idx])
    }

    /// Color on the horizontal edge from column `x` to `x+1` in row `y`;
    /// column 0 is the left boundary.
    pub fn horizontal(&self, x: usize, y: usize) -> u32 {
        if x == 0 {
            y as u32
        } else {
            self.right[(y - 1) * self.x_max + (x - 1)]
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["x", "y", "bottom", "left", "top", "right"])?;
        for y in 1..=self.y_max {
            for x in 1..=self.x_max {
                let (b, l, t, r) = self.vertex(x, y);
                wr.serialize((x, y, b, l, t, r))?;
            }
        }
        wr.flush()?;
        Ok(())
    }
}

/// `H^m(x, y)`: paths of color `>= m` crossing the vertical line through `x`
/// strictly below `y`. Both coordinates are half-integers.
pub fn height_6v(sample: &SixVertexSample, m: u32, x: f64, y: f64) -> Result<usize> {
    let (Some(col), Some(rows)) = (half_integer(x), half_integer(y)) else {
        return Err(Error::Domain(format!("({x}, {y}) is not a half-integer point")));
    };
    if m == 0 {
        return Err(Error::Domain("color threshold must be >= 1".into()));
    }
    if col > sample.x_max || rows > sample.y_max {
        return Err(Error::Domain(format!(
            "({x}, {y}) outside the {}x{} box",
            sample.x_max, sample.y_max
        )));
    }
    Ok((1..=rows).filter(|&r| sample.horizontal(col, r) >= m).count())
}

/// A height observation `H^m(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightPoint {
    pub m: u32,
    pub x: f64,
    pub y: f64,
}

/// The two point lists of the shift statement for the six-vertex model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalConfig {
    pub shifted: Vec<HeightPoint>,
    pub fixed: Vec<HeightPoint>,
}

impl GalConfig {
    /// Checks colors and the weak ordering of all points.
    pub fn validate(&self) -> Result<()> {
        if self.shifted.is_empty() {
            return Err(Error::Config("need at least one shifted point".into()));
        }
        let all: Vec<&HeightPoint> = self.shifted.iter().chain(&self.fixed).collect();
        for p in &all {
            if half_integer(p.x).is_none() || half_integer(p.y).is_none() || p.m == 0 {
                return Err(Error::Config(format!("invalid point {p:?}")));
            }
        }
        let max_m = self.shifted.iter().map(|p| p.m).max().unwrap();
        if let Some(min_m) = self.fixed.iter().map(|p| p.m).min() {
            if max_m >= min_m {
                return Err(Error::Config(format!(
                    "shifted colors must stay below fixed ones: {max_m} >= {min_m}"
                )));
            }
        }
        for w in all.windows(2) {
            if w[0].x > w[1].x {
                return Err(Error::Config(format!(
                    "x must be weakly increasing: {} > {}",
                    w[0].x, w[1].x
                )));
            }
            if w[0].y < w[1].y {
                return Err(Error::Config(format!(
                    "y must be weakly decreasing: {} < {}",
                    w[0].y, w[1].y
                )));
            }
        }
        Ok(())
    }

    /// Smallest box containing every point of both sides.
    pub fn box_size(&self) -> (usize, usize) {
        let all = self.shifted.iter().chain(&self.fixed);
        let x = all.clone().map(|p| (p.x - 0.5) as usize).max().unwrap_or(1);
        let y = all.map(|p| (p.y + 0.5) as usize).max().unwrap_or(1);
        (x.max(1), y.max(1))
    }

    /// The unshifted observation vector.
    pub fn original(&self, s: &SixVertexSample) -> Result<Vec<f64>> {
        self.shifted
            .iter()
            .chain(&self.fixed)
            .map(|p| height_6v(s, p.m, p.x, p.y).map(|h| h as f64))
            .collect()
    }

    /// Shifted points use color `m+1` at height `y+1`.
    pub fn shifted_vector(&self, s: &SixVertexSample) -> Result<Vec<f64>> {
        let head = self
            .shifted
            .iter()
            .map(|p| height_6v(s, p.m + 1, p.x, p.y + 1.0).map(|h| h as f64));
        let tail = self
            .fixed
            .iter()
            .map(|p| height_6v(s, p.m, p.x, p.y).map(|h| h as f64));
        head.chain(tail).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_checked() {
        assert!(sample_six_vertex(1, 3, 3, 0.3, 0.3).is_err());
        assert!(sample_six_vertex(1, 3, 3, 1.0, 0.3).is_err());
        assert!(sample_six_vertex(1, 3, 3, 0.6, 0.3).is_ok());
    }

    #[test]
    fn vertex_rule() {
        assert_eq!(resolve_vertex(1, 2, 0.999, 0.0, 0.5), (1, 2));
        assert_eq!(resolve_vertex(3, 2, 0.999, 0.0, 0.0), (2, 3));
        assert_eq!(resolve_vertex(1, 2, 0.5, 0.1, 0.7), (2, 1));
    }

    #[test]
    fn conservation_and_boundary() {
        let s = sample_six_vertex(9, 8, 6, 0.6, 0.3).unwrap();
        for y in 1..=6 {
            for x in 1..=8 {
                let (b, l, t, r) = s.vertex(x, y);
                let mut a = [b, l];
                let mut c = [t, r];
                a.sort();
                c.sort();
                assert_eq!(a, c);
            }
        }
        for k in 1..=6 {
            assert_eq!(height_6v(&s, 1, 0.5, k as f64 + 0.5).unwrap(), k);
        }
        assert_eq!(height_6v(&s, 50, 4.5, 6.5).unwrap(), 0);
        assert!(height_6v(&s, 1, 9.5, 1.5).is_err());
        assert!(height_6v(&s, 1, 2.0, 1.5).is_err());
    }

    #[test]
    fn hypotheses_enforced() {
        let p = |m, x, y| HeightPoint { m, x, y };
        let ok = GalConfig {
            shifted: vec![p(2, 3.5, 6.5)],
            fixed: vec![p(4, 6.5, 4.5)],
        };
        assert!(ok.validate().is_ok());
        assert_eq!(ok.box_size(), (6, 7));
        let bad_color = GalConfig {
            shifted: vec![p(4, 3.5, 6.5)],
            fixed: vec![p(4, 6.5, 4.5)],
        };
        assert!(bad_color.validate().is_err());
        let bad_order = GalConfig {
            shifted: vec![p(2, 3.5, 3.5)],
            fixed: vec![p(4, 6.5, 4.5)],
        };
        assert!(bad_order.validate().is_err());
    }
}
