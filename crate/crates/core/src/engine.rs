//! Event-driven colored exclusion dynamics on a finite interval.
//!
//! Each site holds a color (or [`HOLE`]). At every ring of edge `(x, x+1)` the
//! two colors swap iff the left one is smaller. Only enabled edges are kept in
//! the queue; each asks the clock field for its next ring after the moment it
//! became enabled. Enabled edges stay enabled until they fire, so a scheduled
//! ring never goes stale unless a neighbouring swap disables the edge, in
//! which case it is dropped lazily.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::clockfield::ClockField;
use crate::error::{Error, Result};

/// Color of an empty site; larger than every particle color.
pub const HOLE: i64 = i64::MAX;

/// A swap across edge `(site, site+1)`.
///
/// `moved_right` was at `site` and is the smaller (stronger) color;
/// `moved_left` was at `site+1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapEvent {
    pub time: f64,
    pub site: i64,
    pub moved_right: i64,
    pub moved_left: i64,
}

pub(crate) struct SwapEngine<'a> {
    field: &'a mut ClockField,
    left: i64,
    colors: Vec<i64>,
    scheduled: Vec<Option<f64>>,
    heap: BinaryHeap<Reverse<(u64, usize)>>,
    now: f64,
}

impl<'a> SwapEngine<'a> {
    /// `colors[i]` is the color of site `left + i`.
    pub(crate) fn new(field: &'a mut ClockField, left: i64, colors: Vec<i64>) -> Result<Self> {
        let right = left + colors.len() as i64 - 1;
        let w = field.window();
        if colors.is_empty() || !w.contains(left) || !w.contains(right) {
            return Err(Error::Domain(format!(
                "sites [{left}, {right}] not inside clock window [{}, {}]",
                w.min, w.max
            )));
        }
        let edges = colors.len() - 1;
        let mut engine = Self {
            field,
            left,
            colors,
            scheduled: vec![None; edges],
            heap: BinaryHeap::new(),
            now: 0.0,
        };
        for e in 0..edges {
            engine.refresh(e)?;
        }
        Ok(engine)
    }

    pub(crate) fn colors(&self) -> &[i64] {
        &self.colors
    }

    fn enabled(&self, e: usize) -> bool {
        self.colors[e] < self.colors[e + 1]
    }

    fn refresh(&mut self, e: usize) -> Result<()> {
        match (self.enabled(e), self.scheduled[e]) {
            (true, None) => {
                let t = self.field.next_ring(self.left + e as i64, self.now)?;
                self.scheduled[e] = Some(t);
                // Positive floats order like their bit patterns.
                self.heap.push(Reverse((t.to_bits(), e)));
            }
            (false, Some(_)) => self.scheduled[e] = None,
            _ => {}
        }
        Ok(())
    }

    /// Performs the next swap at or before `horizon`; `None` when there is none.
    pub(crate) fn step(&mut self, horizon: f64) -> Result<Option<SwapEvent>> {
        while let Some(&Reverse((bits, e))) = self.heap.peek() {
            let t = f64::from_bits(bits);
            if self.scheduled[e] != Some(t) {
                self.heap.pop();
                continue;
            }
            if t > horizon {
                return Ok(None);
            }
            self.heap.pop();
            if t <= self.now {
                return Err(Error::Invariant(format!(
                    "ring times not distinct: {t} after {}",
                    self.now
                )));
            }
            self.now = t;
            self.scheduled[e] = None;
            let event = SwapEvent {
                time: t,
                site: self.left + e as i64,
                moved_right: self.colors[e],
                moved_left: self.colors[e + 1],
            };
            self.colors.swap(e, e + 1);
            if e > 0 {
                self.refresh(e - 1)?;
            }
            if e + 1 < self.scheduled.len() {
                self.refresh(e + 1)?;
            }
            return Ok(Some(event));
        }
        Ok(None)
    }

    /// Runs until `horizon` or until no edge is enabled.
    pub(crate) fn run(&mut self, horizon: f64) -> Result<Vec<SwapEvent>> {
        let mut events = Vec::new();
        while let Some(ev) = self.step(horizon)? {
            events.push(ev);
        }
        Ok(events)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clockfield::SiteWindow;

    #[test]
    fn sorts_to_reverse() {
        let mut f = ClockField::new(3, SiteWindow::new(1, 6).unwrap()).unwrap();
        let mut eng = SwapEngine::new(&mut f, 1, (1..=6).collect()).unwrap();
        let events = eng.run(f64::INFINITY).unwrap();
        assert_eq!(events.len(), 15);
        assert_eq!(eng.colors(), &[6, 5, 4, 3, 2, 1]);
        assert!(events.windows(2).all(|w| w[0].time < w[1].time));
    }

    #[test]
    fn swaps_happen_on_rings() {
        let mut f = ClockField::new(4, SiteWindow::new(0, 5).unwrap()).unwrap();
        let events = SwapEngine::new(&mut f, 0, (0..=5).collect())
            .unwrap()
            .run(f64::INFINITY)
            .unwrap();
        for ev in &events {
            let before = ev.time - 1.0 / crate::clockfield::TICKS_PER_UNIT;
            assert_eq!(f.next_ring(ev.site, before).unwrap(), ev.time);
        }
    }

    #[test]
    fn window_checked() {
        let mut f = ClockField::new(3, SiteWindow::new(1, 4).unwrap()).unwrap();
        assert!(SwapEngine::new(&mut f, 1, vec![1, 2, 3, 4, 5]).is_err());
    }
}
