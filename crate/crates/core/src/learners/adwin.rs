//! ADWIN change detector.
//!
//! The window is summarized by an exponential histogram: row `i` holds buckets
//! of `2^i` items, at most [`MAX_BUCKETS`] per row. Every `clock` inserts the
//! detector scans all bucket boundaries, oldest first, and drops the oldest
//! bucket while the two sub-windows' means differ by more than
//!
//! ```text
//! eps = sqrt(2 m v ln(2 ln(n)/δ)) + 2/3 m ln(2 ln(n)/δ),
//! m   = 1/(n0 - M + 1) + 1/(n1 - M + 1)
//! ```
//!
//! with `v` the window variance and `M` the minimum sub-window length.

use std::collections::VecDeque;

pub const MAX_BUCKETS: usize = 5;
const MIN_SUB_WINDOW: usize = 5;
const MIN_WINDOW_FOR_CHECK: usize = 10;

#[derive(Debug, Clone, Copy, Default)]
struct Bucket {
    total: f64,
    /// Sum of squared deviations from the bucket mean.
    variance: f64,
}

#[derive(Debug, Clone)]
pub struct Adwin {
    delta: f64,
    clock: usize,
    ticks: usize,
    /// `rows[i]` holds buckets of size `2^i`, oldest at the front.
    rows: Vec<VecDeque<Bucket>>,
    width: usize,
    total: f64,
    variance: f64,
    detections: usize,
}

impl Adwin {
    pub fn new(delta: f64) -> Self {
        Self::with_clock(delta, 32)
    }

    /// `clock` sets how many inserts pass between cut checks.
    pub fn with_clock(delta: f64, clock: usize) -> Self {
        Self {
            delta,
            clock: clock.max(1),
            ticks: 0,
            rows: Vec::new(),
            width: 0,
            total: 0.0,
            variance: 0.0,
            detections: 0,
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Mean of the retained window.
    pub fn estimate(&self) -> f64 {
        if self.width == 0 {
            0.0
        } else {
            self.total / self.width as f64
        }
    }

    pub fn detections(&self) -> usize {
        self.detections
    }

    /// Adds one observation in `[0, 1]`; returns true if a change was detected
    /// and the older part of the window dropped.
    pub fn update(&mut self, value: f64) -> bool {
        self.insert(value);
        self.ticks += 1;
        if !self.ticks.is_multiple_of(self.clock) || self.width <= MIN_WINDOW_FOR_CHECK {
            return false;
        }
        let changed = self.shrink();
        if changed {
            self.detections += 1;
        }
        changed
    }

    fn insert(&mut self, value: f64) {
        if self.rows.is_empty() {
            self.rows.push(VecDeque::new());
        }
        self.rows[0].push_back(Bucket {
            total: value,
            variance: 0.0,
        });
        self.width += 1;
        if self.width > 1 {
            let prev_mean = self.total / (self.width - 1) as f64;
            let d = value - prev_mean;
            self.variance += (self.width - 1) as f64 * d * d / self.width as f64;
        }
        self.total += value;
        self.compress();
    }

    fn compress(&mut self) {
        let mut row = 0;
        while row < self.rows.len() && self.rows[row].len() > MAX_BUCKETS {
            let a = self.rows[row].pop_front().expect("row over capacity");
            let b = self.rows[row].pop_front().expect("row over capacity");
            let n = (1usize << row) as f64;
            let (ma, mb) = (a.total / n, b.total / n);
            let merged = Bucket {
                total: a.total + b.total,
                variance: a.variance + b.variance + n * n * (ma - mb) * (ma - mb) / (2.0 * n),
            };
            if row + 1 == self.rows.len() {
                self.rows.push(VecDeque::new());
            }
            self.rows[row + 1].push_back(merged);
            row += 1;
        }
    }

    fn drop_oldest(&mut self) {
        let row = self.rows.len() - 1;
        let b = self.rows[row].pop_front().expect("non-empty oldest row");
        let n1 = (1usize << row) as f64;
        self.width -= 1 << row;
        self.total -= b.total;
        let u1 = b.total / n1;
        let w = self.width as f64;
        let rest_mean = if self.width > 0 { self.total / w } else { 0.0 };
        self.variance -= b.variance + n1 * w * (u1 - rest_mean) * (u1 - rest_mean) / (n1 + w);
        if self.variance < 0.0 || self.width == 0 {
            self.variance = self.variance.max(0.0);
        }
        while self.rows.last().is_some_and(|r| r.is_empty()) {
            self.rows.pop();
        }
    }

    fn shrink(&mut self) -> bool {
        let mut changed = false;
        loop {
            let mut cut = false;
            let n = self.width;
            let mut n0 = 0usize;
            let mut u0 = 0.0;
            'scan: for row in (0..self.rows.len()).rev() {
                let size = 1usize << row;
                for b in &self.rows[row] {
                    n0 += size;
                    u0 += b.total;
                    let n1 = n - n0;
                    if n1 <= MIN_SUB_WINDOW + 1 {
                        break 'scan;
                    }
                    if n0 > MIN_SUB_WINDOW + 1 {
                        let u1 = self.total - u0;
                        let diff = u0 / n0 as f64 - u1 / n1 as f64;
                        if self.exceeds_bound(n0, n1, diff) {
                            cut = true;
                            break 'scan;
                        }
                    }
                }
            }
            if !cut {
                break;
            }
            changed = true;
            self.drop_oldest();
            if self.width <= MIN_WINDOW_FOR_CHECK {
                break;
            }
        }
        changed
    }

    fn exceeds_bound(&self, n0: usize, n1: usize, diff: f64) -> bool {
        cut_threshold(self.width, n0, n1, self.variance / self.width as f64, self.delta) < diff.abs()
    }
}

/// Threshold a sub-window mean difference must exceed for a cut.
pub fn cut_threshold(n: usize, n0: usize, n1: usize, variance: f64, delta: f64) -> f64 {
    let dd = (2.0 * (n as f64).ln() / delta).ln();
    let m = 1.0 / (n0 - MIN_SUB_WINDOW + 1) as f64 + 1.0 / (n1 - MIN_SUB_WINDOW + 1) as f64;
    (2.0 * m * variance * dd).sqrt() + 2.0 / 3.0 * dd * m
}

/// Minimum sub-window length considered by [`cut_threshold`].
pub const fn min_sub_window() -> usize {
    MIN_SUB_WINDOW
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_zeros_never_signal() {
        let mut a = Adwin::new(0.002);
        for _ in 0..20_000 {
            assert!(!a.update(0.0));
        }
        assert_eq!(a.width(), 20_000);
    }

    #[test]
    fn bucket_totals_stay_consistent() {
        let mut a = Adwin::new(0.002);
        for i in 0..5000 {
            a.update(((i * 31) % 7 == 0) as u8 as f64);
            let counted: usize = a
                .rows
                .iter()
                .enumerate()
                .map(|(r, row)| row.len() << r)
                .sum();
            assert_eq!(counted, a.width());
            let total: f64 = a.rows.iter().flatten().map(|b| b.total).sum();
            assert!((total - a.total).abs() < 1e-9);
            assert!(a.rows.iter().all(|r| r.len() <= MAX_BUCKETS));
        }
    }

    #[test]
    fn estimate_after_change_reflects_recent_data() {
        let mut a = Adwin::new(0.002);
        for _ in 0..1000 {
            a.update(0.0);
        }
        let mut fired = None;
        for i in 0..1000 {
            if a.update(1.0) && fired.is_none() {
                fired = Some(i);
            }
        }
        assert!(fired.is_some());
        assert!(a.width() < 1500);
        assert!(a.estimate() > 0.6, "{}", a.estimate());
    }
}
