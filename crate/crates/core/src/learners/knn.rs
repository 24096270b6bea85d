use std::collections::VecDeque;

use super::Classifier;
use crate::error::{Error, Result};

/// k-nearest-neighbour classifier over a FIFO window of the most recent
/// `wsize` labeled patterns.
#[derive(Debug, Clone)]
pub struct WindowKnn {
    wsize: usize,
    k: usize,
    window: VecDeque<(Box<[f64]>, usize)>,
}

impl WindowKnn {
    pub fn new(wsize: usize, k: usize) -> Result<Self> {
        if wsize == 0 {
            return Err(Error::InvalidParameter("wsize must be at least 1".into()));
        }
        if k == 0 || k > wsize {
            return Err(Error::InvalidParameter(format!(
                "k = {k} must be in 1..={wsize}"
            )));
        }
        Ok(Self {
            wsize,
            k,
            window: VecDeque::with_capacity(wsize),
        })
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.wsize
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.window.iter().any(|(p, _)| p.as_ref() == x)
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum()
}

impl Classifier for WindowKnn {
    fn predict(&self, x: &[f64]) -> usize {
        if self.window.is_empty() {
            return 0;
        }
        if self.k == 1 {
            let mut best = (f64::INFINITY, 0);
            for (p, label) in &self.window {
                let d = dist2(p, x);
                if d < best.0 {
                    best = (d, *label);
                }
            }
            return best.1;
        }
        let mut neighbours: Vec<(f64, usize, usize)> = self
            .window
            .iter()
            .enumerate()
            .map(|(age, (p, label))| (dist2(p, x), age, *label))
            .collect();
        let k = self.k.min(neighbours.len());
        neighbours.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        neighbours.truncate(k);
        neighbours.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let max_label = neighbours.iter().map(|n| n.2).max().unwrap_or(0);
        let mut counts = vec![0usize; max_label + 1];
        for n in &neighbours {
            counts[n.2] += 1;
        }
        let top = counts.iter().copied().max().unwrap_or(0);
        // Tie: label of the nearest neighbour among the tied labels.
        neighbours
            .iter()
            .map(|n| n.2)
            .find(|l| counts[*l] == top)
            .unwrap_or(0)
    }

    fn train(&mut self, x: &[f64], label: usize) -> Result<()> {
        if self.window.len() == self.wsize {
            self.window.pop_front();
        }
        self.window.push_back((x.into(), label));
        Ok(())
    }

    fn reset(&mut self) {
        self.window.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_label_wins() {
        let mut knn = WindowKnn::new(10, 1).unwrap();
        knn.train(&[0.0, 0.0], 0).unwrap();
        knn.train(&[10.0, 10.0], 1).unwrap();
        assert_eq!(knn.predict(&[1.0, 1.0]), 0);
        assert_eq!(knn.predict(&[9.0, 8.0]), 1);
    }

    #[test]
    fn oldest_pattern_evicted() {
        let mut knn = WindowKnn::new(2, 1).unwrap();
        knn.train(&[0.0], 0).unwrap();
        knn.train(&[1.0], 1).unwrap();
        knn.train(&[2.0], 1).unwrap();
        assert_eq!(knn.len(), 2);
        assert!(!knn.contains(&[0.0]));
        assert_eq!(knn.predict(&[-5.0]), 1);
    }

    #[test]
    fn empty_window_predicts_zero() {
        assert_eq!(WindowKnn::new(5, 1).unwrap().predict(&[3.0]), 0);
    }

    #[test]
    fn majority_then_nearest_tiebreak() {
        let mut knn = WindowKnn::new(10, 3).unwrap();
        knn.train(&[0.0], 2).unwrap();
        knn.train(&[1.0], 1).unwrap();
        knn.train(&[1.5], 1).unwrap();
        assert_eq!(knn.predict(&[0.1]), 1);
        let mut knn = WindowKnn::new(10, 2).unwrap();
        knn.train(&[1.0], 1).unwrap();
        knn.train(&[0.0], 2).unwrap();
        assert_eq!(knn.predict(&[0.2]), 2);
    }

    #[test]
    fn invalid_sizes() {
        assert!(WindowKnn::new(0, 1).is_err());
        assert!(WindowKnn::new(3, 4).is_err());
        assert!(WindowKnn::new(3, 0).is_err());
    }
}
