use super::estimator::GaussianEstimator;
use super::Classifier;
use crate::error::Result;
use crate::model::argmax_first;

/// Gaussian naive Bayes with one-pass per-class, per-feature statistics.
///
/// Before any training, predicts class 0.
#[derive(Debug, Clone, Default)]
pub struct NaiveBayes {
    class_weight: Vec<f64>,
    features: Vec<Vec<GaussianEstimator>>,
}

impl NaiveBayes {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn train_weighted(&mut self, x: &[f64], label: usize, weight: f64) {
        if label >= self.class_weight.len() {
            self.class_weight.resize(label + 1, 0.0);
            self.features.resize_with(label + 1, Vec::new);
        }
        self.class_weight[label] += weight;
        let feats = &mut self.features[label];
        if feats.len() < x.len() {
            feats.resize_with(x.len(), GaussianEstimator::default);
        }
        for (est, v) in feats.iter_mut().zip(x) {
            est.add(*v, weight);
        }
    }

    /// Unnormalized log posterior per class; `-inf` for unseen classes.
    pub fn log_scores(&self, x: &[f64]) -> Vec<f64> {
        let total: f64 = self.class_weight.iter().sum();
        self.class_weight
            .iter()
            .zip(&self.features)
            .map(|(&w, feats)| {
                if w <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                let mut score = (w / total).ln();
                for (est, v) in feats.iter().zip(x) {
                    score += est.log_pdf(*v);
                }
                score
            })
            .collect()
    }

    /// Normalized class probabilities, `None` before any training.
    pub fn posterior(&self, x: &[f64]) -> Option<Vec<f64>> {
        if self.is_empty() {
            return None;
        }
        let scores = self.log_scores(x);
        let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut p: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
        let total: f64 = p.iter().sum();
        for v in &mut p {
            *v /= total;
        }
        Some(p)
    }

    pub fn is_empty(&self) -> bool {
        self.class_weight.iter().all(|w| *w <= 0.0)
    }

    pub fn class_weights(&self) -> &[f64] {
        &self.class_weight
    }
}

impl Classifier for NaiveBayes {
    fn predict(&self, x: &[f64]) -> usize {
        if self.is_empty() {
            return 0;
        }
        argmax_first(&self.log_scores(x))
    }

    fn train(&mut self, x: &[f64], label: usize) -> Result<()> {
        self.train_weighted(x, label, 1.0);
        Ok(())
    }

    fn reset(&mut self) {
        *self = Self::default();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn untrained_predicts_class_zero() {
        assert_eq!(NaiveBayes::new().predict(&[1.0, 2.0]), 0);
    }

    #[test]
    fn single_class_always_wins() {
        let mut nb = NaiveBayes::new();
        nb.train(&[0.0, 0.0], 1).unwrap();
        assert_eq!(nb.predict(&[100.0, 100.0]), 1);
    }

    #[test]
    fn separated_classes_recognized_at_centers() {
        let mut nb = NaiveBayes::new();
        for i in 0..100 {
            let jitter = (i as f64 * 0.37).sin();
            nb.train(&[jitter, -jitter], 0).unwrap();
            nb.train(&[20.0 + jitter, 20.0 - jitter], 1).unwrap();
        }
        assert_eq!(nb.predict(&[0.0, 0.0]), 0);
        assert_eq!(nb.predict(&[20.0, 20.0]), 1);
    }

    #[test]
    fn reset_forgets() {
        let mut nb = NaiveBayes::new();
        nb.train(&[0.0], 1).unwrap();
        nb.reset();
        assert!(nb.is_empty());
        assert_eq!(nb.predict(&[0.0]), 0);
    }
}
