//! Dynamic weighted majority over naive Bayes experts.

use super::naive_bayes::NaiveBayes;
use super::Classifier;
use crate::error::{Error, Result};
use crate::model::argmax_first;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DwmParams {
    /// Multiplicative penalty for an expert that errs at an update step.
    pub beta: f64,
    /// Experts whose normalized weight falls below this are removed.
    pub theta: f64,
    /// Weights are updated every `period` patterns.
    pub period: usize,
    /// Predict by summing each expert's class probabilities scaled by its
    /// weight, instead of summing weights of predicted labels.
    pub soft_vote: bool,
}

impl Default for DwmParams {
    fn default() -> Self {
        Self {
            beta: 0.5,
            theta: 0.01,
            period: 25,
            soft_vote: false,
        }
    }
}

impl DwmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::InvalidParameter(format!("beta = {} must be in (0, 1)", self.beta)));
        }
        if !(self.theta >= 0.0 && self.theta < 1.0) {
            return Err(Error::InvalidParameter(format!("theta = {} must be in [0, 1)", self.theta)));
        }
        if self.period == 0 {
            return Err(Error::InvalidParameter("period must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Expert {
    pub model: NaiveBayes,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct Dwm {
    params: DwmParams,
    experts: Vec<Expert>,
    seen: usize,
    peak_experts: usize,
}

impl Dwm {
    pub fn new(params: DwmParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            experts: vec![Expert {
                model: NaiveBayes::new(),
                weight: 1.0,
            }],
            seen: 0,
            peak_experts: 1,
        })
    }

    pub fn experts(&self) -> &[Expert] {
        &self.experts
    }

    /// Largest ensemble size reached so far.
    pub fn peak_experts(&self) -> usize {
        self.peak_experts
    }

    fn vote(&self, predictions: &[usize]) -> usize {
        let n = predictions.iter().copied().max().map_or(1, |m| m + 1);
        let mut votes = vec![0.0; n];
        for (e, p) in self.experts.iter().zip(predictions) {
            votes[*p] += e.weight;
        }
        argmax_first(&votes)
    }
}

impl Classifier for Dwm {
    fn predict(&self, x: &[f64]) -> usize {
        if !self.params.soft_vote {
            let preds: Vec<usize> = self.experts.iter().map(|e| e.model.predict(x)).collect();
            return self.vote(&preds);
        }
        let mut votes: Vec<f64> = Vec::new();
        for e in &self.experts {
            // Untrained experts abstain.
            let Some(p) = e.model.posterior(x) else { continue };
            if votes.len() < p.len() {
                votes.resize(p.len(), 0.0);
            }
            for (v, q) in votes.iter_mut().zip(&p) {
                *v += e.weight * q;
            }
        }
        if votes.is_empty() {
            0
        } else {
            argmax_first(&votes)
        }
    }

    fn train(&mut self, x: &[f64], label: usize) -> Result<()> {
        self.seen += 1;
        let update = self.seen.is_multiple_of(self.params.period);
        let preds: Vec<usize> = self.experts.iter().map(|e| e.model.predict(x)).collect();
        if update {
            for (e, p) in self.experts.iter_mut().zip(&preds) {
                if *p != label {
                    e.weight *= self.params.beta;
                }
            }
        }
        let global = self.vote(&preds);
        if update {
            let max = self.experts.iter().map(|e| e.weight).fold(0.0, f64::max);
            for e in &mut self.experts {
                e.weight /= max;
            }
            let theta = self.params.theta;
            self.experts.retain(|e| e.weight >= theta);
            if global != label {
                self.experts.push(Expert {
                    model: NaiveBayes::new(),
                    weight: 1.0,
                });
            }
            self.peak_experts = self.peak_experts.max(self.experts.len());
        }
        for e in &mut self.experts {
            e.model.train(x, label)?;
        }
        Ok(())
    }

    fn reset(&mut self) {
        *self = Self::new(self.params).expect("params validated");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrong_expert_halved_at_update() {
        let mut dwm = Dwm::new(DwmParams {
            period: 1,
            ..DwmParams::default()
        })
        .unwrap();
        // Two experts, both trained on class 0 only.
        dwm.train(&[0.0], 0).unwrap();
        dwm.experts.push(Expert {
            model: dwm.experts[0].model.clone(),
            weight: 1.0,
        });
        dwm.experts[1].model.train(&[5.0], 1).unwrap();
        // Expert 0 says 0 at x=5, expert 1 says 1.
        dwm.train(&[5.0], 1).unwrap();
        assert_eq!(dwm.experts[0].weight, 0.5);
        assert_eq!(dwm.experts[1].weight, 1.0);
    }

    #[test]
    fn always_correct_never_grows() {
        let mut dwm = Dwm::new(DwmParams::default()).unwrap();
        for i in 0..2000 {
            let x = [(i % 17) as f64];
            dwm.train(&x, 0).unwrap();
        }
        assert_eq!(dwm.experts().len(), 1);
        assert_eq!(dwm.peak_experts(), 1);
    }

    #[test]
    fn contradiction_adds_experts_and_bounds_weights() {
        let mut dwm = Dwm::new(DwmParams::default()).unwrap();
        for i in 0..3000 {
            let label = (i / 500) % 2;
            let x = [(i % 7) as f64 * 0.1];
            dwm.train(&x, label).unwrap();
            for e in dwm.experts() {
                assert!(e.weight > 0.0 && e.weight <= 1.0);
            }
        }
        assert!(dwm.peak_experts() > 1);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(Dwm::new(DwmParams { beta: 1.5, ..Default::default() }).is_err());
        assert!(Dwm::new(DwmParams { period: 0, ..Default::default() }).is_err());
    }
}
