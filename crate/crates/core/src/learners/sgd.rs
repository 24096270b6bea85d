use super::Classifier;
use crate::error::{Error, Result};

/// Linear two-class classifier trained by stochastic gradient descent on the
/// L2-regularized hinge loss, constant learning rate.
///
/// The first label seen maps to -1 and the second to +1.
#[derive(Debug, Clone)]
pub struct SgdLinear {
    learning_rate: f64,
    lambda: f64,
    weights: Vec<f64>,
    bias: f64,
    labels: Vec<usize>,
}

impl SgdLinear {
    pub fn new(learning_rate: f64, lambda: f64) -> Self {
        Self {
            learning_rate,
            lambda,
            weights: Vec::new(),
            bias: 0.0,
            labels: Vec::new(),
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn margin(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }

    /// One update towards target `y ∈ {-1, +1}`.
    pub fn step(&mut self, x: &[f64], y: f64) {
        if self.weights.len() < x.len() {
            self.weights.resize(x.len(), 0.0);
        }
        let violated = y * self.margin(x) < 1.0;
        let shrink = 1.0 - self.learning_rate * self.lambda;
        for (w, v) in self.weights.iter_mut().zip(x) {
            *w *= shrink;
            if violated {
                *w += self.learning_rate * y * v;
            }
        }
        if violated {
            self.bias += self.learning_rate * y;
        }
    }
}

impl Classifier for SgdLinear {
    fn predict(&self, x: &[f64]) -> usize {
        match self.labels.as_slice() {
            [] => 0,
            [only] => *only,
            [neg, pos] => {
                if self.margin(x) > 0.0 {
                    *pos
                } else {
                    *neg
                }
            }
            _ => unreachable!("at most two labels are admitted"),
        }
    }

    fn train(&mut self, x: &[f64], label: usize) -> Result<()> {
        let idx = match self.labels.iter().position(|l| *l == label) {
            Some(i) => i,
            None if self.labels.len() < 2 => {
                self.labels.push(label);
                self.labels.len() - 1
            }
            None => {
                return Err(Error::Unsupported(format!(
                    "sgd_linear is a two-class learner; saw a third label {label}"
                )))
            }
        };
        let y = if idx == 0 { -1.0 } else { 1.0 };
        self.step(x, y);
        Ok(())
    }

    fn reset(&mut self) {
        *self = Self::new(self.learning_rate, self.lambda);
    }
}
