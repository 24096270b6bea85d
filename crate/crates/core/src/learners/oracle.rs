use std::sync::Arc;

use super::Classifier;
use crate::error::Result;
use crate::model::{Scenario, Snapshot};

/// The Bayes-optimal classifier of a known scenario, driven as a learner.
///
/// It tracks time by counting `train` calls, so it is only meaningful when fed
/// the scenario's own stream in order.
#[derive(Debug, Clone)]
pub struct BayesOracle {
    scenario: Arc<Scenario>,
    t: usize,
    snapshot: Snapshot,
}

impl BayesOracle {
    pub fn new(scenario: Arc<Scenario>) -> Result<Self> {
        let snapshot = scenario.snapshot(0)?;
        Ok(Self {
            scenario,
            t: 0,
            snapshot,
        })
    }

    /// Time step the next prediction refers to.
    pub fn time(&self) -> usize {
        self.t
    }
}

impl Classifier for BayesOracle {
    fn predict(&self, x: &[f64]) -> usize {
        self.snapshot.classify(x).unwrap_or(0)
    }

    fn train(&mut self, _x: &[f64], _label: usize) -> Result<()> {
        self.t += 1;
        if self.t < self.scenario.length() {
            self.snapshot = self.scenario.snapshot(self.t)?;
        }
        Ok(())
    }

    fn reset(&mut self) {
        *self = Self::new(Arc::clone(&self.scenario)).expect("t = 0 was valid at construction");
    }
}
