//! Online bagging of Hoeffding trees with one ADWIN monitor per member.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::adwin::Adwin;
use super::hoeffding::{HoeffdingParams, HoeffdingTree};
use super::Classifier;
use crate::error::{Error, Result};
use crate::model::argmax_first;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OzaBagParams {
    pub ensemble_size: usize,
    /// ADWIN confidence; `None` disables change detection.
    pub delta: Option<f64>,
    pub tree: HoeffdingParams,
}

impl Default for OzaBagParams {
    fn default() -> Self {
        Self {
            ensemble_size: 10,
            delta: Some(0.002),
            tree: HoeffdingParams::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Member {
    pub tree: HoeffdingTree,
    pub monitor: Option<Adwin>,
}

#[derive(Debug, Clone)]
pub struct OzaBagAdwin {
    params: OzaBagParams,
    members: Vec<Member>,
    rng: ChaCha8Rng,
    seed_rng: ChaCha8Rng,
    poisson: Poisson<f64>,
    resets: usize,
}

impl OzaBagAdwin {
    pub fn new(params: OzaBagParams, rng: ChaCha8Rng) -> Result<Self> {
        if params.ensemble_size == 0 {
            return Err(Error::InvalidParameter("ensemble size must be at least 1".into()));
        }
        if let Some(d) = params.delta {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::InvalidParameter(format!("delta = {d} must be in (0, 1)")));
            }
        }
        params.tree.validate()?;
        let members = (0..params.ensemble_size)
            .map(|_| Self::fresh_member(&params))
            .collect::<Result<_>>()?;
        Ok(Self {
            params,
            members,
            seed_rng: rng.clone(),
            rng,
            poisson: Poisson::new(1.0).expect("lambda = 1 is valid"),
            resets: 0,
        })
    }

    fn fresh_member(params: &OzaBagParams) -> Result<Member> {
        Ok(Member {
            tree: HoeffdingTree::new(params.tree)?,
            monitor: params.delta.map(Adwin::new),
        })
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    /// Number of members replaced after a detected change.
    pub fn resets(&self) -> usize {
        self.resets
    }

    /// Draws one Poisson(1) training multiplicity.
    fn multiplicity(&mut self) -> u64 {
        self.poisson.sample(&mut self.rng) as u64
    }
}

impl Classifier for OzaBagAdwin {
    fn predict(&self, x: &[f64]) -> usize {
        let preds: Vec<usize> = self.members.iter().map(|m| m.tree.predict(x)).collect();
        let n = preds.iter().copied().max().unwrap_or(0) + 1;
        let mut votes = vec![0.0; n];
        for p in preds {
            votes[p] += 1.0;
        }
        argmax_first(&votes)
    }

    fn train(&mut self, x: &[f64], label: usize) -> Result<()> {
        // Among members whose error rate rose significantly, the one with the
        // highest estimated error is replaced.
        let mut worst: Option<(usize, f64)> = None;
        for i in 0..self.members.len() {
            let member = &mut self.members[i];
            if let Some(monitor) = member.monitor.as_mut() {
                let err = (member.tree.predict(x) != label) as u8 as f64;
                let before = monitor.estimate();
                if monitor.update(err) && monitor.estimate() > before {
                    let est = monitor.estimate();
                    if worst.is_none_or(|(_, e)| est > e) {
                        worst = Some((i, est));
                    }
                }
            }
            let k = self.multiplicity();
            if k > 0 {
                self.members[i].tree.train_weighted(x, label, k as f64);
            }
        }
        if let Some((i, _)) = worst {
            self.members[i] = Self::fresh_member(&self.params)?;
            self.resets += 1;
        }
        Ok(())
    }

    fn reset(&mut self) {
        // A reset learner replays its original Poisson draws.
        *self = Self::new(self.params, self.seed_rng.clone()).expect("params validated");
    }
}

/// Mean of `n` Poisson(1) draws, for sanity checks on the bagging weights.
pub fn mean_multiplicity(rng: &mut impl Rng, n: usize) -> f64 {
    let p = Poisson::new(1.0).expect("lambda = 1 is valid");
    (0..n).map(|_| p.sample(rng)).sum::<f64>() / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::learner_rng;

    #[test]
    fn poisson_weights_average_one() {
        let m = mean_multiplicity(&mut learner_rng(3), 100_000);
        assert!((m - 1.0).abs() < 0.02, "{m}");
    }

    #[test]
    fn single_member_without_adwin_is_a_poisson_weighted_tree() {
        let params = OzaBagParams {
            ensemble_size: 1,
            delta: None,
            ..Default::default()
        };
        let mut bag = OzaBagAdwin::new(params, learner_rng(5)).unwrap();
        let mut tree = HoeffdingTree::new(params.tree).unwrap();
        let mut rng = learner_rng(5);
        let poisson = Poisson::new(1.0).unwrap();
        for i in 0..3000 {
            let x = [(i % 100) as f64, ((i * 37) % 100) as f64];
            let label = (x[0] + x[1] > 100.0) as usize;
            assert_eq!(bag.predict(&x), tree.predict(&x));
            bag.train(&x, label).unwrap();
            let k: f64 = poisson.sample(&mut rng);
            tree.train_weighted(&x, label, k);
        }
        assert_eq!(bag.members()[0].tree.splits(), tree.splits());
    }

    #[test]
    fn rejects_empty_ensemble() {
        let params = OzaBagParams {
            ensemble_size: 0,
            ..Default::default()
        };
        assert!(OzaBagAdwin::new(params, learner_rng(1)).is_err());
    }
}
