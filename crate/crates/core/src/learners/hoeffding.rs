//! Incremental decision tree with Hoeffding-bound split decisions over
//! numeric features.
//!
//! Each leaf keeps, per feature and class, a weighted Gaussian estimator plus
//! the observed range. Candidate binary splits sit at `bins` evenly spaced
//! points inside the observed range; class weights on each side come from the
//! Gaussian CDFs. A split is made when the information-gain advantage of the
//! best candidate over the runner-up (including "no split") exceeds
//! `sqrt(R² ln(1/δ) / 2n)`, or when that bound falls below the tie threshold.

use super::estimator::GaussianEstimator;
use super::Classifier;
use crate::error::{Error, Result};
use crate::model::argmax_first;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafPrediction {
    MajorityClass,
    NaiveBayes,
    /// Per leaf, whichever of majority or naive Bayes has been more accurate.
    AdaptiveNaiveBayes,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoeffdingParams {
    pub grace_period: f64,
    pub split_confidence: f64,
    pub tie_threshold: f64,
    pub max_depth: usize,
    pub bins: usize,
    /// Each side of a split must receive at least this fraction of the weight.
    pub min_branch_fraction: f64,
    pub leaf_prediction: LeafPrediction,
}

impl Default for HoeffdingParams {
    fn default() -> Self {
        Self {
            grace_period: 200.0,
            split_confidence: 1e-7,
            tie_threshold: 0.05,
            max_depth: 20,
            bins: 10,
            min_branch_fraction: 0.01,
            leaf_prediction: LeafPrediction::AdaptiveNaiveBayes,
        }
    }
}

impl HoeffdingParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.grace_period >= 1.0) {
            return Err(Error::InvalidParameter("grace period must be >= 1".into()));
        }
        if !(self.split_confidence > 0.0 && self.split_confidence < 1.0) {
            return Err(Error::InvalidParameter("split confidence must be in (0, 1)".into()));
        }
        if !(self.tie_threshold >= 0.0) {
            return Err(Error::InvalidParameter("tie threshold must be >= 0".into()));
        }
        if self.bins == 0 {
            return Err(Error::InvalidParameter("bins must be >= 1".into()));
        }
        Ok(())
    }
}

/// Per-class Gaussian summary of one feature at one leaf.
#[derive(Debug, Clone)]
struct FeatureObserver {
    per_class: Vec<(GaussianEstimator, f64, f64)>,
}

impl FeatureObserver {
    fn new() -> Self {
        Self { per_class: Vec::new() }
    }

    fn add(&mut self, v: f64, label: usize, w: f64) {
        if label >= self.per_class.len() {
            self.per_class
                .resize(label + 1, (GaussianEstimator::default(), f64::INFINITY, f64::NEG_INFINITY));
        }
        let (est, lo, hi) = &mut self.per_class[label];
        est.add(v, w);
        *lo = lo.min(v);
        *hi = hi.max(v);
    }

    fn range(&self) -> Option<(f64, f64)> {
        let lo = self.per_class.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
        let hi = self.per_class.iter().map(|c| c.2).fold(f64::NEG_INFINITY, f64::max);
        (lo < hi).then_some((lo, hi))
    }

    /// Class weights on each side of `x <= threshold`.
    fn split_dists(&self, threshold: f64) -> (Vec<f64>, Vec<f64>) {
        let mut left = vec![0.0; self.per_class.len()];
        let mut right = vec![0.0; self.per_class.len()];
        for (c, (est, lo, hi)) in self.per_class.iter().enumerate() {
            let w = est.weight();
            if w <= 0.0 {
                continue;
            }
            let below = if threshold < *lo {
                0.0
            } else if threshold >= *hi {
                w
            } else {
                est.weight_below(threshold)
            };
            left[c] = below;
            right[c] = w - below;
        }
        (left, right)
    }
}

fn entropy(dist: &[f64]) -> f64 {
    let total: f64 = dist.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    -dist
        .iter()
        .filter(|w| **w > 0.0)
        .map(|w| {
            let p = w / total;
            p * p.log2()
        })
        .sum::<f64>()
}

/// Information gain of splitting `pre` into `branches`; `-inf` when fewer
/// than two branches carry `min_frac` of the weight.
pub fn info_gain(pre: &[f64], branches: &[&[f64]], min_frac: f64) -> f64 {
    let total: f64 = pre.iter().sum();
    if total <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let weights: Vec<f64> = branches.iter().map(|b| b.iter().sum()).collect();
    if weights.iter().filter(|w| **w / total >= min_frac).count() < 2 {
        return f64::NEG_INFINITY;
    }
    let after: f64 = branches
        .iter()
        .zip(&weights)
        .map(|(b, w)| w / total * entropy(b))
        .sum();
    entropy(pre) - after
}

pub fn hoeffding_bound(range: f64, confidence: f64, n: f64) -> f64 {
    (range * range * (1.0 / confidence).ln() / (2.0 * n)).sqrt()
}

#[derive(Debug, Clone)]
struct Leaf {
    depth: usize,
    /// Class weights, including those inherited from the parent's split.
    class_weight: Vec<f64>,
    observers: Vec<FeatureObserver>,
    /// Weight observed since the leaf was created.
    seen: f64,
    seen_at_last_check: f64,
    majority_correct: f64,
    nb_correct: f64,
}

impl Leaf {
    fn new(depth: usize, class_weight: Vec<f64>) -> Self {
        Self {
            depth,
            class_weight,
            observers: Vec::new(),
            seen: 0.0,
            seen_at_last_check: 0.0,
            majority_correct: 0.0,
            nb_correct: 0.0,
        }
    }

    fn majority(&self) -> usize {
        if self.class_weight.is_empty() {
            0
        } else {
            argmax_first(&self.class_weight)
        }
    }

    fn naive_bayes(&self, x: &[f64]) -> usize {
        let total: f64 = self.class_weight.iter().sum();
        if total <= 0.0 {
            return 0;
        }
        let scores: Vec<f64> = self
            .class_weight
            .iter()
            .enumerate()
            .map(|(c, &w)| {
                if w <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                let mut s = (w / total).ln();
                for (obs, v) in self.observers.iter().zip(x) {
                    if let Some((est, _, _)) = obs.per_class.get(c) {
                        if est.weight() > 0.0 {
                            s += est.log_pdf(*v);
                        }
                    }
                }
                s
            })
            .collect();
        argmax_first(&scores)
    }

    fn predict(&self, x: &[f64], mode: LeafPrediction) -> usize {
        match mode {
            LeafPrediction::MajorityClass => self.majority(),
            LeafPrediction::NaiveBayes => self.naive_bayes(x),
            LeafPrediction::AdaptiveNaiveBayes => {
                if self.majority_correct > self.nb_correct {
                    self.majority()
                } else {
                    self.naive_bayes(x)
                }
            }
        }
    }

    fn learn(&mut self, x: &[f64], label: usize, w: f64, mode: LeafPrediction) {
        if mode == LeafPrediction::AdaptiveNaiveBayes {
            if self.majority() == label {
                self.majority_correct += w;
            }
            if self.naive_bayes(x) == label {
                self.nb_correct += w;
            }
        }
        if label >= self.class_weight.len() {
            self.class_weight.resize(label + 1, 0.0);
        }
        self.class_weight[label] += w;
        if self.observers.len() < x.len() {
            self.observers.resize_with(x.len(), FeatureObserver::new);
        }
        for (obs, v) in self.observers.iter_mut().zip(x) {
            obs.add(*v, label, w);
        }
        self.seen += w;
    }

    /// Number of classes observed since creation.
    fn observed_classes(&self) -> usize {
        self.observers.first().map_or(0, |o| {
            o.per_class.iter().filter(|c| c.0.weight() > 0.0).count()
        })
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf(Leaf),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
pub struct SplitCandidate {
    pub feature: usize,
    pub threshold: f64,
    pub merit: f64,
    left: Vec<f64>,
    right: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct HoeffdingTree {
    params: HoeffdingParams,
    nodes: Vec<Node>,
}

impl HoeffdingTree {
    pub fn new(params: HoeffdingParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            nodes: vec![Node::Leaf(Leaf::new(0, Vec::new()))],
        })
    }

    pub fn params(&self) -> &HoeffdingParams {
        &self.params
    }

    pub fn split_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Split { .. })).count()
    }

    pub fn depth(&self) -> usize {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Leaf(l) => Some(l.depth),
                Node::Split { .. } => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// `(feature, threshold)` of every internal node, in creation order.
    pub fn splits(&self) -> Vec<(usize, f64)> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Split {
                    feature, threshold, ..
                } => Some((*feature, *threshold)),
                Node::Leaf(_) => None,
            })
            .collect()
    }

    fn leaf_index(&self, x: &[f64]) -> usize {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                Node::Leaf(_) => return idx,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    idx = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    pub fn train_weighted(&mut self, x: &[f64], label: usize, weight: f64) {
        if weight <= 0.0 {
            return;
        }
        let idx = self.leaf_index(x);
        let mode = self.params.leaf_prediction;
        let Node::Leaf(leaf) = &mut self.nodes[idx] else {
            unreachable!()
        };
        leaf.learn(x, label, weight, mode);
        if leaf.depth < self.params.max_depth
            && leaf.seen - leaf.seen_at_last_check >= self.params.grace_period
        {
            leaf.seen_at_last_check = leaf.seen;
            if leaf.observed_classes() > 1 {
                self.attempt_split(idx);
            }
        }
    }

    fn best_candidates(&self, leaf: &Leaf) -> Vec<SplitCandidate> {
        let bins = self.params.bins;
        let mut best = Vec::with_capacity(leaf.observers.len());
        for (feature, obs) in leaf.observers.iter().enumerate() {
            let Some((lo, hi)) = obs.range() else { continue };
            let pre: Vec<f64> = obs.per_class.iter().map(|c| c.0.weight()).collect();
            let mut top: Option<SplitCandidate> = None;
            for i in 1..=bins {
                let threshold = lo + (hi - lo) * i as f64 / (bins + 1) as f64;
                let (left, right) = obs.split_dists(threshold);
                let merit = info_gain(&pre, &[&left, &right], self.params.min_branch_fraction);
                if top.as_ref().is_none_or(|t| merit > t.merit) {
                    top = Some(SplitCandidate {
                        feature,
                        threshold,
                        merit,
                        left,
                        right,
                    });
                }
            }
            best.extend(top);
        }
        best
    }

    /// Best split suggestion per feature at the leaf containing `x`.
    pub fn candidates_at(&self, x: &[f64]) -> Vec<SplitCandidate> {
        match &self.nodes[self.leaf_index(x)] {
            Node::Leaf(leaf) => self.best_candidates(leaf),
            Node::Split { .. } => unreachable!(),
        }
    }

    fn attempt_split(&mut self, idx: usize) {
        let Node::Leaf(leaf) = &self.nodes[idx] else {
            return;
        };
        let mut candidates = self.best_candidates(leaf);
        candidates.sort_by(|a, b| b.merit.total_cmp(&a.merit));
        let Some(best) = candidates.first() else { return };
        // "No split" competes with merit 0.
        let runner_up = candidates.get(1).map_or(0.0, |c| c.merit.max(0.0));
        if !(best.merit > 0.0) {
            return;
        }
        let n_classes = leaf.class_weight.len().max(2) as f64;
        let eps = hoeffding_bound(n_classes.log2(), self.params.split_confidence, leaf.seen);
        if best.merit - runner_up > eps || eps < self.params.tie_threshold {
            let depth = leaf.depth + 1;
            let best = best.clone();
            let left = self.nodes.len();
            self.nodes.push(Node::Leaf(Leaf::new(depth, best.left)));
            self.nodes.push(Node::Leaf(Leaf::new(depth, best.right)));
            self.nodes[idx] = Node::Split {
                feature: best.feature,
                threshold: best.threshold,
                left,
                right: left + 1,
            };
        }
    }
}

impl Classifier for HoeffdingTree {
    fn predict(&self, x: &[f64]) -> usize {
        match &self.nodes[self.leaf_index(x)] {
            Node::Leaf(leaf) => leaf.predict(x, self.params.leaf_prediction),
            Node::Split { .. } => unreachable!(),
        }
    }

    fn train(&mut self, x: &[f64], label: usize) -> Result<()> {
        self.train_weighted(x, label, 1.0);
        Ok(())
    }

    fn reset(&mut self) {
        self.nodes = vec![Node::Leaf(Leaf::new(0, Vec::new()))];
    }
}
