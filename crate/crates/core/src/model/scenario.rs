//! The time-varying mixture of Gaussian mixtures and its ground truth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gaussian::FactorizedGaussian;
use super::timeline::ComponentTimeline;
use crate::error::{Error, Result};

/// `(class index, component index within the class)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentId {
    pub class: usize,
    pub component: usize,
}

#[derive(Debug, Clone)]
pub struct ClassSpec {
    pub name: String,
    pub weight: f64,
    pub components: Vec<ComponentTimeline>,
}

impl ClassSpec {
    pub fn new(name: impl Into<String>, weight: f64, components: Vec<ComponentTimeline>) -> Self {
        Self {
            name: name.into(),
            weight,
            components,
        }
    }

    pub fn is_active(&self, t: usize) -> bool {
        self.components.iter().any(|c| c.is_active(t))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPattern {
    pub t: usize,
    pub x: Vec<f64>,
    pub class_label: String,
    pub class_index: usize,
    pub component_id: ComponentId,
}

/// Active components at one time step with their normalized priors.
#[derive(Debug, Clone)]
pub struct Priors {
    entries: Vec<(ComponentId, f64)>,
}

impl Priors {
    pub fn iter(&self) -> impl Iterator<Item = (ComponentId, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn get(&self, id: ComponentId) -> Option<f64> {
        self.entries.iter().find(|(c, _)| *c == id).map(|(_, p)| *p)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    name: String,
    dimension: usize,
    length: usize,
    classes: Vec<ClassSpec>,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        dimension: usize,
        length: usize,
        classes: Vec<ClassSpec>,
    ) -> Result<Self> {
        let name = name.into();
        if dimension == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if length == 0 {
            return Err(Error::InvalidParameter("length must be at least 1".into()));
        }
        if classes.is_empty() {
            return Err(Error::InvalidParameter("scenario has no classes".into()));
        }
        for (i, class) in classes.iter().enumerate() {
            if class.name.is_empty() {
                return Err(Error::InvalidParameter(format!("classes[{i}].name is empty")));
            }
            if classes[..i].iter().any(|c| c.name == class.name) {
                return Err(Error::InvalidParameter(format!(
                    "classes[{i}].name `{}` is duplicated",
                    class.name
                )));
            }
            if !(class.weight.is_finite() && class.weight >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "classes[{i}].weight = {} must be non-negative",
                    class.weight
                )));
            }
            if class.components.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "classes[{i}] has no components"
                )));
            }
            for (j, comp) in class.components.iter().enumerate() {
                if comp.dim() != dimension {
                    return Err(Error::InvalidParameter(format!(
                        "classes[{i}].components[{j}] has dimension {}, scenario has {dimension}",
                        comp.dim()
                    )));
                }
            }
        }
        let scenario = Self {
            name,
            dimension,
            length,
            classes,
        };
        for t in 0..length {
            if scenario.total_weight(t) <= 0.0 {
                return Err(Error::DegenerateScenario { t });
            }
        }
        Ok(scenario)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn classes(&self) -> &[ClassSpec] {
        &self.classes
    }

    pub fn class_names(&self) -> Vec<&str> {
        self.classes.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn components(&self) -> impl Iterator<Item = (ComponentId, &ComponentTimeline)> {
        self.classes.iter().enumerate().flat_map(|(ci, class)| {
            class.components.iter().enumerate().map(move |(cj, comp)| {
                (
                    ComponentId {
                        class: ci,
                        component: cj,
                    },
                    comp,
                )
            })
        })
    }

    pub fn component(&self, id: ComponentId) -> Option<&ComponentTimeline> {
        self.classes.get(id.class)?.components.get(id.component)
    }

    fn weighted(&self, t: usize) -> impl Iterator<Item = (ComponentId, f64)> + '_ {
        self.components().filter_map(move |(id, comp)| {
            comp.weight_at(t)
                .map(|w| (id, self.classes[id.class].weight * w))
        })
    }

    fn total_weight(&self, t: usize) -> f64 {
        self.weighted(t).map(|(_, w)| w).sum()
    }

    /// Normalized priors `w_i · w_ij / Σ` over the components active at `t`.
    pub fn priors_at(&self, t: usize) -> Result<Priors> {
        let mut entries: Vec<(ComponentId, f64)> = self.weighted(t).collect();
        let total: f64 = entries.iter().map(|(_, w)| w).sum();
        if !(total > 0.0) {
            return Err(Error::DegenerateScenario { t });
        }
        for (_, w) in &mut entries {
            *w /= total;
        }
        Ok(Priors { entries })
    }

    /// Active components with positive prior, factorized for evaluation at `t`.
    pub fn snapshot(&self, t: usize) -> Result<Snapshot> {
        let priors = self.priors_at(t)?;
        let mut parts = Vec::with_capacity(priors.len());
        for (id, prior) in priors.iter() {
            if prior <= 0.0 {
                continue;
            }
            let comp = self.component(id).expect("prior refers to a component");
            let state = comp.params_at(t).expect("prior implies active");
            parts.push(SnapshotPart {
                id,
                prior,
                gaussian: state.params.factorize()?,
            });
        }
        Ok(Snapshot {
            n_classes: self.classes.len(),
            parts,
        })
    }

    pub fn density(&self, t: usize, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.snapshot(t)?.density(x))
    }

    /// `P(class | x, t)` indexed like [`Scenario::classes`].
    pub fn posterior(&self, t: usize, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        self.snapshot(t)?.posterior(x)
    }

    /// Index of the maximum-posterior class; ties go to the lowest index.
    pub fn bayes_classify(&self, t: usize, x: &[f64]) -> Result<usize> {
        self.check_dim(x)?;
        self.snapshot(t)?.classify(x)
    }

    /// Draws one labeled pattern at step `t`.
    pub fn sample<R: Rng + ?Sized>(&self, t: usize, rng: &mut R) -> Result<LabeledPattern> {
        let priors = self.priors_at(t)?;
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = None;
        for (id, p) in priors.iter() {
            if p <= 0.0 {
                continue;
            }
            chosen = Some(id);
            acc += p;
            if u < acc {
                break;
            }
        }
        let id = chosen.ok_or(Error::DegenerateScenario { t })?;
        let state = self
            .component(id)
            .and_then(|c| c.params_at(t))
            .ok_or(Error::DegenerateScenario { t })?;
        let x = state.params.factorize()?.sample(rng);
        Ok(LabeledPattern {
            t,
            x,
            class_label: self.classes[id.class].name.clone(),
            class_index: id.class,
            component_id: id,
        })
    }

    /// The seeded pattern stream for `t = 0 .. length`.
    pub fn stream(&self, seed: u64) -> ScenarioStream<'_> {
        ScenarioStream {
            scenario: self,
            rng: stream_rng(seed),
            t: 0,
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension {
            return Err(Error::InvalidArgument(format!(
                "pattern has dimension {}, scenario has {}",
                x.len(),
                self.dimension
            )));
        }
        Ok(())
    }
}

/// The generator behind every stream: ChaCha8 seeded with `seed_from_u64`,
/// word stream 0. Learners that need randomness use stream 1 of the same seed.
pub fn stream_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn learner_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

#[derive(Debug, Clone)]
struct SnapshotPart {
    id: ComponentId,
    prior: f64,
    gaussian: FactorizedGaussian,
}

/// The mixture frozen at one time step.
#[derive(Debug, Clone)]
pub struct Snapshot {
    n_classes: usize,
    parts: Vec<SnapshotPart>,
}

impl Snapshot {
    pub fn density(&self, x: &[f64]) -> f64 {
        self.parts
            .iter()
            .map(|p| p.prior * p.gaussian.pdf(x))
            .sum()
    }

    /// Per-class posterior computed in log space.
    pub fn posterior(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut class_log = vec![f64::NEG_INFINITY; self.n_classes];
        for p in &self.parts {
            let lw = p.prior.ln() + p.gaussian.log_pdf(x);
            class_log[p.id.class] = log_add(class_log[p.id.class], lw);
        }
        let max = class_log.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Err(Error::NumericalDegeneracy(
                "mixture density vanishes at the query point".into(),
            ));
        }
        let mut post: Vec<f64> = class_log.iter().map(|l| (l - max).exp()).collect();
        let total: f64 = post.iter().sum();
        for v in &mut post {
            *v /= total;
        }
        Ok(post)
    }

    pub fn classify(&self, x: &[f64]) -> Result<usize> {
        let post = self.posterior(x)?;
        Ok(argmax_first(&post))
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Index of the largest value, lowest index on ties.
pub(crate) fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Single-pass iterator over a scenario's patterns.
pub struct ScenarioStream<'a> {
    scenario: &'a Scenario,
    rng: ChaCha8Rng,
    t: usize,
}

impl ScenarioStream<'_> {
    pub fn scenario(&self) -> &Scenario {
        self.scenario
    }
}

impl Iterator for ScenarioStream<'_> {
    type Item = LabeledPattern;

    fn next(&mut self) -> Option<LabeledPattern> {
        if self.t >= self.scenario.length {
            return None;
        }
        let pattern = self
            .scenario
            .sample(self.t, &mut self.rng)
            .expect("scenario validated at construction");
        self.t += 1;
        Some(pattern)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.scenario.length - self.t;
        (left, Some(left))
    }
}

impl ExactSizeIterator for ScenarioStream<'_> {}
