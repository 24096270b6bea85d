//! Drifting mixture-of-Gaussian-mixtures data model.

mod gaussian;
mod scenario;
mod timeline;

pub use gaussian::{
    covariance_from, rotation_matrix, FactorizedGaussian, GaussianParams, PlanarRotation,
    VARIANCE_FLOOR,
};
pub use scenario::{
    learner_rng, stream_rng, ClassSpec, ComponentId, LabeledPattern, Priors, Scenario,
    ScenarioStream, Snapshot,
};
pub use timeline::{ComponentState, ComponentTimeline, Orbit, TransformPhase};

pub(crate) use scenario::argmax_first;
