//! Timed similarity transforms applied to a single Gaussian component.
//!
//! A phase with `duration = D` starting at step `s` interpolates its transform
//! linearly over steps `s..=s + D`: the elapsed fraction is `(t - s) / D`, so the
//! full transform is in effect at `s + D`. The next phase starts at `s + D + 1`
//! from that end state. `D = 0` is an instantaneous transform occupying a single
//! step. After the last phase the component keeps its final parameters.

use nalgebra::DVector;

use super::gaussian::{covariance_from, rotation_matrix, symmetrize, GaussianParams, PlanarRotation};
use crate::error::{Error, Result};

/// Rigid rotation of center and covariance about a pivot in the (0, 1) plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub pivot: Vec<f64>,
    pub angle_deg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformPhase {
    pub duration: usize,
    /// Total displacement over the phase; empty means none.
    pub translation: Vec<f64>,
    pub rotation: Vec<PlanarRotation>,
    /// Variance multiplier reached at the end of the phase.
    pub scale: f64,
    pub weight_target: Option<f64>,
    pub orbit: Option<Orbit>,
}

impl TransformPhase {
    /// An identity transform held for `duration` steps.
    pub fn hold(duration: usize) -> Self {
        Self {
            duration,
            translation: Vec::new(),
            rotation: Vec::new(),
            scale: 1.0,
            weight_target: None,
            orbit: None,
        }
    }

    pub fn translate(duration: usize, by: &[f64]) -> Self {
        Self {
            translation: by.to_vec(),
            ..Self::hold(duration)
        }
    }

    pub fn with_rotation(mut self, rot: PlanarRotation) -> Self {
        self.rotation.push(rot);
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_weight_target(mut self, w: f64) -> Self {
        self.weight_target = Some(w);
        self
    }

    pub fn with_orbit(mut self, pivot: &[f64], angle_deg: f64) -> Self {
        self.orbit = Some(Orbit {
            pivot: pivot.to_vec(),
            angle_deg,
        });
        self
    }

    pub fn is_identity(&self) -> bool {
        self.translation.iter().all(|v| *v == 0.0)
            && self.rotation.iter().all(|r| r.angle_deg == 0.0)
            && self.scale == 1.0
            && self.weight_target.is_none()
            && self.orbit.as_ref().is_none_or(|o| o.angle_deg == 0.0)
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if !self.translation.is_empty() && self.translation.len() != dim {
            return Err(Error::InvalidParameter(format!(
                "rmoveto has {} entries, expected {dim}",
                self.translation.len()
            )));
        }
        if self.translation.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("rmoveto is not finite".into()));
        }
        for rot in &self.rotation {
            rot.validate(dim)?;
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scale = {} must be positive",
                self.scale
            )));
        }
        if let Some(w) = self.weight_target {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "wchangeto = {w} must be non-negative"
                )));
            }
        }
        if let Some(orbit) = &self.orbit {
            if dim < 2 {
                return Err(Error::InvalidParameter("orbit needs dimension >= 2".into()));
            }
            if orbit.pivot.len() != dim {
                return Err(Error::InvalidParameter(format!(
                    "orbit pivot has {} entries, expected {dim}",
                    orbit.pivot.len()
                )));
            }
            if !orbit.angle_deg.is_finite() {
                return Err(Error::InvalidParameter("orbit angle is not finite".into()));
            }
        }
        Ok(())
    }

    /// Applies `fraction` of this transform to `state`.
    fn apply(&self, state: &ComponentState, fraction: f64) -> ComponentState {
        let dim = state.params.dim();
        let mut center = state.params.center.clone();
        let mut cov = state.params.covariance.clone();
        if !self.translation.is_empty() {
            center += DVector::from_column_slice(&self.translation) * fraction;
        }
        if let Some(orbit) = &self.orbit {
            let r = PlanarRotation::xy(orbit.angle_deg).matrix(dim, fraction);
            let pivot = DVector::from_column_slice(&orbit.pivot);
            center = &pivot + &r * (center - &pivot);
            cov = &r * cov * r.transpose();
        }
        if !self.rotation.is_empty() {
            let r = rotation_matrix(dim, &self.rotation, fraction);
            cov = &r * cov * r.transpose();
        }
        cov = symmetrize(cov) * (1.0 + fraction * (self.scale - 1.0));
        ComponentState {
            params: GaussianParams {
                center,
                covariance: cov,
            },
            weight: self.weight_after(state.weight, fraction),
        }
    }

    fn weight_after(&self, weight: f64, fraction: f64) -> f64 {
        match self.weight_target {
            Some(target) => weight + fraction * (target - weight),
            None => weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentState {
    pub params: GaussianParams,
    pub weight: f64,
}

/// Where `t` falls within a component's cascade.
enum Position<'a> {
    Inactive,
    InPhase {
        anchor: &'a ComponentState,
        phase: &'a TransformPhase,
        fraction: f64,
    },
    Settled(&'a ComponentState),
}

/// One Gaussian component together with its cascade of timed transforms.
#[derive(Debug, Clone)]
pub struct ComponentTimeline {
    start_index: usize,
    base_weight: f64,
    stddev: Vec<f64>,
    rotation: Vec<PlanarRotation>,
    phases: Vec<TransformPhase>,
    /// Start step and state at the beginning of each phase.
    anchors: Vec<(usize, ComponentState)>,
    settled: ComponentState,
}

impl ComponentTimeline {
    pub fn new(
        start_index: usize,
        base_weight: f64,
        center: Vec<f64>,
        stddev: Vec<f64>,
        rotation: Vec<PlanarRotation>,
        phases: Vec<TransformPhase>,
    ) -> Result<Self> {
        let dim = center.len();
        if stddev.len() != dim {
            return Err(Error::InvalidParameter(format!(
                "stddev has {} entries but center has {dim}",
                stddev.len()
            )));
        }
        if !(base_weight.is_finite() && base_weight >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "weight = {base_weight} must be non-negative"
            )));
        }
        if center.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("center is not finite".into()));
        }
        for (k, phase) in phases.iter().enumerate() {
            phase
                .validate(dim)
                .map_err(|e| Error::InvalidParameter(format!("phases[{k}]: {e}")))?;
        }
        let covariance = covariance_from(&stddev, &rotation)?;
        let base = GaussianParams::new(DVector::from_vec(center), covariance)?;

        let mut state = ComponentState {
            params: base,
            weight: base_weight,
        };
        let mut anchors = Vec::with_capacity(phases.len());
        let mut step = start_index;
        for phase in &phases {
            anchors.push((step, state.clone()));
            state = phase.apply(&state, 1.0);
            step += phase.duration + 1;
        }
        Ok(Self {
            start_index,
            base_weight,
            stddev,
            rotation,
            phases,
            anchors,
            settled: state,
        })
    }

    /// A component that never changes.
    pub fn stationary(
        start_index: usize,
        weight: f64,
        center: Vec<f64>,
        stddev: Vec<f64>,
        rotation: Vec<PlanarRotation>,
    ) -> Result<Self> {
        Self::new(start_index, weight, center, stddev, rotation, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.stddev.len()
    }

    pub fn start_index(&self) -> usize {
        self.start_index
    }

    pub fn base_weight(&self) -> f64 {
        self.base_weight
    }

    pub fn base(&self) -> &GaussianParams {
        self.anchors
            .first()
            .map(|(_, s)| &s.params)
            .unwrap_or(&self.settled.params)
    }

    pub fn center(&self) -> &[f64] {
        self.base().center.as_slice()
    }

    pub fn stddev(&self) -> &[f64] {
        &self.stddev
    }

    pub fn rotation(&self) -> &[PlanarRotation] {
        &self.rotation
    }

    pub fn phases(&self) -> &[TransformPhase] {
        &self.phases
    }

    /// First step of each phase.
    pub fn phase_starts(&self) -> impl Iterator<Item = usize> + '_ {
        self.anchors.iter().map(|(s, _)| *s)
    }

    /// Step after which the cascade has completed.
    pub fn cascade_end(&self) -> usize {
        self.anchors
            .last()
            .map(|(s, _)| s + self.phases.last().map_or(0, |p| p.duration))
            .unwrap_or(self.start_index)
    }

    pub fn is_active(&self, t: usize) -> bool {
        t >= self.start_index
    }

    fn locate(&self, t: usize) -> Position<'_> {
        if t < self.start_index {
            return Position::Inactive;
        }
        // Phases are few; `partition_point` keeps this O(log k).
        let idx = self.anchors.partition_point(|(s, _)| *s <= t);
        if idx == 0 {
            return Position::Settled(&self.settled);
        }
        let (start, anchor) = &self.anchors[idx - 1];
        let phase = &self.phases[idx - 1];
        let elapsed = t - start;
        if elapsed > phase.duration {
            // Only possible past the final phase.
            return Position::Settled(&self.settled);
        }
        let fraction = if phase.duration == 0 {
            1.0
        } else {
            elapsed as f64 / phase.duration as f64
        };
        Position::InPhase {
            anchor,
            phase,
            fraction,
        }
    }

    /// Gaussian parameters and weight at step `t`, or `None` before the start.
    pub fn params_at(&self, t: usize) -> Option<ComponentState> {
        match self.locate(t) {
            Position::Inactive => None,
            Position::Settled(state) => Some(state.clone()),
            Position::InPhase {
                anchor,
                phase,
                fraction,
            } => Some(phase.apply(anchor, fraction)),
        }
    }

    /// Weight at step `t` without building the Gaussian.
    pub fn weight_at(&self, t: usize) -> Option<f64> {
        match self.locate(t) {
            Position::Inactive => None,
            Position::Settled(state) => Some(state.weight),
            Position::InPhase {
                anchor,
                phase,
                fraction,
            } => Some(phase.weight_after(anchor.weight, fraction)),
        }
    }

    /// State reached by fully applying phase `k` (its end state).
    pub fn phase_end_state(&self, k: usize) -> Option<ComponentState> {
        let (_, anchor) = self.anchors.get(k)?;
        Some(self.phases[k].apply(anchor, 1.0))
    }

    /// State at the start of phase `k` (fraction 0).
    pub fn phase_start_state(&self, k: usize) -> Option<&ComponentState> {
        self.anchors.get(k).map(|(_, s)| s)
    }
}
