//! TOML scenario files.
//!
//! ```toml
//! name = "NSLC"
//! dimension = 2
//! length = 10001
//!
//! [[classes]]
//! name = "A"
//! weight = 1.0
//!
//! [[classes.components]]
//! start = 0
//! weight = 1.0
//! center = [-2.0, 2.0]
//! stddev = [1.5811388300841898, 1.0]
//! rotation_deg = 45.0            # or [[0, 1, 45.0], [1, 2, 10.0]]
//!
//! [[classes.components.phases]]
//! duration = 9999
//! rmoveto = [0.0, -4.0]
//! # rotate_deg, scale, wchangeto, orbit = { pivot = [0.0, 0.0], angle_deg = 360.0 }
//! ```
//!
//! A bare angle means a rotation in the (0, 1) plane.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::write_atomic;
use crate::model::{ClassSpec, ComponentTimeline, Orbit, PlanarRotation, Scenario, TransformPhase};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub dimension: usize,
    pub length: usize,
    pub classes: Vec<ClassFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassFile {
    pub name: String,
    #[serde(default = "one")]
    pub weight: f64,
    pub components: Vec<ComponentFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentFile {
    #[serde(default)]
    pub start: usize,
    #[serde(default = "one")]
    pub weight: f64,
    pub center: Vec<f64>,
    pub stddev: Vec<f64>,
    #[serde(default, skip_serializing_if = "RotationField::is_none")]
    pub rotation_deg: RotationField,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub phases: Vec<PhaseFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseFile {
    pub duration: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rmoveto: Vec<f64>,
    #[serde(default, skip_serializing_if = "RotationField::is_none")]
    pub rotate_deg: RotationField,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wchangeto: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<OrbitFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitFile {
    pub pivot: Vec<f64>,
    pub angle_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RotationField {
    Angle(f64),
    Planes(Vec<(usize, usize, f64)>),
}

impl Default for RotationField {
    fn default() -> Self {
        RotationField::Planes(Vec::new())
    }
}

impl RotationField {
    fn is_none(&self) -> bool {
        matches!(self, RotationField::Planes(p) if p.is_empty())
    }

    fn to_rotations(&self) -> Vec<PlanarRotation> {
        match self {
            RotationField::Angle(a) => vec![PlanarRotation::xy(*a)],
            RotationField::Planes(p) => p
                .iter()
                .map(|&(a, b, deg)| PlanarRotation::new(a, b, deg))
                .collect(),
        }
    }

    fn from_rotations(rots: &[PlanarRotation]) -> Self {
        match rots {
            [r] if r.axis_a == 0 && r.axis_b == 1 => RotationField::Angle(r.angle_deg),
            _ => RotationField::Planes(
                rots.iter().map(|r| (r.axis_a, r.axis_b, r.angle_deg)).collect(),
            ),
        }
    }
}

fn one() -> f64 {
    1.0
}

fn is_one(v: &f64) -> bool {
    *v == 1.0
}

impl ScenarioFile {
    pub fn from_scenario(s: &Scenario) -> Self {
        let classes = s
            .classes()
            .iter()
            .map(|class| ClassFile {
                name: class.name.clone(),
                weight: class.weight,
                components: class.components.iter().map(component_file).collect(),
            })
            .collect();
        Self {
            name: s.name().to_string(),
            dimension: s.dimension(),
            length: s.length(),
            classes,
        }
    }

    pub fn to_scenario(&self) -> Result<Scenario> {
        let mut classes = Vec::with_capacity(self.classes.len());
        for (i, class) in self.classes.iter().enumerate() {
            let mut components = Vec::with_capacity(class.components.len());
            for (j, comp) in class.components.iter().enumerate() {
                let path = format!("classes[{i}].components[{j}]");
                if comp.center.len() != self.dimension {
                    return Err(Error::InvalidParameter(format!(
                        "{path}.center has {} entries, dimension is {}",
                        comp.center.len(),
                        self.dimension
                    )));
                }
                let phases = comp.phases.iter().map(phase_from_file).collect();
                let timeline = ComponentTimeline::new(
                    comp.start,
                    comp.weight,
                    comp.center.clone(),
                    comp.stddev.clone(),
                    comp.rotation_deg.to_rotations(),
                    phases,
                )
                .map_err(|e| Error::InvalidParameter(format!("{path}: {e}")))?;
                components.push(timeline);
            }
            classes.push(ClassSpec::new(class.name.clone(), class.weight, components));
        }
        Scenario::new(self.name.clone(), self.dimension, self.length, classes)
    }
}

fn component_file(c: &ComponentTimeline) -> ComponentFile {
    ComponentFile {
        start: c.start_index(),
        weight: c.base_weight(),
        center: c.center().to_vec(),
        stddev: c.stddev().to_vec(),
        rotation_deg: RotationField::from_rotations(c.rotation()),
        phases: c.phases().iter().map(phase_file).collect(),
    }
}

fn phase_file(p: &TransformPhase) -> PhaseFile {
    PhaseFile {
        duration: p.duration,
        rmoveto: p.translation.clone(),
        rotate_deg: RotationField::from_rotations(&p.rotation),
        scale: p.scale,
        wchangeto: p.weight_target,
        orbit: p.orbit.as_ref().map(|o| OrbitFile {
            pivot: o.pivot.clone(),
            angle_deg: o.angle_deg,
        }),
    }
}

fn phase_from_file(p: &PhaseFile) -> TransformPhase {
    TransformPhase {
        duration: p.duration,
        translation: p.rmoveto.clone(),
        rotation: p.rotate_deg.to_rotations(),
        scale: p.scale,
        weight_target: p.wchangeto,
        orbit: p.orbit.as_ref().map(|o| Orbit {
            pivot: o.pivot.clone(),
            angle_deg: o.angle_deg,
        }),
    }
}

pub fn to_toml(s: &Scenario) -> String {
    toml::to_string(&ScenarioFile::from_scenario(s))
        .expect("scenario files always serialize")
}

/// Parses scenario text; `origin` names the source in diagnostics.
pub fn from_toml(text: &str, origin: &str) -> Result<Scenario> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_string(),
        message: e.to_string(),
    })?;
    file.to_scenario().map_err(|e| match e {
        Error::InvalidParameter(msg) => Error::InvalidParameter(format!("{origin}: {msg}")),
        other => other,
    })
}

pub fn load(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_toml(&text, &path.display().to_string())
}

pub fn save(s: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), to_toml(s).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_CLASS: &str = r#"
name = "solo"
dimension = 2
length = 20

[[classes]]
name = "only"

[[classes.components]]
center = [1.0, 2.0]
stddev = [1.0, 0.5]
"#;

    #[test]
    fn hand_written_single_class_file() {
        let s = from_toml(ONE_CLASS, "solo.toml").unwrap();
        assert_eq!(s.length(), 20);
        for t in [0, 7, 19] {
            let p = s.priors_at(t).unwrap();
            assert_eq!(p.len(), 1);
            assert_eq!(p.sum(), 1.0);
        }
    }

    #[test]
    fn missing_dimension_names_the_field() {
        let text = ONE_CLASS.replace("dimension = 2\n", "");
        let err = from_toml(&text, "bad.toml").unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::Parse { .. }));
        assert!(msg.contains("dimension"), "{msg}");
        assert!(msg.contains("bad.toml"), "{msg}");
    }

    #[test]
    fn unknown_key_is_reported_with_line() {
        let text = ONE_CLASS.replace("stddev = [1.0, 0.5]", "stddev = [1.0, 0.5]\nsigma = 3");
        let msg = from_toml(&text, "x.toml").unwrap_err().to_string();
        assert!(msg.contains("sigma"), "{msg}");
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn invariant_violation_carries_component_path() {
        let text = ONE_CLASS.replace("stddev = [1.0, 0.5]", "stddev = [1.0, -0.5]");
        let msg = from_toml(&text, "x.toml").unwrap_err().to_string();
        assert!(msg.contains("classes[0].components[0]"), "{msg}");
    }

    #[test]
    fn rotation_forms() {
        let text = ONE_CLASS.replace(
            "stddev = [1.0, 0.5]",
            "stddev = [1.0, 0.5]\nrotation_deg = [[1, 0, 30]]",
        );
        let s = from_toml(&text, "x.toml").unwrap();
        let rot = s.classes()[0].components[0].rotation()[0];
        assert_eq!((rot.axis_a, rot.axis_b, rot.angle_deg), (1, 0, 30.0));
        let text = ONE_CLASS.replace("stddev = [1.0, 0.5]", "stddev = [1.0, 0.5]\nrotation_deg = 45");
        let s = from_toml(&text, "x.toml").unwrap();
        assert_eq!(s.classes()[0].components[0].rotation(), &[PlanarRotation::xy(45.0)]);
    }
}
