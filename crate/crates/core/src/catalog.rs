//! The nine canonical drift scenarios.
//!
//! Spread values below are per-axis variances of the unrotated component;
//! [`ComponentTimeline`] takes standard deviations, so they pass through
//! [`f64::sqrt`]. Every scenario has 10001 steps (`t = 0..=10000`).

use crate::error::{Error, Result};
use crate::model::{ClassSpec, ComponentTimeline, PlanarRotation, Scenario, TransformPhase};

pub const CANONICAL_LENGTH: usize = 10_001;

pub const NAMES: [&str; 9] = [
    "NSGT", "NSGT-F", "NSGR", "NSLC", "NSGT-I", "NSPC", "NSPC-A", "NSGT-5D", "NSCX",
];

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub scenario: Scenario,
    /// Reference Bayes-optimal final prequential error, in percent.
    /// Metadata for verification only.
    pub optimal_error_pct: f64,
}

pub fn build(name: &str) -> Result<CatalogEntry> {
    let canonical = NAMES
        .iter()
        .find(|n| n.eq_ignore_ascii_case(name))
        .copied()
        .ok_or_else(|| {
            Error::NotFound(format!(
                "scenario `{name}` is neither a canonical name ({}) nor a file",
                NAMES.join(", ")
            ))
        })?;
    let (scenario, optimal_error_pct) = match canonical {
        "NSGT" => (global_translation(canonical, 10.0)?, 2.95),
        "NSGT-F" => (global_translation(canonical, 30.0)?, 2.91),
        "NSGR" => (nsgr()?, 0.00),
        "NSLC" => (nslc()?, 4.05),
        "NSGT-I" => (nsgt_i()?, 2.93),
        "NSPC" => (nspc()?, 5.76),
        "NSPC-A" => (nspc_a()?, 5.37),
        "NSGT-5D" => (nsgt_5d()?, 5.74),
        "NSCX" => (nscx()?, 4.18),
        _ => unreachable!(),
    };
    Ok(CatalogEntry {
        name: canonical,
        scenario,
        optimal_error_pct,
    })
}

pub fn all() -> Vec<CatalogEntry> {
    NAMES
        .iter()
        .map(|n| build(n).expect("canonical scenario"))
        .collect()
}

fn sd(variances: &[f64]) -> Vec<f64> {
    variances.iter().map(|v| v.sqrt()).collect()
}

fn rot(deg: f64) -> Vec<PlanarRotation> {
    if deg == 0.0 {
        Vec::new()
    } else {
        vec![PlanarRotation::xy(deg)]
    }
}

fn component(
    weight: f64,
    center: &[f64],
    variances: &[f64],
    rotation_deg: f64,
    phases: Vec<TransformPhase>,
) -> Result<ComponentTimeline> {
    ComponentTimeline::new(0, weight, center.to_vec(), sd(variances), rot(rotation_deg), phases)
}

fn two_classes(name: &str, dim: usize, a: ComponentTimeline, b: ComponentTimeline) -> Result<Scenario> {
    Scenario::new(
        name,
        dim,
        CANONICAL_LENGTH,
        vec![ClassSpec::new("A", 1.0, vec![a]), ClassSpec::new("B", 1.0, vec![b])],
    )
}

fn global_translation(name: &str, shift: f64) -> Result<Scenario> {
    let phases = || vec![TransformPhase::translate(9999, &[shift, shift])];
    two_classes(
        name,
        2,
        component(1.0, &[0.0, 0.0], &[2.5, 1.0], 45.0, phases())?,
        component(1.0, &[5.0, 0.0], &[2.5, 1.0], -45.0, phases())?,
    )
}

fn nsgr() -> Result<Scenario> {
    let phases = || vec![TransformPhase::hold(9999).with_orbit(&[0.0, 0.0], 360.0)];
    two_classes(
        "NSGR",
        2,
        component(1.0, &[10.0, 0.0], &[2.0, 5.0], 45.0, phases())?,
        component(1.0, &[-10.0, 0.0], &[2.0, 5.0], 45.0, phases())?,
    )
}

fn nslc() -> Result<Scenario> {
    two_classes(
        "NSLC",
        2,
        component(1.0, &[-2.0, 2.0], &[2.5, 1.0], 45.0, vec![TransformPhase::translate(9999, &[0.0, -4.0])])?,
        component(1.0, &[2.0, -2.0], &[2.5, 1.0], -45.0, vec![TransformPhase::translate(9999, &[0.0, 4.0])])?,
    )
}

fn nsgt_i() -> Result<Scenario> {
    // Drift for 5000 steps, snap back at step 5000, drift again.
    let phases = || {
        vec![
            TransformPhase::translate(4999, &[10.0, 10.0]),
            TransformPhase::translate(0, &[-10.0, -10.0]),
            TransformPhase::translate(4999, &[10.0, 10.0]),
        ]
    };
    two_classes(
        "NSGT-I",
        2,
        component(1.0, &[0.0, 0.0], &[2.5, 1.0], 45.0, phases())?,
        component(1.0, &[5.0, 0.0], &[2.5, 1.0], -45.0, phases())?,
    )
}

fn prior_change(name: &str, a1: (f64, f64), a2: (f64, f64), ramp: (usize, usize)) -> Result<Scenario> {
    let (hold, duration) = ramp;
    let phases = |target: f64| {
        vec![
            TransformPhase::hold(hold),
            TransformPhase::hold(duration).with_weight_target(target),
        ]
    };
    let a = ClassSpec::new(
        "A",
        1.0,
        vec![
            component(a1.0, &[-2.0, 0.0], &[2.5, 1.0], 45.0, phases(a1.1))?,
            component(a2.0, &[2.0, 0.0], &[2.5, 1.0], -45.0, phases(a2.1))?,
        ],
    );
    let b = ClassSpec::new("B", 1.0, vec![component(0.5, &[0.0, 3.5], &[1.0, 1.0], 0.0, vec![])?]);
    Scenario::new(name, 2, CANONICAL_LENGTH, vec![a, b])
}

fn nspc() -> Result<Scenario> {
    // Hold over 0..=499, then ramp over 500..=9499.
    prior_change("NSPC", (0.05, 0.45), (0.45, 0.05), (499, 8999))
}

fn nspc_a() -> Result<Scenario> {
    // Hold over 0..=4999, swap instantly at 5000.
    prior_change("NSPC-A", (0.0, 0.5), (0.5, 0.0), (4999, 0))
}

fn nsgt_5d() -> Result<Scenario> {
    let phases = || vec![TransformPhase::translate(9999, &[6.3; 5])];
    Scenario::new(
        "NSGT-5D",
        5,
        CANONICAL_LENGTH,
        vec![
            ClassSpec::new("A", 0.5, vec![component(1.0, &[0.0; 5], &[1.0; 5], 0.0, phases())?]),
            ClassSpec::new(
                "B",
                0.5,
                vec![component(1.0, &[3.15, 0.0, 0.0, 0.0, 0.0], &[1.0; 5], 0.0, phases())?],
            ),
        ],
    )
}

fn nscx() -> Result<Scenario> {
    let a1 = component(
        0.65,
        &[0.0, 0.0],
        &[2.5, 1.0],
        30.0,
        vec![
            TransformPhase::translate(4999, &[5.0, 5.0])
                .with_rotation(PlanarRotation::xy(90.0))
                .with_scale(2.0),
            TransformPhase::translate(4999, &[5.0, 5.0]).with_weight_target(1.0),
        ],
    )?;
    let a2 = component(0.35, &[0.0, -4.0], &[0.6, 2.0], 0.0, vec![])?;
    // Boundaries 0..=499, 500..=1999, 2000..=4499, 4500..=9999.
    let b = component(
        0.0,
        &[-2.0, 3.0],
        &[1.5, 0.5],
        0.0,
        vec![
            TransformPhase::hold(499).with_weight_target(0.2),
            TransformPhase::translate(1499, &[3.0, -4.0])
                .with_rotation(PlanarRotation::xy(30.0))
                .with_weight_target(0.5),
            TransformPhase::translate(2499, &[4.0, -1.0])
                .with_rotation(PlanarRotation::xy(30.0))
                .with_weight_target(0.8),
            TransformPhase::translate(5499, &[6.0, 5.0])
                .with_rotation(PlanarRotation::xy(30.0))
                .with_weight_target(1.0),
        ],
    )?;
    Scenario::new(
        "NSCX",
        2,
        CANONICAL_LENGTH,
        vec![ClassSpec::new("A", 1.0, vec![a1, a2]), ClassSpec::new("B", 1.0, vec![b])],
    )
}

/// Resolves a canonical name or a path to a scenario file.
pub fn resolve(name_or_path: &str) -> Result<Scenario> {
    match build(name_or_path) {
        Ok(entry) => Ok(entry.scenario),
        Err(Error::NotFound(_)) if std::path::Path::new(name_or_path).is_file() => {
            crate::config::load(name_or_path)
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn every_entry_has_canonical_shape() {
        for entry in all() {
            assert_eq!(entry.scenario.length(), CANONICAL_LENGTH);
            let want = if entry.name == "NSGT-5D" { 5 } else { 2 };
            assert_eq!(entry.scenario.dimension(), want, "{}", entry.name);
            assert_eq!(entry.scenario.name(), entry.name);
        }
    }

    #[test]
    fn reference_optimal_errors() {
        assert_eq!(build("NSGT").unwrap().optimal_error_pct, 2.95);
        assert_eq!(build("NSGR").unwrap().optimal_error_pct, 0.00);
        assert_eq!(build("nsgt-5d").unwrap().scenario.dimension(), 5);
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(build("SEA"), Err(Error::NotFound(_))));
    }

    #[test]
    fn nsgt_translation_endpoints() {
        let s = build("NSGT").unwrap().scenario;
        let a = &s.classes()[0].components[0];
        let start = a.params_at(0).unwrap();
        assert_eq!(start.params.center.as_slice(), &[0.0, 0.0]);
        assert_eq!(start.weight, 1.0);
        let end = a.params_at(9999).unwrap();
        assert_abs_diff_eq!(end.params.center[0], 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(end.params.center[1], 10.0, epsilon = 1e-12);
        assert_eq!(a.params_at(10_000).unwrap(), end);
    }

    #[test]
    fn nspc_priors() {
        let s = build("NSPC").unwrap().scenario;
        let p: Vec<f64> = s.priors_at(0).unwrap().iter().map(|(_, w)| w).collect();
        for (got, want) in p.iter().zip([0.05, 0.45, 0.50]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        // Ramp spans 500..=9499; step 5000 sits at 4500/8999 of it.
        let p: Vec<f64> = s.priors_at(5000).unwrap().iter().map(|(_, w)| w).collect();
        let f = 4500.0 / 8999.0;
        assert_abs_diff_eq!(p[0], 0.05 + 0.4 * f, epsilon = 1e-12);
        assert_abs_diff_eq!(p[0], 0.25, epsilon = 1e-3);
        assert_abs_diff_eq!(p[1], 0.25, epsilon = 1e-3);
        assert_abs_diff_eq!(p[2], 0.50, epsilon = 1e-12);
        let p: Vec<f64> = s.priors_at(10_000).unwrap().iter().map(|(_, w)| w).collect();
        assert_abs_diff_eq!(p[0], 0.45, epsilon = 1e-12);
    }

    #[test]
    fn nspc_a_swaps_at_5000() {
        let s = build("NSPC-A").unwrap().scenario;
        let at = |t| -> Vec<f64> { s.priors_at(t).unwrap().iter().map(|(_, w)| w).collect() };
        assert_eq!(at(4999), vec![0.0, 0.5, 0.5]);
        assert_eq!(at(5000), vec![0.5, 0.0, 0.5]);
    }

    #[test]
    fn nsgt_i_resets_at_5000() {
        let s = build("NSGT-I").unwrap().scenario;
        let b = &s.classes()[1].components[0];
        let c = |t| b.params_at(t).unwrap().params.center;
        assert_abs_diff_eq!(c(4999)[0], 15.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c(5000)[0], 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c(5001)[0], 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c(10_000)[0], 15.0, epsilon = 1e-12);
    }

    #[test]
    fn nscx_b_enters_gradually() {
        let s = build("NSCX").unwrap().scenario;
        let p = s.priors_at(0).unwrap();
        assert_eq!(p.iter().last().unwrap().1, 0.0);
        let b = &s.classes()[1].components[0];
        assert_eq!(b.cascade_end(), 9999);
        assert_abs_diff_eq!(b.weight_at(499).unwrap(), 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(b.weight_at(4499).unwrap(), 0.8, epsilon = 1e-12);
        let end = b.params_at(10_000).unwrap();
        assert_abs_diff_eq!(end.params.center[0], 11.0, epsilon = 1e-9);
        assert_abs_diff_eq!(end.params.center[1], 3.0, epsilon = 1e-9);
    }

    #[test]
    fn nsgr_orbits_once() {
        let s = build("NSGR").unwrap().scenario;
        let a = &s.classes()[0].components[0];
        let half = a.params_at(4999).unwrap().params.center;
        let f = 4999.0 / 9999.0 * std::f64::consts::TAU;
        assert_abs_diff_eq!(half[0], 10.0 * f.cos(), epsilon = 1e-9);
        let end = a.params_at(9999).unwrap().params.center;
        assert_abs_diff_eq!(end[0], 10.0, epsilon = 1e-9);
        assert_abs_diff_eq!(end[1], 0.0, epsilon = 1e-9);
    }
}
