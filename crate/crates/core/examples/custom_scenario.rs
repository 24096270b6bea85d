//! Builds a three-class scenario in code, saves it as a scenario file and
//! reloads it. The same file works with `driftbench generate --scenario`.
//!
//! cargo run --example custom_scenario -- [out.toml]

use driftbench::config;
use driftbench::model::{ClassSpec, ComponentTimeline, PlanarRotation, Scenario, TransformPhase};

fn main() -> driftbench::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("three_classes.toml"));

    // A drifts right, B holds still, C appears at t=1000 and grows heavier.
    let a = ComponentTimeline::new(
        0,
        1.0,
        vec![-3.0, 0.0],
        vec![1.0, 0.5],
        vec![PlanarRotation::xy(30.0)],
        vec![TransformPhase::translate(1999, &[6.0, 0.0]).with_rotation(PlanarRotation::xy(60.0))],
    )?;
    let b = ComponentTimeline::stationary(0, 1.0, vec![0.0, 3.0], vec![0.8, 0.8], Vec::new())?;
    let c = ComponentTimeline::new(
        1000,
        0.2,
        vec![0.0, -3.0],
        vec![0.7, 0.7],
        Vec::new(),
        vec![TransformPhase::hold(999).with_weight_target(1.0)],
    )?;
    let scenario = Scenario::new(
        "three_classes",
        2,
        2001,
        vec![
            ClassSpec::new("A", 1.0, vec![a]),
            ClassSpec::new("B", 1.0, vec![b]),
            ClassSpec::new("C", 1.0, vec![c]),
        ],
    )?;

    config::save(&scenario, &out)?;
    let loaded = config::load(&out)?;
    assert!(loaded.stream(5).eq(scenario.stream(5)));
    println!("saved {}:\n{}", out.display(), config::to_toml(&loaded));

    let mut counts = [0usize; 3];
    for p in loaded.stream(5) {
        counts[p.class_index] += 1;
    }
    println!("class counts over {} patterns: {counts:?}", loaded.length());
    Ok(())
}
