//! Runs every canonical scenario against every reference learner and prints
//! the results table with significance groups.
//!
//! cargo run --release --example full_benchmark -- [seeds]

use std::sync::Arc;
use std::time::Instant;

use driftbench::catalog;
use driftbench::evaluation::{export, run_experiment, significance_groups, ExperimentConfig};
use driftbench::learners::presets;

fn main() -> driftbench::Result<()> {
    let seeds: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let scenarios: Vec<_> = catalog::all().into_iter().map(|e| Arc::new(e.scenario)).collect();
    let config = ExperimentConfig::new(presets(), seeds);
    let start = Instant::now();
    let out = run_experiment(&scenarios, &config)?;
    eprintln!("{} runs in {:.1?}", out.traces.len(), start.elapsed());
    for f in &out.failures {
        eprintln!("failed: {}", f.error);
    }
    let groups = if seeds >= 2 {
        Some(significance_groups(&out.result, config.alpha, config.wilcoxon)?)
    } else {
        None
    };
    print!("{}", export::results_text(&out.result, groups.as_deref()));
    Ok(())
}
