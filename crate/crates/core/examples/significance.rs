//! Ten-seed comparison on two scenarios followed by the exact paired
//! Wilcoxon tests and the groups of learners tied with the best.
//!
//! cargo run --release --example significance

use std::sync::Arc;

use driftbench::catalog;
use driftbench::evaluation::{
    pairwise_tests, run_experiment, significance_groups, wilcoxon_signed_rank, ExperimentConfig,
};
use driftbench::learners::preset;

fn main() -> driftbench::Result<()> {
    // b = a + 1 is the most extreme outcome among 2^10 sign patterns.
    let a: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
    let b: Vec<f64> = a.iter().map(|v| v + 1.0).collect();
    println!("p(shifted by one) = {:.6}", wilcoxon_signed_rank(&a, &b)?);

    let scenarios: Vec<_> = ["NSLC", "NSPC"]
        .iter()
        .map(|n| catalog::build(n).map(|e| Arc::new(e.scenario)))
        .collect::<driftbench::Result<_>>()?;
    let learners = ["opt", "nb", "sgd", "dwm", "nn100"]
        .iter()
        .map(|id| preset(id))
        .collect::<driftbench::Result<_>>()?;
    let config = ExperimentConfig::new(learners, 10);
    let out = run_experiment(&scenarios, &config)?;

    for g in significance_groups(&out.result, config.alpha, config.wilcoxon)? {
        println!("{}: best {}", g.scenario, g.best);
        for e in &g.entries {
            println!(
                "  {:<6} mean {:>6.2}%  p = {:.4}{}",
                e.learner,
                100.0 * e.mean,
                e.p_value,
                if e.in_group { "  *" } else { "" }
            );
        }
    }
    let tests = pairwise_tests(&out.result, config.wilcoxon)?;
    let close = tests.iter().filter(|t| t.p_value >= config.alpha).count();
    println!("{close} of {} pairs not significantly different", tests.len());
    Ok(())
}
