//! Test-then-train evaluation of a few learners on one stream, with the
//! windowed error printed as a coarse curve.
//!
//! cargo run --release --example prequential_run -- [scenario] [seed]

use std::sync::Arc;

use driftbench::catalog;
use driftbench::evaluation::prequential_run;
use driftbench::learners::{preset, LearnerConfig, LearnerKind, LearnerSpec};

fn main() -> driftbench::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "NSGT-I".into());
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let scenario = Arc::new(catalog::resolve(&name)?);

    let mut learners = vec![preset("nb")?, preset("sgd")?, preset("dwm")?];
    // Presets are plain configs; any parameter can be overridden.
    learners.push(LearnerSpec::new(
        "nn300",
        "NN300",
        LearnerConfig::new(LearnerKind::WindowKnn).with("wsize", 300),
    ));

    println!("{name}, seed {seed}, error over the last 500 patterns");
    print!("{:>7}", "n");
    for l in &learners {
        print!("{:>8}", l.label);
    }
    println!();
    let traces = learners
        .iter()
        .map(|l| prequential_run(&scenario, l, seed))
        .collect::<driftbench::Result<Vec<_>>>()?;
    for n in (1000..=10000).step_by(1000) {
        print!("{n:>7}");
        for t in &traces {
            print!("{:>8.3}", t.ae_win(n, 500)?);
        }
        println!();
    }
    print!("{:>7}", "final");
    for t in &traces {
        print!("{:>8.3}", t.final_ae());
    }
    println!();
    Ok(())
}
