//! Ground truth of a drifting scenario: priors, class posteriors and the
//! Bayes-optimal decision at a fixed point as the mixture moves under it.
//!
//! cargo run --example bayes_oracle

use std::sync::Arc;

use driftbench::catalog;
use driftbench::evaluation::prequential_run;
use driftbench::learners::preset;

fn main() -> driftbench::Result<()> {
    let entry = catalog::build("NSCX")?;
    let s = &entry.scenario;
    let x = [3.0, 2.0];
    for t in [0, 1000, 2500, 5000, 7500, 10000] {
        let priors: Vec<String> = s
            .priors_at(t)?
            .iter()
            .map(|(id, p)| format!("{}{}={p:.2}", s.classes()[id.class].name, id.component + 1))
            .collect();
        let post = s.posterior(t, &x)?;
        println!(
            "t={t:>5} priors [{}] p(A|x)={:.3} p(B|x)={:.3} -> {}",
            priors.join(" "),
            post[0],
            post[1],
            s.classes()[s.bayes_classify(t, &x)?].name
        );
    }

    // The oracle as a learner: it ignores training data and tracks time.
    let scenario = Arc::new(entry.scenario.clone());
    let trace = prequential_run(&scenario, &preset("opt")?, 1)?;
    println!(
        "oracle error on {} seed 1: {:.2}% (reference {:.2}%)",
        entry.name,
        100.0 * trace.final_ae(),
        entry.optimal_error_pct
    );
    Ok(())
}
