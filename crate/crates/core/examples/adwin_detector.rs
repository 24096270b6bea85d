//! ADWIN on a synthetic error stream, then the effect of change detection
//! inside the bagged Hoeffding tree ensemble.
//!
//! cargo run --release --example adwin_detector

use driftbench::catalog;
use driftbench::evaluation::prequential;
use driftbench::learners::{Adwin, OzaBagAdwin, OzaBagParams};
use driftbench::model::learner_rng;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> driftbench::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut adwin = Adwin::new(0.002);
    // Error rate jumps from 10% to 40% at step 3000.
    for i in 0..6000 {
        let p = if i < 3000 { 0.1 } else { 0.4 };
        let err = (rng.random::<f64>() < p) as u8 as f64;
        if adwin.update(err) {
            println!("change at step {i}: window {} mean {:.3}", adwin.width(), adwin.estimate());
        }
    }
    println!("final window {} mean {:.3}", adwin.width(), adwin.estimate());

    let s = catalog::build("NSGT-I")?.scenario;
    for (label, delta) in [("with ADWIN", Some(0.002)), ("without", None)] {
        let params = OzaBagParams {
            delta,
            ..OzaBagParams::default()
        };
        let mut ens = OzaBagAdwin::new(params, learner_rng(1))?;
        let losses = prequential(&s, &mut ens, 1)?;
        let err = losses.iter().map(|l| *l as f64).sum::<f64>() / losses.len() as f64;
        println!("{label:<11} error {:.2}%  member resets {}", 100.0 * err, ens.resets());
    }
    Ok(())
}
