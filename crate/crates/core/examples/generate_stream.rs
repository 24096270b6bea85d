//! Draws a labeled stream from a canonical scenario and writes it as CSV and
//! ARFF.
//!
//! cargo run --example generate_stream -- [scenario] [seed] [out_dir]

use std::path::PathBuf;

use driftbench::catalog;
use driftbench::io::{write_dataset, DatasetFormat};

fn main() -> driftbench::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "NSGT".into());
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let dir = args.next().map(PathBuf::from).unwrap_or_else(std::env::temp_dir);

    let scenario = catalog::resolve(&name)?;
    for p in scenario.stream(seed).step_by(2500) {
        println!("t={:>5} class={} x={:?}", p.t, p.class_label, p.x);
    }

    let stem = name.to_ascii_lowercase();
    let csv = dir.join(format!("{stem}-{seed}.csv"));
    let arff = dir.join(format!("{stem}-{seed}.arff"));
    write_dataset(&scenario, seed, DatasetFormat::Csv, &csv)?;
    write_dataset(&scenario, seed, DatasetFormat::Arff, &arff)?;
    println!("wrote {} and {}", csv.display(), arff.display());
    Ok(())
}
