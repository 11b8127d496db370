//! Full sweep on the karate club: Q_e curve, selected c and imprecise nodes.
//!
//! ```bash
//! cargo run --example karate_detection
//! ```

use evcomm::{curve_csv, detect, parse_gml, SweepConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/karate.gml");
    let g = parse_gml(&std::fs::read_to_string(path)?)?;

    let report = detect(&g, &SweepConfig::new(2, 6))?;
    print!("{}", curve_csv(&report));

    let best = report.best();
    println!("\nbest c = {}", report.best_c);
    for i in best.imprecise_nodes() {
        println!("node {:>2}: {}", g.label(i), best.credal[i].set);
    }
    println!("outliers: {}", best.outlier_count());
    Ok(())
}
