//! Render the selected karate partition as Graphviz and write the JSON report.
//!
//! ```bash
//! cargo run --example dot_export -- karate.dot report.json
//! dot -Kneato -Tsvg karate.dot > karate.svg
//! ```

use evcomm::{detect, export_dot, parse_gml, ReportDocument, SweepConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dot_path = args.next().unwrap_or_else(|| "karate.dot".into());
    let json_path = args.next().unwrap_or_else(|| "karate.json".into());

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/karate.gml");
    let g = parse_gml(&std::fs::read_to_string(path)?)?;
    let cfg = SweepConfig::new(2, 4);
    let report = detect(&g, &cfg)?;

    std::fs::write(&dot_path, export_dot(&g, &report, report.best_c)?)?;
    std::fs::write(&json_path, ReportDocument::new(&g, &report, &cfg)?.to_json()?)?;
    println!("wrote {dot_path} and {json_path}");
    Ok(())
}
