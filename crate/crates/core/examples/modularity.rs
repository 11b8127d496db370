//! Hard, fuzzy and evidential modularity of the same karate partition.
//!
//! ```bash
//! cargo run --example modularity
//! ```

use evcomm::{evidential_modularity, fuzzy_modularity, hard_modularity, parse_gml_document, CredalPartition};
use nalgebra::DMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/karate.gml");
    let doc = parse_gml_document(&std::fs::read_to_string(path)?)?;
    let g = &doc.graph;
    let labels: Vec<usize> = doc
        .attribute("club")
        .iter()
        .map(|c| usize::from(*c == Some("Officer")))
        .collect();

    println!("Q_h  (factions)         = {:.6}", hard_modularity(g, &labels)?);
    let p = CredalPartition::from_hard_labels(2, &labels)?;
    println!("Q_e  (categorical bba)  = {:.6}", evidential_modularity(g, &p, false)?);

    // soften every membership towards the other faction
    let u = DMatrix::from_fn(g.n(), 2, |i, k| if labels[i] == k { 0.8 } else { 0.2 });
    println!("Q_fz (0.8 / 0.2)        = {:.6}", fuzzy_modularity(g, &u)?);
    Ok(())
}
