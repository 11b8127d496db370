//! Load the karate club from both bundled formats and print basic statistics.
//!
//! ```bash
//! cargo run --example load_graph
//! ```

use evcomm::{parse_edge_list, parse_gml_document};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");
    let gml = std::fs::read_to_string(format!("{dir}/karate.gml"))?;
    let doc = parse_gml_document(&gml)?;
    let g = &doc.graph;
    println!("gml: {} nodes, {} edges, ‖W‖ = {}", g.n(), g.edge_count(), g.total_weight());

    let edges = parse_edge_list(&std::fs::read_to_string(format!("{dir}/karate.edges"))?)?;
    println!("edge list: {} nodes, {} edges", edges.n(), edges.edge_count());

    let stats = g.stats();
    let (hub, deg) = stats
        .degrees
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    println!("highest degree: node {} ({deg})", g.label(hub));
    println!("components: {}", g.component_count());

    let clubs = doc.attribute("club");
    let officers = clubs.iter().filter(|c| *c == &Some("Officer")).count();
    println!("club attribute: {officers} Officer, {} Mr. Hi", g.n() - officers);
    Ok(())
}
