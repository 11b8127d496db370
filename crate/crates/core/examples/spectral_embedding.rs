//! Spectral embedding of the karate club.
//!
//! ```bash
//! cargo run --example spectral_embedding
//! ```

use evcomm::spectral::relative_residual;
use evcomm::{generalized_eigs, parse_gml};
use nalgebra::DVector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/karate.gml");
    let g = parse_gml(&std::fs::read_to_string(path)?)?;

    let pairs = generalized_eigs(&g, 4)?;
    for (a, value) in pairs.values.iter().enumerate() {
        let x = DVector::from_column_slice(pairs.vectors.column(a).as_slice());
        println!("λ{} = {value:.8}  residual {:.1e}", a + 1, relative_residual(&g, *value, &x));
    }

    // coordinates for c = 3: the second and third eigenvectors
    let emb = pairs.embedding(3)?;
    let scaled = emb.rescaled_unit_max();
    println!("\nnode        x1        x2");
    for i in 0..g.n() {
        println!("{:>4} {:>9.4} {:>9.4}", g.label(i), scaled[(i, 0)], scaled[(i, 1)]);
    }
    Ok(())
}
