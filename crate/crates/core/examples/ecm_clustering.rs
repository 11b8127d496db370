//! Evidential c-means on three blobs with a point between two of them.
//!
//! ```bash
//! cargo run --example ecm_clustering
//! ```

use evcomm::{ecm_cluster, EcmParams, FocalSetCatalog};
use nalgebra::DMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows: [[f64; 2]; 10] = [
        [0.0, 0.0], [0.1, 0.1], [-0.1, 0.05],
        [2.0, 0.0], [2.1, -0.1], [1.9, 0.1],
        [1.0, 2.0], [1.1, 2.1], [0.9, 1.9],
        [1.0, 0.0],
    ];
    let x = DMatrix::from_fn(rows.len(), 2, |i, j| rows[i][j]);
    let cat = FocalSetCatalog::full(3)?;
    let res = ecm_cluster(&x, 3, &cat, &EcmParams::default())?;

    println!("objective {:.6} after {} iterations (restart {})", res.objective, res.iterations, res.restart);
    println!("prototypes:\n{:.3}", res.prototypes);
    for (i, a) in res.partition.hard_credal_assignment().iter().enumerate() {
        let tag = if a.imprecise { "  imprecise" } else { "" };
        println!("point {i}: {}{tag}", a.set);
    }
    Ok(())
}
