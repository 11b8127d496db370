//! Hard, fuzzy and evidential modularity.
//!
//! All three are the bilinear form `trace(Uᵀ B U) / ‖W‖` evaluated on a
//! membership matrix `U`: one-hot indicators for a hard partition,
//! memberships for a fuzzy one, and singleton plausibilities (the contour
//! function) for a credal partition.

use nalgebra::DMatrix;

use crate::belief::CredalPartition;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A partition in any of the three supported forms.
#[derive(Debug, Clone, Copy)]
pub enum PartitionView<'a> {
    Hard(&'a [usize]),
    Fuzzy(&'a DMatrix<f64>),
    Credal(&'a CredalPartition),
}

impl PartitionView<'_> {
    /// Modularity of this partition on `g`; credal partitions use raw plausibilities.
    pub fn modularity(&self, g: &Graph) -> Result<f64> {
        match self {
            PartitionView::Hard(l) => hard_modularity(g, l),
            PartitionView::Fuzzy(u) => fuzzy_modularity(g, u),
            PartitionView::Credal(p) => evidential_modularity(g, p, false),
        }
    }
}

/// `trace(Uᵀ B U) / ‖W‖` without materializing `B`.
fn bilinear(g: &Graph, u: &DMatrix<f64>) -> f64 {
    let w = g.weights();
    let k = g.degrees();
    let total = g.total_weight();
    let wu = w * u;
    let mut acc = 0.0;
    for col in 0..u.ncols() {
        let uc = u.column(col);
        let within = uc.dot(&wu.column(col));
        let ku: f64 = uc.iter().zip(k).map(|(a, b)| a * b).sum();
        acc += within - ku * ku / total;
    }
    acc / total
}

fn check_rows(g: &Graph, rows: usize) -> Result<()> {
    if rows != g.n() {
        return Err(Error::Dimension(format!(
            "partition has {rows} rows, graph has {} nodes",
            g.n()
        )));
    }
    Ok(())
}

/// Newman modularity of a hard labeling.
pub fn hard_modularity(g: &Graph, labels: &[usize]) -> Result<f64> {
    check_rows(g, labels.len())?;
    let c = labels.iter().copied().max().map_or(0, |m| m + 1);
    let u = DMatrix::from_fn(g.n(), c, |i, k| if labels[i] == k { 1.0 } else { 0.0 });
    Ok(bilinear(g, &u))
}

/// Modularity of a fuzzy membership matrix (rows must sum to 1).
pub fn fuzzy_modularity(g: &Graph, u: &DMatrix<f64>) -> Result<f64> {
    check_rows(g, u.nrows())?;
    for (i, row) in u.row_iter().enumerate() {
        let s = row.sum();
        if (s - 1.0).abs() > 1e-9 || row.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "membership row {i} is not a probability vector (sum {s})"
            )));
        }
    }
    Ok(bilinear(g, u))
}

/// Evidential modularity: the bilinear form on the contour matrix.
///
/// With `normalized`, each contour row is divided by `1 - m(∅)` first.
pub fn evidential_modularity(g: &Graph, p: &CredalPartition, normalized: bool) -> Result<f64> {
    check_rows(g, p.n())?;
    Ok(bilinear(g, &p.contour_matrix(normalized)))
}
