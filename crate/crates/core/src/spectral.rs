//! Spectral mapping of graph nodes into Euclidean space.
//!
//! The generalized symmetric problem `A x = λ D x` (A = weights, D = diag of
//! degrees) is solved through the reduction `D^-1/2 A D^-1/2 y = λ y`,
//! `x = D^-1/2 y`. The spectrum is that of the transition matrix `D^-1 A`, so
//! every eigenvalue lies in [-1, 1] and the leading one is 1 with a constant
//! eigenvector. The embedding for `c` communities keeps the eigenvectors
//! 2..=c and drops the constant one.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// QR sweep budget per node for the symmetric eigensolver.
const EIGEN_SWEEPS_PER_NODE: usize = 100;

/// Leading generalized eigenpairs, eigenvalues descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    /// n x k, column j pairs with `values[j]`; `x^T D x = 1`, largest-|entry| positive.
    pub vectors: DMatrix<f64>,
}

/// Node coordinates for a given community count.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// n x (c - 1)
    pub coords: DMatrix<f64>,
    /// The c leading eigenvalues, descending, including the discarded one.
    pub eigenvalues: Vec<f64>,
}

impl Embedding {
    pub fn dim(&self) -> usize {
        self.coords.ncols()
    }

    /// Community count this embedding was built for.
    pub fn c(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Coordinates with each column divided by its largest absolute value.
    /// Columns that are identically zero are left untouched.
    pub fn rescaled_unit_max(&self) -> DMatrix<f64> {
        let mut out = self.coords.clone();
        for mut col in out.column_iter_mut() {
            let m = col.amax();
            if m > 0.0 {
                col /= m;
            }
        }
        out
    }

    /// CSV with a header `label,x1,...,xd` and one row per node.
    pub fn to_csv(&self, labels: &[String]) -> String {
        let mut out = String::from("label");
        for j in 0..self.dim() {
            out.push_str(&format!(",x{}", j + 1));
        }
        out.push('\n');
        for (i, l) in labels.iter().enumerate() {
            out.push_str(l);
            for j in 0..self.dim() {
                out.push_str(&format!(",{:.16e}", self.coords[(i, j)]));
            }
            out.push('\n');
        }
        out
    }
}

/// The `k` largest solutions of `A x = λ D x`.
pub fn generalized_eigs(g: &Graph, k: usize) -> Result<Eigenpairs> {
    let n = g.n();
    if k > n || k == 0 {
        return Err(Error::TooManyEigenpairs { requested: k, n });
    }
    let inv_sqrt: Vec<f64> = g.degrees().iter().map(|d| 1.0 / d.sqrt()).collect();
    let w = g.weights();
    let s = DMatrix::from_fn(n, n, |i, j| inv_sqrt[i] * w[(i, j)] * inv_sqrt[j]);
    // symmetrize exactly so the solver sees a bit-symmetric matrix
    let s = (&s + s.transpose()) * 0.5;

    let max_iter = EIGEN_SWEEPS_PER_NODE * n.max(10);
    let eig = s
        .try_symmetric_eigen(f64::EPSILON, max_iter)
        .ok_or(Error::EigenNoConvergence {
            iterations: max_iter,
        })?;

    let mut order: Vec<usize> = (0..n).collect();
    // descending eigenvalue; index breaks ties so the order is reproducible
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .total_cmp(&eig.eigenvalues[a])
            .then(a.cmp(&b))
    });

    let mut values = Vec::with_capacity(k);
    let mut vectors = DMatrix::zeros(n, k);
    for (col, &idx) in order.iter().take(k).enumerate() {
        values.push(eig.eigenvalues[idx]);
        let y = eig.eigenvectors.column(idx);
        let norm = y.norm();
        let mut x = DVector::from_fn(n, |i, _| inv_sqrt[i] * y[i] / norm);
        let pivot = x.iamax();
        if x[pivot] < 0.0 {
            x.neg_mut();
        }
        vectors.set_column(col, &x);
    }
    Ok(Eigenpairs { values, vectors })
}

impl Eigenpairs {
    /// Embedding for `c` communities from these pairs (needs `c <= k`).
    pub fn embedding(&self, c: usize) -> Result<Embedding> {
        let k = self.values.len();
        if c < 2 {
            return Err(Error::InvalidParameter(format!(
                "community count must be at least 2, got {c}"
            )));
        }
        if c > k {
            return Err(Error::TooManyEigenpairs {
                requested: c,
                n: k,
            });
        }
        Ok(Embedding {
            coords: self.vectors.columns(1, c - 1).into_owned(),
            eigenvalues: self.values[..c].to_vec(),
        })
    }
}

/// Spectral embedding of the nodes for `c` communities: eigenvectors 2..=c.
pub fn embed(g: &Graph, c: usize) -> Result<Embedding> {
    if c < 2 || c > g.n() {
        return Err(Error::InvalidParameter(format!(
            "community count {c} outside [2, {}]",
            g.n()
        )));
    }
    let components = g.component_count();
    if components > 1 {
        log::warn!("graph has {components} connected components; eigenvalue 1 is degenerate");
    }
    generalized_eigs(g, c)?.embedding(c)
}

/// `||A x - λ D x||_2 / ||A x||_2` for one pair.
pub fn relative_residual(g: &Graph, value: f64, x: &DVector<f64>) -> f64 {
    let ax = g.weights() * x;
    let dx = DVector::from_fn(g.n(), |i, _| g.degrees()[i] * x[i]);
    (&ax - dx * value).norm() / ax.norm()
}
