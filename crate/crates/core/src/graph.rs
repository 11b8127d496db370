//! Undirected weighted graphs.
//!
//! A [`Graph`] is a dense symmetric weight matrix with one external label per
//! node. Degrees `k_i = sum_j w_ij` and the total weight `||W|| = sum_ij w_ij`
//! are cached at construction, so an undirected unit edge contributes 2 to the
//! total weight and a self-loop `w_ii` contributes once.
//!
//! Two text formats are read: a whitespace edge list (this module) and a GML
//! subset ([`crate::gml`]).

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Labeled undirected weighted graph. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    weights: DMatrix<f64>,
    degrees: Vec<f64>,
    total_weight: f64,
}

/// Degrees and total weight of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphStats {
    pub degrees: Vec<f64>,
    pub total_weight: f64,
}

impl Graph {
    /// Builds a graph from labels and a dense weight matrix, checking every
    /// invariant (square, symmetric, non-negative, unique labels, no isolated node).
    pub fn from_dense(labels: Vec<String>, weights: DMatrix<f64>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if weights.nrows() != n || weights.ncols() != n {
            return Err(Error::Dimension(format!(
                "{} labels but weight matrix is {}x{}",
                n,
                weights.nrows(),
                weights.ncols()
            )));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateNode(l.clone()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let w = weights[(i, j)];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "weight ({}, {}) = {w} is not a finite non-negative number",
                        labels[i], labels[j]
                    )));
                }
                if w != weights[(j, i)] {
                    return Err(Error::InvalidParameter(format!(
                        "weight matrix not symmetric at ({}, {})",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let degrees: Vec<f64> = (0..n).map(|i| weights.row(i).sum()).collect();
        if let Some(i) = degrees.iter().position(|&k| k <= 0.0) {
            return Err(Error::IsolatedNode {
                label: labels[i].clone(),
            });
        }
        let self_loops = (0..n).filter(|&i| weights[(i, i)] > 0.0).count();
        if self_loops > 0 {
            log::warn!("graph has {self_loops} self-loop(s); they are kept in degrees and total weight");
        }
        let total_weight = degrees.iter().sum();
        Ok(Self {
            labels,
            index,
            weights,
            degrees,
            total_weight,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[(i, j)]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Number of undirected edges (self-loops included), i.e. nonzero `w_ij` with `i <= j`.
    pub fn edge_count(&self) -> usize {
        let n = self.n();
        (0..n)
            .map(|i| (i..n).filter(|&j| self.weights[(i, j)] > 0.0).count())
            .sum()
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            degrees: self.degrees.clone(),
            total_weight: self.total_weight,
        }
    }

    /// `B_ij = w_ij - k_i k_j / ||W||`.
    ///
    /// Rounding residue of each row sum is folded into the diagonal, so rows
    /// sum to zero to working precision and `B` stays exactly symmetric.
    pub fn modularity_matrix(&self) -> DMatrix<f64> {
        let n = self.n();
        let k = &self.degrees;
        let m = self.total_weight;
        let mut b = DMatrix::from_fn(n, n, |i, j| self.weights[(i, j)] - k[i] * k[j] / m);
        for i in 0..n {
            let residue = compensated_sum(b.row(i).iter().copied());
            b[(i, i)] -= residue;
        }
        b
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&j| self.weights[(i, j)] > 0.0)
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    /// Writes the graph in edge-list format, one line per undirected edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let n = self.n();
        for i in 0..n {
            for j in i..n {
                let w = self.weights[(i, j)];
                if w > 0.0 {
                    let _ = writeln!(out, "{} {} {:e}", self.labels[i], self.labels[j], w);
                }
            }
        }
        out
    }
}

/// Accumulates labeled edges; duplicates and reversed pairs are summed.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: HashMap<(usize, usize), f64>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a node (no-op if already present) and returns its index.
    pub fn add_node(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), i);
        i
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn add_edge(&mut self, src: &str, dst: &str, weight: f64) {
        let a = self.add_node(src);
        let b = self.add_node(dst);
        *self.edges.entry((a.min(b), a.max(b))).or_insert(0.0) += weight;
    }

    pub fn build(self) -> Result<Graph> {
        let n = self.labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut w = DMatrix::zeros(n, n);
        // sorted so the floating-point accumulation order is fixed
        let mut edges: Vec<_> = self.edges.into_iter().collect();
        edges.sort_by_key(|&(k, _)| k);
        for ((a, b), x) in edges {
            w[(a, b)] = x;
            w[(b, a)] = x;
        }
        Graph::from_dense(self.labels, w)
    }
}

/// Parses a whitespace-separated edge list: `src dst [weight]` per line,
/// `#` starts a comment, weight defaults to 1.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut b = GraphBuilder::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let weight = match fields.len() {
            2 => 1.0,
            3 => fields[2].parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("invalid weight {:?}", fields[2]),
            })?,
            k => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `src dst [weight]`, found {k} fields"),
                })
            }
        };
        if !weight.is_finite() {
            return Err(Error::Parse {
                line,
                message: format!("non-finite weight {:?}", fields[2]),
            });
        }
        if weight < 0.0 {
            return Err(Error::NegativeWeight {
                line,
                src: fields[0].to_string(),
                dst: fields[1].to_string(),
                weight,
            });
        }
        b.add_edge(fields[0], fields[1], weight);
    }
    b.build()
}

/// Neumaier summation.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
