//! JSON report, modularity curve CSV and Graphviz export.

use std::io;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pipeline::{CResult, DetectionReport};

/// Writes every float with 17 significant digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes any value as JSON using [`FullPrecision`] floats.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub total_weight: f64,
    pub components: usize,
}

impl GraphSummary {
    pub fn of(g: &Graph) -> Self {
        Self {
            nodes: g.n(),
            edges: g.edge_count(),
            total_weight: g.total_weight(),
            components: g.component_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub label: String,
    /// Max-mass nonempty focal set, e.g. `{1,3}`.
    pub assignment: String,
    pub imprecise: bool,
    pub outlier: bool,
    /// 1-based community of largest pignistic probability.
    pub pignistic_community: usize,
    pub empty_mass: f64,
    pub pair_mass: f64,
    pub imprecise_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcmSummary {
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub restart: usize,
    pub objective_trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CEntry {
    pub c: usize,
    pub q_e: f64,
    pub q_h: f64,
    pub q_fuzzy: f64,
    pub outlier_count: usize,
    pub eigenvalues: Vec<f64>,
    pub focal_sets: Vec<String>,
    /// Column of the mass matrix per focal set, one value per node.
    pub masses: IndexMap<String, Vec<f64>>,
    /// Per node, one value per community.
    pub contour: Vec<Vec<f64>>,
    pub pignistic: Vec<Vec<f64>>,
    pub prototypes: Vec<Vec<f64>>,
    pub nodes: Vec<NodeEntry>,
    pub ecm: EcmSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmEntry {
    pub labels: Vec<usize>,
    pub q_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FcmEntry {
    pub memberships: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    /// 1-based communities whose membership exceeds the threshold, per node.
    pub threshold_sets: Vec<Vec<usize>>,
    pub q_h: f64,
    pub q_fuzzy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineEntry {
    pub c: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cm: Option<CmEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fcm: Option<FcmEntry>,
}

/// The serialized form of a detection run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub config: serde_json::Value,
    pub graph_summary: GraphSummary,
    pub per_c: Vec<CEntry>,
    pub best_c: usize,
    pub baselines: Vec<BaselineEntry>,
}

fn rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn c_entry(g: &Graph, r: &CResult) -> CEntry {
    let p = &r.partition;
    let labels = p.catalog().labels();
    let mut masses = IndexMap::new();
    for (j, l) in labels.iter().enumerate() {
        masses.insert(l.clone(), p.masses().column(j).iter().copied().collect());
    }
    let empty = p.empty_masses();
    let nodes = (0..g.n())
        .map(|i| NodeEntry {
            label: g.label(i).to_string(),
            assignment: r.credal[i].set.to_string(),
            imprecise: r.credal[i].imprecise,
            outlier: r.outliers[i],
            pignistic_community: r.pignistic_labels[i] + 1,
            empty_mass: empty[i],
            pair_mass: r.pair_mass[i],
            imprecise_mass: r.imprecise_mass[i],
        })
        .collect();
    CEntry {
        c: r.c,
        q_e: r.q_e,
        q_h: r.q_h,
        q_fuzzy: r.q_fuzzy,
        outlier_count: r.outlier_count(),
        eigenvalues: r.eigenvalues.clone(),
        focal_sets: labels,
        masses,
        contour: rows(&r.contour),
        pignistic: rows(&r.pignistic),
        prototypes: rows(&r.prototypes),
        nodes,
        ecm: EcmSummary {
            objective: r.ecm.objective,
            iterations: r.ecm.iterations,
            converged: r.ecm.converged,
            restart: r.ecm.restart,
            objective_trace: r.ecm.objective_trace.clone(),
        },
    }
}

impl ReportDocument {
    pub fn new<C: Serialize>(g: &Graph, report: &DetectionReport, config: &C) -> Result<Self> {
        let baselines = report
            .per_c
            .iter()
            .filter(|r| r.cm.is_some() || r.fcm.is_some())
            .map(|r| BaselineEntry {
                c: r.c,
                cm: r.cm.as_ref().map(|cm| CmEntry {
                    labels: cm.labels.iter().map(|l| l + 1).collect(),
                    q_h: cm.q_h,
                }),
                fcm: r.fcm.as_ref().map(|f| FcmEntry {
                    memberships: rows(&f.memberships),
                    labels: f.labels.iter().map(|l| l + 1).collect(),
                    threshold_sets: f
                        .threshold_sets
                        .iter()
                        .map(|s| s.iter().map(|l| l + 1).collect())
                        .collect(),
                    q_h: f.q_h,
                    q_fuzzy: f.q_fuzzy,
                }),
            })
            .collect();
        Ok(Self {
            config: serde_json::to_value(config)?,
            graph_summary: GraphSummary::of(g),
            per_c: report.per_c.iter().map(|r| c_entry(g, r)).collect(),
            best_c: report.best_c,
            baselines,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// CSV table `c,Q_e,Q_h,Q_fuzzy`, one row per community count.
pub fn curve_csv(report: &DetectionReport) -> String {
    let mut out = String::from("c,Q_e,Q_h,Q_fuzzy\n");
    for r in &report.per_c {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.c,
            fmt_f64(r.q_e),
            fmt_f64(r.q_h),
            fmt_f64(r.q_fuzzy)
        ));
    }
    out
}

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

fn color(k: usize) -> String {
    if k < PALETTE.len() {
        PALETTE[k].to_string()
    } else {
        let hue = (k as f64 * 0.618_033_988_749_895).fract();
        format!("{hue:.3} 0.6 0.9")
    }
}

/// Integer labels sort numerically, others lexicographically after them.
fn label_order(a: &str, b: &str) -> std::cmp::Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        (Ok(_), Err(_)) => std::cmp::Ordering::Less,
        (Err(_), Ok(_)) => std::cmp::Ordering::Greater,
        _ => a.cmp(b),
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering of the hard credal partition at `c`.
///
/// Singleton nodes are filled with their community color, imprecise nodes are
/// wedged with the colors of every community in their set, and outliers are
/// drawn as boxes.
pub fn export_dot(g: &Graph, report: &DetectionReport, c: usize) -> Result<String> {
    let r = report
        .get(c)
        .ok_or_else(|| Error::InvalidParameter(format!("c = {c} is not in the report")))?;
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| label_order(g.label(a), g.label(b)));

    let mut out = format!("graph communities_c{c} {{\n  node [shape=circle];\n");
    for &i in &order {
        let a = &r.credal[i];
        let members: Vec<usize> = a.set.members().collect();
        let mut attrs = vec![format!("community={}", quote(&a.set.to_string()))];
        if a.imprecise {
            let colors: Vec<String> = members.iter().map(|&k| color(k)).collect();
            attrs.push("style=wedged".into());
            attrs.push(format!("fillcolor={}", quote(&colors.join(":"))));
            attrs.push("penwidth=2".into());
        } else {
            attrs.push("style=filled".into());
            attrs.push(format!("fillcolor={}", quote(&color(members[0]))));
        }
        if r.outliers[i] {
            attrs.push("shape=box".into());
            attrs.push("outlier=true".into());
        }
        out.push_str(&format!("  {} [{}];\n", quote(g.label(i)), attrs.join(", ")));
    }
    let mut rank = vec![0; g.n()];
    for (pos, &i) in order.iter().enumerate() {
        rank[i] = pos;
    }
    let mut edges = Vec::new();
    for i in 0..g.n() {
        for j in g.neighbors(i) {
            if i <= j {
                let (a, b) = if rank[i] <= rank[j] { (i, j) } else { (j, i) };
                edges.push((rank[a], rank[b], a, b));
            }
        }
    }
    edges.sort();
    for (_, _, a, b) in edges {
        let w = g.weight(a, b);
        if w == 1.0 {
            out.push_str(&format!("  {} -- {};\n", quote(g.label(a)), quote(g.label(b))));
        } else {
            out.push_str(&format!(
                "  {} -- {} [weight={w}];\n",
                quote(g.label(a)),
                quote(g.label(b))
            ));
        }
    }
    out.push_str("}\n");
    Ok(out)
}
