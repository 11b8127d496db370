#![allow(dead_code)]

use std::path::PathBuf;

use evcomm::{CredalPartition, FocalSet, FocalSetCatalog, Graph, GmlDocument};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub const KARATE_GML_SHA256: &str =
    "02477939a7a17d38823c429d02266367bc9141adc07178c22adb0d20a9cbcb2d";
pub const KARATE_EDGES_SHA256: &str =
    "8a7a652f39e2b9fd8c6055fd08aaa6fe2585dbee6a221d5a53fea7297753dd7e";

/// Members of the instructor's faction after the split.
pub const MR_HI: [usize; 17] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 17, 18, 20, 22];

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Reads a fixture after checking its checksum; panics on mismatch.
pub fn checked_fixture(name: &str, sha: &str) -> String {
    let bytes = std::fs::read(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    let got = sha256_hex(&bytes);
    assert_eq!(got, sha, "{name}: checksum mismatch, refusing to run");
    String::from_utf8(bytes).unwrap()
}

pub fn karate_doc() -> GmlDocument {
    evcomm::parse_gml_document(&checked_fixture("karate.gml", KARATE_GML_SHA256)).unwrap()
}

pub fn karate() -> Graph {
    karate_doc().graph
}

/// Node index for a 1-based karate label.
pub fn kidx(g: &Graph, label: usize) -> usize {
    g.index_of(&label.to_string()).unwrap()
}

pub fn faction_labels(g: &Graph) -> Vec<usize> {
    (0..g.n())
        .map(|i| {
            let l: usize = g.label(i).parse().unwrap();
            if MR_HI.contains(&l) {
                0
            } else {
                1
            }
        })
        .collect()
}

/// `(1/‖W‖) Σ_ij (w_ij − k_i k_j/‖W‖) Σ_k u_ik u_jk`, written out term by term.
pub fn modularity_double_sum(g: &Graph, u: &DMatrix<f64>) -> f64 {
    let n = g.n();
    let mut k = vec![0.0; n];
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            k[i] += g.weight(i, j);
            total += g.weight(i, j);
        }
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            let b = g.weight(i, j) - k[i] * k[j] / total;
            let mut s = 0.0;
            for c in 0..u.ncols() {
                s += u[(i, c)] * u[(j, c)];
            }
            q += b * s;
        }
    }
    q / total
}

pub fn hard_double_sum(g: &Graph, labels: &[usize]) -> f64 {
    let n = g.n();
    let total: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| g.weight(i, j)).sum();
    let k: Vec<f64> = (0..n).map(|i| (0..n).map(|j| g.weight(i, j)).sum()).collect();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += g.weight(i, j) - k[i] * k[j] / total;
            }
        }
    }
    q / total
}

/// Plausibility of each singleton by summing masses of intersecting sets.
pub fn contour_oracle(p: &CredalPartition) -> DMatrix<f64> {
    let c = p.c();
    DMatrix::from_fn(p.n(), c, |i, k| {
        p.catalog()
            .sets()
            .iter()
            .enumerate()
            .filter(|(_, s)| s.bits() & (1u64 << k) != 0)
            .map(|(j, _)| p.masses()[(i, j)])
            .sum()
    })
}

/// Random mass vector over a catalog; about a third of entries are zeroed.
pub fn random_masses(rng: &mut impl Rng, f: usize) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..f)
            .map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen::<f64>() })
            .collect();
        let s: f64 = v.iter().sum();
        if s > 0.0 {
            v.iter_mut().for_each(|x| *x /= s);
            return v;
        }
    }
}

pub fn random_partition(rng: &mut impl Rng, n: usize, catalog: &FocalSetCatalog) -> CredalPartition {
    let f = catalog.len();
    let mut m = DMatrix::zeros(n, f);
    for i in 0..n {
        for (j, x) in random_masses(rng, f).into_iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    CredalPartition::new(catalog.clone(), m).unwrap()
}

/// Random connected graph: a random spanning tree plus extra random edges,
/// integer or real weights.
pub fn random_graph(rng: &mut impl Rng, n: usize, extra: usize, weighted: bool) -> Graph {
    let mut b = evcomm::GraphBuilder::new();
    let w = |rng: &mut dyn rand::RngCore| {
        if weighted {
            0.1 + rng.gen::<f64>() * 3.0
        } else {
            1.0
        }
    };
    for i in 0..n {
        b.add_node(&format!("v{i}"));
    }
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let x = w(rng);
        b.add_edge(&format!("v{i}"), &format!("v{j}"), x);
    }
    for _ in 0..extra {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i != j {
            let x = w(rng);
            b.add_edge(&format!("v{i}"), &format!("v{j}"), x);
        }
    }
    b.build().unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (k, x) in u.iter().enumerate() {
        css += x;
        let t = (css - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Minimizes `Σ_j a_j m_j^β` over the simplex by projected gradient descent
/// with backtracking. `a[0]` is the weight of the empty set.
pub fn simplex_minimize(a: &[f64], beta: f64) -> Vec<f64> {
    let f = |m: &[f64]| -> f64 { m.iter().zip(a).map(|(x, w)| w * x.powf(beta)).sum() };
    let grad = |m: &[f64]| -> Vec<f64> {
        m.iter()
            .zip(a)
            .map(|(x, w)| w * beta * x.powf(beta - 1.0))
            .collect()
    };
    let k = a.len();
    let mut m = vec![1.0 / k as f64; k];
    let mut step = 1.0;
    for _ in 0..2_000_000 {
        let g = grad(&m);
        let fm = f(&m);
        let accepted;
        loop {
            let cand: Vec<f64> =
                project_simplex(&m.iter().zip(&g).map(|(x, d)| x - step * d).collect::<Vec<_>>());
            let decrease: f64 = g.iter().zip(cand.iter().zip(&m)).map(|(d, (c, x))| d * (c - x)).sum();
            let dist2: f64 = cand.iter().zip(&m).map(|(c, x)| (c - x).powi(2)).sum();
            if f(&cand) <= fm + decrease + dist2 / (2.0 * step) || step < 1e-18 {
                accepted = Some((cand, dist2));
                break;
            }
            step *= 0.5;
        }
        let (cand, dist2) = accepted.unwrap();
        m = cand;
        step *= 2.0;
        if dist2 < 1e-30 {
            break;
        }
    }
    m
}

/// Least-squares prototypes for fixed masses: minimizes the ECM objective
/// over prototypes by stacking one weighted residual per (point, set) pair
/// and solving with an SVD.
pub fn prototypes_least_squares(
    points: &DMatrix<f64>,
    p: &CredalPartition,
    alpha: f64,
    beta: f64,
) -> DMatrix<f64> {
    let catalog = p.catalog();
    let c = catalog.c();
    let n = points.nrows();
    let d = points.ncols();
    let f = catalog.len();
    let rows = n * (f - 1);
    let mut a = DMatrix::zeros(rows, c);
    let mut b = DMatrix::zeros(rows, d);
    let mut r = 0;
    for i in 0..n {
        for j in 1..f {
            let set: FocalSet = catalog.get(j);
            let q = set.cardinality() as f64;
            let w = (q.powf(alpha) * p.masses()[(i, j)].powf(beta)).sqrt();
            for k in set.members() {
                a[(r, k)] = w / q;
            }
            for t in 0..d {
                b[(r, t)] = w * points[(i, t)];
            }
            r += 1;
        }
    }
    a.svd(true, true).solve(&b, 1e-14).unwrap()
}
