mod common;

use common::*;
use evcomm::baseline::baseline_cm;
use evcomm::{
    detect, embed, evidential_modularity, hard_modularity, CatalogPolicy, EcmParams, GraphBuilder,
    ReportDocument, SweepConfig,
};
use rand::Rng;

/// Exact 1-D 2-means: best split of the sorted values.
fn two_means_1d(x: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let sse = |idx: &[usize]| {
        let m = idx.iter().map(|&i| x[i]).sum::<f64>() / idx.len() as f64;
        idx.iter().map(|&i| (x[i] - m).powi(2)).sum::<f64>()
    };
    let cut = (1..x.len())
        .min_by(|&a, &b| {
            let fa = sse(&order[..a]) + sse(&order[a..]);
            let fb = sse(&order[..b]) + sse(&order[b..]);
            fa.total_cmp(&fb)
        })
        .unwrap();
    let mut labels = vec![0; x.len()];
    for &i in &order[cut..] {
        labels[i] = 1;
    }
    labels
}

fn same_partition(a: &[usize], b: &[usize]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

#[test]
fn karate_sweep() {
    let g = karate();
    let report = detect(&g, &SweepConfig::new(2, 6)).unwrap();
    assert!([2, 3].contains(&report.best_c), "best_c = {}", report.best_c);
    for r in &report.per_c {
        assert_eq!(r.q_e, evidential_modularity(&g, &r.partition, false).unwrap());
        assert_eq!(r.q_h, hard_modularity(&g, &r.pignistic_labels).unwrap());
        assert!(r.ecm.iterations < 200, "c = {}: {} iterations", r.c, r.ecm.iterations);
        for w in r.ecm.objective_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-9);
        }
    }
}

#[test]
fn karate_cm_is_exact_two_means() {
    let g = karate();
    let pts = embed(&g, 2).unwrap().rescaled_unit_max();
    let cm = baseline_cm(&pts, 2, &EcmParams::default()).unwrap();
    let x: Vec<f64> = pts.column(0).iter().copied().collect();
    assert!(same_partition(&cm.labels, &two_means_1d(&x)));
    let sign: Vec<usize> = x.iter().map(|&v| (v > 0.0) as usize).collect();
    assert!(same_partition(&cm.labels, &sign));
}

#[test]
fn identical_json_across_runs() {
    let g = karate();
    let cfg = SweepConfig::new(2, 4);
    let a = ReportDocument::new(&g, &detect(&g, &cfg).unwrap(), &cfg).unwrap();
    let b = ReportDocument::new(&g, &detect(&g, &cfg).unwrap(), &cfg).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
}

#[test]
fn two_cliques_recovered() {
    let mut b = GraphBuilder::new();
    for block in 0..2 {
        for x in 0..6 {
            for y in x + 1..6 {
                b.add_edge(&format!("{}", block * 6 + x), &format!("{}", block * 6 + y), 1.0);
            }
        }
    }
    b.add_edge("5", "6", 1.0);
    let g = b.build().unwrap();
    // exhaustive: the clique split maximizes Q_h among all 2-labelings
    let mut best = (f64::MIN, 0u32);
    for mask in 0..(1u32 << 11) {
        let labels: Vec<usize> = (0..12).map(|i| if i == 0 { 0 } else { ((mask >> (i - 1)) & 1) as usize }).collect();
        let q = hard_modularity(&g, &labels).unwrap();
        if q > best.0 {
            best = (q, mask);
        }
    }
    let cliques: Vec<usize> = (0..12).map(|i| (i >= 6) as usize).collect();
    let best_labels: Vec<usize> = (0..12).map(|i| if i == 0 { 0 } else { ((best.1 >> (i - 1)) & 1) as usize }).collect();
    assert!(same_partition(&best_labels, &cliques));

    let report = detect(&g, &SweepConfig::new(2, 4)).unwrap();
    assert_eq!(report.best_c, 2);
    let r = report.best();
    let sets: Vec<u64> = (0..12).map(|i| r.credal[g.index_of(&i.to_string()).unwrap()].set.bits()).collect();
    assert!(r.credal.iter().all(|a| !a.imprecise));
    let labels: Vec<usize> = sets.iter().map(|&s| (s == sets[0]) as usize).collect();
    assert!(same_partition(&labels, &cliques));
}

/// Planted partition with twelve groups of unequal size, 115 nodes.
fn planted(seed: u64) -> (evcomm::Graph, Vec<usize>) {
    let mut r = rng(seed);
    let sizes = [13, 12, 12, 11, 10, 10, 10, 9, 9, 8, 6, 5];
    let group: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(k, &s)| std::iter::repeat_n(k, s))
        .collect();
    let n = group.len();
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.add_node(&(i + 1).to_string());
    }
    for i in 0..n {
        for j in i + 1..n {
            let p = if group[i] == group[j] { 0.6 } else { 0.035 };
            if r.gen::<f64>() < p {
                b.add_edge(&(i + 1).to_string(), &(j + 1).to_string(), 1.0);
            }
        }
    }
    (b.build().unwrap(), group)
}

#[test]
fn pair_restricted_sweep_on_planted_partition() {
    let (g, _) = planted(1);
    assert_eq!(g.n(), 115);
    let cfg = SweepConfig {
        catalog: CatalogPolicy::MaxCard(2),
        ..SweepConfig::new(10, 12)
    };
    let report = detect(&g, &cfg).unwrap();
    for r in &report.per_c {
        let c = r.c;
        assert_eq!(r.partition.catalog().len(), 1 + c + c * (c - 1) / 2 + 1);
        for i in 0..g.n() {
            assert!((r.partition.masses().row(i).sum() - 1.0).abs() <= 1e-9);
        }
        for w in r.ecm.objective_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-9);
        }
    }
    assert!(matches!(
        detect(&g, &SweepConfig::new(8, 9)),
        Err(evcomm::Error::AtCommunityCount { c: 9, .. })
    ));
}
