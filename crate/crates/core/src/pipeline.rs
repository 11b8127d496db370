//! Community-count sweep: embed, cluster with ECM, score, and pick the count
//! with the highest evidential modularity.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baseline::{argmax_rows, baseline_cm, baseline_fcm, threshold_sets};
use crate::belief::{CredalAssignment, CredalPartition, FocalSetCatalog};
use crate::ecm::{ecm_cluster, EcmParams, FULL_POWERSET_MAX_C};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::modularity::{evidential_modularity, fuzzy_modularity, hard_modularity};
use crate::spectral::generalized_eigs;

/// Which focal sets ECM may use for a given community count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[derive(Default)]
pub enum CatalogPolicy {
    /// Every subset of Ω; an error above [`FULL_POWERSET_MAX_C`].
    #[default]
    Full,
    /// Sets of at most this many communities, plus Ω.
    MaxCard(usize),
    /// Full powerset up to [`FULL_POWERSET_MAX_C`], then sets of at most this
    /// many communities plus Ω.
    Auto(usize),
}


impl CatalogPolicy {
    pub fn catalog(&self, c: usize) -> Result<FocalSetCatalog> {
        match *self {
            CatalogPolicy::Full if c > FULL_POWERSET_MAX_C => Err(Error::CatalogTooLarge {
                c,
                max: FULL_POWERSET_MAX_C,
            }),
            CatalogPolicy::Full => FocalSetCatalog::full(c),
            CatalogPolicy::MaxCard(k) => FocalSetCatalog::with_max_card(c, k),
            CatalogPolicy::Auto(_) if c <= FULL_POWERSET_MAX_C => FocalSetCatalog::full(c),
            CatalogPolicy::Auto(k) => FocalSetCatalog::with_max_card(c, k),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Baselines {
    pub cm: bool,
    pub fcm: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub c_min: usize,
    pub c_max: usize,
    pub ecm: EcmParams,
    pub catalog: CatalogPolicy,
    /// Divide each embedding column by its largest absolute value before ECM.
    pub rescale: bool,
    pub baselines: Baselines,
    pub fcm_fuzzifier: f64,
    pub fcm_threshold: f64,
    /// Divide contour rows by `1 - m(∅)` when computing Q_e.
    pub pl_normalized: bool,
    pub outlier_threshold: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            c_min: 2,
            c_max: 6,
            ecm: EcmParams::default(),
            catalog: CatalogPolicy::Full,
            rescale: true,
            baselines: Baselines::default(),
            fcm_fuzzifier: 2.0,
            fcm_threshold: 0.25,
            pl_normalized: false,
            outlier_threshold: 0.5,
        }
    }
}

impl SweepConfig {
    pub fn new(c_min: usize, c_max: usize) -> Self {
        Self {
            c_min,
            c_max,
            ..Default::default()
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.c_min < 2 {
            return bad(format!("cmin must be >= 2, got {}", self.c_min));
        }
        if self.c_max < self.c_min {
            return bad(format!("cmax {} is below cmin {}", self.c_max, self.c_min));
        }
        if self.c_max + 1 > n {
            return bad(format!("cmax {} must be at most n - 1 = {}", self.c_max, n.saturating_sub(1)));
        }
        if !(self.fcm_threshold > 0.0 && self.fcm_threshold < 1.0) {
            return bad(format!("fcm lambda must lie in (0, 1), got {}", self.fcm_threshold));
        }
        if !(self.fcm_fuzzifier > 1.0) {
            return bad(format!("fcm fuzzifier must be > 1, got {}", self.fcm_fuzzifier));
        }
        if !(0.0..=1.0).contains(&self.outlier_threshold) {
            return bad(format!("outlier threshold must lie in [0, 1], got {}", self.outlier_threshold));
        }
        if let CatalogPolicy::MaxCard(k) | CatalogPolicy::Auto(k) = self.catalog {
            if k == 0 {
                return bad("max-card must be at least 1".into());
            }
        }
        self.ecm.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcmDiagnostics {
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub restart: usize,
    pub objective_trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmOutcome {
    pub labels: Vec<usize>,
    pub q_h: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FcmOutcome {
    pub memberships: DMatrix<f64>,
    pub labels: Vec<usize>,
    pub threshold_sets: Vec<Vec<usize>>,
    pub q_h: f64,
    pub q_fuzzy: f64,
}

/// Everything computed for one community count.
#[derive(Debug, Clone, PartialEq)]
pub struct CResult {
    pub c: usize,
    pub q_e: f64,
    /// Hard modularity of the pignistic argmax labels.
    pub q_h: f64,
    /// Fuzzy modularity of the pignistic probabilities.
    pub q_fuzzy: f64,
    pub eigenvalues: Vec<f64>,
    /// The points ECM clustered (n x (c - 1)).
    pub points: DMatrix<f64>,
    pub partition: CredalPartition,
    pub prototypes: DMatrix<f64>,
    pub contour: DMatrix<f64>,
    pub pignistic: DMatrix<f64>,
    pub pignistic_labels: Vec<usize>,
    pub credal: Vec<CredalAssignment>,
    pub outliers: Vec<bool>,
    /// Mass on sets of exactly two communities.
    pub pair_mass: Vec<f64>,
    /// Mass on all sets of two or more communities.
    pub imprecise_mass: Vec<f64>,
    pub ecm: EcmDiagnostics,
    pub cm: Option<CmOutcome>,
    pub fcm: Option<FcmOutcome>,
}

impl CResult {
    pub fn imprecise_nodes(&self) -> Vec<usize> {
        (0..self.credal.len()).filter(|&i| self.credal[i].imprecise).collect()
    }

    pub fn outlier_count(&self) -> usize {
        self.outliers.iter().filter(|&&o| o).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionReport {
    pub per_c: Vec<CResult>,
    pub best_c: usize,
}

impl DetectionReport {
    pub fn get(&self, c: usize) -> Option<&CResult> {
        self.per_c.iter().find(|r| r.c == c)
    }

    pub fn best(&self) -> &CResult {
        self.get(self.best_c).expect("best_c is in per_c")
    }
}

/// Largest Q_e, smaller c on ties.
pub fn select_best_c(per_c: &[CResult]) -> Option<usize> {
    let mut best: Option<&CResult> = None;
    for r in per_c {
        match best {
            Some(b) if r.q_e > b.q_e || (r.q_e == b.q_e && r.c < b.c) => best = Some(r),
            None => best = Some(r),
            _ => {}
        }
    }
    best.map(|r| r.c)
}

fn mass_by_cardinality(p: &CredalPartition, keep: impl Fn(usize) -> bool) -> Vec<f64> {
    let cols: Vec<usize> = (0..p.catalog().len())
        .filter(|&j| keep(p.catalog().get(j).cardinality()))
        .collect();
    (0..p.n())
        .map(|i| cols.iter().map(|&j| p.masses()[(i, j)]).sum())
        .collect()
}

fn run_c(
    g: &Graph,
    eigs: &crate::spectral::Eigenpairs,
    c: usize,
    cfg: &SweepConfig,
) -> Result<CResult> {
    let emb = eigs.embedding(c)?;
    let points = if cfg.rescale {
        emb.rescaled_unit_max()
    } else {
        emb.coords.clone()
    };
    let catalog = cfg.catalog.catalog(c)?;
    let res = ecm_cluster(&points, c, &catalog, &cfg.ecm)?;
    let p = &res.partition;
    let q_e = evidential_modularity(g, p, cfg.pl_normalized)?;
    let pignistic = p.pignistic_matrix()?;
    let pignistic_labels = argmax_rows(&pignistic);
    let q_h = hard_modularity(g, &pignistic_labels)?;
    let q_fuzzy = fuzzy_modularity(g, &pignistic)?;

    let cm = if cfg.baselines.cm {
        let r = baseline_cm(&points, c, &cfg.ecm)?;
        Some(CmOutcome {
            q_h: hard_modularity(g, &r.labels)?,
            labels: r.labels,
        })
    } else {
        None
    };
    let fcm = if cfg.baselines.fcm {
        let r = baseline_fcm(&points, c, cfg.fcm_fuzzifier, &cfg.ecm)?;
        let labels = r.labels();
        Some(FcmOutcome {
            q_h: hard_modularity(g, &labels)?,
            q_fuzzy: fuzzy_modularity(g, &r.memberships)?,
            threshold_sets: threshold_sets(&r.memberships, cfg.fcm_threshold),
            labels,
            memberships: r.memberships,
        })
    } else {
        None
    };

    Ok(CResult {
        c,
        q_e,
        q_h,
        q_fuzzy,
        eigenvalues: emb.eigenvalues,
        points,
        contour: p.contour_matrix(false),
        pignistic,
        pignistic_labels,
        credal: p.hard_credal_assignment(),
        outliers: p.outliers(cfg.outlier_threshold),
        pair_mass: mass_by_cardinality(p, |q| q == 2),
        imprecise_mass: mass_by_cardinality(p, |q| q >= 2),
        ecm: EcmDiagnostics {
            objective: res.objective,
            iterations: res.iterations,
            converged: res.converged,
            restart: res.restart,
            objective_trace: res.objective_trace.clone(),
        },
        prototypes: res.prototypes,
        partition: res.partition,
        cm,
        fcm,
    })
}

/// Runs the sweep over `cfg.c_min..=cfg.c_max`. Community counts are processed
/// in parallel; results are identical to a sequential run.
pub fn detect(g: &Graph, cfg: &SweepConfig) -> Result<DetectionReport> {
    cfg.validate(g.n())?;
    let components = g.component_count();
    if components > 1 {
        log::warn!("graph has {components} connected components; eigenvalue 1 is degenerate");
    }
    let eigs = generalized_eigs(g, cfg.c_max)?;
    let results: Vec<Result<CResult>> = (cfg.c_min..=cfg.c_max)
        .into_par_iter()
        .map(|c| {
            log::info!("clustering with c = {c}");
            run_c(g, &eigs, c, cfg).map_err(|e| e.at_c(c))
        })
        .collect();
    // first failure in ascending c, independent of scheduling
    let per_c = results.into_iter().collect::<Result<Vec<_>>>()?;
    let best_c = select_best_c(&per_c).expect("non-empty sweep");
    Ok(DetectionReport { per_c, best_c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn two_cliques() -> Graph {
        let mut s = String::new();
        for block in [["a", "b", "c", "d", "e"], ["f", "g", "h", "i", "j"]] {
            for x in 0..5 {
                for y in x + 1..5 {
                    s.push_str(&format!("{} {}\n", block[x], block[y]));
                }
            }
        }
        s.push_str("e f\n");
        parse_edge_list(&s).unwrap()
    }

    #[test]
    fn two_cliques_best_c_two() {
        let g = two_cliques();
        let report = detect(&g, &SweepConfig::new(2, 4)).unwrap();
        assert_eq!(report.best_c, 2);
        let r = report.best();
        let a = &r.credal;
        assert!(a.iter().all(|x| !x.imprecise));
        assert!(a[..5].iter().all(|x| x.set == a[0].set));
        assert!(a[5..].iter().all(|x| x.set == a[5].set));
        assert_ne!(a[0].set, a[5].set);
    }

    #[test]
    fn report_is_self_consistent() {
        let g = two_cliques();
        let cfg = SweepConfig {
            baselines: Baselines { cm: true, fcm: true },
            ..SweepConfig::new(2, 3)
        };
        let report = detect(&g, &cfg).unwrap();
        for r in &report.per_c {
            assert_eq!(r.q_e, evidential_modularity(&g, &r.partition, false).unwrap());
            assert_eq!(r.q_h, hard_modularity(&g, &r.pignistic_labels).unwrap());
            assert!(r.cm.is_some() && r.fcm.is_some());
        }
    }

    #[test]
    fn tie_prefers_smaller_c() {
        let g = two_cliques();
        let mut report = detect(&g, &SweepConfig::new(2, 3)).unwrap();
        report.per_c[1].q_e = report.per_c[0].q_e;
        assert_eq!(select_best_c(&report.per_c), Some(2));
    }

    #[test]
    fn config_validation() {
        let g = two_cliques();
        assert!(detect(&g, &SweepConfig::new(1, 3)).is_err());
        assert!(detect(&g, &SweepConfig::new(4, 3)).is_err());
        assert!(detect(&g, &SweepConfig::new(2, 10)).is_err());
        let cfg = SweepConfig {
            fcm_threshold: 1.0,
            ..SweepConfig::new(2, 3)
        };
        assert!(detect(&g, &cfg).is_err());
    }

    #[test]
    fn full_policy_rejects_large_frame() {
        assert!(matches!(
            CatalogPolicy::Full.catalog(9),
            Err(Error::CatalogTooLarge { c: 9, .. })
        ));
        assert_eq!(CatalogPolicy::Auto(2).catalog(9).unwrap().max_card(), 2);
        assert!(CatalogPolicy::Auto(2).catalog(4).unwrap().is_full());
    }

    #[test]
    fn errors_name_the_community_count() {
        let g = two_cliques();
        let cfg = SweepConfig::new(9, 9);
        let err = detect(&g, &cfg).unwrap_err();
        assert!(matches!(err, Error::AtCommunityCount { c: 9, .. }), "{err}");
    }
}
