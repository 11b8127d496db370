//! Evidential c-means.
//!
//! Minimizes
//!
//! ```text
//! J = sum_i sum_{A_j != ∅} |A_j|^α m_ij^β d_ij^2 + sum_i δ^2 m_i∅^β
//! ```
//!
//! subject to `sum_j m_ij + m_i∅ = 1`, where `d_ij` is the distance from
//! point `i` to the barycenter of the prototypes of the communities in `A_j`.
//! The masses and the prototypes are updated alternately, each update being
//! the exact minimizer of `J` with the other block held fixed, so the
//! objective never increases.

use nalgebra::{DMatrix, RowDVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::belief::{CredalPartition, FocalSetCatalog};
use crate::error::{Error, Result};

/// Largest frame for which the full powerset catalog is accepted.
pub const FULL_POWERSET_MAX_C: usize = 8;

/// Restarts whose objectives agree to this relative precision count as tied;
/// the earliest one is kept.
const RESTART_TIE_REL: f64 = 1e-10;

/// Relative diagonal below which the prototype system is treated as singular.
const SINGULAR_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EcmParams {
    /// Cardinality penalty exponent (α >= 0).
    pub alpha: f64,
    /// Mass exponent (β > 1).
    pub beta: f64,
    /// Outlier distance (δ > 0).
    pub delta: f64,
    pub max_iter: usize,
    /// Convergence threshold on the relative objective change.
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for EcmParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 2.0,
            delta: 10.0,
            max_iter: 500,
            tol: 1e-8,
            restarts: 10,
            seed: 42,
        }
    }
}

impl EcmParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return bad(format!("alpha must be >= 0, got {}", self.alpha));
        }
        if !(self.beta > 1.0) || !self.beta.is_finite() {
            return bad(format!("beta must be > 1, got {}", self.beta));
        }
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return bad(format!("delta must be > 0, got {}", self.delta));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be > 0, got {}", self.tol));
        }
        if self.max_iter == 0 {
            return bad("max_iter must be positive".into());
        }
        if self.restarts == 0 {
            return bad("restarts must be positive".into());
        }
        Ok(())
    }
}

/// Singleton prototypes and the barycenter of every nonempty focal set.
#[derive(Debug, Clone, PartialEq)]
pub struct Barycenters {
    pub catalog: FocalSetCatalog,
    /// c x d
    pub prototypes: DMatrix<f64>,
    /// (f - 1) x d; row `j - 1` belongs to catalog set `j` (set 0 is ∅).
    pub centers: DMatrix<f64>,
}

impl Barycenters {
    pub fn new(catalog: &FocalSetCatalog, prototypes: &DMatrix<f64>) -> Result<Self> {
        if prototypes.nrows() != catalog.c() {
            return Err(Error::Dimension(format!(
                "{} prototypes for a frame of {}",
                prototypes.nrows(),
                catalog.c()
            )));
        }
        let d = prototypes.ncols();
        let mut centers = DMatrix::zeros(catalog.len() - 1, d);
        for (j, set) in catalog.sets().iter().enumerate().skip(1) {
            let q = set.cardinality() as f64;
            let mut row = RowDVector::zeros(d);
            for k in set.members() {
                row += prototypes.row(k);
            }
            if set.cardinality() == 1 {
                centers.set_row(j - 1, &row);
            } else {
                centers.set_row(j - 1, &(row / q));
            }
        }
        Ok(Self {
            catalog: catalog.clone(),
            prototypes: prototypes.clone(),
            centers,
        })
    }

    /// Squared distance from `point` to the barycenter of catalog set `j >= 1`.
    fn dist2(&self, points: &DMatrix<f64>, i: usize, j: usize) -> f64 {
        let mut s = 0.0;
        for q in 0..points.ncols() {
            let diff = points[(i, q)] - self.centers[(j - 1, q)];
            s += diff * diff;
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EcmResult {
    pub partition: CredalPartition,
    /// c x d
    pub prototypes: DMatrix<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub objective_trace: Vec<f64>,
    pub converged: bool,
    /// Which restart produced this result.
    pub restart: usize,
}

fn check_points(points: &DMatrix<f64>, d: usize) -> Result<()> {
    if points.ncols() != d {
        return Err(Error::Dimension(format!(
            "points have {} columns, prototypes have {d}",
            points.ncols()
        )));
    }
    Ok(())
}

/// The ECM objective for a given partition and prototypes.
pub fn ecm_objective(
    points: &DMatrix<f64>,
    partition: &CredalPartition,
    prototypes: &DMatrix<f64>,
    params: &EcmParams,
) -> Result<f64> {
    check_points(points, prototypes.ncols())?;
    if partition.n() != points.nrows() {
        return Err(Error::Dimension(format!(
            "{} points but {} mass rows",
            points.nrows(),
            partition.n()
        )));
    }
    let bary = Barycenters::new(partition.catalog(), prototypes)?;
    let m = partition.masses();
    let delta2 = params.delta * params.delta;
    let mut total = 0.0;
    for i in 0..points.nrows() {
        for (j, set) in partition.catalog().sets().iter().enumerate().skip(1) {
            let mij = m[(i, j)];
            if mij > 0.0 {
                let w = (set.cardinality() as f64).powf(params.alpha);
                total += w * mij.powf(params.beta) * bary.dist2(points, i, j);
            }
        }
        total += delta2 * m[(i, 0)].powf(params.beta);
    }
    Ok(total)
}

/// Optimal masses for fixed barycenters.
///
/// A point lying exactly on one or more barycenters gets mass 1, split evenly
/// over the coincident sets of smallest cardinality.
pub fn update_masses(
    points: &DMatrix<f64>,
    barycenters: &Barycenters,
    params: &EcmParams,
) -> Result<CredalPartition> {
    check_points(points, barycenters.prototypes.ncols())?;
    let catalog = &barycenters.catalog;
    let n = points.nrows();
    let f = catalog.len();
    let expo = 1.0 / (params.beta - 1.0);
    let delta2 = params.delta * params.delta;
    let card_w: Vec<f64> = catalog
        .sets()
        .iter()
        .map(|s| (s.cardinality() as f64).powf(params.alpha))
        .collect();

    let mut m = DMatrix::zeros(n, f);
    let mut scaled = vec![0.0; f];
    for i in 0..n {
        // scaled[j] = |A_j|^α d_ij², scaled[0] = δ²
        scaled[0] = delta2;
        let mut zero_card = usize::MAX;
        for j in 1..f {
            let d2 = barycenters.dist2(points, i, j);
            scaled[j] = card_w[j] * d2;
            if d2 == 0.0 {
                zero_card = zero_card.min(catalog.get(j).cardinality());
            }
        }
        if zero_card != usize::MAX {
            let hits: Vec<usize> = (1..f)
                .filter(|&j| {
                    catalog.get(j).cardinality() == zero_card
                        && barycenters.dist2(points, i, j) == 0.0
                })
                .collect();
            let share = 1.0 / hits.len() as f64;
            for j in hits {
                m[(i, j)] = share;
            }
            continue;
        }
        let smin = scaled.iter().copied().fold(f64::INFINITY, f64::min);
        let mut denom = 0.0;
        for j in 0..f {
            let t = (smin / scaled[j]).powf(expo);
            scaled[j] = t;
            denom += t;
        }
        let mut nonempty = 0.0;
        for j in 1..f {
            let v = scaled[j] / denom;
            m[(i, j)] = v;
            nonempty += v;
        }
        m[(i, 0)] = (1.0 - nonempty).max(0.0);
    }
    Ok(CredalPartition::new_unchecked(catalog.clone(), m))
}

/// Optimal prototypes for fixed masses: solves `H V = R`.
pub fn update_prototypes(
    points: &DMatrix<f64>,
    partition: &CredalPartition,
    params: &EcmParams,
) -> Result<DMatrix<f64>> {
    let catalog = partition.catalog();
    let c = catalog.c();
    let d = points.ncols();
    let n = points.nrows();
    if partition.n() != n {
        return Err(Error::Dimension(format!(
            "{n} points but {} mass rows",
            partition.n()
        )));
    }
    let m = partition.masses();
    let mut h = DMatrix::zeros(c, c);
    let mut r = DMatrix::zeros(c, d);
    for (j, set) in catalog.sets().iter().enumerate().skip(1) {
        let q = set.cardinality() as f64;
        let mut weight = 0.0;
        let mut weighted = RowDVector::zeros(d);
        for i in 0..n {
            let w = m[(i, j)].powf(params.beta);
            if w > 0.0 {
                weight += w;
                weighted += points.row(i) * w;
            }
        }
        if weight == 0.0 {
            continue;
        }
        let hq = q.powf(params.alpha - 2.0) * weight;
        let rq = q.powf(params.alpha - 1.0);
        for l in set.members() {
            for k in set.members() {
                h[(l, k)] += hq;
            }
            let mut row = r.row_mut(l);
            row += &weighted * rq;
        }
    }
    let max_diag = (0..c).map(|k| h[(k, k)]).fold(0.0, f64::max);
    if let Some(k) = (0..c).find(|&k| !(h[(k, k)] > SINGULAR_REL * max_diag) || max_diag == 0.0) {
        return Err(Error::SingularSystem { cluster: k });
    }
    let chol = h.clone().cholesky().ok_or_else(|| {
        let k = (0..c)
            .min_by(|&a, &b| h[(a, a)].total_cmp(&h[(b, b)]))
            .unwrap_or(0);
        Error::SingularSystem { cluster: k }
    })?;
    Ok(chol.solve(&r))
}

/// Seeded farthest-point initialization: the first prototype is a uniformly
/// drawn point, each next one the point furthest from those already chosen.
/// The draw indexes the points in lexicographic coordinate order and ties are
/// broken on coordinates, so permuting the input rows does not change the
/// chosen prototypes.
pub fn farthest_point_init(
    points: &DMatrix<f64>,
    c: usize,
    seed: u64,
    restart: usize,
) -> Result<DMatrix<f64>> {
    let n = points.nrows();
    let d = points.ncols();
    if n < c {
        return Err(Error::InvalidParameter(format!(
            "{n} points cannot seed {c} clusters"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    let lex = |a: usize, b: usize| {
        for q in 0..d {
            match points[(a, q)].total_cmp(&points[(b, q)]) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    };
    let pick = |score: &dyn Fn(usize) -> f64| -> usize {
        let mut best = 0;
        for i in 1..n {
            match score(i).total_cmp(&score(best)) {
                std::cmp::Ordering::Greater => best = i,
                std::cmp::Ordering::Equal if lex(i, best).is_gt() => best = i,
                _ => {}
            }
        }
        best
    };

    let mut sorted: Vec<usize> = (0..n).collect();
    sorted.sort_by(|&a, &b| lex(a, b));
    let first = sorted[rng.gen_range(0..n)];
    let mut chosen = vec![first];
    let dist2 = |a: usize, b: usize| {
        (0..d)
            .map(|q| (points[(a, q)] - points[(b, q)]).powi(2))
            .sum::<f64>()
    };
    let mut nearest: Vec<f64> = (0..n).map(|i| dist2(i, first)).collect();
    while chosen.len() < c {
        let next = pick(&|i| nearest[i]);
        if nearest[next] == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "fewer than {c} distinct points"
            )));
        }
        chosen.push(next);
        for i in 0..n {
            nearest[i] = nearest[i].min(dist2(i, next));
        }
    }
    let mut v = DMatrix::zeros(c, d);
    for (k, &i) in chosen.iter().enumerate() {
        v.set_row(k, &points.row(i));
    }
    Ok(v)
}

fn run_once(
    points: &DMatrix<f64>,
    catalog: &FocalSetCatalog,
    params: &EcmParams,
    restart: usize,
) -> Result<EcmResult> {
    let mut prototypes = farthest_point_init(points, catalog.c(), params.seed, restart)?;
    let mut trace: Vec<f64> = Vec::new();
    let mut partition = None;
    let mut converged = false;
    for _ in 0..params.max_iter {
        let bary = Barycenters::new(catalog, &prototypes)?;
        let p = update_masses(points, &bary, params)?;
        prototypes = update_prototypes(points, &p, params)?;
        let j = ecm_objective(points, &p, &prototypes, params)?;
        let prev = trace.last().copied();
        trace.push(j);
        partition = Some(p);
        if j == 0.0 {
            converged = true;
            break;
        }
        if let Some(prev) = prev {
            if ((prev - j) / j).abs() < params.tol {
                converged = true;
                break;
            }
        }
    }
    let partition = partition.expect("max_iter >= 1");
    Ok(EcmResult {
        partition,
        prototypes,
        objective: *trace.last().expect("max_iter >= 1"),
        iterations: trace.len(),
        objective_trace: trace,
        converged,
        restart,
    })
}

/// Runs ECM from `params.restarts` seeded starts and keeps the lowest objective
/// (earliest restart on ties).
pub fn ecm_cluster(
    points: &DMatrix<f64>,
    c: usize,
    catalog: &FocalSetCatalog,
    params: &EcmParams,
) -> Result<EcmResult> {
    params.validate()?;
    if catalog.c() != c {
        return Err(Error::Dimension(format!(
            "catalog frame {} differs from c = {c}",
            catalog.c()
        )));
    }
    if c < 2 {
        return Err(Error::InvalidParameter(format!("c must be >= 2, got {c}")));
    }
    if catalog.is_full() && c > FULL_POWERSET_MAX_C {
        return Err(Error::CatalogTooLarge {
            c,
            max: FULL_POWERSET_MAX_C,
        });
    }
    if points.nrows() < c {
        return Err(Error::InvalidParameter(format!(
            "{} points for {c} clusters",
            points.nrows()
        )));
    }
    let mut best: Option<EcmResult> = None;
    let mut last_err = None;
    for r in 0..params.restarts {
        match run_once(points, catalog, params, r) {
            Ok(res) => {
                let better = best
                    .as_ref()
                    .is_none_or(|b| res.objective < b.objective * (1.0 - RESTART_TIE_REL));
                if better {
                    best = Some(res);
                }
            }
            Err(e) => {
                log::debug!("ECM restart {r} failed: {e}");
                last_err = Some(e);
            }
        }
    }
    best.ok_or_else(|| last_err.expect("at least one restart"))
}
