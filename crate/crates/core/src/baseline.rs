//! Hard and fuzzy c-means on the same embedding, for comparison with ECM.
//!
//! Both use the seeded farthest-point initialization, seed, restart count,
//! iteration cap and tolerance of the [`EcmParams`] they are given.

use nalgebra::{DMatrix, RowDVector};

use crate::ecm::{farthest_point_init, EcmParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CmResult {
    pub labels: Vec<usize>,
    /// c x d
    pub centers: DMatrix<f64>,
    /// Within-cluster sum of squares.
    pub objective: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FcmResult {
    /// n x c, rows sum to 1.
    pub memberships: DMatrix<f64>,
    pub centers: DMatrix<f64>,
    pub objective: f64,
    pub iterations: usize,
}

impl FcmResult {
    /// Highest-membership cluster per point (lowest index on ties).
    pub fn labels(&self) -> Vec<usize> {
        argmax_rows(&self.memberships)
    }

    pub fn threshold_sets(&self, lambda: f64) -> Vec<Vec<usize>> {
        threshold_sets(&self.memberships, lambda)
    }
}

pub(crate) fn argmax_rows(u: &DMatrix<f64>) -> Vec<usize> {
    u.row_iter()
        .map(|r| {
            let mut best = 0;
            for k in 1..r.len() {
                if r[k] > r[best] {
                    best = k;
                }
            }
            best
        })
        .collect()
}

/// Clusters whose membership exceeds `lambda`, per row.
pub fn threshold_sets(u: &DMatrix<f64>, lambda: f64) -> Vec<Vec<usize>> {
    u.row_iter()
        .map(|r| (0..r.len()).filter(|&k| r[k] > lambda).collect())
        .collect()
}

fn sq_dist(points: &DMatrix<f64>, i: usize, centers: &DMatrix<f64>, k: usize) -> f64 {
    (0..points.ncols())
        .map(|q| (points[(i, q)] - centers[(k, q)]).powi(2))
        .sum()
}

fn check(points: &DMatrix<f64>, c: usize, params: &EcmParams) -> Result<()> {
    params.validate()?;
    if c < 1 || points.nrows() < c {
        return Err(Error::InvalidParameter(format!(
            "{} points for {c} clusters",
            points.nrows()
        )));
    }
    Ok(())
}

fn cm_once(points: &DMatrix<f64>, c: usize, params: &EcmParams, restart: usize) -> Result<CmResult> {
    let n = points.nrows();
    let d = points.ncols();
    let mut centers = farthest_point_init(points, c, params.seed, restart)?;
    let mut labels = vec![usize::MAX; n];
    let mut iterations = 0;
    for _ in 0..params.max_iter {
        iterations += 1;
        let mut changed = false;
        for (i, label) in labels.iter_mut().enumerate() {
            let mut best = 0;
            let mut best_d = sq_dist(points, i, &centers, 0);
            for k in 1..c {
                let dk = sq_dist(points, i, &centers, k);
                if dk < best_d {
                    best = k;
                    best_d = dk;
                }
            }
            if *label != best {
                *label = best;
                changed = true;
            }
        }
        let mut sums = DMatrix::zeros(c, d);
        let mut counts = vec![0usize; c];
        for i in 0..n {
            let mut row = sums.row_mut(labels[i]);
            row += points.row(i);
            counts[labels[i]] += 1;
        }
        if let Some(k) = counts.iter().position(|&x| x == 0) {
            return Err(Error::EmptyCluster { cluster: k });
        }
        for k in 0..c {
            let mean: RowDVector<f64> = sums.row(k) / counts[k] as f64;
            centers.set_row(k, &mean);
        }
        if !changed {
            break;
        }
    }
    let objective = (0..n).map(|i| sq_dist(points, i, &centers, labels[i])).sum();
    Ok(CmResult {
        labels,
        centers,
        objective,
        iterations,
    })
}

/// Hard c-means (Lloyd iterations), best of `params.restarts` starts.
pub fn baseline_cm(points: &DMatrix<f64>, c: usize, params: &EcmParams) -> Result<CmResult> {
    check(points, c, params)?;
    best_of(params.restarts, |r| cm_once(points, c, params, r), |r| r.objective)
}

fn fcm_memberships(points: &DMatrix<f64>, centers: &DMatrix<f64>, m: f64) -> DMatrix<f64> {
    let n = points.nrows();
    let c = centers.nrows();
    let expo = 1.0 / (m - 1.0);
    let mut u = DMatrix::zeros(n, c);
    let mut d2 = vec![0.0; c];
    for i in 0..n {
        for (k, v) in d2.iter_mut().enumerate() {
            *v = sq_dist(points, i, centers, k);
        }
        let zeros = d2.iter().filter(|&&x| x == 0.0).count();
        if zeros > 0 {
            for k in 0..c {
                if d2[k] == 0.0 {
                    u[(i, k)] = 1.0 / zeros as f64;
                }
            }
            continue;
        }
        let dmin = d2.iter().copied().fold(f64::INFINITY, f64::min);
        let terms: Vec<f64> = d2.iter().map(|&x| (dmin / x).powf(expo)).collect();
        let s: f64 = terms.iter().sum();
        for k in 0..c {
            u[(i, k)] = terms[k] / s;
        }
    }
    u
}

fn fcm_objective(points: &DMatrix<f64>, u: &DMatrix<f64>, centers: &DMatrix<f64>, m: f64) -> f64 {
    let mut j = 0.0;
    for i in 0..points.nrows() {
        for k in 0..centers.nrows() {
            j += u[(i, k)].powf(m) * sq_dist(points, i, centers, k);
        }
    }
    j
}

fn fcm_once(
    points: &DMatrix<f64>,
    c: usize,
    fuzzifier: f64,
    params: &EcmParams,
    restart: usize,
) -> Result<FcmResult> {
    let d = points.ncols();
    let mut centers = farthest_point_init(points, c, params.seed, restart)?;
    let mut prev: Option<f64> = None;
    let mut iterations = 0;
    let mut u = fcm_memberships(points, &centers, fuzzifier);
    let mut objective = fcm_objective(points, &u, &centers, fuzzifier);
    for _ in 0..params.max_iter {
        iterations += 1;
        u = fcm_memberships(points, &centers, fuzzifier);
        let w = u.map(|x| x.powf(fuzzifier));
        for k in 0..c {
            let total = w.column(k).sum();
            if total == 0.0 {
                return Err(Error::EmptyCluster { cluster: k });
            }
            let mut row = RowDVector::zeros(d);
            for i in 0..points.nrows() {
                row += points.row(i) * w[(i, k)];
            }
            centers.set_row(k, &(row / total));
        }
        objective = fcm_objective(points, &u, &centers, fuzzifier);
        if objective == 0.0 {
            break;
        }
        if let Some(p) = prev {
            if ((p - objective) / objective).abs() < params.tol {
                break;
            }
        }
        prev = Some(objective);
    }
    Ok(FcmResult {
        memberships: u,
        centers,
        objective,
        iterations,
    })
}

/// Fuzzy c-means with the given fuzzifier (> 1), best of `params.restarts` starts.
pub fn baseline_fcm(
    points: &DMatrix<f64>,
    c: usize,
    fuzzifier: f64,
    params: &EcmParams,
) -> Result<FcmResult> {
    check(points, c, params)?;
    if !(fuzzifier > 1.0) || !fuzzifier.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "fuzzifier must be > 1, got {fuzzifier}"
        )));
    }
    best_of(
        params.restarts,
        |r| fcm_once(points, c, fuzzifier, params, r),
        |r| r.objective,
    )
}

fn best_of<T>(
    restarts: usize,
    mut run: impl FnMut(usize) -> Result<T>,
    score: impl Fn(&T) -> f64,
) -> Result<T> {
    let mut best: Option<T> = None;
    let mut last_err = None;
    for r in 0..restarts {
        match run(r) {
            Ok(res) => {
                if best.as_ref().is_none_or(|b| score(&res) < score(b)) {
                    best = Some(res);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.expect("restarts >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn blobs() -> DMatrix<f64> {
        DMatrix::from_column_slice(8, 1, &[-5.2, -5.0, -4.9, -4.7, 4.8, 5.0, 5.1, 5.3])
    }

    #[test]
    fn cm_two_blobs() {
        let r = baseline_cm(&blobs(), 2, &EcmParams::default()).unwrap();
        assert!(r.labels[..4].iter().all(|&l| l == r.labels[0]));
        assert!(r.labels[4..].iter().all(|&l| l == r.labels[4]));
        assert_ne!(r.labels[0], r.labels[4]);
    }

    #[test]
    fn cm_duplicates_share_labels() {
        let x = DMatrix::from_column_slice(6, 1, &[0.0, 0.0, 1.0, 1.0, 9.0, 9.0]);
        let r = baseline_cm(&x, 3, &EcmParams::default()).unwrap();
        assert_eq!(r.labels[0], r.labels[1]);
        assert_eq!(r.labels[2], r.labels[3]);
        assert_eq!(r.labels[4], r.labels[5]);
        assert_eq!(r.objective, 0.0);
    }

    #[test]
    fn fcm_rows_sum_to_one_and_blobs() {
        let r = baseline_fcm(&blobs(), 2, 2.0, &EcmParams::default()).unwrap();
        for row in r.memberships.row_iter() {
            assert_abs_diff_eq!(row.sum(), 1.0, epsilon = 1e-12);
        }
        let l = r.labels();
        assert!(l[..4].iter().all(|&x| x == l[0]));
        assert_ne!(l[0], l[4]);
    }

    #[test]
    fn fcm_equidistant_point_is_half() {
        let centers = DMatrix::from_column_slice(2, 1, &[-1.0, 1.0]);
        let u = fcm_memberships(&DMatrix::from_column_slice(1, 1, &[0.0]), &centers, 2.0);
        assert_eq!(u.row(0).iter().copied().collect::<Vec<_>>(), vec![0.5, 0.5]);
    }

    #[test]
    fn threshold_definition() {
        let u = DMatrix::from_row_slice(1, 3, &[0.6, 0.3, 0.1]);
        assert_eq!(threshold_sets(&u, 0.25), vec![vec![0, 1]]);
    }

    #[test]
    fn fcm_rejects_bad_fuzzifier() {
        assert!(baseline_fcm(&blobs(), 2, 1.0, &EcmParams::default()).is_err());
    }
}
