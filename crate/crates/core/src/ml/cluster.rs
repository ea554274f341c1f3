//! k-means (k-means++ seeding, Lloyd iterations) and a spherical Gaussian
//! mixture fitted by EM.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Row, DIM};
use crate::{rng, Error, Result};

fn sq_dist(a: &Row, b: &Row) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest_center(x: &Row, centers: &[Row]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centers.iter().enumerate() {
        let d = sq_dist(x, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub k: usize,
    pub restarts: usize,
    pub max_iter: usize,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig { k: 4, restarts: 10, max_iter: 300 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansModel {
    pub centroids: Vec<Row>,
    /// Within-cluster sum of squares.
    pub wcss: f64,
    pub iterations: usize,
}

impl KMeansModel {
    pub fn predict(&self, rows: &[Row]) -> Vec<usize> {
        rows.iter().map(|x| nearest_center(x, &self.centroids).0).collect()
    }
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > n {
        return Err(Error::InvalidArgument(alloc::format!("k = {k} exceeds {n} points")));
    }
    Ok(())
}

fn plus_plus<R: Rng>(x: &[Row], k: usize, rng: &mut R) -> Vec<Row> {
    let n = x.len();
    let mut centers = vec![x[rng.gen_range(0..n)]];
    let mut d2: Vec<f64> = x.iter().map(|p| sq_dist(p, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut r = rng.gen::<f64>() * total;
            let mut pick = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                if r < d {
                    pick = i;
                    break;
                }
                r -= d;
            }
            pick
        } else {
            rng.gen_range(0..n)
        };
        centers.push(x[pick]);
        for (d, p) in d2.iter_mut().zip(x) {
            *d = d.min(sq_dist(p, &x[pick]));
        }
    }
    centers
}

/// One seeded k-means run (restart number `restart`).
pub fn kmeans_run(x: &[Row], k: usize, max_iter: usize, seed: u64, restart: u64) -> Result<KMeansModel> {
    check_k(x.len(), k)?;
    let mut rng = rng::stream(seed, restart);
    let mut centers = plus_plus(x, k, &mut rng);
    let mut assign = vec![usize::MAX; x.len()];
    let mut iterations = 0;
    for _ in 0..max_iter.max(1) {
        iterations += 1;
        let mut changed = false;
        for (a, p) in assign.iter_mut().zip(x) {
            let j = nearest_center(p, &centers).0;
            if *a != j {
                *a = j;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![[0.0; DIM]; k];
        let mut counts = vec![0usize; k];
        for (&a, p) in assign.iter().zip(x) {
            counts[a] += 1;
            for d in 0..DIM {
                sums[a][d] += p[d];
            }
        }
        for j in 0..k {
            if counts[j] > 0 {
                centers[j] = sums[j].map(|s| s / counts[j] as f64);
            } else {
                // an empty cluster takes over the point farthest from its center
                let far = (0..x.len())
                    .max_by(|&a, &b| sq_dist(&x[a], &centers[assign[a]]).total_cmp(&sq_dist(&x[b], &centers[assign[b]])))
                    .expect("nonempty input");
                centers[j] = x[far];
                assign[far] = j;
            }
        }
    }
    let wcss = x.iter().map(|p| nearest_center(p, &centers).1).sum();
    Ok(KMeansModel { centroids: centers, wcss, iterations })
}

/// Lowest WCSS among runs; ties go to the earlier run.
pub fn best_run(runs: Vec<KMeansModel>) -> KMeansModel {
    let mut best: Option<KMeansModel> = None;
    for r in runs {
        if best.as_ref().is_none_or(|b| r.wcss < b.wcss) {
            best = Some(r);
        }
    }
    best.expect("at least one run")
}

pub fn kmeans_fit(x: &[Row], cfg: &KMeansConfig, seed: u64) -> Result<KMeansModel> {
    check_k(x.len(), cfg.k)?;
    let runs =
        (0..cfg.restarts.max(1) as u64).map(|r| kmeans_run(x, cfg.k, cfg.max_iter, seed, r)).collect::<Result<Vec<_>>>()?;
    Ok(best_run(runs))
}

pub fn kmeans_cluster(x: &[Row], k: usize, seed: u64, restarts: usize) -> Result<Vec<usize>> {
    let m = kmeans_fit(x, &KMeansConfig { k, restarts, ..Default::default() }, seed)?;
    Ok(m.predict(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GmmConfig {
    pub k: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub var_floor: f64,
    /// Restarts of the k-means initialization.
    pub init_restarts: usize,
}

impl Default for GmmConfig {
    fn default() -> Self {
        GmmConfig { k: 4, max_iter: 500, tol: 1e-8, var_floor: 1e-10, init_restarts: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GmmModel {
    pub means: Vec<Row>,
    /// One variance per component, shared by all coordinates.
    pub variances: Vec<f64>,
    pub weights: Vec<f64>,
    /// Mean log-likelihood per point at the last iteration.
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
}

const LN_2PI: f64 = 1.837_877_066_409_345_5;

impl GmmModel {
    fn log_joint(&self, x: &Row, out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate() {
            let v = self.variances[j];
            *o = libm::log(self.weights[j]) - 0.5 * DIM as f64 * (LN_2PI + libm::log(v)) - 0.5 * sq_dist(x, &self.means[j]) / v;
        }
    }

    /// Component of maximum posterior; ties to the lower index.
    pub fn predict(&self, rows: &[Row]) -> Vec<usize> {
        let mut lj = vec![0.0; self.means.len()];
        rows.iter()
            .map(|x| {
                self.log_joint(x, &mut lj);
                let mut best = 0;
                for j in 1..lj.len() {
                    if lj[j] > lj[best] {
                        best = j;
                    }
                }
                best
            })
            .collect()
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + libm::log(v.iter().map(|x| libm::exp(x - m)).sum::<f64>())
}

/// EM from a given k-means start.
pub fn gmm_from_kmeans(x: &[Row], init: &KMeansModel, cfg: &GmmConfig) -> Result<GmmModel> {
    let n = x.len();
    let k = init.centroids.len();
    check_k(n, k)?;
    let assign = init.predict(x);
    let mut model = GmmModel {
        means: init.centroids.clone(),
        variances: vec![0.0; k],
        weights: vec![0.0; k],
        log_likelihood: f64::NEG_INFINITY,
        iterations: 0,
        converged: false,
    };
    let mut counts = vec![0usize; k];
    for (&a, p) in assign.iter().zip(x) {
        counts[a] += 1;
        model.variances[a] += sq_dist(p, &init.centroids[a]);
    }
    for j in 0..k {
        model.weights[j] = counts[j].max(1) as f64 / n as f64;
        model.variances[j] = (model.variances[j] / (DIM * counts[j].max(1)) as f64).max(cfg.var_floor);
    }
    let wsum: f64 = model.weights.iter().sum();
    model.weights.iter_mut().for_each(|w| *w /= wsum);

    let mut resp = vec![0.0f64; n * k];
    let mut lj = vec![0.0; k];
    for it in 0..cfg.max_iter.max(1) {
        // E step
        let mut ll = 0.0;
        for (i, p) in x.iter().enumerate() {
            model.log_joint(p, &mut lj);
            let lse = log_sum_exp(&lj);
            ll += lse;
            for j in 0..k {
                resp[i * k + j] = libm::exp(lj[j] - lse);
            }
        }
        ll /= n as f64;
        model.iterations = it + 1;
        let improved = ll - model.log_likelihood;
        model.log_likelihood = ll;
        if it > 0 && improved.abs() < cfg.tol {
            model.converged = true;
            break;
        }
        // M step
        for j in 0..k {
            let nk: f64 = (0..n).map(|i| resp[i * k + j]).sum::<f64>() + 10.0 * f64::EPSILON;
            let mut mean = [0.0; DIM];
            for (i, p) in x.iter().enumerate() {
                let r = resp[i * k + j];
                for d in 0..DIM {
                    mean[d] += r * p[d];
                }
            }
            let mean = mean.map(|m| m / nk);
            let ss: f64 = x.iter().enumerate().map(|(i, p)| resp[i * k + j] * sq_dist(p, &mean)).sum();
            model.means[j] = mean;
            model.variances[j] = (ss / (nk * DIM as f64)).max(cfg.var_floor);
            model.weights[j] = nk / n as f64;
        }
        let wsum: f64 = model.weights.iter().sum();
        model.weights.iter_mut().for_each(|w| *w /= wsum);
    }
    Ok(model)
}

pub fn gmm_fit(x: &[Row], cfg: &GmmConfig, seed: u64) -> Result<GmmModel> {
    let init = kmeans_fit(x, &KMeansConfig { k: cfg.k, restarts: cfg.init_restarts, ..Default::default() }, seed)?;
    gmm_from_kmeans(x, &init, cfg)
}

pub fn gmm_cluster(x: &[Row], k: usize, seed: u64) -> Result<Vec<usize>> {
    let m = gmm_fit(x, &GmmConfig { k, ..Default::default() }, seed)?;
    Ok(m.predict(x))
}
