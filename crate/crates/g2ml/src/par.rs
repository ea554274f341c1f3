//! Rayon drivers over the core kernels. Each produces exactly what the
//! sequential core function produces, for any number of workers.

use g2ml_core::dataset::{add_l5, draw_limit, draw_record, fill_quota, Dataset, GenConfig, Metadata, Provenance};
use g2ml_core::enumerate::{enumerate_slab, finish_enumeration, scan_l2_slab, Enumeration, HeightBox};
use g2ml_core::ml::cluster::{best_run, gmm_from_kmeans, kmeans_run};
use g2ml_core::ml::forest::fit_tree;
use g2ml_core::ml::knn::knn_predict_row;
use g2ml_core::ml::{FeatureMatrix, ForestConfig, GmmConfig, GmmModel, KMeansConfig, KMeansModel, Metric, RandomForest, Row};
use g2ml_core::{Error as CoreError, Rational};
use rayon::prelude::*;

use crate::Result;

/// Runs `f` on a pool of `threads` workers (0 means one per core).
pub fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| crate::Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn slabs(hb: &HeightBox) -> Vec<(i64, i64)> {
    hb.range(0).flat_map(|a| hb.range(1).map(move |b| (a, b))).collect()
}

pub fn enumerate_par(h: &Rational, strict: bool, budget: u128) -> Result<Enumeration> {
    let hb = HeightBox::new(h, strict)?;
    hb.check_budget(hb.candidates(), budget)?;
    let all: Vec<[i64; 4]> = slabs(&hb).into_par_iter().flat_map_iter(|(a, b)| enumerate_slab(&hb, a, b)).collect();
    Ok(finish_enumeration(&hb, all))
}

pub fn scan_l2_par(h: &Rational, strict: bool, budget: u128) -> Result<Enumeration> {
    let hb = HeightBox::new(h, strict)?;
    hb.check_budget(hb.triples(), budget)?;
    let all: Vec<[i64; 4]> = slabs(&hb).into_par_iter().flat_map_iter(|(a, b)| scan_l2_slab(&hb, a, b)).collect();
    Ok(finish_enumeration(&hb, all))
}

/// Same dataset as [`g2ml_core::dataset::generate`]: draws are evaluated in
/// parallel batches and consumed in index order.
pub fn generate_par(cfg: &GenConfig, seed: u64) -> Result<Dataset> {
    let mut d = Dataset::new(Metadata::new(Some(seed)));
    for kind in [Provenance::L3Param, Provenance::L2Param, Provenance::Random] {
        let quota = cfg.quota(kind);
        let limit = draw_limit(quota);
        let mut added = 0;
        let mut index = 0u64;
        while added < quota {
            if index >= limit {
                return Err(CoreError::RetriesExhausted(index as usize).into());
            }
            let batch = ((quota - added) as u64).max(64).min(limit - index);
            let draws: Vec<_> = (index..index + batch).into_par_iter().map(|i| draw_record(kind, cfg, seed, i)).collect();
            for rec in draws {
                if added >= quota {
                    break;
                }
                index += 1;
                fill_quota(&mut d, quota, &mut added, [rec?])?;
            }
        }
    }
    add_l5(&mut d, cfg, seed)?;
    Ok(d)
}

/// Trees fitted in parallel; equal to [`RandomForest::train`].
pub fn forest_par(train: &FeatureMatrix, cfg: &ForestConfig, seed: u64) -> Result<RandomForest> {
    RandomForest::check_config(train, cfg)?;
    let k = train.n_classes();
    let trees = (0..cfg.n_trees as u64)
        .into_par_iter()
        .map(|i| fit_tree(train, k, cfg, seed, i))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(RandomForest::from_trees(k, *cfg, seed, trees))
}

pub fn forest_predict_par(model: &RandomForest, rows: &[Row]) -> Vec<usize> {
    rows.par_iter().map(|r| model.predict_row(r)).collect()
}

pub fn knn_par(train: &FeatureMatrix, queries: &[Row], k: usize, metric: Metric) -> Result<Vec<usize>> {
    Ok(queries.par_iter().map(|q| knn_predict_row(train, q, k, metric)).collect::<std::result::Result<Vec<_>, _>>()?)
}

/// Restarts in parallel; equal to [`g2ml_core::ml::cluster::kmeans_fit`].
pub fn kmeans_par(x: &[Row], cfg: &KMeansConfig, seed: u64) -> Result<KMeansModel> {
    if cfg.k == 0 || cfg.k > x.len() {
        return Err(CoreError::InvalidArgument(format!("k = {} is not in 1..={}", cfg.k, x.len())).into());
    }
    let runs = (0..cfg.restarts.max(1) as u64)
        .into_par_iter()
        .map(|r| kmeans_run(x, cfg.k, cfg.max_iter, seed, r))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(best_run(runs))
}

/// Equal to [`g2ml_core::ml::cluster::gmm_fit`].
pub fn gmm_par(x: &[Row], cfg: &GmmConfig, seed: u64) -> Result<GmmModel> {
    let init = kmeans_par(x, &KMeansConfig { k: cfg.k, restarts: cfg.init_restarts, ..Default::default() }, seed)?;
    Ok(gmm_from_kmeans(x, &init, cfg)?)
}
