//! Preprocessing, classifiers, clusterers and metrics over four-column
//! feature rows `(J2, J4, J6, J10)`.
//!
//! Every model is deterministic for a fixed seed. Randomness for tree `i`
//! or restart `i` comes from stream `i` of the seed, so callers can fit the
//! pieces on any number of threads and assemble identical models.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::{rng, Error, Result};

pub mod cluster;
pub mod forest;
pub mod knn;
pub mod metrics;

pub use cluster::{gmm_cluster, kmeans_cluster, GmmConfig, GmmModel, KMeansConfig, KMeansModel};
pub use forest::{ForestConfig, RandomForest, Tree};
pub use knn::{knn_predict, Metric};
pub use metrics::{adjusted_rand_index, evaluate, hungarian_match, matched_accuracy, ConfusionMatrix, MetricsReport};

pub const DIM: usize = 4;
pub type Row = [f64; DIM];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowNorm {
    UnitEuclidean,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub rows: Vec<Row>,
    pub labels: Option<Vec<usize>>,
    pub row_norm: RowNorm,
}

impl FeatureMatrix {
    pub fn new(rows: Vec<Row>, labels: Option<Vec<usize>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != rows.len() {
                return Err(Error::LengthMismatch { left: rows.len(), right: l.len() });
            }
        }
        Ok(FeatureMatrix { rows, labels, row_norm: RowNorm::None })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn labels(&self) -> Result<&[usize]> {
        self.labels.as_deref().ok_or_else(|| Error::InvalidArgument("feature matrix has no labels".into()))
    }

    pub fn n_classes(&self) -> usize {
        self.labels.as_ref().and_then(|l| l.iter().max()).map_or(0, |m| m + 1)
    }

    /// Rows (and labels) at the given indices.
    pub fn select(&self, idx: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            rows: idx.iter().map(|&i| self.rows[i]).collect(),
            labels: self.labels.as_ref().map(|l| idx.iter().map(|&i| l[i]).collect()),
            row_norm: self.row_norm,
        }
    }
}

pub fn euclidean_norm(r: &Row) -> f64 {
    libm::sqrt(r.iter().map(|x| x * x).sum())
}

/// Divides each row by its Euclidean norm.
pub fn normalize_rows(rows: &[Row]) -> Result<Vec<Row>> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let scale = r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if scale == 0.0 || !scale.is_finite() {
                return Err(Error::ZeroRow(i));
            }
            let s = r.map(|x| x / scale);
            let n = euclidean_norm(&s);
            Ok(s.map(|x| x / n))
        })
        .collect()
}

impl FeatureMatrix {
    pub fn normalized(&self) -> Result<FeatureMatrix> {
        Ok(FeatureMatrix { rows: normalize_rows(&self.rows)?, labels: self.labels.clone(), row_norm: RowNorm::UnitEuclidean })
    }
}

/// Stratified split: for each class, a seeded shuffle puts
/// `round(fraction * n_c)` (clamped to `1..n_c`) rows in the test part.
/// Returns sorted `(train, test)` index lists.
pub fn train_test_split_indices(labels: &[usize], fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidArgument("split fraction must lie in (0, 1)".into()));
    }
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut by_class: Vec<Vec<usize>> = alloc::vec![Vec::new(); k];
    for (i, &c) in labels.iter().enumerate() {
        by_class[c].push(i);
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (c, mut idx) in by_class.into_iter().enumerate() {
        if idx.is_empty() {
            continue;
        }
        if idx.len() < 2 {
            return Err(Error::ClassTooSmall { class: c });
        }
        let n = idx.len();
        let n_test = (libm::round(fraction * n as f64) as usize).clamp(1, n - 1);
        idx.shuffle(&mut rng::stream(seed, c as u64));
        test.extend_from_slice(&idx[..n_test]);
        train.extend_from_slice(&idx[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

pub fn train_test_split(x: &FeatureMatrix, fraction: f64, seed: u64) -> Result<(FeatureMatrix, FeatureMatrix)> {
    let (train, test) = train_test_split_indices(x.labels()?, fraction, seed)?;
    Ok((x.select(&train), x.select(&test)))
}
