//! k-nearest-neighbour classification.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{FeatureMatrix, Row};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Manhattan,
    Euclidean,
}

impl Metric {
    pub fn distance(self, a: &Row, b: &Row) -> f64 {
        match self {
            Metric::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            Metric::Euclidean => libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()),
        }
    }
}

impl core::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "manhattan" => Ok(Metric::Manhattan),
            "euclidean" => Ok(Metric::Euclidean),
            _ => Err(Error::InvalidArgument(alloc::format!("unknown metric {s:?}"))),
        }
    }
}

fn check(train: &FeatureMatrix, k: usize) -> Result<&[usize]> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if k == 0 || k > train.len() {
        return Err(Error::InvalidArgument(alloc::format!("k = {k} with {} training rows", train.len())));
    }
    train.labels()
}

/// The `k` nearest training rows as `(distance, index)`, nearest first;
/// equal distances keep the lower index.
pub fn nearest(train: &[Row], q: &Row, k: usize, metric: Metric) -> Vec<(f64, usize)> {
    let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
    for (i, r) in train.iter().enumerate() {
        let d = metric.distance(q, r);
        if best.len() == k && d >= best[k - 1].0 {
            continue;
        }
        let pos = best.partition_point(|&(bd, _)| bd <= d);
        best.insert(pos, (d, i));
        best.truncate(k);
    }
    best
}

/// Majority vote; ties go to the smallest summed distance, then the lowest
/// class index.
pub fn vote(neigh: &[(f64, usize)], labels: &[usize], n_classes: usize) -> usize {
    let mut count = vec![0usize; n_classes];
    let mut dist = vec![0.0f64; n_classes];
    for &(d, i) in neigh {
        count[labels[i]] += 1;
        dist[labels[i]] += d;
    }
    let mut best = 0;
    for c in 1..n_classes {
        if count[c] > count[best] || (count[c] == count[best] && dist[c] < dist[best]) {
            best = c;
        }
    }
    best
}

pub fn knn_predict_row(train: &FeatureMatrix, q: &Row, k: usize, metric: Metric) -> Result<usize> {
    let labels = check(train, k)?;
    Ok(vote(&nearest(&train.rows, q, k, metric), labels, train.n_classes()))
}

pub fn knn_predict(train: &FeatureMatrix, queries: &[Row], k: usize, metric: Metric) -> Result<Vec<usize>> {
    let labels = check(train, k)?;
    let n_classes = train.n_classes();
    Ok(queries.iter().map(|q| vote(&nearest(&train.rows, q, k, metric), labels, n_classes)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fm(rows: Vec<Row>, labels: Vec<usize>) -> FeatureMatrix {
        FeatureMatrix::new(rows, Some(labels)).unwrap()
    }

    #[test]
    fn manhattan_distance() {
        assert_eq!(Metric::Manhattan.distance(&[0.0; 4], &[1.0, 2.0, 3.0, 4.0]), 10.0);
        assert_eq!(Metric::Euclidean.distance(&[0.0; 4], &[3.0, 4.0, 0.0, 0.0]), 5.0);
    }

    #[test]
    fn exact_match_k1() {
        let t = fm(vec![[0.0; 4], [1.0, 0.0, 0.0, 0.0], [5.0; 4]], vec![0, 1, 2]);
        assert_eq!(knn_predict(&t, &[[1.0, 0.0, 0.0, 0.0]], 1, Metric::Manhattan).unwrap(), vec![1]);
    }

    #[test]
    fn tie_goes_to_closer_class_then_lower_index() {
        let t = fm(vec![[1.0, 0.0, 0.0, 0.0], [-3.0, 0.0, 0.0, 0.0]], vec![1, 0]);
        assert_eq!(knn_predict(&t, &[[0.0; 4]], 2, Metric::Manhattan).unwrap(), vec![1]);
        let t = fm(vec![[1.0, 0.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0]], vec![1, 0]);
        assert_eq!(knn_predict(&t, &[[0.0; 4]], 2, Metric::Manhattan).unwrap(), vec![0]);
    }

    #[test]
    fn errors() {
        let empty = fm(vec![], vec![]);
        assert_eq!(knn_predict(&empty, &[[0.0; 4]], 1, Metric::Manhattan).unwrap_err(), Error::EmptyTrainingSet);
        let t = fm(vec![[0.0; 4]], vec![0]);
        assert!(knn_predict(&t, &[[0.0; 4]], 2, Metric::Manhattan).is_err());
    }

    proptest! {
        #[test]
        fn far_duplicates_of_majority_do_not_change_prediction(
            pts in prop::collection::vec((prop::array::uniform4(-10.0f64..10.0), 0usize..3), 5..30),
            q in prop::array::uniform4(-10.0f64..10.0),
        ) {
            let rows: Vec<Row> = pts.iter().map(|p| p.0).collect();
            let labels: Vec<usize> = pts.iter().map(|p| p.1).collect();
            let t = fm(rows.clone(), labels.clone());
            let pred = knn_predict(&t, &[q], 5, Metric::Manhattan).unwrap()[0];
            let mut rows2 = rows;
            let mut labels2 = labels;
            for _ in 0..3 {
                rows2.push(q.map(|x| x + 1000.0));
                labels2.push(pred);
            }
            let t2 = fm(rows2, labels2);
            prop_assert_eq!(knn_predict(&t2, &[q], 5, Metric::Manhattan).unwrap()[0], pred);
        }
    }
}
