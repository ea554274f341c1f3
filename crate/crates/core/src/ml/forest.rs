//! Random forest of Gini decision trees.
//!
//! Each tree sees a bootstrap sample and, at every split, a random subset
//! of the features. Trees are stored as flat node arrays: children are
//! indices into the same array, which keeps serialization depth constant.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{FeatureMatrix, Row, DIM};
use crate::{rng, Error, Result};

pub const FOREST_FORMAT: &str = "g2ml-forest/1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// Features examined per split.
    pub max_features: usize,
    pub min_leaf: usize,
    pub bootstrap: bool,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig { n_trees: 200, max_features: 2, min_leaf: 1, bootstrap: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Node {
    Leaf {
        class: usize,
    },
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn predict(&self, x: &Row) -> usize {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { class } => return class,
                Node::Split { feature, threshold, left, right } => {
                    i = if x[feature] <= threshold { left } else { right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(t: &Tree, i: usize) -> usize {
            match t.nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(t, left).max(go(t, right)),
            }
        }
        go(self, 0)
    }
}

fn gini_sum(counts: &[usize], n: usize) -> f64 {
    // n * gini = n - sum c^2 / n
    if n == 0 {
        return 0.0;
    }
    let sq: f64 = counts.iter().map(|&c| (c * c) as f64).sum();
    n as f64 - sq / n as f64
}

fn majority(counts: &[usize]) -> usize {
    let mut best = 0;
    for c in 1..counts.len() {
        if counts[c] > counts[best] {
            best = c;
        }
    }
    best
}

struct Builder<'a, R: Rng> {
    rows: &'a [Row],
    labels: &'a [usize],
    n_classes: usize,
    cfg: &'a ForestConfig,
    rng: R,
    nodes: Vec<Node>,
}

struct Best {
    feature: usize,
    threshold: f64,
    score: f64,
    pos: usize,
}

impl<R: Rng> Builder<'_, R> {
    fn counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut c = vec![0; self.n_classes];
        for &i in idx {
            c[self.labels[i]] += 1;
        }
        c
    }

    /// Best threshold on one feature, with `idx` sorted by that feature.
    fn scan(&self, idx: &[usize], feature: usize, total: &[usize], best: &mut Option<Best>) {
        let n = idx.len();
        let mut left = vec![0usize; self.n_classes];
        let mut right = total.to_vec();
        for pos in 1..n {
            let c = self.labels[idx[pos - 1]];
            left[c] += 1;
            right[c] -= 1;
            let a = self.rows[idx[pos - 1]][feature];
            let b = self.rows[idx[pos]][feature];
            if a == b || pos < self.cfg.min_leaf || n - pos < self.cfg.min_leaf {
                continue;
            }
            let score = gini_sum(&left, pos) + gini_sum(&right, n - pos);
            if best.as_ref().is_none_or(|bb| score < bb.score) {
                let mut threshold = a + (b - a) / 2.0;
                if !(threshold >= a && threshold < b) {
                    threshold = a;
                }
                *best = Some(Best { feature, threshold, score, pos });
            }
        }
    }

    fn build(&mut self, idx: &mut [usize]) -> usize {
        let id = self.nodes.len();
        let total = self.counts(idx);
        let n = idx.len();
        self.nodes.push(Node::Leaf { class: majority(&total) });
        let pure = total.iter().filter(|&&c| c > 0).count() <= 1;
        if pure || n < 2 * self.cfg.min_leaf {
            return id;
        }
        let parent = gini_sum(&total, n);
        let mut features: [usize; DIM] = core::array::from_fn(|i| i);
        features.shuffle(&mut self.rng);
        let mut best: Option<Best> = None;
        let mut informative = 0;
        // constant features do not count towards the budget
        for &f in &features {
            if informative >= self.cfg.max_features {
                break;
            }
            idx.sort_by(|&a, &b| self.rows[a][f].total_cmp(&self.rows[b][f]).then(a.cmp(&b)));
            if self.rows[idx[0]][f] == self.rows[idx[n - 1]][f] {
                continue;
            }
            informative += 1;
            self.scan(idx, f, &total, &mut best);
        }
        let Some(b) = best else { return id };
        if b.score >= parent {
            return id;
        }
        idx.sort_by(|&x, &y| self.rows[x][b.feature].total_cmp(&self.rows[y][b.feature]).then(x.cmp(&y)));
        let (l, r) = idx.split_at_mut(b.pos);
        let left = self.build(l);
        let right = self.build(r);
        self.nodes[id] = Node::Split { feature: b.feature, threshold: b.threshold, left, right };
        id
    }
}

/// Fits tree number `index` of a forest seeded by `seed`.
pub fn fit_tree(train: &FeatureMatrix, n_classes: usize, cfg: &ForestConfig, seed: u64, index: u64) -> Result<Tree> {
    let labels = train.labels()?;
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let mut rng = rng::stream(seed, index);
    let n = train.len();
    let mut idx: Vec<usize> = if cfg.bootstrap { (0..n).map(|_| rng.gen_range(0..n)).collect() } else { (0..n).collect() };
    let mut b = Builder { rows: &train.rows, labels, n_classes, cfg, rng, nodes: Vec::new() };
    b.build(&mut idx);
    Ok(Tree { nodes: b.nodes })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub format: alloc::string::String,
    pub n_classes: usize,
    pub config: ForestConfig,
    pub seed: u64,
    pub trees: Vec<Tree>,
}

impl RandomForest {
    pub fn from_trees(n_classes: usize, config: ForestConfig, seed: u64, trees: Vec<Tree>) -> Self {
        RandomForest { format: FOREST_FORMAT.into(), n_classes, config, seed, trees }
    }

    pub fn check_config(train: &FeatureMatrix, cfg: &ForestConfig) -> Result<()> {
        if cfg.n_trees == 0 {
            return Err(Error::InvalidArgument("forest needs at least one tree".into()));
        }
        if cfg.max_features == 0 || cfg.max_features > DIM || cfg.min_leaf == 0 {
            return Err(Error::InvalidArgument("invalid tree settings".into()));
        }
        if train.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        train.labels().map(|_| ())
    }

    pub fn train(train: &FeatureMatrix, cfg: &ForestConfig, seed: u64) -> Result<Self> {
        Self::check_config(train, cfg)?;
        let k = train.n_classes();
        let trees = (0..cfg.n_trees as u64).map(|i| fit_tree(train, k, cfg, seed, i)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_trees(k, *cfg, seed, trees))
    }

    /// Majority vote over trees, ties to the lowest class index.
    pub fn predict_row(&self, x: &Row) -> usize {
        let mut votes = vec![0usize; self.n_classes];
        for t in &self.trees {
            votes[t.predict(x)] += 1;
        }
        majority(&votes)
    }

    pub fn predict(&self, rows: &[Row]) -> Vec<usize> {
        rows.iter().map(|r| self.predict_row(r)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fm(rows: Vec<Row>, labels: Vec<usize>) -> FeatureMatrix {
        FeatureMatrix::new(rows, Some(labels)).unwrap()
    }

    #[test]
    fn single_class() {
        let t = fm(vec![[1.0, 2.0, 3.0, 4.0], [0.0; 4], [5.0; 4]], vec![2, 2, 2]);
        let f = RandomForest::train(&t, &ForestConfig { n_trees: 5, ..Default::default() }, 1).unwrap();
        assert_eq!(f.predict(&[[9.0; 4], [-1.0; 4]]), vec![2, 2]);
    }

    #[test]
    fn separable_data_fits_exactly() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..60 {
            let x = i as f64;
            rows.push([x, (x * 7.0) % 5.0, 1.0, -x]);
            labels.push(if (i / 10) % 2 == 0 { 0 } else { 1 });
        }
        let t = fm(rows.clone(), labels.clone());
        let cfg = ForestConfig { n_trees: 1, bootstrap: false, max_features: DIM, ..Default::default() };
        let f = RandomForest::train(&t, &cfg, 3).unwrap();
        assert_eq!(f.predict(&rows), labels);
        assert!(f.trees[0].depth() >= 5);
    }

    #[test]
    fn deterministic_and_errors() {
        let rows: Vec<Row> = (0..40).map(|i| [i as f64, (i % 3) as f64, 0.0, 1.0]).collect();
        let labels: Vec<usize> = (0..40).map(|i| usize::from(i % 3 == 0)).collect();
        let t = fm(rows, labels);
        let cfg = ForestConfig { n_trees: 10, ..Default::default() };
        assert_eq!(RandomForest::train(&t, &cfg, 9).unwrap(), RandomForest::train(&t, &cfg, 9).unwrap());
        let empty = fm(vec![], vec![]);
        assert_eq!(RandomForest::train(&empty, &cfg, 0).unwrap_err(), Error::EmptyTrainingSet);
        assert!(RandomForest::train(&t, &ForestConfig { n_trees: 0, ..cfg }, 0).is_err());
    }
}
