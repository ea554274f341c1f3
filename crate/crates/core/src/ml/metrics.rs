//! Confusion matrices, classification reports, the adjusted Rand index and
//! optimal cluster-to-class matching.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `counts[t][p]`: rows are true classes, columns predicted classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        let k = counts.len();
        if counts.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidArgument("confusion matrix must be square".into()));
        }
        Ok(ConfusionMatrix { counts })
    }

    pub fn from_predictions(pred: &[usize], truth: &[usize], k: usize) -> Result<Self> {
        if pred.len() != truth.len() {
            return Err(Error::LengthMismatch { left: pred.len(), right: truth.len() });
        }
        let k = pred.iter().chain(truth).map(|&c| c + 1).max().unwrap_or(0).max(k);
        let mut counts = vec![vec![0u64; k]; k];
        for (&p, &t) in pred.iter().zip(truth) {
            counts[t][p] += 1;
        }
        Ok(ConfusionMatrix { counts })
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.k()).map(|i| self.counts[i][i]).sum()
    }

    pub fn accuracy(&self) -> f64 {
        let t = self.total();
        if t == 0 {
            0.0
        } else {
            self.trace() as f64 / t as f64
        }
    }

    pub fn report(&self) -> MetricsReport {
        MetricsReport::from_confusion(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    pub macro_avg: ClassMetrics,
    pub weighted_avg: ClassMetrics,
    pub total: u64,
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

pub fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

impl MetricsReport {
    pub fn from_confusion(cm: &ConfusionMatrix) -> Self {
        let k = cm.k();
        let total = cm.total();
        let per_class: Vec<ClassMetrics> = (0..k)
            .map(|c| {
                let tp = cm.counts[c][c];
                let predicted: u64 = (0..k).map(|t| cm.counts[t][c]).sum();
                let support: u64 = cm.counts[c].iter().sum();
                let precision = ratio(tp, predicted);
                let recall = ratio(tp, support);
                ClassMetrics { precision, recall, f1: f1(precision, recall), support }
            })
            .collect();
        let avg = |w: &dyn Fn(&ClassMetrics) -> f64| {
            let s: f64 = per_class.iter().map(w).sum();
            s
        };
        let kf = k.max(1) as f64;
        let macro_avg = ClassMetrics {
            precision: avg(&|m| m.precision) / kf,
            recall: avg(&|m| m.recall) / kf,
            f1: avg(&|m| m.f1) / kf,
            support: total,
        };
        let tf = total.max(1) as f64;
        let weighted_avg = ClassMetrics {
            precision: avg(&|m| m.precision * m.support as f64) / tf,
            recall: avg(&|m| m.recall * m.support as f64) / tf,
            f1: avg(&|m| m.f1 * m.support as f64) / tf,
            support: total,
        };
        MetricsReport { accuracy: cm.accuracy(), per_class, macro_avg, weighted_avg, total }
    }

    /// Aligned text table: one row per class, then accuracy and averages.
    pub fn to_table(&self, names: &[&str]) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<14}{:>10}{:>10}{:>10}{:>10}", "class", "precision", "recall", "f1-score", "support");
        for (i, m) in self.per_class.iter().enumerate() {
            let name = names.get(i).copied().map(String::from).unwrap_or_else(|| alloc::format!("{}", i + 1));
            let _ = writeln!(s, "{:<14}{:>10.2}{:>10.2}{:>10.2}{:>10}", name, m.precision, m.recall, m.f1, m.support);
        }
        let _ = writeln!(s, "{:<14}{:>30.2}{:>10}", "accuracy", self.accuracy, self.total);
        for (name, m) in [("macro avg", &self.macro_avg), ("weighted avg", &self.weighted_avg)] {
            let _ = writeln!(s, "{:<14}{:>10.2}{:>10.2}{:>10.2}{:>10}", name, m.precision, m.recall, m.f1, m.support);
        }
        s
    }
}

pub fn evaluate(pred: &[usize], truth: &[usize]) -> Result<(ConfusionMatrix, MetricsReport)> {
    let cm = ConfusionMatrix::from_predictions(pred, truth, 0)?;
    let report = cm.report();
    Ok((cm, report))
}

fn comb2(n: u64) -> u128 {
    let n = n as u128;
    n * n.saturating_sub(1) / 2
}

/// Contingency table between two labelings, as `(rows, cols, counts)`.
fn contingency(a: &[usize], b: &[usize]) -> (Vec<usize>, Vec<usize>, Vec<Vec<u64>>) {
    let mut ra: BTreeMap<usize, usize> = BTreeMap::new();
    let mut rb: BTreeMap<usize, usize> = BTreeMap::new();
    for &x in a {
        let n = ra.len();
        ra.entry(x).or_insert(n);
    }
    for &y in b {
        let n = rb.len();
        rb.entry(y).or_insert(n);
    }
    let mut t = vec![vec![0u64; rb.len()]; ra.len()];
    for (x, y) in a.iter().zip(b) {
        t[ra[x]][rb[y]] += 1;
    }
    let mut la = vec![0; ra.len()];
    for (&label, &i) in &ra {
        la[i] = label;
    }
    let mut lb = vec![0; rb.len()];
    for (&label, &i) in &rb {
        lb[i] = label;
    }
    (la, lb, t)
}

pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    let n = a.len() as u64;
    let (_, _, t) = contingency(a, b);
    let index: u128 = t.iter().flatten().map(|&c| comb2(c)).sum();
    let rows: u128 = t.iter().map(|r| comb2(r.iter().sum())).sum();
    let cols: u128 = (0..t.first().map_or(0, Vec::len)).map(|j| comb2(t.iter().map(|r| r[j]).sum())).sum();
    let all = comb2(n);
    if all == 0 {
        return Ok(1.0);
    }
    let expected = rows as f64 * cols as f64 / all as f64;
    let max = (rows as f64 + cols as f64) / 2.0;
    if max == expected {
        // both labelings trivial (one cluster or all singletons)
        return Ok(1.0);
    }
    Ok((index as f64 - expected) / (max - expected))
}

/// Assignment maximizing the total weight of a rectangular matrix; returns
/// for each row the matched column (or `None` when there are more rows
/// than columns).
pub fn hungarian_match(w: &[Vec<u64>]) -> Vec<Option<usize>> {
    let r = w.len();
    let c = w.first().map_or(0, Vec::len);
    let n = r.max(c);
    if n == 0 {
        return Vec::new();
    }
    let maxw = w.iter().flatten().copied().max().unwrap_or(0) as i128;
    let cost = |i: usize, j: usize| -> i128 {
        if i < r && j < c {
            maxw - w[i][j] as i128
        } else {
            maxw
        }
    };
    // potentials method, 1-based with a virtual column 0
    let inf = i128::MAX / 4;
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![None; r];
    for j in 1..=n {
        let i = p[j];
        if i >= 1 && i <= r && j <= c {
            out[i - 1] = Some(j - 1);
        }
    }
    out
}

/// Accuracy of a clustering after mapping clusters to classes by the
/// optimal one-to-one assignment.
pub fn matched_accuracy(clusters: &[usize], truth: &[usize]) -> Result<f64> {
    if clusters.len() != truth.len() {
        return Err(Error::LengthMismatch { left: clusters.len(), right: truth.len() });
    }
    if clusters.is_empty() {
        return Ok(1.0);
    }
    let (_, _, t) = contingency(clusters, truth);
    let m = hungarian_match(&t);
    let hit: u64 = m.iter().enumerate().filter_map(|(i, j)| j.map(|j| t[i][j])).sum();
    Ok(hit as f64 / clusters.len() as f64)
}
