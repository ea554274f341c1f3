//! Run configuration: defaults, a `key = value` file, then command-line
//! overrides. The validated settings are embedded in every artifact.

use std::collections::BTreeMap;
use std::str::FromStr;

use g2ml_core::dataset::{ClassScheme, GenConfig};
use g2ml_core::enumerate::DEFAULT_BUDGET;
use g2ml_core::loci::L5Config;
use g2ml_core::ml::{ForestConfig, GmmConfig, KMeansConfig, Metric};
use g2ml_core::rng::RationalRange;
use g2ml_core::wproj::serde_rational_str;
use g2ml_core::Rational;
use num_traits::Signed;

use crate::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    /// Worker threads; 0 uses one per core. Never changes results.
    pub threads: usize,
    pub h: Rational,
    pub strict: bool,
    pub budget: u128,
    pub l2: usize,
    pub l3: usize,
    pub l5: usize,
    pub other: usize,
    pub l2_num: i64,
    pub l2_den: i64,
    pub l3_num: i64,
    pub l3_den: i64,
    pub other_h: Rational,
    pub l5_slices: usize,
    pub retries: usize,
    pub k: usize,
    pub metric: Metric,
    pub n_trees: usize,
    pub max_features: usize,
    pub split: f64,
    pub clusters: usize,
    pub restarts: usize,
    pub scheme: ClassScheme,
}

impl Default for RunConfig {
    fn default() -> Self {
        let g = GenConfig::default();
        RunConfig {
            seed: 1,
            threads: 0,
            h: Rational::from_integer(1.into()),
            strict: false,
            budget: DEFAULT_BUDGET,
            l2: g.l2,
            l3: g.l3,
            l5: g.l5,
            other: g.other,
            l2_num: g.l2_range.num_bound,
            l2_den: g.l2_range.den_bound,
            l3_num: g.l3_range.num_bound,
            l3_den: g.l3_range.den_bound,
            other_h: g.other_height,
            l5_slices: g.l5_config.slices,
            retries: g.max_retries,
            k: 5,
            metric: Metric::Manhattan,
            n_trees: 200,
            max_features: 2,
            split: 0.3,
            clusters: 4,
            restarts: 10,
            scheme: ClassScheme::Three,
        }
    }
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true or false, got {v:?}"))),
    }
}

fn metric_name(m: Metric) -> &'static str {
    match m {
        Metric::Manhattan => "manhattan",
        Metric::Euclidean => "euclidean",
    }
}

fn scheme_name(s: ClassScheme) -> &'static str {
    match s {
        ClassScheme::Three => "three",
        ClassScheme::Four => "four",
    }
}

impl RunConfig {
    pub const KEYS: [&'static str; 25] = [
        "seed",
        "threads",
        "h",
        "strict",
        "budget",
        "l2",
        "l3",
        "l5",
        "other",
        "l2_num",
        "l2_den",
        "l3_num",
        "l3_den",
        "other_h",
        "l5_slices",
        "retries",
        "k",
        "metric",
        "n_trees",
        "max_features",
        "split",
        "clusters",
        "restarts",
        "scheme",
        "version",
    ];

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let v = v.trim();
        let rational = |v: &str| serde_rational_str::parse(v).map_err(|e| Error::Config(format!("{key}: {e}")));
        match key {
            "seed" => self.seed = parse(key, v)?,
            "threads" => self.threads = parse(key, v)?,
            "h" => self.h = rational(v)?,
            "strict" => self.strict = parse_bool(key, v)?,
            "budget" => self.budget = parse(key, v)?,
            "l2" => self.l2 = parse(key, v)?,
            "l3" => self.l3 = parse(key, v)?,
            "l5" => self.l5 = parse(key, v)?,
            "other" => self.other = parse(key, v)?,
            "l2_num" => self.l2_num = parse(key, v)?,
            "l2_den" => self.l2_den = parse(key, v)?,
            "l3_num" => self.l3_num = parse(key, v)?,
            "l3_den" => self.l3_den = parse(key, v)?,
            "other_h" => self.other_h = rational(v)?,
            "l5_slices" => self.l5_slices = parse(key, v)?,
            "retries" => self.retries = parse(key, v)?,
            "k" => self.k = parse(key, v)?,
            "metric" => self.metric = v.parse().map_err(|_| Error::Config(format!("metric: unknown {v:?}")))?,
            "n_trees" => self.n_trees = parse(key, v)?,
            "max_features" => self.max_features = parse(key, v)?,
            "split" => self.split = parse(key, v)?,
            "clusters" => self.clusters = parse(key, v)?,
            "restarts" => self.restarts = parse(key, v)?,
            "scheme" => self.scheme = v.parse().map_err(|_| Error::Config(format!("scheme: unknown {v:?}")))?,
            "version" => {}
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a `key = value` file. Blank lines and `#` comments are skipped.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(k.trim(), v).map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("line {}: {m}", i + 1)),
                e => e,
            })?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.into()));
        if !self.h.is_positive() || !self.other_h.is_positive() {
            return bad("height bounds must be positive");
        }
        if self.l2_num < 1 || self.l2_den < 1 || self.l3_num < 1 || self.l3_den < 1 {
            return bad("parameter bounds must be at least 1");
        }
        if self.k == 0 || self.n_trees == 0 || self.clusters == 0 || self.restarts == 0 || self.l5_slices == 0 {
            return bad("k, n_trees, clusters, restarts and l5_slices must be positive");
        }
        if self.max_features == 0 || self.max_features > g2ml_core::ml::DIM {
            return bad("max_features must lie in 1..=4");
        }
        if !(self.split > 0.0 && self.split < 1.0) {
            return bad("split must lie in (0, 1)");
        }
        Ok(())
    }

    /// Every setting plus the tool version, as strings that [`set`](Self::set)
    /// reads back.
    pub fn to_pairs(&self) -> BTreeMap<String, String> {
        let vals: [String; 25] = [
            self.seed.to_string(),
            self.threads.to_string(),
            serde_rational_str::to_string(&self.h),
            self.strict.to_string(),
            self.budget.to_string(),
            self.l2.to_string(),
            self.l3.to_string(),
            self.l5.to_string(),
            self.other.to_string(),
            self.l2_num.to_string(),
            self.l2_den.to_string(),
            self.l3_num.to_string(),
            self.l3_den.to_string(),
            serde_rational_str::to_string(&self.other_h),
            self.l5_slices.to_string(),
            self.retries.to_string(),
            self.k.to_string(),
            metric_name(self.metric).into(),
            self.n_trees.to_string(),
            self.max_features.to_string(),
            self.split.to_string(),
            self.clusters.to_string(),
            self.restarts.to_string(),
            scheme_name(self.scheme).into(),
            VERSION.into(),
        ];
        Self::KEYS.iter().map(|k| k.to_string()).zip(vals).collect()
    }

    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self> {
        let mut c = RunConfig::default();
        for (k, v) in pairs {
            c.set(k, v)?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn gen_config(&self) -> GenConfig {
        GenConfig {
            l2: self.l2,
            l3: self.l3,
            l5: self.l5,
            other: self.other,
            l2_range: RationalRange::new(self.l2_num, self.l2_den),
            l3_range: RationalRange::new(self.l3_num, self.l3_den),
            other_height: self.other_h.clone(),
            l5_config: L5Config { slices: self.l5_slices, max_retries: self.retries, ..L5Config::default() },
            max_retries: self.retries,
        }
    }

    pub fn forest_config(&self) -> ForestConfig {
        ForestConfig { n_trees: self.n_trees, max_features: self.max_features, ..ForestConfig::default() }
    }

    pub fn kmeans_config(&self) -> KMeansConfig {
        KMeansConfig { k: self.clusters, restarts: self.restarts, ..KMeansConfig::default() }
    }

    pub fn gmm_config(&self) -> GmmConfig {
        GmmConfig { k: self.clusters, init_restarts: self.restarts, ..GmmConfig::default() }
    }
}
