//! Versioned JSON envelope for trained models.

use std::collections::BTreeMap;

use g2ml_core::dataset::ClassScheme;
use g2ml_core::ml::{FeatureMatrix, GmmModel, KMeansModel, Metric, RandomForest};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const MODEL_FORMAT: &str = "g2ml-model/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub metric: Metric,
    pub train: FeatureMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "model", rename_all = "lowercase")]
pub enum Model {
    Knn(KnnModel),
    Forest(RandomForest),
    Kmeans(KMeansModel),
    Gmm(GmmModel),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::Knn(_) => "knn",
            Model::Forest(_) => "forest",
            Model::Kmeans(_) => "kmeans",
            Model::Gmm(_) => "gmm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub scheme: ClassScheme,
    pub classes: Vec<String>,
    pub config: BTreeMap<String, String>,
    #[serde(flatten)]
    pub model: Model,
}

impl ModelFile {
    pub fn new(model: Model, scheme: ClassScheme, config: BTreeMap<String, String>) -> Self {
        ModelFile {
            format: MODEL_FORMAT.into(),
            scheme,
            classes: scheme.names().iter().map(|s| s.to_string()).collect(),
            config,
            model,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: ModelFile = serde_json::from_str(s)?;
        if m.format != MODEL_FORMAT {
            return Err(Error::Core(g2ml_core::Error::SchemaMismatch(m.format)));
        }
        Ok(m)
    }
}
