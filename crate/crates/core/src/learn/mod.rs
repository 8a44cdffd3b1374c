//! k-NN, linear SVM and random forest behind one train/predict contract.

mod forest;
mod knn;
mod svm;

use serde::{Deserialize, Serialize};

pub use forest::{DecisionTree, Forest, ForestConfig, TreeNode};
pub use knn::{KnnConfig, KnnModel};
pub use svm::{BinarySvm, PairMachine, SvmConfig, SvmModel};

use crate::error::{Error, Result};
use crate::features::{FeatureMask, Standardizer};

/// Mixes a master seed with a stream index (splitmix64 finalizer).
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(stream.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    Knn,
    Svm,
    RandomForest,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 3] = [ClassifierKind::Knn, ClassifierKind::Svm, ClassifierKind::RandomForest];

    pub fn label(self) -> &'static str {
        match self {
            ClassifierKind::Knn => "k-NN",
            ClassifierKind::Svm => "SVM",
            ClassifierKind::RandomForest => "Random Forest",
        }
    }
}

impl std::fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "classifier", rename_all = "snake_case")]
pub enum ClassifierConfig {
    Knn(KnnConfig),
    Svm(SvmConfig),
    RandomForest(ForestConfig),
}

impl ClassifierConfig {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            ClassifierConfig::Knn(_) => ClassifierKind::Knn,
            ClassifierConfig::Svm(_) => ClassifierKind::Svm,
            ClassifierConfig::RandomForest(_) => ClassifierKind::RandomForest,
        }
    }

    /// Trees see raw features; the distance- and margin-based models see
    /// standardized ones when scaling is on.
    pub fn is_scale_sensitive(&self) -> bool {
        !matches!(self, ClassifierConfig::RandomForest(_))
    }

    /// Same configuration with the forest seed replaced by a stream of
    /// `stream`. Other classifiers are returned unchanged.
    pub fn reseeded(&self, stream: u64) -> Self {
        match *self {
            ClassifierConfig::RandomForest(f) => {
                ClassifierConfig::RandomForest(ForestConfig { seed: derive_seed(f.seed, stream), ..f })
            }
            other => other,
        }
    }

    /// Trains on dense rows. An SVM given a single class degenerates to a
    /// constant model so every classifier honors single-class input.
    pub fn fit(&self, rows: &[Vec<f64>], labels: &[usize]) -> Result<Model> {
        if rows.is_empty() {
            return Err(Error::invalid("no training rows"));
        }
        Ok(match self {
            ClassifierConfig::Knn(cfg) => Model::Knn(KnnModel::fit(*cfg, rows, labels)?),
            ClassifierConfig::Svm(cfg) => {
                let first = labels[0];
                if labels.iter().all(|&l| l == first) {
                    Model::Constant { class: first }
                } else {
                    Model::Svm(SvmModel::fit(cfg, rows, labels)?)
                }
            }
            ClassifierConfig::RandomForest(cfg) => Model::RandomForest(Forest::fit(cfg, rows, labels)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    Knn(KnnModel),
    Svm(SvmModel),
    RandomForest(Forest),
    Constant { class: usize },
}

impl Model {
    pub fn predict(&self, x: &[f64]) -> usize {
        match self {
            Model::Knn(m) => m.predict(x),
            Model::Svm(m) => m.predict(x),
            Model::RandomForest(f) => f.predict(x),
            Model::Constant { class } => *class,
        }
    }

    pub fn predict_all(&self, rows: &[Vec<f64>]) -> Vec<usize> {
        rows.iter().map(|r| self.predict(r)).collect()
    }
}

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Self-contained trained model as written by `graphfeat train`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub format_version: u32,
    pub dataset: String,
    pub config: ClassifierConfig,
    pub mask: FeatureMask,
    pub standardizer: Option<Standardizer>,
    /// Original label of each class id.
    pub label_map: Vec<i64>,
    pub model: Model,
}

impl ModelDocument {
    /// Applies the stored mask and standardizer, then predicts a class id.
    pub fn predict(&self, features: &crate::FeatureVector) -> usize {
        let row = features.select(self.mask);
        match &self.standardizer {
            Some(s) => self.model.predict(&s.transform_row(&row)),
            None => self.model.predict(&row),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Probe {
            format_version: u32,
        }
        let probe: Probe = serde_json::from_str(text)?;
        if probe.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::invalid(format!(
                "model format version {} is not supported (expected {MODEL_FORMAT_VERSION})",
                probe.format_version
            )));
        }
        Ok(serde_json::from_str(text)?)
    }
}
