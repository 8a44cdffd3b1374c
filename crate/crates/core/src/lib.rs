//! Whole-graph classification from a fixed vector of nine structural
//! features.
//!
//! The pipeline is: parse a TUDataset directory ([`graph::parse_tudataset`]),
//! compute one [`features::FeatureVector`] per graph, then run the
//! classifiers in [`learn`] under the experiment harness in [`eval`]
//! (stratified cross-validation, PCA embedding, ANOVA/correlation analysis
//! and exhaustive feature-subset search).

pub mod error;
pub mod eval;
pub mod features;
pub mod graph;
pub mod learn;
pub mod linalg;
pub mod metrics;

pub use error::{Error, Result};
pub use features::{FeatureMask, FeatureMatrix, FeatureVector, FEATURE_COUNT, FEATURE_NAMES};
pub use graph::{Dataset, Graph};
