//! Cross-validation, PCA, ANOVA/correlation and subset search.

mod cv;
mod folds;
mod pca;
pub mod report;
mod stats;
mod subsets;

pub use cv::{cross_validate, fold_accuracies, CvResult};
pub use folds::{stratified_folds, FoldAssignment};
pub use pca::{feature_pca, pca2, write_pca_csv, Embedding2D, PCA_CSV_HEADER};
pub use stats::{anova_oneway, f_survival, ln_gamma, pearson, regularized_incomplete_beta, AnovaResult};
pub use subsets::{masks_of_size, subset_search, SubsetLevel, SubsetSearch};

use crate::error::Result;
use crate::features::{FeatureMask, FeatureMatrix};
use crate::learn::{Forest, ForestConfig};

/// Forest importances from a fit on every row of the raw features.
pub fn feature_importance(fm: &FeatureMatrix, config: &ForestConfig) -> Result<Vec<f64>> {
    let forest = Forest::fit(config, &fm.select(FeatureMask::ALL), &fm.labels)?;
    Ok(forest.feature_importance())
}
