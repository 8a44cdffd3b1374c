use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::folds::FoldAssignment;
use crate::error::{Error, Result};
use crate::features::{FeatureMask, FeatureMatrix, Standardizer};
use crate::learn::{ClassifierConfig, ClassifierKind};

/// Held-out accuracy of one classifier on one feature subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub dataset: String,
    pub classifier: ClassifierKind,
    pub config: ClassifierConfig,
    pub mask: FeatureMask,
    pub seed: u64,
    pub scaled: bool,
    /// Fraction correct per fold, in `[0, 1]`.
    pub fold_accuracy: Vec<f64>,
    /// Mean of `fold_accuracy`, as a percentage.
    pub mean_accuracy: f64,
}

impl CvResult {
    pub fn stdev_accuracy(&self) -> f64 {
        let k = self.fold_accuracy.len() as f64;
        let mean = self.mean_accuracy / 100.0;
        let var = self.fold_accuracy.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / k;
        100.0 * var.sqrt()
    }
}

/// Per-fold accuracy on dense rows.
///
/// Scale-sensitive classifiers get a standardizer fitted on each training
/// split when `scale` is set. The forest seed is re-derived per fold.
pub fn fold_accuracies(
    rows: &[Vec<f64>],
    labels: &[usize],
    config: &ClassifierConfig,
    folds: &FoldAssignment,
    scale: bool,
) -> Result<Vec<f64>> {
    if folds.fold_of_row.len() != rows.len() || rows.len() != labels.len() {
        return Err(Error::invalid(format!(
            "fold assignment covers {} rows, data has {}",
            folds.fold_of_row.len(),
            rows.len()
        )));
    }
    (0..folds.k)
        .into_par_iter()
        .map(|fold| {
            let (train, test) = folds.split(fold);
            if test.is_empty() || train.is_empty() {
                return Err(Error::Fold { fold, source: Box::new(Error::invalid("empty split")) });
            }
            let mut train_x: Vec<Vec<f64>> = train.iter().map(|&i| rows[i].clone()).collect();
            let train_y: Vec<usize> = train.iter().map(|&i| labels[i]).collect();
            let mut test_x: Vec<Vec<f64>> = test.iter().map(|&i| rows[i].clone()).collect();
            if scale && config.is_scale_sensitive() {
                let s = Standardizer::fit(&train_x);
                train_x = s.transform(&train_x);
                test_x = s.transform(&test_x);
            }
            let model = config
                .reseeded(fold as u64)
                .fit(&train_x, &train_y)
                .map_err(|e| Error::Fold { fold, source: Box::new(e) })?;
            let correct = test.iter().zip(&test_x).filter(|(&i, x)| model.predict(x) == labels[i]).count();
            Ok(correct as f64 / test.len() as f64)
        })
        .collect()
}

pub fn cross_validate(
    fm: &FeatureMatrix,
    config: &ClassifierConfig,
    folds: &FoldAssignment,
    mask: FeatureMask,
    scale: bool,
) -> Result<CvResult> {
    let rows = fm.select(mask);
    let fold_accuracy = fold_accuracies(&rows, &fm.labels, config, folds, scale)?;
    let mean_accuracy = 100.0 * fold_accuracy.iter().sum::<f64>() / fold_accuracy.len() as f64;
    Ok(CvResult {
        dataset: fm.name.clone(),
        classifier: config.kind(),
        config: *config,
        mask,
        seed: folds.seed,
        scaled: scale && config.is_scale_sensitive(),
        fold_accuracy,
        mean_accuracy,
    })
}
