use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cv::{cross_validate, CvResult};
use super::folds::FoldAssignment;
use crate::error::{Error, Result};
use crate::features::{FeatureMask, FeatureMatrix, FEATURE_COUNT};
use crate::learn::{ClassifierConfig, ForestConfig};

/// All `k`-element masks over the nine features, in lexicographic order of
/// their sorted index lists.
pub fn masks_of_size(k: usize) -> Vec<FeatureMask> {
    let mut out = Vec::new();
    if k == 0 || k > FEATURE_COUNT {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(FeatureMask::from_indices(&idx).expect("indices in range"));
        // advance to the next combination
        let mut i = k;
        while i > 0 && idx[i - 1] == FEATURE_COUNT - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetLevel {
    pub k: usize,
    pub evaluated: usize,
    pub best: CvResult,
    /// Mean accuracy of every mask, in the order of [`masks_of_size`].
    pub all: Vec<(FeatureMask, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetSearch {
    pub dataset: String,
    pub levels: Vec<SubsetLevel>,
}

impl SubsetSearch {
    pub fn evaluated(&self) -> usize {
        self.levels.iter().map(|l| l.evaluated).sum()
    }

    pub fn level(&self, k: usize) -> Option<&SubsetLevel> {
        self.levels.iter().find(|l| l.k == k)
    }
}

/// Exhaustive search over feature subsets with a random forest. Every mask
/// is scored on the same folds; the best mask per size wins on mean
/// accuracy, ties going to the earlier mask.
pub fn subset_search(
    fm: &FeatureMatrix,
    sizes: impl IntoIterator<Item = usize>,
    forest: &ForestConfig,
    folds: &FoldAssignment,
) -> Result<SubsetSearch> {
    let config = ClassifierConfig::RandomForest(*forest);
    let mut levels = Vec::new();
    for k in sizes {
        let masks = masks_of_size(k);
        if masks.is_empty() {
            return Err(Error::invalid(format!("subset size {k} must lie in 1..={FEATURE_COUNT}")));
        }
        let results: Vec<CvResult> =
            masks.par_iter().map(|&m| cross_validate(fm, &config, folds, m, false)).collect::<Result<_>>()?;
        log::info!("{}: {} subsets of size {k} evaluated", fm.name, results.len());
        let all = results.iter().map(|r| (r.mask, r.mean_accuracy)).collect();
        let best = results
            .iter()
            .fold(None::<&CvResult>, |best, r| match best {
                Some(b) if b.mean_accuracy >= r.mean_accuracy => Some(b),
                _ => Some(r),
            })
            .expect("at least one mask")
            .clone();
        levels.push(SubsetLevel { k, evaluated: results.len(), best, all });
    }
    Ok(SubsetSearch { dataset: fm.name.clone(), levels })
}
