use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stratified assignment of rows to `k` folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub fold_of_row: Vec<usize>,
    pub k: usize,
    pub seed: u64,
}

impl FoldAssignment {
    /// `(train, test)` row indices for fold `f`.
    pub fn split(&self, f: usize) -> (Vec<usize>, Vec<usize>) {
        (0..self.fold_of_row.len()).partition(|&i| self.fold_of_row[i] != f)
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.fold_of_row {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Shuffles each class with one seeded generator (classes in id order),
/// then deals its rows round-robin into the folds. The dealing position
/// carries over from class to class so fold sizes stay balanced too.
pub fn stratified_folds(labels: &[usize], k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 || k > labels.len() {
        return Err(Error::invalid(format!("fold count {k} must lie in 2..={}", labels.len())));
    }
    let classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for (i, &l) in labels.iter().enumerate() {
        by_class[l].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of_row = vec![0; labels.len()];
    let mut next = 0;
    for (c, rows) in by_class.iter_mut().enumerate() {
        if !rows.is_empty() && rows.len() < k {
            log::warn!("class {c} has {} rows, fewer than {k} folds", rows.len());
        }
        rows.shuffle(&mut rng);
        for &r in rows.iter() {
            fold_of_row[r] = next;
            next = (next + 1) % k;
        }
    }
    Ok(FoldAssignment { fold_of_row, k, seed })
}
