use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnnConfig {
    pub k: usize,
}

impl Default for KnnConfig {
    fn default() -> Self {
        KnnConfig { k: 5 }
    }
}

/// k-nearest-neighbor classifier under Euclidean distance. Stores the
/// training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl KnnModel {
    pub fn fit(cfg: KnnConfig, rows: &[Vec<f64>], labels: &[usize]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("k-NN needs at least one training row"));
        }
        if rows.len() != labels.len() {
            return Err(Error::invalid("rows and labels differ in length"));
        }
        if cfg.k == 0 || cfg.k > rows.len() {
            return Err(Error::invalid(format!("k = {} must lie in 1..={}", cfg.k, rows.len())));
        }
        Ok(KnnModel { k: cfg.k, rows: rows.to_vec(), labels: labels.to_vec() })
    }

    /// Majority class among the `k` nearest rows.
    ///
    /// Equal distances rank the lower training row first. A vote tie goes
    /// to the class whose nearest member ranks first, which also settles
    /// any remaining tie in favor of the lower class id.
    pub fn predict(&self, query: &[f64]) -> usize {
        let mut order: Vec<(f64, usize)> =
            self.rows.iter().enumerate().map(|(i, r)| (squared_distance(r, query), i)).collect();
        let by_rank = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if self.k < order.len() {
            order.select_nth_unstable_by(self.k - 1, by_rank);
            order.truncate(self.k);
        }
        order.sort_by(by_rank);

        let classes = self.labels.iter().max().map_or(0, |m| m + 1);
        let mut votes = vec![0usize; classes];
        let mut first_rank = vec![usize::MAX; classes];
        for (rank, &(_, i)) in order.iter().enumerate() {
            let c = self.labels[i];
            votes[c] += 1;
            first_rank[c] = first_rank[c].min(rank);
        }
        (0..classes)
            .filter(|&c| votes[c] > 0)
            .min_by_key(|&c| (std::cmp::Reverse(votes[c]), first_rank[c], c))
            .expect("k >= 1")
    }
}
