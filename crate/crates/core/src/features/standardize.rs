use serde::{Deserialize, Serialize};

/// Per-column z-scoring fitted on training rows.
///
/// Columns whose population standard deviation is (numerically) zero pass
/// through untouched.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub stdev: Vec<f64>,
}

impl Standardizer {
    /// Fits on `rows`, all of the same width. Panics on an empty slice.
    pub fn fit(rows: &[Vec<f64>]) -> Self {
        assert!(!rows.is_empty(), "cannot fit a standardizer on zero rows");
        let d = rows[0].len();
        let n = rows.len() as f64;
        let mut mean = vec![0.0; d];
        for r in rows {
            for (m, x) in mean.iter_mut().zip(r) {
                *m += x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut stdev = vec![0.0; d];
        for r in rows {
            for ((s, x), m) in stdev.iter_mut().zip(r).zip(&mean) {
                *s += (x - m) * (x - m);
            }
        }
        for (s, m) in stdev.iter_mut().zip(&mean) {
            *s = (*s / n).sqrt();
            if *s <= 1e-12 * m.abs().max(1.0) {
                *s = 0.0;
            }
        }
        Standardizer { mean, stdev }
    }

    fn is_scaled(&self, j: usize) -> bool {
        self.stdev[j] > 0.0
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, &x)| if self.is_scaled(j) { (x - self.mean[j]) / self.stdev[j] } else { x })
            .collect()
    }

    pub fn transform(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| self.transform_row(r)).collect()
    }

    pub fn inverse_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, &z)| if self.is_scaled(j) { z * self.stdev[j] + self.mean[j] } else { z })
            .collect()
    }
}
