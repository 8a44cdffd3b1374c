//! The nine-dimensional structural feature vector and the matrices built
//! from it.

mod csv;
mod standardize;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use self::csv::{format_real, read_feature_csv, write_feature_csv, FEATURE_CSV_HEADER};
pub use standardize::Standardizer;

use crate::error::{Error, Result};
use crate::graph::{Dataset, Graph};
use crate::metrics;

pub const FEATURE_COUNT: usize = 9;

/// Column names in fixed order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "n",
    "m",
    "avg_degree",
    "diameter",
    "avg_closeness",
    "avg_betweenness",
    "avg_clustering",
    "spectral_radius",
    "laplacian_trace",
];

/// Short symbols for reports.
pub const FEATURE_SYMBOLS: [&str; FEATURE_COUNT] = ["n", "m", "<k>", "diameter", "H", "B", "C", "rho(L)", "Tr(L)"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub n: f64,
    pub m: f64,
    pub avg_degree: f64,
    pub diameter: f64,
    pub avg_closeness: f64,
    pub avg_betweenness: f64,
    pub avg_clustering: f64,
    pub spectral_radius: f64,
    pub laplacian_trace: f64,
}

impl FeatureVector {
    pub fn to_array(&self) -> [f64; FEATURE_COUNT] {
        [
            self.n,
            self.m,
            self.avg_degree,
            self.diameter,
            self.avg_closeness,
            self.avg_betweenness,
            self.avg_clustering,
            self.spectral_radius,
            self.laplacian_trace,
        ]
    }

    pub fn from_array(a: [f64; FEATURE_COUNT]) -> Self {
        FeatureVector {
            n: a[0],
            m: a[1],
            avg_degree: a[2],
            diameter: a[3],
            avg_closeness: a[4],
            avg_betweenness: a[5],
            avg_clustering: a[6],
            spectral_radius: a[7],
            laplacian_trace: a[8],
        }
    }

    /// The columns selected by `mask`, in feature order.
    pub fn select(&self, mask: FeatureMask) -> Vec<f64> {
        let a = self.to_array();
        mask.indices().map(|i| a[i]).collect()
    }
}

/// Settings for the spectral-radius computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    pub tol: f64,
    /// `None` means `10 n + 1000`.
    pub max_iter: Option<usize>,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig { tol: metrics::DEFAULT_TOLERANCE, max_iter: None }
    }
}

pub fn extract_features(g: &Graph, spectral: &SpectralConfig) -> Result<FeatureVector> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let max_iter = spectral.max_iter.unwrap_or_else(|| metrics::default_max_iter(n));
    let lap = metrics::laplacian_spectrum_summary(g, spectral.tol, max_iter)?;
    Ok(FeatureVector {
        n: n as f64,
        m: g.edge_count() as f64,
        avg_degree: metrics::average_degree(g)?,
        diameter: metrics::diameter(g)? as f64,
        avg_closeness: metrics::average_closeness(g)?,
        avg_betweenness: metrics::average_betweenness(g)?,
        avg_clustering: metrics::average_clustering(g)?,
        spectral_radius: lap.spectral_radius,
        laplacian_trace: lap.trace,
    })
}

/// Subset of the nine feature columns, bit `i` selecting column `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureMask(u16);

impl FeatureMask {
    pub const ALL: FeatureMask = FeatureMask((1 << FEATURE_COUNT) - 1);

    pub fn from_bits(bits: u16) -> Result<Self> {
        if bits == 0 || bits > Self::ALL.0 {
            return Err(Error::invalid(format!("feature mask {bits:#b} out of range")));
        }
        Ok(FeatureMask(bits))
    }

    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u16;
        for &i in indices {
            if i >= FEATURE_COUNT {
                return Err(Error::invalid(format!("feature index {i} out of range")));
            }
            bits |= 1 << i;
        }
        Self::from_bits(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < FEATURE_COUNT && self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..FEATURE_COUNT).filter(move |&i| self.contains(i))
    }

    pub fn names(self) -> Vec<&'static str> {
        self.indices().map(|i| FEATURE_NAMES[i]).collect()
    }
}

/// One feature row per graph plus labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub name: String,
    /// 1-based graph id of each row in the source dataset.
    pub graph_ids: Vec<usize>,
    pub rows: Vec<FeatureVector>,
    pub labels: Vec<usize>,
    /// Original label of each class id.
    pub label_map: Vec<i64>,
}

impl FeatureMatrix {
    pub fn new(
        name: impl Into<String>,
        rows: Vec<FeatureVector>,
        labels: Vec<usize>,
        label_map: Vec<i64>,
    ) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::invalid(format!("{} rows but {} labels", rows.len(), labels.len())));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= label_map.len()) {
            return Err(Error::invalid(format!("class id {bad} has no original label")));
        }
        Ok(FeatureMatrix { name: name.into(), graph_ids: (1..=rows.len()).collect(), rows, labels, label_map })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.label_map.len()
    }

    pub fn feature_names(&self) -> [&'static str; FEATURE_COUNT] {
        FEATURE_NAMES
    }

    /// Dense rows restricted to `mask`.
    pub fn select(&self, mask: FeatureMask) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.select(mask)).collect()
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.to_array()[i]).collect()
    }
}

/// Features of every graph, rows in dataset order. Runs on the current
/// rayon pool; the result does not depend on scheduling.
pub fn extract_all(ds: &Dataset, spectral: &SpectralConfig) -> Result<FeatureMatrix> {
    if ds.is_empty() {
        return Err(Error::invalid("dataset has no graphs"));
    }
    let rows = ds
        .graphs
        .par_iter()
        .enumerate()
        .map(|(index, g)| extract_features(g, spectral).map_err(|e| Error::Graph { index, source: Box::new(e) }))
        .collect::<Result<Vec<_>>>()?;
    FeatureMatrix::new(ds.name.clone(), rows, ds.labels.clone(), ds.label_map.clone())
}
