//! Published dataset statistics and accuracies, and where to find the
//! benchmark datasets on disk.

use std::path::{Path, PathBuf};

/// Size statistics of one benchmark dataset as published.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedStats {
    /// Directory and file prefix in TUDataset layout.
    pub dir: &'static str,
    /// Short name used in result tables.
    pub short: &'static str,
    pub graphs: usize,
    pub avg_nodes: f64,
    pub max_nodes: usize,
    pub min_nodes: usize,
    pub avg_edges: f64,
    pub max_edges: usize,
    pub min_edges: usize,
    pub classes: usize,
}

#[allow(clippy::too_many_arguments)]
const fn stats(
    dir: &'static str,
    short: &'static str,
    graphs: usize,
    avg_nodes: f64,
    max_nodes: usize,
    min_nodes: usize,
    avg_edges: f64,
    max_edges: usize,
    min_edges: usize,
    classes: usize,
) -> PublishedStats {
    PublishedStats { dir, short, graphs, avg_nodes, max_nodes, min_nodes, avg_edges, max_edges, min_edges, classes }
}

pub const DATASETS: [PublishedStats; 10] = [
    stats("COLLAB", "COLLAB", 5000, 74.49, 492, 32, 2457.78, 40119, 60, 3),
    stats("IMDB-BINARY", "IMDB-B", 1000, 19.77, 136, 12, 96.53, 1249, 26, 2),
    stats("IMDB-MULTI", "IMDB-M", 1500, 13.00, 89, 7, 65.94, 1467, 12, 3),
    stats("REDDIT-BINARY", "RDT-B", 2000, 429.63, 3782, 6, 497.75, 4071, 4, 2),
    stats("REDDIT-MULTI-5K", "RDT-M5K", 4999, 508.52, 3648, 22, 594.87, 4783, 21, 5),
    stats("PROTEINS", "PROTEINS", 1113, 39.06, 620, 4, 72.82, 1049, 5, 2),
    stats("MUTAG", "MUTAG", 188, 17.93, 28, 10, 19.79, 33, 10, 2),
    stats("NCI1", "NCI1", 4110, 29.87, 111, 3, 32.30, 119, 2, 2),
    stats("NCI109", "NCI109", 4127, 29.68, 111, 4, 32.13, 119, 3, 2),
    stats("PTC_MR", "PTC", 344, 14.29, 64, 2, 14.69, 71, 1, 2),
];

/// The five datasets small enough for a desk-scale accuracy run.
pub const SMALL: [&str; 5] = ["MUTAG", "PROTEINS", "IMDB-BINARY", "IMDB-MULTI", "PTC_MR"];

/// Published mean accuracy (%) of `(k-NN, SVM, Random Forest)`.
pub fn published_accuracy(dir: &str) -> Option<[f64; 3]> {
    Some(match dir {
        "COLLAB" => [73.25, 69.76, 76.90],
        "IMDB-BINARY" => [74.10, 74.50, 77.00],
        "IMDB-MULTI" => [50.67, 50.67, 54.44],
        "REDDIT-BINARY" => [89.50, 89.53, 90.00],
        "REDDIT-MULTI-5K" => [52.80, 54.80, 57.15],
        "PROTEINS" => [77.84, 79.64, 79.93],
        "MUTAG" => [89.66, 89.66, 93.10],
        "NCI1" => [62.77, 65.21, 71.53],
        "NCI109" => [68.89, 65.65, 74.68],
        "PTC_MR" => [59.35, 68.61, 65.81],
        _ => return None,
    })
}

pub fn published(dir: &str) -> Option<&'static PublishedStats> {
    DATASETS.iter().find(|d| d.dir == dir)
}

/// `GRAPHFEAT_DATA` if set, else the workspace `data/` directory.
pub fn data_root() -> PathBuf {
    std::env::var_os("GRAPHFEAT_DATA")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

/// Directory of a dataset if its label file is present under `root`.
pub fn locate_in(root: &Path, dir: &str) -> Option<PathBuf> {
    let path = root.join(dir);
    path.join(format!("{dir}_graph_labels.txt")).is_file().then_some(path)
}

pub fn locate(dir: &str) -> Option<PathBuf> {
    locate_in(&data_root(), dir)
}
