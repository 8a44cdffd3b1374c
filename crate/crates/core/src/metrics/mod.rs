//! Structural quantities of a single graph.
//!
//! Every function takes an immutable [`Graph`] and is safe to call from
//! many threads at once.

mod betweenness;
mod clustering;
mod distance;
mod spectral;

pub use betweenness::{average_betweenness, betweenness_centrality};
pub use clustering::{average_clustering, local_clustering};
pub use distance::{average_closeness, closeness_centrality, diameter};
pub use spectral::{
    dense_laplacian, jacobi_spectral_radius, laplacian_spectrum_summary, power_iteration, PowerIteration,
    SpectralMethod, SpectralSummary, DEFAULT_TOLERANCE, DENSE_FALLBACK_MAX, DENSE_THRESHOLD,
};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub(crate) fn require_nodes(g: &Graph) -> Result<usize> {
    match g.node_count() {
        0 => Err(Error::EmptyGraph),
        n => Ok(n),
    }
}

/// Mean degree, `2m / n`.
pub fn average_degree(g: &Graph) -> Result<f64> {
    let n = require_nodes(g)?;
    Ok(2.0 * g.edge_count() as f64 / n as f64)
}

/// Default iteration cap for power iteration on a graph with `n` nodes.
pub fn default_max_iter(n: usize) -> usize {
    10 * n + 1000
}
