use super::require_nodes;
use crate::error::Result;
use crate::graph::{connected_components, largest_component_subgraph, Graph};

/// Longest shortest path inside the largest connected component (ties to
/// the component with the smallest node id). A single node has diameter 0.
pub fn diameter(g: &Graph) -> Result<usize> {
    require_nodes(g)?;
    let core = largest_component_subgraph(g)?;
    Ok((0..core.node_count()).map(|s| eccentricity(&core, s)).max().unwrap_or(0))
}

fn eccentricity(g: &Graph, s: usize) -> usize {
    g.bfs_distances(s).into_iter().flatten().max().unwrap_or(0)
}

/// Per-node closeness. Within a component of `r` nodes the score is
/// `(r-1)/sum(d) * (r-1)/(n-1)`, which is the plain `(n-1)/sum(d)` on a
/// connected graph. Isolated nodes score 0.
pub fn closeness_centrality(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    if n <= 1 {
        return vec![0.0; n];
    }
    let sizes = {
        let parts = connected_components(g);
        parts.component_id.iter().map(|&c| parts.component_sizes[c]).collect::<Vec<_>>()
    };
    (0..n)
        .map(|v| {
            let reach = sizes[v];
            if reach <= 1 {
                return 0.0;
            }
            let total: usize = g.bfs_distances(v).into_iter().flatten().sum();
            let r1 = (reach - 1) as f64;
            (r1 / total as f64) * (r1 / (n - 1) as f64)
        })
        .collect()
}

pub fn average_closeness(g: &Graph) -> Result<f64> {
    let n = require_nodes(g)?;
    Ok(closeness_centrality(g).iter().sum::<f64>() / n as f64)
}
