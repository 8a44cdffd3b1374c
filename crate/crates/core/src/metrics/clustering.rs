use super::require_nodes;
use crate::error::Result;
use crate::graph::Graph;

/// Size of the intersection of two sorted slices.
fn intersection_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Local clustering coefficient of every node; degree < 2 gives 0.
pub fn local_clustering(g: &Graph) -> Vec<f64> {
    (0..g.node_count())
        .map(|v| {
            let k = g.degree(v);
            if k < 2 {
                return 0.0;
            }
            let nv = g.neighbors(v);
            // each linked neighbor pair is seen from both ends
            let twice_links: usize = nv.iter().map(|&u| intersection_count(nv, g.neighbors(u))).sum();
            twice_links as f64 / (k * (k - 1)) as f64
        })
        .collect()
}

/// Mean local clustering over all nodes.
pub fn average_clustering(g: &Graph) -> Result<f64> {
    let n = require_nodes(g)?;
    Ok(local_clustering(g).iter().sum::<f64>() / n as f64)
}
