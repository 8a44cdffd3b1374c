use std::collections::VecDeque;

use super::require_nodes;
use crate::error::Result;
use crate::graph::Graph;

/// Normalized betweenness of every node by Brandes' dependency
/// accumulation.
///
/// Each unordered endpoint pair counts once and endpoints are excluded;
/// raw scores are divided by `(n-1)(n-2)/2`. Graphs with `n <= 2` score 0
/// everywhere.
pub fn betweenness_centrality(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut score = vec![0.0; n];
    if n <= 2 {
        return score;
    }

    let mut stack = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];

    for s in 0..n {
        stack.clear();
        sigma.fill(0.0);
        dist.fill(usize::MAX);
        delta.fill(0.0);
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                }
            }
        }
        // predecessors of w are its neighbors one level closer to s
        while let Some(w) = stack.pop() {
            let coeff = (1.0 + delta[w]) / sigma[w];
            for &v in g.neighbors(w) {
                if dist[v] != usize::MAX && dist[v] + 1 == dist[w] {
                    delta[v] += sigma[v] * coeff;
                }
            }
            if w != s {
                score[w] += delta[w];
            }
        }
    }

    // every unordered pair was accumulated from both endpoints
    let scale = 1.0 / ((n - 1) * (n - 2)) as f64;
    for b in &mut score {
        *b *= scale;
    }
    score
}

pub fn average_betweenness(g: &Graph) -> Result<f64> {
    let n = require_nodes(g)?;
    Ok(betweenness_centrality(g).iter().sum::<f64>() / n as f64)
}
