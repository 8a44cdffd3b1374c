//! Undirected simple graphs in compressed adjacency form, plus TUDataset
//! ingestion and connectivity primitives.

mod tudataset;

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub use tudataset::{parse_tudataset, write_tudataset, Dataset};

/// Undirected simple graph stored as sorted neighbor lists (CSR).
///
/// Node ids are `0..node_count()`. Self-loops and parallel edges never
/// survive construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

/// What construction had to drop to make the input simple.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Simplification {
    pub self_loops: usize,
    pub duplicates: usize,
}

impl Graph {
    /// Builds a graph on `n` nodes, dropping self-loops and merging repeated
    /// pairs. `(i, j)` and `(j, i)` name the same edge.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::with_simplification(n, edges).map(|(g, _)| g)
    }

    /// Like [`Graph::new`] but also reports how many input pairs were
    /// dropped. A pair listed once in each direction is not a duplicate.
    pub fn with_simplification<I>(n: usize, edges: I) -> Result<(Self, Simplification)>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut stats = Simplification::default();
        let mut directed: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::invalid(format!("edge ({a}, {b}) out of range for {n} nodes")));
            }
            if a == b {
                stats.self_loops += 1;
                continue;
            }
            directed.push((a, b));
        }
        directed.sort_unstable();
        let before = directed.len();
        directed.dedup();
        stats.duplicates = before - directed.len();

        let mut pairs: Vec<(usize, usize)> = directed.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        pairs.sort_unstable();
        pairs.dedup();

        let mut offsets = vec![0usize; n + 1];
        for &(a, _) in &pairs {
            offsets[a + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let neighbors = pairs.into_iter().map(|(_, b)| b).collect();
        Ok((Graph { offsets, neighbors }, stats))
    }

    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Graph { offsets: vec![0; n + 1], neighbors: Vec::new() }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Sorted neighbors of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Each undirected edge once, as `(i, j)` with `i < j`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count())
            .flat_map(move |i| self.neighbors(i).iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    /// Subgraph induced by `nodes`, renumbered in the given order.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        let mut new_id = vec![usize::MAX; self.node_count()];
        for (k, &v) in nodes.iter().enumerate() {
            new_id[v] = k;
        }
        let edges = nodes.iter().flat_map(|&v| {
            let new_id = &new_id;
            self.neighbors(v).iter().filter(move |&&u| new_id[u] != usize::MAX).map(move |&u| (new_id[v], new_id[u]))
        });
        Graph::new(nodes.len(), edges.collect::<Vec<_>>()).expect("ids are in range")
    }

    /// Unweighted shortest-path distances from `source`; `None` when
    /// unreachable.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap() + 1;
            for &u in self.neighbors(v) {
                if dist[u].is_none() {
                    dist[u] = Some(d);
                    queue.push_back(u);
                }
            }
        }
        dist
    }
}

/// Per-node component ids, numbered in order of each component's smallest
/// node id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    pub component_id: Vec<usize>,
    pub component_sizes: Vec<usize>,
}

impl ComponentPartition {
    pub fn len(&self) -> usize {
        self.component_sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.component_sizes.is_empty()
    }

    /// Members of component `c` in increasing id order.
    pub fn members(&self, c: usize) -> Vec<usize> {
        self.component_id.iter().enumerate().filter(|&(_, &id)| id == c).map(|(v, _)| v).collect()
    }

    /// Largest component; ties go to the lower id, which is the component
    /// holding the smaller node id.
    pub fn largest(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (c, &size) in self.component_sizes.iter().enumerate() {
            if best.is_none_or(|b| size > self.component_sizes[b]) {
                best = Some(c);
            }
        }
        best
    }
}

pub fn connected_components(g: &Graph) -> ComponentPartition {
    let n = g.node_count();
    let mut component_id = vec![usize::MAX; n];
    let mut component_sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if component_id[start] != usize::MAX {
            continue;
        }
        let c = component_sizes.len();
        let mut size = 0;
        component_id[start] = c;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            size += 1;
            for &u in g.neighbors(v) {
                if component_id[u] == usize::MAX {
                    component_id[u] = c;
                    queue.push_back(u);
                }
            }
        }
        component_sizes.push(size);
    }
    ComponentPartition { component_id, component_sizes }
}

/// Induced subgraph on the largest connected component, ids compacted in
/// increasing original order.
pub fn largest_component_subgraph(g: &Graph) -> Result<Graph> {
    let parts = connected_components(g);
    let c = parts.largest().ok_or(Error::NoComponent)?;
    if parts.len() == 1 {
        return Ok(g.clone());
    }
    Ok(g.induced_subgraph(&parts.members(c)))
}
