use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Graph, Simplification};
use crate::error::{Error, Result};

/// A labeled collection of graphs.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub graphs: Vec<Graph>,
    /// Contiguous class ids `0..class_count()`, one per graph.
    pub labels: Vec<usize>,
    /// Original label of each class id, in order of first appearance.
    pub label_map: Vec<i64>,
}

/// Summary statistics in the layout of the usual benchmark tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub graphs: usize,
    pub classes: usize,
    pub avg_nodes: f64,
    pub max_nodes: usize,
    pub min_nodes: usize,
    pub avg_edges: f64,
    pub max_edges: usize,
    pub min_edges: usize,
}

impl Dataset {
    /// Builds a dataset from graphs and raw labels, remapping labels to
    /// contiguous ids in order of first appearance.
    pub fn from_raw_labels(name: impl Into<String>, graphs: Vec<Graph>, raw: &[i64]) -> Result<Self> {
        if graphs.len() != raw.len() {
            return Err(Error::invalid(format!("{} graphs but {} labels", graphs.len(), raw.len())));
        }
        let mut label_map: Vec<i64> = Vec::new();
        let labels = raw
            .iter()
            .map(|l| match label_map.iter().position(|m| m == l) {
                Some(id) => id,
                None => {
                    label_map.push(*l);
                    label_map.len() - 1
                }
            })
            .collect();
        Ok(Dataset { name: name.into(), graphs, labels, label_map })
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.label_map.len()
    }

    pub fn stats(&self) -> DatasetStats {
        let nodes: Vec<usize> = self.graphs.iter().map(Graph::node_count).collect();
        let edges: Vec<usize> = self.graphs.iter().map(Graph::edge_count).collect();
        let mean = |v: &[usize]| {
            if v.is_empty() {
                0.0
            } else {
                v.iter().sum::<usize>() as f64 / v.len() as f64
            }
        };
        DatasetStats {
            graphs: self.len(),
            classes: self.class_count(),
            avg_nodes: mean(&nodes),
            max_nodes: nodes.iter().copied().max().unwrap_or(0),
            min_nodes: nodes.iter().copied().min().unwrap_or(0),
            avg_edges: mean(&edges),
            max_edges: edges.iter().copied().max().unwrap_or(0),
            min_edges: edges.iter().copied().min().unwrap_or(0),
        }
    }
}

fn file_path(dir: &Path, name: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{name}_{suffix}.txt"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Ingest { path: path.to_path_buf(), source })
}

/// Non-blank lines with 1-based line numbers. For `positional` files the
/// line number carries meaning, so blank lines are allowed only at the end
/// and an empty file is an error. An empty edge list is fine.
fn content_lines<'a>(text: &'a str, file: &str, positional: bool) -> Result<Vec<(usize, &'a str)>> {
    let all: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).collect();
    let last = all.iter().rposition(|(_, l)| !l.is_empty());
    let Some(last) = last else {
        if positional {
            return Err(Error::format(file, 1, "file is empty"));
        }
        return Ok(Vec::new());
    };
    let mut out = Vec::with_capacity(last + 1);
    for &(no, line) in &all[..=last] {
        if line.is_empty() {
            if positional {
                return Err(Error::format(file, no, "blank line"));
            }
            continue;
        }
        out.push((no, line));
    }
    Ok(out)
}

fn parse_int<T: std::str::FromStr>(s: &str, file: &str, line: usize) -> Result<T> {
    s.trim().parse().map_err(|_| Error::format(file, line, format!("expected an integer, found {s:?}")))
}

/// Parses `{name}_A.txt`, `{name}_graph_indicator.txt` and
/// `{name}_graph_labels.txt` from `dir`.
///
/// Graphs come out simple and undirected with per-graph node ids
/// `0..n`, assigned in increasing global id order. Attribute and label
/// files for nodes or edges are ignored.
pub fn parse_tudataset(dir: impl AsRef<Path>, name: &str) -> Result<Dataset> {
    let dir = dir.as_ref();
    let a_path = file_path(dir, name, "A");
    let ind_path = file_path(dir, name, "graph_indicator");
    let lab_path = file_path(dir, name, "graph_labels");
    let a_text = read(&a_path)?;
    let ind_text = read(&ind_path)?;
    let lab_text = read(&lab_path)?;
    let a_file = format!("{name}_A.txt");
    let ind_file = format!("{name}_graph_indicator.txt");
    let lab_file = format!("{name}_graph_labels.txt");

    let raw_labels: Vec<i64> = content_lines(&lab_text, &lab_file, true)?
        .into_iter()
        .map(|(no, l)| parse_int(l, &lab_file, no))
        .collect::<Result<_>>()?;
    let graph_count = raw_labels.len();

    // graph index (0-based) of each global node, and its local id
    let mut graph_of = Vec::new();
    let mut local_id = Vec::new();
    let mut node_counts = vec![0usize; graph_count];
    for (no, line) in content_lines(&ind_text, &ind_file, true)? {
        let g: usize = parse_int(line, &ind_file, no)?;
        if g == 0 || g > graph_count {
            return Err(Error::format(&ind_file, no, format!("graph id {g} outside 1..={graph_count}")));
        }
        graph_of.push(g - 1);
        local_id.push(node_counts[g - 1]);
        node_counts[g - 1] += 1;
    }
    if let Some(g) = node_counts.iter().position(|&c| c == 0) {
        return Err(Error::format(&lab_file, g + 1, format!("graph {} has no nodes", g + 1)));
    }

    let mut edge_lists: Vec<Vec<(usize, usize)>> = vec![Vec::new(); graph_count];
    let node_total = graph_of.len();
    for (no, line) in content_lines(&a_text, &a_file, false)? {
        let mut parts = line.split(',');
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::format(&a_file, no, format!("expected \"i, j\", found {line:?}")));
        };
        let a: usize = parse_int(a, &a_file, no)?;
        let b: usize = parse_int(b, &a_file, no)?;
        for v in [a, b] {
            if v == 0 || v > node_total {
                return Err(Error::format(
                    &a_file,
                    no,
                    format!("node {v} references no graph ({node_total} nodes indicated)"),
                ));
            }
        }
        let (ga, gb) = (graph_of[a - 1], graph_of[b - 1]);
        if ga != gb {
            return Err(Error::format(
                &a_file,
                no,
                format!("edge ({a}, {b}) crosses graphs {} and {}", ga + 1, gb + 1),
            ));
        }
        edge_lists[ga].push((local_id[a - 1], local_id[b - 1]));
    }

    let mut dropped = Simplification::default();
    let mut graphs = Vec::with_capacity(graph_count);
    for (n, edges) in node_counts.into_iter().zip(edge_lists) {
        let (g, s) = Graph::with_simplification(n, edges)?;
        dropped.self_loops += s.self_loops;
        dropped.duplicates += s.duplicates;
        graphs.push(g);
    }
    if dropped != Simplification::default() {
        log::warn!(
            "{name}: dropped {} self-loops and {} duplicate edge entries",
            dropped.self_loops,
            dropped.duplicates
        );
    }
    Dataset::from_raw_labels(name, graphs, &raw_labels)
}

/// Writes `ds` in TUDataset layout, listing each edge in both directions.
pub fn write_tudataset(ds: &Dataset, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let mut a = Vec::new();
    let mut ind = Vec::new();
    let mut lab = Vec::new();
    let mut offset = 0usize;
    for (gi, g) in ds.graphs.iter().enumerate() {
        for _ in 0..g.node_count() {
            writeln!(ind, "{}", gi + 1).unwrap();
        }
        for (i, j) in g.edges() {
            writeln!(a, "{}, {}", offset + i + 1, offset + j + 1).unwrap();
            writeln!(a, "{}, {}", offset + j + 1, offset + i + 1).unwrap();
        }
        writeln!(lab, "{}", ds.label_map[ds.labels[gi]]).unwrap();
        offset += g.node_count();
    }
    for (suffix, bytes) in [("A", a), ("graph_indicator", ind), ("graph_labels", lab)] {
        let path = file_path(dir, &ds.name, suffix);
        fs::write(&path, bytes).map_err(io(&path))?;
    }
    Ok(())
}
