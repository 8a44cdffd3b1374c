//! Independent reference implementations used by the integration tests.

use graphfeat::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{adjacency, all_small_graphs, floyd_warshall, random_graph};

/// Every shortest path from `s` to `t`, written out node by node.
pub fn shortest_paths(a: &[Vec<bool>], d: &[Vec<Option<usize>>], s: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![s];
    fn walk(a: &[Vec<bool>], d: &[Vec<Option<usize>>], t: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v = *stack.last().unwrap();
        if v == t {
            out.push(stack.clone());
            return;
        }
        for w in 0..a.len() {
            // step only along edges that stay on a geodesic to t
            if a[v][w] && d[w][t].is_some() && d[w][t].unwrap() + 1 == d[v][t].unwrap() {
                stack.push(w);
                walk(a, d, t, stack, out);
                stack.pop();
            }
        }
    }
    if d[s][t].is_some() {
        walk(a, d, t, &mut stack, &mut out);
    }
    out
}

pub fn betweenness_oracle(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut score = vec![0.0; n];
    if n <= 2 {
        return score;
    }
    let a = adjacency(g);
    let d = floyd_warshall(g);
    for s in 0..n {
        for t in s + 1..n {
            let paths = shortest_paths(&a, &d, s, t);
            if paths.is_empty() {
                continue;
            }
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count();
                score[v] += through as f64 / paths.len() as f64;
            }
        }
    }
    let pairs = ((n - 1) * (n - 2)) as f64 / 2.0;
    score.iter().map(|x| x / pairs).collect()
}

pub fn closeness_oracle(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let d = floyd_warshall(g);
    (0..n)
        .map(|v| {
            let reach: Vec<usize> = d[v].iter().flatten().copied().collect();
            let r = reach.len();
            let total: usize = reach.iter().sum();
            if n <= 1 || r <= 1 {
                0.0
            } else {
                ((r - 1) as f64 / total as f64) * ((r - 1) as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

pub fn diameter_oracle(g: &Graph) -> usize {
    let n = g.node_count();
    let d = floyd_warshall(g);
    // largest component; ties go to the one holding the smallest node
    let mut best: Option<Vec<usize>> = None;
    let mut seen = vec![false; n];
    for v in 0..n {
        if seen[v] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&u| d[v][u].is_some()).collect();
        comp.iter().for_each(|&u| seen[u] = true);
        if best.as_ref().is_none_or(|b| comp.len() > b.len()) {
            best = Some(comp);
        }
    }
    let comp = best.unwrap();
    comp.iter().flat_map(|&u| comp.iter().map(move |&w| (u, w))).map(|(u, w)| d[u][w].unwrap()).max().unwrap()
}

pub fn clustering_oracle(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let a = adjacency(g);
    (0..n)
        .map(|v| {
            let nb: Vec<usize> = (0..n).filter(|&u| a[v][u]).collect();
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            let mut closed = 0;
            for i in 0..k {
                for j in i + 1..k {
                    if a[nb[i]][nb[j]] {
                        closed += 1;
                    }
                }
            }
            closed as f64 / (k * (k - 1) / 2) as f64
        })
        .collect()
}

pub fn named_graphs() -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=12 {
        out.push(Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap());
        out.push(Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap());
        out.push(Graph::new(n, (1..n).map(|i| (0, i))).unwrap());
        if n >= 3 {
            out.push(Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap());
            // wheel
            out.push(Graph::new(n, (1..n).flat_map(|i| [(0, i), (i, if i + 1 < n { i + 1 } else { 1 })])).unwrap());
        }
        for left in 1..n {
            out.push(Graph::new(n, (0..left).flat_map(|i| (left..n).map(move |j| (i, j)))).unwrap());
        }
    }
    let petersen = [
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 0),
        (0, 5),
        (1, 6),
        (2, 7),
        (3, 8),
        (4, 9),
        (5, 7),
        (7, 9),
        (9, 6),
        (6, 8),
        (8, 5),
    ];
    out.push(Graph::new(10, petersen).unwrap());
    // two equal components with different diameters: the first one counts
    out.push(Graph::new(8, [(0, 1), (0, 2), (0, 3), (4, 5), (5, 6), (6, 7)]).unwrap());
    out.push(Graph::new(8, [(0, 1), (1, 2), (2, 3), (4, 5), (4, 6), (4, 7)]).unwrap());
    out
}

/// Exhaustive graphs up to five nodes, named families up to twelve and
/// 200 random graphs of at most twelve nodes.
pub fn library() -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut graphs = all_small_graphs(5);
    graphs.extend(named_graphs());
    for _ in 0..200 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.05..0.9);
        graphs.push(random_graph(&mut rng, n, p));
    }
    graphs
}

/// Full scan: sort by true Euclidean distance, stable so equal distances
/// keep row order, then vote. Ties go to the class whose best-ranked
/// member comes first.
pub fn knn_oracle(rows: &[Vec<f64>], labels: &[usize], k: usize, x: &[f64]) -> usize {
    let mut order: Vec<(f64, usize)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(), i))
        .collect();
    order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let top = &order[..k];
    let classes = labels.iter().max().unwrap() + 1;
    let mut votes = vec![0; classes];
    for &(_, i) in top {
        votes[labels[i]] += 1;
    }
    let best = *votes.iter().max().unwrap();
    top.iter().map(|&(_, i)| labels[i]).find(|&c| votes[c] == best).unwrap()
}

pub fn separable_2d(seed: u64, per_class: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let normal = [angle.cos(), angle.sin()];
    let offset: f64 = rng.gen_range(-1.0..1.0);
    let mut rows = Vec::new();
    let mut y = Vec::new();
    while rows.len() < 2 * per_class {
        let p = [rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)];
        let side = normal[0] * p[0] + normal[1] * p[1] - offset;
        if side.abs() < 0.5 {
            continue;
        }
        let label = if side > 0.0 { 1.0 } else { -1.0 };
        if y.iter().filter(|&&t| t == label).count() < per_class {
            rows.push(p.to_vec());
            y.push(label);
        }
    }
    (rows, y)
}

pub fn primal(rows: &[Vec<f64>], y: &[f64], c: f64, w: [f64; 2], b: f64) -> f64 {
    let hinge: f64 = rows.iter().zip(y).map(|(r, t)| (1.0 - t * (w[0] * r[0] + w[1] * r[1] + b)).max(0.0)).sum();
    0.5 * (w[0] * w[0] + w[1] * w[1]) + c * hinge
}

/// Minimizes the primal objective on a 20-point-per-axis grid over
/// (w1, w2, b), repeatedly zooming in on the best cell.
pub fn primal_grid_oracle(rows: &[Vec<f64>], y: &[f64], c: f64) -> f64 {
    let mut center = [0.0f64; 3];
    let mut radius = 20.0f64;
    let mut best = f64::INFINITY;
    for _ in 0..80 {
        let step = 2.0 * radius / 19.0;
        let mut arg = center;
        for i in 0..20 {
            for j in 0..20 {
                for k in 0..20 {
                    let p = [
                        center[0] - radius + i as f64 * step,
                        center[1] - radius + j as f64 * step,
                        center[2] - radius + k as f64 * step,
                    ];
                    let v = primal(rows, y, c, [p[0], p[1]], p[2]);
                    if v < best {
                        best = v;
                        arg = p;
                    }
                }
            }
        }
        center = arg;
        radius *= 0.7;
    }
    best
}

/// Unshifted QR iteration with Gram-Schmidt; slow but unrelated to Jacobi.
pub fn qr_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(i == j)).collect()).collect();
    for _ in 0..5000 {
        // columns of m -> q r
        let mut q = vec![vec![0.0; n]; n];
        let mut r = vec![vec![0.0; n]; n];
        for j in 0..n {
            let mut col: Vec<f64> = (0..n).map(|i| m[i][j]).collect();
            for k in 0..j {
                let d: f64 = (0..n).map(|i| q[i][k] * m[i][j]).sum();
                r[k][j] = d;
                for i in 0..n {
                    col[i] -= d * q[i][k];
                }
            }
            let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
            r[j][j] = norm;
            for i in 0..n {
                q[i][j] = if norm > 0.0 { col[i] / norm } else { 0.0 };
            }
        }
        m = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| r[i][k] * q[k][j]).sum()).collect()).collect();
        v = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| v[i][k] * q[k][j]).sum()).collect()).collect();
    }
    let values = (0..n).map(|i| m[i][i]).collect();
    let vectors = (0..n).map(|j| (0..n).map(|i| v[i][j]).collect()).collect();
    (values, vectors)
}
