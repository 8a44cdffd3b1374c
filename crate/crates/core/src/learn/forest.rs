//! Random forest of entropy-split decision trees on bootstrap samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::derive_seed;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub trees: usize,
    pub max_depth: usize,
    pub seed: u64,
    /// Candidate features per split; `None` means `ceil(sqrt(d))`.
    pub max_features: Option<usize>,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig { trees: 200, max_depth: 5, seed: 42, max_features: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    /// Rows with `x[feature] <= threshold` go left.
    Split { feature: usize, threshold: f64, left: usize, right: usize },
    /// Bootstrap sample counts per class reaching this leaf.
    Leaf { counts: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
    /// Unnormalized impurity decrease credited to each feature.
    pub impurity_decrease: Vec<f64>,
}

fn entropy(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / t;
            -p * p.log2()
        })
        .sum()
}

fn majority(counts: &[usize]) -> usize {
    let mut best = 0;
    for (c, &n) in counts.iter().enumerate() {
        if n > counts[best] {
            best = c;
        }
    }
    best
}

struct Builder<'a> {
    rows: &'a [Vec<f64>],
    labels: &'a [usize],
    classes: usize,
    features: usize,
    max_features: usize,
    max_depth: usize,
    root_size: f64,
    nodes: Vec<TreeNode>,
    importance: Vec<f64>,
}

struct BestSplit {
    gain: f64,
    feature: usize,
    threshold: f64,
}

const MIN_GAIN: f64 = 1e-12;

impl Builder<'_> {
    fn counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut c = vec![0; self.classes];
        for &i in idx {
            c[self.labels[i]] += 1;
        }
        c
    }

    /// Best threshold on one feature, or `None` when it is constant here.
    fn scan(&self, idx: &[usize], feature: usize, parent: f64, buf: &mut Vec<(f64, usize)>) -> Option<(f64, f64)> {
        buf.clear();
        buf.extend(idx.iter().map(|&i| (self.rows[i][feature], self.labels[i])));
        buf.sort_by(|a, b| a.0.total_cmp(&b.0));
        if buf[0].0 == buf[buf.len() - 1].0 {
            return None;
        }
        let n = buf.len();
        let mut left = vec![0usize; self.classes];
        let mut right = vec![0usize; self.classes];
        for &(_, l) in buf.iter() {
            right[l] += 1;
        }
        let mut best: Option<(f64, f64)> = None;
        for k in 0..n - 1 {
            let (v, l) = buf[k];
            left[l] += 1;
            right[l] -= 1;
            let next = buf[k + 1].0;
            if v == next {
                continue;
            }
            let nl = k + 1;
            let nr = n - nl;
            let child = (nl as f64 * entropy(&left, nl) + nr as f64 * entropy(&right, nr)) / n as f64;
            let gain = parent - child;
            if best.is_none_or(|(g, _)| gain > g) {
                let mut mid = v + (next - v) / 2.0;
                if mid >= next {
                    mid = v;
                }
                best = Some((gain, mid));
            }
        }
        best
    }

    fn build(&mut self, idx: Vec<usize>, depth: usize, rng: &mut ChaCha8Rng) -> usize {
        let counts = self.counts(&idx);
        let parent = entropy(&counts, idx.len());
        let id = self.nodes.len();
        self.nodes.push(TreeNode::Leaf { counts: counts.clone() });
        if depth >= self.max_depth || parent == 0.0 || idx.len() < 2 {
            return id;
        }

        // draw features without replacement; constant ones do not use up
        // the candidate budget
        let mut order: Vec<usize> = (0..self.features).collect();
        let mut tried = 0;
        let mut best: Option<BestSplit> = None;
        let mut buf = Vec::with_capacity(idx.len());
        for k in 0..self.features {
            if tried == self.max_features {
                break;
            }
            let pick = rng.gen_range(k..self.features);
            order.swap(k, pick);
            let f = order[k];
            let Some((gain, threshold)) = self.scan(&idx, f, parent, &mut buf) else {
                continue;
            };
            tried += 1;
            if best.as_ref().is_none_or(|b| gain > b.gain) {
                best = Some(BestSplit { gain, feature: f, threshold });
            }
        }
        let Some(best) = best.filter(|b| b.gain > MIN_GAIN) else {
            return id;
        };

        self.importance[best.feature] += idx.len() as f64 / self.root_size * best.gain;
        let (li, ri): (Vec<usize>, Vec<usize>) =
            idx.iter().partition(|&&i| self.rows[i][best.feature] <= best.threshold);
        let left = self.build(li, depth + 1, rng);
        let right = self.build(ri, depth + 1, rng);
        self.nodes[id] = TreeNode::Split { feature: best.feature, threshold: best.threshold, left, right };
        id
    }
}

impl DecisionTree {
    fn fit(
        rows: &[Vec<f64>],
        labels: &[usize],
        sample: Vec<usize>,
        classes: usize,
        max_features: usize,
        max_depth: usize,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let features = rows[0].len();
        let mut b = Builder {
            rows,
            labels,
            classes,
            features,
            max_features,
            max_depth,
            root_size: sample.len() as f64,
            nodes: Vec::new(),
            importance: vec![0.0; features],
        };
        b.build(sample, 0, rng);
        DecisionTree { nodes: b.nodes, impurity_decrease: b.importance }
    }

    fn leaf(&self, x: &[f64]) -> &[usize] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                TreeNode::Split { feature, threshold, left, right } => {
                    at = if x[*feature] <= *threshold { *left } else { *right }
                }
                TreeNode::Leaf { counts } => return counts,
            }
        }
    }

    /// Majority class of the leaf `x` lands in; ties to the lower id.
    pub fn predict(&self, x: &[f64]) -> usize {
        majority(self.leaf(x))
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], at: usize) -> usize {
            match &nodes[at] {
                TreeNode::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
                TreeNode::Leaf { .. } => 0,
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn is_stump(&self) -> bool {
        self.nodes.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub config: ForestConfig,
    pub classes: usize,
    pub features: usize,
    pub trees: Vec<DecisionTree>,
}

impl Forest {
    /// Trains `config.trees` trees, tree `t` on a bootstrap sample drawn
    /// with its own generator seeded from `(config.seed, t)`. The result
    /// does not depend on the size of the rayon pool.
    pub fn fit(config: &ForestConfig, rows: &[Vec<f64>], labels: &[usize]) -> Result<Self> {
        if rows.is_empty() || rows.len() != labels.len() {
            return Err(Error::invalid("forest needs matching, non-empty rows and labels"));
        }
        if config.trees == 0 {
            return Err(Error::invalid("forest needs at least one tree"));
        }
        let features = rows[0].len();
        if features == 0 {
            return Err(Error::invalid("rows have no features"));
        }
        let classes = labels.iter().max().unwrap() + 1;
        let max_features =
            config.max_features.unwrap_or_else(|| (features as f64).sqrt().ceil() as usize).clamp(1, features);
        let n = rows.len();
        let trees = (0..config.trees)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, t as u64));
                let sample: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
                DecisionTree::fit(rows, labels, sample, classes, max_features, config.max_depth, &mut rng)
            })
            .collect();
        Ok(Forest { config: *config, classes, features, trees })
    }

    /// Hard majority vote over trees; ties to the lower class id.
    pub fn predict(&self, x: &[f64]) -> usize {
        let mut votes = vec![0usize; self.classes];
        for t in &self.trees {
            votes[t.predict(x)] += 1;
        }
        majority(&votes)
    }

    /// Mean decrease in impurity per feature: each tree's decreases are
    /// normalized to sum to one, then averaged over trees that split at
    /// least once. All zeros when no tree splits.
    pub fn feature_importance(&self) -> Vec<f64> {
        let mut total = vec![0.0; self.features];
        let mut used = 0usize;
        for t in &self.trees {
            let s: f64 = t.impurity_decrease.iter().sum();
            if t.is_stump() || s <= 0.0 {
                continue;
            }
            used += 1;
            for (acc, v) in total.iter_mut().zip(&t.impurity_decrease) {
                *acc += v / s;
            }
        }
        if used > 0 {
            total.iter_mut().for_each(|v| *v /= used as f64);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn separable() -> (Vec<Vec<f64>>, Vec<usize>) {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..20 {
            let class = i % 2;
            let x0 = if class == 0 { -1.0 - i as f64 * 0.1 } else { 2.0 + i as f64 * 0.1 };
            let mut r = vec![x0];
            r.extend((1..9).map(|k| ((i * 7 + k * 3) % 5) as f64));
            rows.push(r);
            labels.push(class);
        }
        (rows, labels)
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(&[4, 0], 4), 0.0);
        assert!((entropy(&[2, 2], 4) - 1.0).abs() < 1e-15);
        assert_eq!(entropy(&[], 0), 0.0);
    }

    #[test]
    fn separable_feature_gives_perfect_training_accuracy() {
        let (rows, labels) = separable();
        let f = Forest::fit(&ForestConfig::default(), &rows, &labels).unwrap();
        assert_eq!(f.trees.len(), 200);
        for (r, &l) in rows.iter().zip(&labels) {
            assert_eq!(f.predict(r), l);
        }
        for t in &f.trees {
            assert!(t.depth() <= 5);
        }
    }

    #[test]
    fn pure_input_gives_stumps() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64; 9]).collect();
        let labels = vec![1; 10];
        let f = Forest::fit(&ForestConfig::default(), &rows, &labels).unwrap();
        assert!(f.trees.iter().all(DecisionTree::is_stump));
        assert!(rows.iter().all(|r| f.predict(r) == 1));
        assert_eq!(f.feature_importance(), vec![0.0; 9]);
    }

    #[test]
    fn importance_of_sole_informative_feature() {
        // other columns constant: every split must use feature 0
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let mut r = vec![3.0; 9];
                r[0] = if i % 2 == 0 { -(i as f64) } else { 1.0 + i as f64 };
                r
            })
            .collect();
        let labels: Vec<usize> = (0..20).map(|i| i % 2).collect();
        let f = Forest::fit(&ForestConfig::default(), &rows, &labels).unwrap();
        let imp = f.feature_importance();
        assert!((imp[0] - 1.0).abs() < 1e-12);
        assert!(imp[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn importance_normalized() {
        let (rows, labels) = separable();
        let f = Forest::fit(&ForestConfig::default(), &rows, &labels).unwrap();
        let imp = f.feature_importance();
        assert!(imp.iter().all(|&v| v >= 0.0));
        assert!((imp.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(imp[0] > 0.5 && imp[1..].iter().all(|&v| v < imp[0]), "{imp:?}");
    }

    #[test]
    fn deterministic_for_seed() {
        let (rows, labels) = separable();
        let a = Forest::fit(&ForestConfig::default(), &rows, &labels).unwrap();
        let b = Forest::fit(&ForestConfig::default(), &rows, &labels).unwrap();
        assert_eq!(a, b);
        let c = Forest::fit(&ForestConfig { seed: 7, ..Default::default() }, &rows, &labels).unwrap();
        assert_ne!(a.trees, c.trees);
    }
}
