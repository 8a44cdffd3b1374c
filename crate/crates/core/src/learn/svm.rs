//! Linear soft-margin SVM trained on the dual by SMO with second-order
//! working-set selection, and a one-vs-one multiclass wrapper.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmConfig {
    /// Box constraint on the dual variables.
    pub c: f64,
    /// KKT violation tolerance.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig { c: 10.0, tol: 1e-3, max_iter: 100_000 }
    }
}

/// Binary linear separator; positive decision means the `+1` class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinarySvm {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Dual objective `sum(alpha) - |w|^2 / 2` at the returned solution.
    pub dual_objective: f64,
}

const TAU: f64 = 1e-12;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl BinarySvm {
    pub fn decision(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    /// Trains on rows `x` with targets `y` in `{-1, +1}`.
    pub fn fit(x: &[&[f64]], y: &[f64], cfg: &SvmConfig) -> Result<Self> {
        let n = x.len();
        if n == 0 || n != y.len() {
            return Err(Error::invalid("SVM needs matching, non-empty rows and targets"));
        }
        if !y.iter().any(|&t| t > 0.0) || !y.iter().any(|&t| t < 0.0) {
            return Err(Error::invalid("SVM needs both classes present"));
        }
        if cfg.c.is_nan() || cfg.c <= 0.0 {
            return Err(Error::invalid(format!("C must be positive, got {}", cfg.c)));
        }
        let d = x[0].len();
        let c = cfg.c;
        let sq: Vec<f64> = x.iter().map(|r| dot(r, r)).collect();
        let mut alpha = vec![0.0; n];
        // gradient of 1/2 a'Qa - e'a
        let mut grad = vec![-1.0; n];
        let mut w = vec![0.0; d];
        let mut iterations = 0;
        let mut converged = false;

        while iterations < cfg.max_iter {
            // i: maximal violator in I_up
            let mut gmax = f64::NEG_INFINITY;
            let mut i = usize::MAX;
            for t in 0..n {
                let v = -y[t] * grad[t];
                let up = if y[t] > 0.0 { alpha[t] < c } else { alpha[t] > 0.0 };
                if up && v >= gmax {
                    gmax = v;
                    i = t;
                }
            }
            // j: second-order choice in I_low
            let mut gmax2 = f64::NEG_INFINITY;
            let mut j = usize::MAX;
            let mut best = f64::INFINITY;
            if i != usize::MAX {
                let xi = x[i];
                for t in 0..n {
                    let low = if y[t] > 0.0 { alpha[t] > 0.0 } else { alpha[t] < c };
                    if !low {
                        continue;
                    }
                    let v = y[t] * grad[t];
                    gmax2 = gmax2.max(v);
                    let diff = gmax + v;
                    if diff > 0.0 {
                        let quad = (sq[i] + sq[t] - 2.0 * dot(xi, x[t])).max(TAU);
                        let obj = -diff * diff / quad;
                        if obj <= best {
                            best = obj;
                            j = t;
                        }
                    }
                }
            }
            if i == usize::MAX || j == usize::MAX || gmax + gmax2 < cfg.tol {
                converged = true;
                break;
            }
            iterations += 1;

            let (ai, aj) = (alpha[i], alpha[j]);
            let quad = (sq[i] + sq[j] - 2.0 * dot(x[i], x[j])).max(TAU);
            if y[i] != y[j] {
                let delta = (-grad[i] - grad[j]) / quad;
                let diff = alpha[i] - alpha[j];
                alpha[i] += delta;
                alpha[j] += delta;
                if diff > 0.0 {
                    if alpha[j] < 0.0 {
                        alpha[j] = 0.0;
                        alpha[i] = diff;
                    }
                } else if alpha[i] < 0.0 {
                    alpha[i] = 0.0;
                    alpha[j] = -diff;
                }
                if diff > 0.0 {
                    if alpha[i] > c {
                        alpha[i] = c;
                        alpha[j] = c - diff;
                    }
                } else if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = c + diff;
                }
            } else {
                let delta = (grad[i] - grad[j]) / quad;
                let sum = alpha[i] + alpha[j];
                alpha[i] -= delta;
                alpha[j] += delta;
                if sum > c {
                    if alpha[i] > c {
                        alpha[i] = c;
                        alpha[j] = sum - c;
                    }
                } else if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = sum;
                }
                if sum > c {
                    if alpha[j] > c {
                        alpha[j] = c;
                        alpha[i] = sum - c;
                    }
                } else if alpha[i] < 0.0 {
                    alpha[i] = 0.0;
                    alpha[j] = sum;
                }
            }

            // w and the gradient move along u = sum of y * d(alpha) * x
            let (di, dj) = (y[i] * (alpha[i] - ai), y[j] * (alpha[j] - aj));
            let u: Vec<f64> = (0..d).map(|k| di * x[i][k] + dj * x[j][k]).collect();
            for (wk, uk) in w.iter_mut().zip(&u) {
                *wk += uk;
            }
            for t in 0..n {
                grad[t] += y[t] * dot(x[t], &u);
            }
        }
        if !converged {
            log::warn!("SVM stopped at the iteration cap ({}) before meeting tol", cfg.max_iter);
        }

        // offset: mean over free vectors, else midpoint of the feasible interval
        let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut free, mut free_sum) = (0usize, 0.0);
        for t in 0..n {
            let yg = y[t] * grad[t];
            if alpha[t] >= c {
                if y[t] < 0.0 {
                    ub = ub.min(yg);
                } else {
                    lb = lb.max(yg);
                }
            } else if alpha[t] <= 0.0 {
                if y[t] > 0.0 {
                    ub = ub.min(yg);
                } else {
                    lb = lb.max(yg);
                }
            } else {
                free += 1;
                free_sum += yg;
            }
        }
        let rho = if free > 0 { free_sum / free as f64 } else { (ub + lb) / 2.0 };
        let dual_objective = alpha.iter().sum::<f64>() - 0.5 * dot(&w, &w);
        Ok(BinarySvm { weights: w, bias: -rho, iterations, converged, dual_objective })
    }
}

/// One binary machine per unordered class pair; `positive < negative`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairMachine {
    pub positive: usize,
    pub negative: usize,
    pub svm: BinarySvm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub c: f64,
    /// Class ids seen in training, ascending.
    pub classes: Vec<usize>,
    pub machines: Vec<PairMachine>,
    /// False if any pair stopped at the iteration cap.
    pub converged: bool,
}

impl SvmModel {
    pub fn fit(cfg: &SvmConfig, rows: &[Vec<f64>], labels: &[usize]) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::invalid("rows and labels differ in length"));
        }
        let mut classes: Vec<usize> = labels.to_vec();
        classes.sort_unstable();
        classes.dedup();
        if classes.len() < 2 {
            return Err(Error::invalid("SVM training needs at least two classes"));
        }
        let pairs: Vec<(usize, usize)> =
            classes.iter().enumerate().flat_map(|(a, &p)| classes[a + 1..].iter().map(move |&q| (p, q))).collect();
        let machines = pairs
            .into_iter()
            .map(|(p, q)| {
                let (x, y): (Vec<&[f64]>, Vec<f64>) = rows
                    .iter()
                    .zip(labels)
                    .filter(|(_, &l)| l == p || l == q)
                    .map(|(r, &l)| (r.as_slice(), if l == p { 1.0 } else { -1.0 }))
                    .unzip();
                BinarySvm::fit(&x, &y, cfg).map(|svm| PairMachine { positive: p, negative: q, svm })
            })
            .collect::<Result<Vec<_>>>()?;
        let converged = machines.iter().all(|m| m.svm.converged);
        Ok(SvmModel { c: cfg.c, classes, machines, converged })
    }

    /// One-vs-one vote. Ties go to the class with the larger summed
    /// decision magnitude over the pairs it won, then to the lower id.
    pub fn predict(&self, x: &[f64]) -> usize {
        let top = self.classes.last().map_or(0, |c| c + 1);
        let mut votes = vec![0usize; top];
        let mut strength = vec![0.0f64; top];
        for m in &self.machines {
            let f = m.svm.decision(x);
            let winner = if f > 0.0 { m.positive } else { m.negative };
            votes[winner] += 1;
            strength[winner] += f.abs();
        }
        let mut best = self.classes[0];
        for &c in &self.classes[1..] {
            if votes[c] > votes[best] || (votes[c] == votes[best] && strength[c] > strength[best]) {
                best = c;
            }
        }
        best
    }
}
