use serde::{Deserialize, Serialize};

use super::require_nodes;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::symmetric_eigen;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Graphs up to this many nodes go straight to the dense eigensolver.
pub const DENSE_THRESHOLD: usize = 64;
/// Largest graph the dense solver will take as a fallback when power
/// iteration stalls.
pub const DENSE_FALLBACK_MAX: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectralMethod {
    PowerIteration,
    Jacobi,
}

/// Spectral radius and trace of the Laplacian `L = D - A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub spectral_radius: f64,
    pub trace: f64,
    pub iterations_used: usize,
    /// True when power iteration met the tolerance; false when the dense
    /// solver produced the radius.
    pub converged: bool,
    pub method: SpectralMethod,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    pub estimate: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// `out = L x` using the neighbor lists.
fn laplacian_apply(g: &Graph, x: &[f64], out: &mut [f64]) {
    for (v, o) in out.iter_mut().enumerate() {
        let adj: f64 = g.neighbors(v).iter().map(|&u| x[u]).sum();
        *o = g.degree(v) as f64 * x[v] - adj;
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|a| *a /= norm);
    }
    norm
}

/// splitmix64 of `i`, mapped to `[0, 1)`.
fn unit_hash(i: u64) -> f64 {
    let mut z = i.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

/// Largest Laplacian eigenvalue by power iteration. Stops once two
/// successive Rayleigh quotients differ by less than `tol`.
pub fn power_iteration(g: &Graph, tol: f64, max_iter: usize) -> PowerIteration {
    let n = g.node_count();
    if g.edge_count() == 0 {
        return PowerIteration { estimate: 0.0, iterations: 0, converged: true };
    }
    // All-ones is the null vector of L, so perturb it per index. The
    // perturbation is hashed rather than an irrational multiple: small
    // graphs have eigenvectors in quadratic fields, and a golden-ratio
    // sequence can land orthogonal to the top one.
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + (unit_hash(i as u64) - 0.5)).collect();
    normalize(&mut v);
    let mut w = vec![0.0; n];
    let mut previous: Option<f64> = None;
    let mut estimate = 0.0;
    for it in 1..=max_iter {
        laplacian_apply(g, &v, &mut w);
        estimate = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
        if previous.is_some_and(|p: f64| (estimate - p).abs() < tol) {
            return PowerIteration { estimate, iterations: it, converged: true };
        }
        previous = Some(estimate);
        std::mem::swap(&mut v, &mut w);
        if normalize(&mut v) == 0.0 {
            break;
        }
    }
    PowerIteration { estimate, iterations: max_iter, converged: false }
}

pub fn dense_laplacian(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut l = vec![vec![0.0; n]; n];
    for (v, row) in l.iter_mut().enumerate() {
        row[v] = g.degree(v) as f64;
        for &u in g.neighbors(v) {
            row[u] = -1.0;
        }
    }
    l
}

/// Largest Laplacian eigenvalue from the full dense eigendecomposition.
pub fn jacobi_spectral_radius(g: &Graph) -> f64 {
    if g.edge_count() == 0 {
        return 0.0;
    }
    let eig = symmetric_eigen(&dense_laplacian(g));
    eig.values.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

/// Spectral radius and trace of the Laplacian.
///
/// The trace is `sum(degree) = 2m`, exact. The radius comes from the dense
/// Jacobi solver for graphs of at most [`DENSE_THRESHOLD`] nodes and from
/// power iteration otherwise, falling back to Jacobi when iteration stalls
/// on a graph of at most [`DENSE_FALLBACK_MAX`] nodes.
pub fn laplacian_spectrum_summary(g: &Graph, tol: f64, max_iter: usize) -> Result<SpectralSummary> {
    let n = require_nodes(g)?;
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let trace = (2 * g.edge_count()) as f64;
    let dense = |iterations_used| SpectralSummary {
        spectral_radius: jacobi_spectral_radius(g),
        trace,
        iterations_used,
        converged: false,
        method: SpectralMethod::Jacobi,
    };
    if g.edge_count() == 0 {
        return Ok(SpectralSummary {
            spectral_radius: 0.0,
            trace,
            iterations_used: 0,
            converged: true,
            method: SpectralMethod::PowerIteration,
        });
    }
    if n <= DENSE_THRESHOLD {
        return Ok(dense(0));
    }
    let p = power_iteration(g, tol, max_iter);
    if p.converged {
        Ok(SpectralSummary {
            spectral_radius: p.estimate,
            trace,
            iterations_used: p.iterations,
            converged: true,
            method: SpectralMethod::PowerIteration,
        })
    } else if n <= DENSE_FALLBACK_MAX {
        log::debug!("power iteration stalled on n={n}; using dense solver");
        Ok(dense(p.iterations))
    } else {
        Err(Error::NoConvergence { estimate: p.estimate, iterations: p.iterations })
    }
}
