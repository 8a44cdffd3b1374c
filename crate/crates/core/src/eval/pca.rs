use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{format_real, FeatureMask, FeatureMatrix, Standardizer};
use crate::linalg::symmetric_eigen;

/// Projection of the rows onto the top two principal axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding2D {
    pub coordinates: Vec<[f64; 2]>,
    /// Unit principal axes; the largest-magnitude entry of each is positive.
    pub components: [Vec<f64>; 2],
    /// Sample variance along each axis, descending.
    pub explained_variance: [f64; 2],
}

/// Two-component PCA of `rows` via the Jacobi eigendecomposition of the
/// sample covariance (divisor `n - 1`). Rows are centered here; scaling is
/// the caller's choice.
pub fn pca2(rows: &[Vec<f64>]) -> Result<Embedding2D> {
    if rows.len() < 2 {
        return Err(Error::invalid("PCA needs at least two rows"));
    }
    let d = rows[0].len();
    let n = rows.len() as f64;
    let mut mean = vec![0.0; d];
    for r in rows {
        for (m, x) in mean.iter_mut().zip(r) {
            *m += x / n;
        }
    }
    let centered: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().zip(&mean).map(|(x, m)| x - m).collect()).collect();
    let mut cov = vec![vec![0.0; d]; d];
    for r in &centered {
        for i in 0..d {
            for j in i..d {
                cov[i][j] += r[i] * r[j];
            }
        }
    }
    for i in 0..d {
        for j in i..d {
            cov[i][j] /= n - 1.0;
            cov[j][i] = cov[i][j];
        }
    }
    let scale = cov.iter().enumerate().map(|(i, r)| r[i]).fold(0.0f64, f64::max);
    let varying = (0..d).filter(|&i| cov[i][i] > 1e-12 * scale.max(f64::MIN_POSITIVE)).count();
    if varying < 2 || scale == 0.0 {
        return Err(Error::invalid(format!("PCA needs at least two non-constant columns, found {varying}")));
    }

    let eig = symmetric_eigen(&cov);
    let orient = |mut v: Vec<f64>| {
        let lead = v.iter().enumerate().fold(0, |best, (i, x)| if x.abs() > v[best].abs() { i } else { best });
        if v[lead] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        v
    };
    let components = [orient(eig.vectors[0].clone()), orient(eig.vectors[1].clone())];
    let coordinates = centered
        .iter()
        .map(|r| {
            [
                r.iter().zip(&components[0]).map(|(a, b)| a * b).sum(),
                r.iter().zip(&components[1]).map(|(a, b)| a * b).sum(),
            ]
        })
        .collect();
    Ok(Embedding2D { coordinates, components, explained_variance: [eig.values[0].max(0.0), eig.values[1].max(0.0)] })
}

/// PCA of a feature matrix, z-scored over all rows first when `scale` is
/// set.
pub fn feature_pca(fm: &FeatureMatrix, scale: bool) -> Result<Embedding2D> {
    let rows = fm.select(FeatureMask::ALL);
    if scale && !rows.is_empty() {
        pca2(&Standardizer::fit(&rows).transform(&rows))
    } else {
        pca2(&rows)
    }
}

pub const PCA_CSV_HEADER: &str = "graph_id,label,pc1,pc2";

/// One `graph_id,label,pc1,pc2` row per graph, original labels.
pub fn write_pca_csv<W: std::io::Write>(fm: &FeatureMatrix, e: &Embedding2D, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{PCA_CSV_HEADER}")?;
    for ((id, &label), [x, y]) in fm.graph_ids.iter().zip(&fm.labels).zip(&e.coordinates) {
        writeln!(out, "{id},{},{},{}", fm.label_map[label], format_real(*x), format_real(*y))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_line() {
        let axis = {
            let mut a = vec![0.0; 9];
            a[0] = 0.5f64.sqrt();
            a[1] = 0.5f64.sqrt();
            a
        };
        let rows: Vec<Vec<f64>> = (-5..=5).map(|t| axis.iter().map(|a| a * t as f64).collect()).collect();
        let e = pca2(&rows).unwrap();
        assert!(e.explained_variance[1].abs() < 1e-9);
        for (a, b) in e.components[0].iter().zip(&axis) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((e.coordinates[10][0] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn needs_two_varying_columns() {
        let rows = vec![vec![1.0, 2.0, 3.0], vec![2.0, 2.0, 3.0], vec![5.0, 2.0, 3.0]];
        assert!(pca2(&rows).is_err());
        assert!(pca2(&rows[..1]).is_err());
    }
}
