mod common;

use common::oracles::qr_eigen;
use graphfeat::eval::{anova_oneway, cross_validate, masks_of_size, pca2, stratified_folds, subset_search};
use graphfeat::features::Standardizer;
use graphfeat::learn::{ClassifierConfig, ForestConfig, KnnConfig, SvmConfig};
use graphfeat::{FeatureMask, FeatureMatrix, FeatureVector, FEATURE_COUNT};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn matrix(rows: Vec<[f64; FEATURE_COUNT]>, labels: Vec<usize>) -> FeatureMatrix {
    let classes = labels.iter().max().unwrap() + 1;
    FeatureMatrix::new(
        "toy",
        rows.into_iter().map(FeatureVector::from_array).collect(),
        labels,
        (0..classes as i64).collect(),
    )
    .unwrap()
}

/// Two far-apart clusters of ten rows each.
fn separable_toy() -> FeatureMatrix {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for i in 0..20 {
        let c = i % 2;
        let base = if c == 0 { 0.0 } else { 100.0 };
        let mut r = [0.0; FEATURE_COUNT];
        for (j, v) in r.iter_mut().enumerate() {
            *v = base + ((i * 7 + j * 3) % 5) as f64;
        }
        rows.push(r);
        labels.push(c);
    }
    matrix(rows, labels)
}

fn all_configs() -> Vec<ClassifierConfig> {
    vec![
        ClassifierConfig::Knn(KnnConfig::default()),
        ClassifierConfig::Knn(KnnConfig { k: 1 }),
        ClassifierConfig::Svm(SvmConfig::default()),
        ClassifierConfig::RandomForest(ForestConfig::default()),
    ]
}

#[test]
fn separable_toy_is_perfect() {
    let fm = separable_toy();
    let folds = stratified_folds(&fm.labels, 5, 1).unwrap();
    for cfg in all_configs() {
        for scale in [true, false] {
            let r = cross_validate(&fm, &cfg, &folds, FeatureMask::ALL, scale).unwrap();
            assert_eq!(r.mean_accuracy, 100.0, "{:?}", cfg.kind());
            assert!(r.fold_accuracy.iter().all(|&a| (0.0..=1.0).contains(&a)));
        }
    }
}

#[test]
fn permuted_labels_fall_to_chance() {
    let fm = separable_toy();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let cfg = ClassifierConfig::RandomForest(ForestConfig::default());
    let mut means = Vec::new();
    for trial in 0..20 {
        let mut labels = fm.labels.clone();
        labels.shuffle(&mut rng);
        let shuffled = FeatureMatrix { labels, ..fm.clone() };
        let folds = stratified_folds(&shuffled.labels, 5, trial).unwrap();
        means.push(cross_validate(&shuffled, &cfg, &folds, FeatureMask::ALL, false).unwrap().mean_accuracy);
    }
    let mean = means.iter().sum::<f64>() / means.len() as f64;
    // majority class rate is 50%
    assert!((mean - 50.0).abs() <= 15.0, "{mean} over {means:?}");
}

#[test]
fn cv_is_reproducible_across_thread_counts() {
    let fm = noisy_toy(80, 3);
    let folds = stratified_folds(&fm.labels, 5, 8).unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    for cfg in all_configs() {
        let a = one.install(|| cross_validate(&fm, &cfg, &folds, FeatureMask::ALL, true)).unwrap();
        let b = four.install(|| cross_validate(&fm, &cfg, &folds, FeatureMask::ALL, true)).unwrap();
        assert_eq!(a, b);
        for (x, y) in a.fold_accuracy.iter().zip(&b.fold_accuracy) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        let mean = 100.0 * a.fold_accuracy.iter().sum::<f64>() / a.fold_accuracy.len() as f64;
        assert_eq!(a.mean_accuracy, mean);
    }
}

/// Rows whose class depends on columns 2 and 5 with label noise.
fn noisy_toy(n: usize, seed: u64) -> FeatureMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..n {
        let mut r = [0.0; FEATURE_COUNT];
        for v in r.iter_mut() {
            *v = rng.gen_range(0.0..10.0);
        }
        let s = r[2] - r[5] + rng.gen_range(-3.0..3.0);
        labels.push(usize::from(s > 0.0));
        rows.push(r);
    }
    matrix(rows, labels)
}

#[test]
fn subset_search_matches_re_enumeration() {
    let fm = noisy_toy(50, 21);
    let folds = stratified_folds(&fm.labels, 5, 2).unwrap();
    let forest = ForestConfig { trees: 15, ..ForestConfig::default() };
    let search = subset_search(&fm, 1..=FEATURE_COUNT, &forest, &folds).unwrap();
    assert_eq!(search.evaluated(), 511);
    let cfg = ClassifierConfig::RandomForest(forest);
    for level in &search.levels {
        let masks = masks_of_size(level.k);
        assert_eq!(level.evaluated, masks.len());
        let mut best: Option<(FeatureMask, f64)> = None;
        for m in masks {
            let acc = cross_validate(&fm, &cfg, &folds, m, false).unwrap().mean_accuracy;
            assert!(level.best.mean_accuracy >= acc);
            if best.is_none_or(|(_, b)| acc > b) {
                best = Some((m, acc));
            }
        }
        let (mask, acc) = best.unwrap();
        assert_eq!(level.best.mask, mask, "k={}", level.k);
        assert_eq!(level.best.mean_accuracy, acc);
    }
    let full = cross_validate(&fm, &cfg, &folds, FeatureMask::ALL, false).unwrap();
    assert_eq!(search.level(9).unwrap().best, full);
}

#[test]
fn single_separating_feature_wins_at_k1() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for i in 0..40 {
        let mut r = [0.0; FEATURE_COUNT];
        for v in r.iter_mut() {
            *v = rng.gen_range(0.0..1.0);
        }
        let c = i % 2;
        r[6] = c as f64 * 5.0 + rng.gen_range(0.0..1.0);
        rows.push(r);
        labels.push(c);
    }
    let fm = matrix(rows, labels);
    let folds = stratified_folds(&fm.labels, 5, 0).unwrap();
    let search = subset_search(&fm, [1], &ForestConfig { trees: 25, ..Default::default() }, &folds).unwrap();
    let best = &search.levels[0].best;
    assert_eq!(best.mask, FeatureMask::from_indices(&[6]).unwrap());
    assert_eq!(best.mean_accuracy, 100.0);
}

fn correlated_rows(seed: u64, n: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let z: Vec<f64> = (0..FEATURE_COUNT).map(|_| rng.gen_range(-1.0..1.0)).collect();
            // distinct spreads per latent direction so eigenvalues separate
            (0..FEATURE_COUNT)
                .map(|j| (0..=j).map(|k| z[k] * (FEATURE_COUNT - k) as f64 * 0.5).sum::<f64>() + j as f64)
                .collect()
        })
        .collect()
}

#[test]
fn pca_matches_qr_oracle() {
    for seed in 0..5 {
        let rows = correlated_rows(seed, 60);
        let e = pca2(&rows).unwrap();
        let n = rows.len() as f64;
        let mean: Vec<f64> = (0..FEATURE_COUNT).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n).collect();
        let cov: Vec<Vec<f64>> = (0..FEATURE_COUNT)
            .map(|i| {
                (0..FEATURE_COUNT)
                    .map(|j| rows.iter().map(|r| (r[i] - mean[i]) * (r[j] - mean[j])).sum::<f64>() / (n - 1.0))
                    .collect()
            })
            .collect();
        let (values, vectors) = qr_eigen(&cov);
        let mut order: Vec<usize> = (0..FEATURE_COUNT).collect();
        order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
        for c in 0..2 {
            let mut axis = vectors[order[c]].clone();
            let lead = (0..FEATURE_COUNT).max_by(|&a, &b| axis[a].abs().partial_cmp(&axis[b].abs()).unwrap()).unwrap();
            if axis[lead] < 0.0 {
                axis.iter_mut().for_each(|x| *x = -*x);
            }
            assert!((e.explained_variance[c] - values[order[c]]).abs() < 1e-8 * values[order[0]]);
            for (row, coord) in rows.iter().zip(&e.coordinates) {
                let want: f64 = row.iter().zip(&mean).zip(&axis).map(|((x, m), a)| (x - m) * a).sum();
                assert!((coord[c] - want).abs() < 1e-6, "seed {seed} pc{c}: {} vs {want}", coord[c]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pca_axes_orthonormal_and_sorted(seed in any::<u64>(), n in 3usize..40) {
        let rows = correlated_rows(seed, n);
        let scaled = Standardizer::fit(&rows).transform(&rows);
        let e = pca2(&scaled).unwrap();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        prop_assert!((dot(&e.components[0], &e.components[0]) - 1.0).abs() < 1e-9);
        prop_assert!((dot(&e.components[1], &e.components[1]) - 1.0).abs() < 1e-9);
        prop_assert!(dot(&e.components[0], &e.components[1]).abs() < 1e-9);
        prop_assert!(e.explained_variance[0] >= e.explained_variance[1]);
        prop_assert!(e.explained_variance[1] >= 0.0);
        prop_assert_eq!(e.coordinates.len(), n);
    }

    #[test]
    fn pca_ignores_row_order(seed in any::<u64>(), shift in 1usize..20) {
        let rows = correlated_rows(seed, 25);
        let mut rotated = rows.clone();
        rotated.rotate_left(shift % rows.len());
        let a = pca2(&rows).unwrap();
        let b = pca2(&rotated).unwrap();
        for c in 0..2 {
            for (x, y) in a.components[c].iter().zip(&b.components[c]) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn folds_are_stratified(labels in prop::collection::vec(0usize..4, 10..120), k in 2usize..8, seed in any::<u64>()) {
        prop_assume!(k <= labels.len());
        let f = stratified_folds(&labels, k, seed).unwrap();
        prop_assert_eq!(f.fold_of_row.len(), labels.len());
        for c in 0..4 {
            let mut counts = vec![0usize; k];
            for (i, &l) in labels.iter().enumerate() {
                if l == c {
                    counts[f.fold_of_row[i]] += 1;
                }
            }
            prop_assert!(counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1);
        }
        prop_assert_eq!(&f, &stratified_folds(&labels, k, seed).unwrap());
    }
}

/// F(d1, d2) upper tail by Simpson quadrature of the density, with
/// `f = t / (1 - t)` to map the half line onto `[0, 1)`.
fn f_tail_by_quadrature(f: f64, d1: f64, d2: f64) -> f64 {
    let ln_beta =
        |a: f64, b: f64| graphfeat::eval::ln_gamma(a) + graphfeat::eval::ln_gamma(b) - graphfeat::eval::ln_gamma(a + b);
    let density = |x: f64| {
        ((d1 / 2.0) * (d1 / d2).ln() + (d1 / 2.0 - 1.0) * x.ln()
            - ((d1 + d2) / 2.0) * (1.0 + d1 * x / d2).ln()
            - ln_beta(d1 / 2.0, d2 / 2.0))
        .exp()
    };
    let lo = f / (1.0 + f);
    let steps = 400_000;
    let h = (1.0 - lo) / steps as f64;
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        density(t / (1.0 - t)) / (1.0 - t).powi(2)
    };
    let mut acc = g(lo) + g(1.0);
    for i in 1..steps {
        acc += g(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn anova_p_value_matches_integrated_density() {
    let r = anova_oneway(&[vec![1.0, 2.0, 3.0], vec![2.0, 3.0, 4.0], vec![3.0, 4.0, 5.0]]).unwrap();
    assert_eq!(r.f, 3.0);
    assert!((r.p_value - f_tail_by_quadrature(3.0, 2.0, 6.0)).abs() < 1e-3);
    assert!((r.p_value - 0.125).abs() < 1e-3);

    let groups = vec![
        vec![74.1, 50.67, 89.5, 52.8, 77.84, 89.66],
        vec![74.5, 50.67, 89.53, 54.8, 79.64, 89.66],
        vec![77.0, 54.44, 90.0, 57.15, 79.93, 93.1],
    ];
    let r = anova_oneway(&groups).unwrap();
    let want = f_tail_by_quadrature(r.f, 2.0, 15.0);
    assert!((r.p_value - want).abs() < 1e-6, "{} vs {want}", r.p_value);
}
