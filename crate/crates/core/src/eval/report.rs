//! Text tables and published reference accuracies.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::cv::CvResult;
use super::stats::{anova_oneway, pearson, AnovaResult};
use super::subsets::SubsetSearch;
use crate::error::{Error, Result};
use crate::features::FEATURE_NAMES;
use crate::learn::ClassifierKind;

const BASELINES_JSON: &str = include_str!("../../data/baselines.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineMethod {
    pub name: String,
    pub accuracy: Vec<Option<f64>>,
}

/// Published accuracies, one column per benchmark dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baselines {
    pub note: String,
    pub datasets: Vec<String>,
    pub display: Vec<String>,
    pub methods: Vec<BaselineMethod>,
}

impl Baselines {
    pub fn published() -> Self {
        serde_json::from_str(BASELINES_JSON).expect("bundled baselines parse")
    }

    /// Column for a dataset directory name or its short display name.
    pub fn column(&self, dataset: &str) -> Option<usize> {
        let key = dataset.to_ascii_uppercase();
        self.datasets
            .iter()
            .zip(&self.display)
            .position(|(d, s)| d.to_ascii_uppercase() == key || s.to_ascii_uppercase() == key)
    }

    pub fn lookup(&self, method: &str, dataset: &str) -> Option<f64> {
        let col = self.column(dataset)?;
        self.methods.iter().find(|m| m.name == method)?.accuracy[col]
    }

    /// Published accuracy of one of our own classifiers.
    pub fn reference(&self, kind: ClassifierKind, dataset: &str) -> Option<f64> {
        self.lookup(kind.label(), dataset)
    }
}

fn render(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &[String]| {
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i == 0 {
                let _ = write!(out, "{c:<w$}");
            } else {
                let _ = write!(out, "  {c:>w$}");
            }
        }
        out.push('\n');
    };
    line(&mut out, header);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(&mut out, &rule);
    for r in rows {
        line(&mut out, r);
    }
    out
}

fn datasets_in_order(results: &[CvResult]) -> Vec<String> {
    let mut seen = Vec::new();
    for r in results {
        if !seen.contains(&r.dataset) {
            seen.push(r.dataset.clone());
        }
    }
    seen
}

fn find<'a>(results: &'a [CvResult], kind: ClassifierKind, dataset: &str) -> Option<&'a CvResult> {
    results.iter().find(|r| r.classifier == kind && r.dataset == dataset)
}

/// Per-fold and mean accuracy for each result.
pub fn fold_table(results: &[CvResult]) -> String {
    let k = results.iter().map(|r| r.fold_accuracy.len()).max().unwrap_or(0);
    let mut header = vec!["dataset".to_string(), "classifier".to_string()];
    header.extend((1..=k).map(|f| format!("fold {f}")));
    header.push("mean".into());
    header.push("sd".into());
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            let mut row = vec![r.dataset.clone(), r.classifier.label().to_string()];
            row.extend(
                (0..k).map(|f| r.fold_accuracy.get(f).map_or_else(String::new, |a| format!("{:.2}", 100.0 * a))),
            );
            row.push(format!("{:.2}", r.mean_accuracy));
            row.push(format!("{:.2}", r.stdev_accuracy()));
            row
        })
        .collect();
    render(&header, &rows)
}

/// Methods down, datasets across. Published rows come first, then the
/// reproduced classifiers with the published figure in brackets.
pub fn comparison_table(results: &[CvResult], baselines: &Baselines) -> String {
    let datasets = datasets_in_order(results);
    let mut header = vec!["method".to_string()];
    header.extend(
        datasets.iter().map(|d| baselines.column(d).map_or_else(|| d.clone(), |c| baselines.display[c].clone())),
    );
    let mut rows = Vec::new();
    let ours: Vec<&str> = ClassifierKind::ALL.iter().map(|k| k.label()).collect();
    for m in baselines.methods.iter().filter(|m| !ours.contains(&m.name.as_str())) {
        let mut row = vec![m.name.clone()];
        row.extend(datasets.iter().map(|d| match baselines.lookup(&m.name, d) {
            Some(a) => format!("{a:.2}"),
            None if baselines.column(d).is_some() => "N/A".into(),
            None => String::new(),
        }));
        rows.push(row);
    }
    for kind in ClassifierKind::ALL {
        if !results.iter().any(|r| r.classifier == kind) {
            continue;
        }
        let mut row = vec![format!("{} (this run)", kind.label())];
        row.extend(datasets.iter().map(|d| match find(results, kind, d) {
            Some(r) => match baselines.reference(kind, d) {
                Some(p) => format!("{:.2} [{p:.2}]", r.mean_accuracy),
                None => format!("{:.2}", r.mean_accuracy),
            },
            None => String::new(),
        }));
        rows.push(row);
    }
    let mut out = render(&header, &rows);
    out.push_str("[x] = published accuracy for the same classifier\n");
    out
}

/// Best mask and accuracy for each subset size.
pub fn subset_table(search: &SubsetSearch) -> String {
    let header: Vec<String> = ["k", "evaluated", "accuracy", "features"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = search
        .levels
        .iter()
        .map(|l| {
            vec![
                l.k.to_string(),
                l.evaluated.to_string(),
                format!("{:.2}", l.best.mean_accuracy),
                l.best.mask.names().join(","),
            ]
        })
        .collect();
    render(&header, &rows)
}

pub fn importance_table(importance: &[f64]) -> String {
    let header = vec!["feature".to_string(), "importance".to_string()];
    let rows: Vec<Vec<String>> =
        FEATURE_NAMES.iter().zip(importance).map(|(n, v)| vec![n.to_string(), format!("{v:.6}")]).collect();
    render(&header, &rows)
}

/// Agreement between classifiers across datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Consistency {
    pub datasets: Vec<String>,
    pub anova: AnovaResult,
    /// Pearson r for every classifier pair, keyed like `"k-NN/SVM"`.
    pub pearson: BTreeMap<String, f64>,
}

/// ANOVA over the three classifiers' mean accuracies plus pairwise
/// correlations. Uses only datasets on which all three were run.
pub fn consistency(results: &[CvResult]) -> Result<Consistency> {
    let datasets: Vec<String> = datasets_in_order(results)
        .into_iter()
        .filter(|d| ClassifierKind::ALL.iter().all(|&k| find(results, k, d).is_some()))
        .collect();
    if datasets.len() < 2 {
        return Err(Error::invalid(format!(
            "consistency needs at least two datasets with all classifiers, found {}",
            datasets.len()
        )));
    }
    let series: Vec<Vec<f64>> = ClassifierKind::ALL
        .iter()
        .map(|&k| datasets.iter().map(|d| find(results, k, d).expect("filtered").mean_accuracy).collect())
        .collect();
    let anova = anova_oneway(&series)?;
    let mut pairs = BTreeMap::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let key = format!("{}/{}", ClassifierKind::ALL[i].label(), ClassifierKind::ALL[j].label());
            pairs.insert(key, pearson(&series[i], &series[j])?);
        }
    }
    Ok(Consistency { datasets, anova, pearson: pairs })
}
