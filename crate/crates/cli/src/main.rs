use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use graphfeat::eval::{self, report, CvResult, FoldAssignment};
use graphfeat::features::{self, SpectralConfig, Standardizer};
use graphfeat::graph::parse_tudataset;
use graphfeat::learn::{ClassifierConfig, ForestConfig, KnnConfig, ModelDocument, SvmConfig, MODEL_FORMAT_VERSION};
use graphfeat::{FeatureMask, FeatureMatrix, FEATURE_COUNT};

#[derive(Parser, Debug)]
#[command(name = "graphfeat", version, about = "Whole-graph classification from structural features")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TUDataset directory or feature CSV. `report` accepts it repeatedly.
    #[arg(long, global = true)]
    data: Vec<PathBuf>,
    /// Dataset name; defaults to the directory name.
    #[arg(long, global = true)]
    name: Option<String>,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 5)]
    folds: usize,
    #[arg(long, global = true, value_enum, default_value_t = Choice::All)]
    classifier: Choice,
    /// Neighbors for k-NN; subset size for `subsets`.
    #[arg(long, global = true)]
    k: Option<usize>,
    /// SVM box constraint.
    #[arg(long = "C", global = true, default_value_t = 10.0)]
    c: f64,
    #[arg(long, global = true, default_value_t = 200)]
    trees: usize,
    #[arg(long, global = true, default_value_t = 5)]
    depth: usize,
    /// Feed raw features to k-NN, SVM and PCA.
    #[arg(long, global = true)]
    no_scale: bool,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "GRAPHFEAT_JOBS")]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
enum Command {
    /// Compute the feature CSV and print dataset statistics.
    Extract,
    /// Cross-validate the selected classifiers on shared folds.
    Cv,
    /// Two-component PCA coordinates.
    Pca,
    /// Random forest feature importances.
    Importance,
    /// Exhaustive feature-subset search with the random forest.
    Subsets,
    /// Cross-validate every dataset and compare with published accuracies.
    Report,
    /// Fit one classifier on all rows and save it.
    Train,
    /// Predict labels with a saved model.
    Predict {
        #[arg(long)]
        model: PathBuf,
    },
}

impl Command {
    fn label(&self) -> &'static str {
        match self {
            Command::Extract => "extract",
            Command::Cv => "cv",
            Command::Pca => "pca",
            Command::Importance => "importance",
            Command::Subsets => "subsets",
            Command::Report => "report",
            Command::Train => "train",
            Command::Predict { .. } => "predict",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Choice {
    Knn,
    Svm,
    Rf,
    All,
}

impl Cli {
    fn scale(&self) -> bool {
        !self.no_scale
    }

    fn forest(&self) -> ForestConfig {
        ForestConfig { trees: self.trees, max_depth: self.depth, seed: self.seed, max_features: None }
    }

    fn configs(&self) -> Vec<ClassifierConfig> {
        let knn = ClassifierConfig::Knn(KnnConfig { k: self.k.unwrap_or(KnnConfig::default().k) });
        let svm = ClassifierConfig::Svm(SvmConfig { c: self.c, ..SvmConfig::default() });
        let rf = ClassifierConfig::RandomForest(self.forest());
        match self.classifier {
            Choice::Knn => vec![knn],
            Choice::Svm => vec![svm],
            Choice::Rf => vec![rf],
            Choice::All => vec![knn, svm, rf],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.data.is_empty() {
            bail!("--data is required");
        }
        if self.data.len() > 1 && self.command != Command::Report {
            bail!("--data may be repeated only for `report`");
        }
        if self.data.len() > 1 && self.name.is_some() {
            bail!("--name cannot be combined with several --data paths");
        }
        if self.folds < 2 {
            bail!("--folds must be at least 2");
        }
        if self.k == Some(0) {
            bail!("--k must be positive");
        }
        if self.command == Command::Subsets && self.k.is_some_and(|k| k > FEATURE_COUNT) {
            bail!("--k for subsets must lie in 1..={FEATURE_COUNT}");
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            bail!("--C must be a positive number");
        }
        if self.trees == 0 || self.depth == 0 {
            bail!("--trees and --depth must be positive");
        }
        if self.jobs == Some(0) {
            bail!("--jobs must be positive");
        }
        if self.command == Command::Train && self.classifier == Choice::All {
            bail!("train needs a single --classifier");
        }
        Ok(())
    }
}

/// Dataset name from a path: a directory's own name, or a CSV stem with
/// any `_features` suffix removed.
fn default_name(path: &Path) -> String {
    let stem = if is_csv(path) { path.file_stem() } else { path.file_name() };
    let s = stem.map_or_else(|| "dataset".to_string(), |s| s.to_string_lossy().into_owned());
    s.strip_suffix("_features").map(str::to_string).unwrap_or(s)
}

fn is_csv(path: &Path) -> bool {
    path.is_file() && path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn load(path: &Path, name: &str) -> Result<FeatureMatrix> {
    if is_csv(path) {
        let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
        return Ok(features::read_feature_csv(BufReader::new(file), name)?);
    }
    let ds = parse_tudataset(path, name)?;
    Ok(features::extract_all(&ds, &SpectralConfig::default())?)
}

struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Outputs {
    fn write(&mut self, file: String, contents: impl AsRef<[u8]>) -> Result<()> {
        let path = self.dir.join(file);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(path);
        Ok(())
    }

    fn json(&mut self, file: String, value: &impl Serialize) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(file, text)
    }
}

#[derive(Serialize)]
struct RunMetadata {
    tool: &'static str,
    version: &'static str,
    model_format: u32,
    command: &'static str,
    datasets: Vec<String>,
    data: Vec<String>,
    seed: u64,
    folds: usize,
    scaled: bool,
    classifiers: Vec<ClassifierConfig>,
    threads: usize,
    outputs: Vec<PathBuf>,
}

fn shared_folds(cli: &Cli, fm: &FeatureMatrix) -> Result<FoldAssignment> {
    Ok(eval::stratified_folds(&fm.labels, cli.folds, cli.seed)?)
}

fn cv_all(cli: &Cli, fm: &FeatureMatrix) -> Result<Vec<CvResult>> {
    let folds = shared_folds(cli, fm)?;
    cli.configs()
        .iter()
        .map(|c| {
            eval::cross_validate(fm, c, &folds, FeatureMask::ALL, cli.scale())
                .with_context(|| format!("{} on {}", c.kind(), fm.name))
        })
        .collect()
}

fn run(cli: &Cli) -> Result<()> {
    fs::create_dir_all(&cli.out).with_context(|| format!("creating {}", cli.out.display()))?;
    let mut out = Outputs { dir: cli.out.clone(), written: Vec::new() };
    let names: Vec<String> = cli.data.iter().map(|p| cli.name.clone().unwrap_or_else(|| default_name(p))).collect();
    let first = (&cli.data[0], names[0].as_str());

    match cli.command {
        Command::Extract => {
            let (path, name) = first;
            if is_csv(path) {
                bail!("extract needs a TUDataset directory, got {}", path.display());
            }
            let ds = parse_tudataset(path, name)?;
            let s = ds.stats();
            println!(
                "{name}: {} graphs, {} classes, nodes avg {:.2} max {} min {}, edges avg {:.2} max {} min {}",
                s.graphs, s.classes, s.avg_nodes, s.max_nodes, s.min_nodes, s.avg_edges, s.max_edges, s.min_edges
            );
            let fm = features::extract_all(&ds, &SpectralConfig::default())?;
            let mut csv = Vec::new();
            features::write_feature_csv(&fm, &mut csv)?;
            out.write(format!("{name}_features.csv"), csv)?;
            out.json(format!("{name}_stats.json"), &s)?;
        }
        Command::Cv => {
            let (path, name) = first;
            let fm = load(path, name)?;
            let results = cv_all(cli, &fm)?;
            let text = report::fold_table(&results);
            print!("{text}");
            out.json(format!("{name}_cv.json"), &results)?;
            out.write(format!("{name}_cv.txt"), text)?;
        }
        Command::Pca => {
            let (path, name) = first;
            let fm = load(path, name)?;
            let e = eval::feature_pca(&fm, cli.scale())?;
            let mut csv = Vec::new();
            eval::write_pca_csv(&fm, &e, &mut csv)?;
            println!(
                "{name}: {} rows, explained variance {:.4} / {:.4}",
                e.coordinates.len(),
                e.explained_variance[0],
                e.explained_variance[1]
            );
            out.write(format!("{name}_pca.csv"), csv)?;
            out.json(format!("{name}_pca.json"), &e)?;
        }
        Command::Importance => {
            let (path, name) = first;
            let fm = load(path, name)?;
            let imp = eval::feature_importance(&fm, &cli.forest())?;
            let text = report::importance_table(&imp);
            print!("{text}");
            let named: Vec<(&str, f64)> = fm.feature_names().into_iter().zip(imp.iter().copied()).collect();
            out.json(format!("{name}_importance.json"), &named)?;
            out.write(format!("{name}_importance.txt"), text)?;
        }
        Command::Subsets => {
            let (path, name) = first;
            let fm = load(path, name)?;
            let folds = shared_folds(cli, &fm)?;
            let sizes: Vec<usize> = match cli.k {
                Some(k) => vec![k],
                None => (1..=FEATURE_COUNT).collect(),
            };
            let search = eval::subset_search(&fm, sizes, &cli.forest(), &folds)?;
            for l in &search.levels {
                println!("k={}: {} evaluations, best {:.2}", l.k, l.evaluated, l.best.mean_accuracy);
            }
            let text = report::subset_table(&search);
            print!("{text}");
            out.json(format!("{name}_subsets.json"), &search)?;
            out.write(format!("{name}_subsets.txt"), text)?;
        }
        Command::Report => {
            let mut results = Vec::new();
            for (path, name) in cli.data.iter().zip(&names) {
                let fm = load(path, name)?;
                results.extend(cv_all(cli, &fm)?);
            }
            let mut text = report::comparison_table(&results, &report::Baselines::published());
            text.push('\n');
            text.push_str(&report::fold_table(&results));
            let consistency = if cli.classifier == Choice::All {
                match report::consistency(&results) {
                    Ok(c) => {
                        text.push_str(&format!(
                            "\nANOVA across classifiers: F = {:.4}, p = {:.7}\n",
                            c.anova.f, c.anova.p_value
                        ));
                        for (pair, r) in &c.pearson {
                            text.push_str(&format!("Pearson {pair}: {r:.4}\n"));
                        }
                        Some(c)
                    }
                    Err(e) => {
                        log::warn!("no consistency analysis: {e}");
                        None
                    }
                }
            } else {
                None
            };
            print!("{text}");
            #[derive(Serialize)]
            struct Report<'a> {
                results: &'a [CvResult],
                consistency: Option<report::Consistency>,
                baselines: report::Baselines,
            }
            out.json(
                "report.json".into(),
                &Report { results: &results, consistency, baselines: report::Baselines::published() },
            )?;
            out.write("report.txt".into(), text)?;
        }
        Command::Train => {
            let (path, name) = first;
            let fm = load(path, name)?;
            let config = cli.configs()[0];
            let mut rows = fm.select(FeatureMask::ALL);
            let standardizer = (cli.scale() && config.is_scale_sensitive()).then(|| Standardizer::fit(&rows));
            if let Some(s) = &standardizer {
                rows = s.transform(&rows);
            }
            let model = config.fit(&rows, &fm.labels)?;
            let doc = ModelDocument {
                format_version: MODEL_FORMAT_VERSION,
                dataset: name.to_string(),
                config,
                mask: FeatureMask::ALL,
                standardizer,
                label_map: fm.label_map.clone(),
                model,
            };
            let file = format!("{name}_{}.model.json", config.kind().label().to_lowercase().replace(' ', "_"));
            println!("{name}: trained {} on {} rows", config.kind(), fm.len());
            out.write(file, doc.to_json()?)?;
        }
        Command::Predict { ref model } => {
            let (path, name) = first;
            let text = fs::read_to_string(model).with_context(|| format!("reading {}", model.display()))?;
            let doc = ModelDocument::from_json(&text)?;
            let fm = load(path, name)?;
            let mut csv = String::from("graph_id,predicted\n");
            let mut correct = 0;
            for ((id, truth), row) in fm.graph_ids.iter().zip(&fm.labels).zip(&fm.rows) {
                let predicted = doc.label_map[doc.predict(row)];
                if predicted == fm.label_map[*truth] {
                    correct += 1;
                }
                csv.push_str(&format!("{id},{predicted}\n"));
            }
            println!(
                "{name}: {} predictions, {:.2}% agree with the given labels",
                fm.len(),
                100.0 * correct as f64 / fm.len() as f64
            );
            out.write(format!("{name}_predictions.csv"), csv)?;
        }
    }

    let meta = RunMetadata {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        model_format: MODEL_FORMAT_VERSION,
        command: cli.command.label(),
        datasets: names.clone(),
        data: cli.data.iter().map(|p| p.display().to_string()).collect(),
        seed: cli.seed,
        folds: cli.folds,
        scaled: cli.scale(),
        classifiers: cli.configs(),
        threads: rayon::current_num_threads(),
        outputs: out.written.clone(),
    };
    let tag = if names.len() == 1 { names[0].as_str() } else { "report" };
    out.json(format!("{tag}_{}_run.json", cli.command.label()), &meta)?;
    Ok(())
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = cli.validate().and_then(|()| {
        if let Some(j) = cli.jobs {
            rayon::ThreadPoolBuilder::new().num_threads(j).build_global().context("configuring the thread pool")?;
        }
        run(&cli)
    });
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
