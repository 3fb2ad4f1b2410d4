//! Command-line front end. `extract` turns two labelled directories of
//! signal files into a feature matrix, `stats` summarizes it per group,
//! `classify` cross-validates a classifier on it, and `report` runs all
//! three. Parameters come from defaults, then a config file, then flags,
//! each layer overriding the last.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use eegfx_core::pipeline::{classify_features, run_extract, PipelineConfig};
use eegfx_core::stats::{group_summary, GroupSummary};
use eegfx_core::{classify::PerformanceReport, FeatureMatrix};

#[derive(Parser)]
#[command(
    name = "eegfx",
    version,
    about = "Entropy-based EEG feature extraction and classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the feature matrix from two labelled signal directories
    Extract(ExtractCmd),
    /// Per-feature group means, SDs and rank-sum p-values
    Stats(StatsCmd),
    /// Cross-validated classification of a stored feature matrix
    Classify(ClassifyCmd),
    /// Run extract, stats and classify in sequence
    Report(ReportCmd),
}

#[derive(Args)]
struct CommonOpts {
    /// Config file of `key = value` lines; flags override it
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args, Default)]
struct ExtractOpts {
    /// Directory of healthy segments, one text file per segment
    #[arg(long, value_name = "DIR")]
    healthy: Option<PathBuf>,
    /// Directory of epileptic segments
    #[arg(long, value_name = "DIR")]
    epileptic: Option<PathBuf>,
    /// Sampling rate in Hz
    #[arg(long)]
    fs: Option<f64>,
    /// Band-pass Butterworth order
    #[arg(long)]
    filter_order: Option<usize>,
    /// Pass band in Hz
    #[arg(long, value_name = "LOW:HIGH")]
    band: Option<String>,
    /// Wavelet name
    #[arg(long)]
    wavelet: Option<String>,
    /// Decomposition depth
    #[arg(long)]
    levels: Option<usize>,
    /// Boundary handling: periodic, symmetric or zero
    #[arg(long, value_name = "MODE")]
    dwt_mode: Option<String>,
    /// Largest delay tried by the mutual-information search
    #[arg(long)]
    tau_max: Option<usize>,
    /// Histogram bins for the mutual information
    #[arg(long)]
    ami_bins: Option<usize>,
    /// False-neighbour distance ratio threshold
    #[arg(long)]
    fnn_rtol: Option<f64>,
    /// False-neighbour fraction accepted as converged
    #[arg(long)]
    fnn_drop: Option<f64>,
    /// Largest embedding dimension tried
    #[arg(long)]
    d_max: Option<usize>,
    /// Template length for the match-counting entropies
    #[arg(long)]
    entropy_m: Option<usize>,
    /// Match tolerance in SD units
    #[arg(long)]
    entropy_r: Option<f64>,
    /// Fuzzy membership exponent
    #[arg(long)]
    fuzzy_n: Option<u32>,
    /// Fuzzy tolerance in SD units
    #[arg(long)]
    fuzzy_r: Option<f64>,
    /// Ordinal pattern length
    #[arg(long)]
    perm_order: Option<usize>,
    /// Ordinal pattern delay
    #[arg(long)]
    perm_delay: Option<usize>,
    /// Norm entropy exponent
    #[arg(long)]
    norm_p: Option<f64>,
    /// Threshold entropy level
    #[arg(long)]
    thresh_p: Option<f64>,
    /// SURE entropy threshold
    #[arg(long)]
    sure_eps: Option<f64>,
    /// Amplitude histogram bins
    #[arg(long)]
    shan_bins: Option<usize>,
}

#[derive(Args, Default)]
struct ClassifyOpts {
    /// Feature group to classify, or "all" / "combined"
    #[arg(long)]
    feature: Option<String>,
    /// lda or svm
    #[arg(long)]
    classifier: Option<String>,
    /// linear or rbf
    #[arg(long)]
    kernel: Option<String>,
    /// Soft-margin penalty
    #[arg(long = "C")]
    c: Option<f64>,
    /// RBF width, a number or "auto"
    #[arg(long)]
    gamma: Option<String>,
    /// SMO stopping tolerance
    #[arg(long)]
    svm_tol: Option<f64>,
    /// Cross-validation folds
    #[arg(long)]
    k: Option<usize>,
    /// Fold-assignment seed
    #[arg(long)]
    seed: Option<u64>,
}

/// Collect the flags that were given as config overrides.
macro_rules! overrides {
    ($pairs:expr, $($key:literal <- $field:expr),* $(,)?) => {
        $(if let Some(v) = &$field {
            $pairs.push(($key, v.to_string()));
        })*
    };
}

impl ExtractOpts {
    fn collect(&self, pairs: &mut Vec<(&'static str, String)>) -> Result<()> {
        overrides!(pairs,
            "fs" <- self.fs,
            "filter_order" <- self.filter_order,
            "wavelet" <- self.wavelet,
            "levels" <- self.levels,
            "dwt_mode" <- self.dwt_mode,
            "tau_max" <- self.tau_max,
            "ami_bins" <- self.ami_bins,
            "fnn_rtol" <- self.fnn_rtol,
            "fnn_drop" <- self.fnn_drop,
            "d_max" <- self.d_max,
            "entropy_m" <- self.entropy_m,
            "entropy_r" <- self.entropy_r,
            "fuzzy_n" <- self.fuzzy_n,
            "fuzzy_r" <- self.fuzzy_r,
            "perm_order" <- self.perm_order,
            "perm_delay" <- self.perm_delay,
            "norm_p" <- self.norm_p,
            "thresh_p" <- self.thresh_p,
            "sure_eps" <- self.sure_eps,
            "shan_bins" <- self.shan_bins,
        );
        if let Some(dir) = &self.healthy {
            pairs.push(("healthy_dir", dir.display().to_string()));
        }
        if let Some(dir) = &self.epileptic {
            pairs.push(("epileptic_dir", dir.display().to_string()));
        }
        if let Some(band) = &self.band {
            let (low, high) = band
                .split_once(':')
                .context("--band expects LOW:HIGH, e.g. 0.5:40")?;
            pairs.push(("band_low", low.trim().to_string()));
            pairs.push(("band_high", high.trim().to_string()));
        }
        Ok(())
    }
}

impl ClassifyOpts {
    fn collect(&self, pairs: &mut Vec<(&'static str, String)>) {
        overrides!(pairs,
            "feature" <- self.feature,
            "classifier" <- self.classifier,
            "kernel" <- self.kernel,
            "svm_c" <- self.c,
            "svm_gamma" <- self.gamma,
            "svm_tol" <- self.svm_tol,
            "k" <- self.k,
            "seed" <- self.seed,
        );
    }
}

#[derive(Args)]
struct ExtractCmd {
    #[command(flatten)]
    common: CommonOpts,
    #[command(flatten)]
    params: ExtractOpts,
    /// Matrix file to write (.csv or .json); default <out>/features.csv
    #[arg(long, value_name = "FILE")]
    out_file: Option<PathBuf>,
}

#[derive(Args)]
struct StatsCmd {
    /// Feature matrix written by extract (.csv or .json)
    matrix: PathBuf,
    #[command(flatten)]
    common: CommonOpts,
    /// Table file to write; default <out>/stats.csv
    #[arg(long, value_name = "FILE")]
    out_file: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyCmd {
    /// Feature matrix written by extract (.csv or .json)
    matrix: PathBuf,
    #[command(flatten)]
    common: CommonOpts,
    #[command(flatten)]
    params: ClassifyOpts,
    /// Report file to write; default <out>/classify.json
    #[arg(long, value_name = "FILE")]
    out_file: Option<PathBuf>,
}

#[derive(Args)]
struct ReportCmd {
    #[command(flatten)]
    common: CommonOpts,
    #[command(flatten)]
    extract: ExtractOpts,
    #[command(flatten)]
    classify: ClassifyOpts,
}

fn resolve_config(
    common: &CommonOpts,
    extract: &ExtractOpts,
    classify: &ClassifyOpts,
) -> Result<PipelineConfig> {
    let mut config = match &common.config {
        Some(path) => PipelineConfig::load(path)
            .with_context(|| format!("loading config {}", path.display()))?,
        None => PipelineConfig::default(),
    };
    let mut pairs: Vec<(&'static str, String)> = Vec::new();
    if let Some(dir) = &common.out {
        pairs.push(("out_dir", dir.display().to_string()));
    }
    extract.collect(&mut pairs)?;
    classify.collect(&mut pairs);
    for (key, value) in pairs {
        config.set(key, &value)?;
    }
    Ok(config)
}

fn out_path(config: &PipelineConfig, override_path: &Option<PathBuf>, name: &str) -> PathBuf {
    match override_path {
        Some(path) => path.clone(),
        None => config.out_dir.join(name),
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Provenance lines carried from the matrix into derived outputs.
fn provenance(matrix: &FeatureMatrix) -> String {
    let mut out = String::new();
    for key in ["config_hash", "seed", "n_healthy", "n_epileptic"] {
        if let Some(value) = matrix.metadata.get(key) {
            out.push_str(&format!("# {key} = {value}\n"));
        }
    }
    out
}

fn print_stats_table(summary: &GroupSummary) {
    println!(
        "{:<22} {:>14} {:>12} {:>14} {:>12} {:>12}",
        "feature", "healthy mean", "sd", "patient mean", "sd", "p"
    );
    for row in &summary.rows {
        println!(
            "{:<22} {:>14.6} {:>12.6} {:>14.6} {:>12.6} {:>12.4e}",
            row.feature,
            row.healthy_mean,
            row.healthy_sd,
            row.patient_mean,
            row.patient_sd,
            row.p_value
        );
    }
}

fn print_classify_table(reports: &[PerformanceReport]) {
    if let Some(first) = reports.first() {
        println!(
            "classifier: {}   folds: {}   seed: {}",
            first.classifier, first.k, first.seed
        );
    }
    println!(
        "{:<14} {:>10} {:>12} {:>12} {:>12}",
        "feature", "accuracy", "pooled acc", "sensitivity", "specificity"
    );
    for r in reports {
        println!(
            "{:<14} {:>9.2}% {:>11.2}% {:>11.2}% {:>11.2}%",
            r.feature, r.mean_accuracy, r.pooled_accuracy, r.pooled_sensitivity, r.pooled_specificity
        );
    }
}

fn do_extract(config: &PipelineConfig, out_file: &Option<PathBuf>) -> Result<FeatureMatrix> {
    let matrix = run_extract(config)?;
    let path = out_path(config, out_file, "features.csv");
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    matrix.write(&path)?;
    eprintln!(
        "wrote {} ({} segments x {} features)",
        path.display(),
        matrix.n_rows(),
        matrix.n_cols()
    );
    Ok(matrix)
}

fn do_stats(
    config: &PipelineConfig,
    matrix: &FeatureMatrix,
    out_file: &Option<PathBuf>,
) -> Result<()> {
    let summary = group_summary(matrix)?;
    let text = format!("{}{}", provenance(matrix), summary.to_csv_string());
    let path = out_path(config, out_file, "stats.csv");
    write_text(&path, &text)?;
    print_stats_table(&summary);
    eprintln!("wrote {} ({} feature rows)", path.display(), summary.rows.len());
    Ok(())
}

fn do_classify(
    config: &PipelineConfig,
    matrix: &FeatureMatrix,
    out_file: &Option<PathBuf>,
) -> Result<()> {
    let spec = config.classifier_spec()?;
    let reports = classify_features(matrix, &config.feature, spec, config.k, config.seed)?;
    let doc = serde_json::json!({
        "config_hash": config.hash(),
        "features_config_hash": matrix.metadata.get("config_hash"),
        "seed": config.seed,
        "k": config.k,
        "reports": reports,
    });
    let path = out_path(config, out_file, "classify.json");
    write_text(&path, &format!("{:#}\n", doc))?;
    print_classify_table(&reports);
    eprintln!("wrote {} ({} reports)", path.display(), reports.len());
    Ok(())
}

fn read_matrix(path: &Path) -> Result<FeatureMatrix> {
    FeatureMatrix::read(path).with_context(|| format!("reading {}", path.display()))
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Extract(cmd) => {
            let config = resolve_config(&cmd.common, &cmd.params, &ClassifyOpts::default())?;
            do_extract(&config, &cmd.out_file)?;
        }
        Command::Stats(cmd) => {
            let config =
                resolve_config(&cmd.common, &ExtractOpts::default(), &ClassifyOpts::default())?;
            let matrix = read_matrix(&cmd.matrix)?;
            do_stats(&config, &matrix, &cmd.out_file)?;
        }
        Command::Classify(cmd) => {
            let config = resolve_config(&cmd.common, &ExtractOpts::default(), &cmd.params)?;
            let matrix = read_matrix(&cmd.matrix)?;
            do_classify(&config, &matrix, &cmd.out_file)?;
        }
        Command::Report(cmd) => {
            let config = resolve_config(&cmd.common, &cmd.extract, &cmd.classify)?;
            let matrix = do_extract(&config, &None)?;
            do_stats(&config, &matrix, &None)?;
            do_classify(&config, &matrix, &None)?;
        }
    }
    Ok(())
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
