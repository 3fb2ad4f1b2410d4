//! End-to-end pipeline: configuration, per-segment feature extraction,
//! and the feature-name plumbing shared by the stats and classification
//! front ends.
//!
//! A segment flows through band-pass filtering, a five-level wavelet
//! decomposition, ten entropies per sub-band, and a delay/dimension
//! search on the filtered signal, producing one row of
//! 2 + 10 x (levels + 1) feature values. With the defaults that is the
//! 62-column layout used throughout.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::classify::{cross_validate, ClassifierSpec, KernelSpec, PerformanceReport};
use crate::embedding::estimate_embedding;
use crate::entropy::{entropy_features, EntropyParams, ENTROPY_NAMES};
use crate::error::{Error, Result};
use crate::features::{format_value, FeatureMatrix};
use crate::par;
use crate::preprocess::{
    design_butterworth_bandpass, dwt_decompose, filter_zero_phase, BoundaryMode,
};
use crate::signal_io::{load_dataset, Label, Segment};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub healthy_dir: Option<PathBuf>,
    pub epileptic_dir: Option<PathBuf>,
    pub out_dir: PathBuf,
    /// Sampling rate in Hz.
    pub fs: f64,
    pub filter_order: usize,
    pub band_low: f64,
    pub band_high: f64,
    pub wavelet: String,
    pub levels: usize,
    pub dwt_mode: BoundaryMode,
    pub tau_max: usize,
    pub ami_bins: usize,
    pub fnn_rtol: f64,
    pub fnn_drop: f64,
    pub d_max: usize,
    pub entropy: EntropyParams,
    /// Feature group to classify: a name, "all", or "combined".
    pub feature: String,
    pub classifier: String,
    pub kernel: String,
    pub svm_c: f64,
    /// None means per-fold 1 / (dim * mean variance).
    pub svm_gamma: Option<f64>,
    pub svm_tol: f64,
    pub k: usize,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            healthy_dir: None,
            epileptic_dir: None,
            out_dir: PathBuf::from("out"),
            fs: 173.61,
            filter_order: 4,
            band_low: 0.5,
            band_high: 40.0,
            wavelet: "db4".into(),
            levels: 5,
            dwt_mode: BoundaryMode::Periodic,
            tau_max: 50,
            ami_bins: 16,
            fnn_rtol: 10.0,
            fnn_drop: 0.01,
            d_max: 12,
            entropy: EntropyParams::default(),
            feature: "all".into(),
            classifier: "svm".into(),
            kernel: "rbf".into(),
            svm_c: 1.0,
            svm_gamma: None,
            svm_tol: 1e-3,
            k: 10,
            seed: 42,
        }
    }
}

impl PipelineConfig {
    /// Every field as a (key, value) pair, in fixed order. This single
    /// list drives serialization, parsing and output metadata, so the
    /// three can never drift apart.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut pairs: Vec<(&'static str, String)> = Vec::new();
        if let Some(dir) = &self.healthy_dir {
            pairs.push(("healthy_dir", dir.display().to_string()));
        }
        if let Some(dir) = &self.epileptic_dir {
            pairs.push(("epileptic_dir", dir.display().to_string()));
        }
        pairs.push(("out_dir", self.out_dir.display().to_string()));
        pairs.push(("fs", format_value(self.fs)));
        pairs.push(("filter_order", self.filter_order.to_string()));
        pairs.push(("band_low", format_value(self.band_low)));
        pairs.push(("band_high", format_value(self.band_high)));
        pairs.push(("wavelet", self.wavelet.clone()));
        pairs.push(("levels", self.levels.to_string()));
        pairs.push(("dwt_mode", self.dwt_mode.to_string()));
        pairs.push(("tau_max", self.tau_max.to_string()));
        pairs.push(("ami_bins", self.ami_bins.to_string()));
        pairs.push(("fnn_rtol", format_value(self.fnn_rtol)));
        pairs.push(("fnn_drop", format_value(self.fnn_drop)));
        pairs.push(("d_max", self.d_max.to_string()));
        pairs.push(("entropy_m", self.entropy.m.to_string()));
        pairs.push(("entropy_r", format_value(self.entropy.r)));
        pairs.push(("fuzzy_n", self.entropy.fuzzy_n.to_string()));
        pairs.push(("fuzzy_r", format_value(self.entropy.fuzzy_r)));
        pairs.push(("perm_order", self.entropy.perm_order.to_string()));
        pairs.push(("perm_delay", self.entropy.perm_delay.to_string()));
        pairs.push(("norm_p", format_value(self.entropy.norm_p)));
        pairs.push(("thresh_p", format_value(self.entropy.thresh_p)));
        pairs.push(("sure_eps", format_value(self.entropy.sure_eps)));
        pairs.push(("shan_bins", self.entropy.shan_bins.to_string()));
        pairs.push(("feature", self.feature.clone()));
        pairs.push(("classifier", self.classifier.clone()));
        pairs.push(("kernel", self.kernel.clone()));
        pairs.push(("svm_c", format_value(self.svm_c)));
        let gamma = match self.svm_gamma {
            Some(g) => format_value(g),
            None => "auto".into(),
        };
        pairs.push(("svm_gamma", gamma));
        pairs.push(("svm_tol", format_value(self.svm_tol)));
        pairs.push(("k", self.k.to_string()));
        pairs.push(("seed", self.seed.to_string()));
        pairs
    }

    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        for (key, value) in self.pairs() {
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }

    /// Apply one key. Unknown keys and malformed values are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::Config(format!("bad value {value:?} for {key}")))
        }
        match key {
            "healthy_dir" => self.healthy_dir = Some(PathBuf::from(value)),
            "epileptic_dir" => self.epileptic_dir = Some(PathBuf::from(value)),
            "out_dir" => self.out_dir = PathBuf::from(value),
            "fs" => self.fs = num(key, value)?,
            "filter_order" => self.filter_order = num(key, value)?,
            "band_low" => self.band_low = num(key, value)?,
            "band_high" => self.band_high = num(key, value)?,
            "wavelet" => self.wavelet = value.to_string(),
            "levels" => self.levels = num(key, value)?,
            "dwt_mode" => self.dwt_mode = value.parse()?,
            "tau_max" => self.tau_max = num(key, value)?,
            "ami_bins" => self.ami_bins = num(key, value)?,
            "fnn_rtol" => self.fnn_rtol = num(key, value)?,
            "fnn_drop" => self.fnn_drop = num(key, value)?,
            "d_max" => self.d_max = num(key, value)?,
            "entropy_m" => self.entropy.m = num(key, value)?,
            "entropy_r" => self.entropy.r = num(key, value)?,
            "fuzzy_n" => self.entropy.fuzzy_n = num(key, value)?,
            "fuzzy_r" => self.entropy.fuzzy_r = num(key, value)?,
            "perm_order" => self.entropy.perm_order = num(key, value)?,
            "perm_delay" => self.entropy.perm_delay = num(key, value)?,
            "norm_p" => self.entropy.norm_p = num(key, value)?,
            "thresh_p" => self.entropy.thresh_p = num(key, value)?,
            "sure_eps" => self.entropy.sure_eps = num(key, value)?,
            "shan_bins" => self.entropy.shan_bins = num(key, value)?,
            "feature" => self.feature = value.to_string(),
            "classifier" => self.classifier = value.to_string(),
            "kernel" => self.kernel = value.to_string(),
            "svm_c" => self.svm_c = num(key, value)?,
            "svm_gamma" => {
                self.svm_gamma = if value == "auto" {
                    None
                } else {
                    Some(num(key, value)?)
                }
            }
            "svm_tol" => self.svm_tol = num(key, value)?,
            "k" => self.k = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            other => return Err(Error::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Parse a flat `key = value` file body; `#` starts a comment.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut config = PipelineConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            config.set(key.trim(), value.trim())?;
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_config_str(&text)
    }

    /// Hex SHA-256 of the serialized configuration; stamped into every
    /// output file so results can be traced to their exact settings.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_config_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn classifier_spec(&self) -> Result<ClassifierSpec> {
        let kernel = match self.kernel.as_str() {
            "linear" => KernelSpec::Linear,
            "rbf" => KernelSpec::Rbf {
                gamma: self.svm_gamma,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown kernel {other:?}, expected linear or rbf"
                )))
            }
        };
        match self.classifier.as_str() {
            "lda" => Ok(ClassifierSpec::Lda),
            "svm" => Ok(ClassifierSpec::Svm {
                kernel,
                c: self.svm_c,
                tol: self.svm_tol,
            }),
            other => Err(Error::Config(format!(
                "unknown classifier {other:?}, expected lda or svm"
            ))),
        }
    }

    /// Names of the sub-bands produced at the configured depth, finest
    /// detail first, approximation last.
    pub fn band_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.levels).map(|l| format!("d{l}")).collect();
        names.push(format!("a{}", self.levels));
        names
    }

    /// Feature-matrix column names: embedding parameters, then each
    /// entropy across all sub-bands.
    pub fn column_names(&self) -> Vec<String> {
        let mut columns = vec!["emb_delay".to_string(), "emb_dim".to_string()];
        for entropy in ENTROPY_NAMES {
            for band in self.band_names() {
                columns.push(format!("{entropy}_{band}"));
            }
        }
        columns
    }
}

/// One extracted row plus the search-quality flags carried into metadata.
struct SegmentFeatures {
    values: Vec<f64>,
    tau_is_local_minimum: bool,
    dim_converged: bool,
}

fn extract_one(config: &PipelineConfig, segment: &Segment) -> Result<SegmentFeatures> {
    let coeffs = design_butterworth_bandpass(
        config.filter_order,
        config.band_low,
        config.band_high,
        segment.fs,
    )?;
    let filtered = filter_zero_phase(&coeffs, &segment.samples)?;

    let embedding = estimate_embedding(
        &filtered,
        config.tau_max,
        config.ami_bins,
        config.d_max,
        config.fnn_rtol,
        config.fnn_drop,
    )?;

    let bands = dwt_decompose(&filtered, &config.wavelet, config.levels, config.dwt_mode)?;
    let per_band: Vec<[f64; 10]> = bands
        .bands()
        .iter()
        .map(|(_, coefficients)| entropy_features(coefficients, &config.entropy))
        .collect::<Result<_>>()?;

    let n_bands = per_band.len();
    let mut values = Vec::with_capacity(2 + 10 * n_bands);
    values.push(embedding.tau as f64);
    values.push(embedding.m as f64);
    for e in 0..ENTROPY_NAMES.len() {
        for band in &per_band {
            values.push(band[e]);
        }
    }
    Ok(SegmentFeatures {
        values,
        tau_is_local_minimum: embedding.tau_is_local_minimum,
        dim_converged: embedding.dim_converged,
    })
}

/// Extract the feature matrix for a list of segments. Row order follows
/// the input order whatever the execution schedule; any failure is
/// reported with the offending segment's id.
pub fn extract_features(config: &PipelineConfig, segments: &[Segment]) -> Result<FeatureMatrix> {
    if segments.is_empty() {
        return Err(Error::EmptyInput("no segments to process".into()));
    }
    let outcomes = par::map_slice(segments, |segment| {
        extract_one(config, segment).map_err(|e| e.in_segment(&segment.id))
    });

    let mut matrix = FeatureMatrix::new(config.column_names());
    let mut tau_flat = 0usize;
    let mut dim_stuck = 0usize;
    for (segment, outcome) in segments.iter().zip(outcomes) {
        let features = outcome?;
        if !features.tau_is_local_minimum {
            tau_flat += 1;
        }
        if !features.dim_converged {
            dim_stuck += 1;
        }
        matrix.push_row(segment.id.clone(), segment.label, features.values)?;
    }

    for (key, value) in config.pairs() {
        matrix.metadata.insert(key.to_string(), value);
    }
    matrix
        .metadata
        .insert("config_hash".into(), config.hash());
    let healthy = segments.iter().filter(|s| s.label == Label::Healthy).count();
    matrix.metadata.insert("n_healthy".into(), healthy.to_string());
    matrix
        .metadata
        .insert("n_epileptic".into(), (segments.len() - healthy).to_string());
    matrix
        .metadata
        .insert("tau_without_local_minimum".into(), tau_flat.to_string());
    matrix
        .metadata
        .insert("dim_not_converged".into(), dim_stuck.to_string());
    Ok(matrix)
}

/// Load both labelled directories and extract. Healthy segments come
/// first, each set in file-name order.
pub fn run_extract(config: &PipelineConfig) -> Result<FeatureMatrix> {
    let healthy_dir = config
        .healthy_dir
        .as_ref()
        .ok_or_else(|| Error::Config("healthy_dir is not set".into()))?;
    let epileptic_dir = config
        .epileptic_dir
        .as_ref()
        .ok_or_else(|| Error::Config("epileptic_dir is not set".into()))?;
    let mut segments = load_dataset(healthy_dir, Label::Healthy, config.fs)?;
    segments.extend(load_dataset(epileptic_dir, Label::Epileptic, config.fs)?);
    extract_features(config, &segments)
}

/// Index where a `_d<k>` / `_a<k>` band suffix starts, if the name has one.
fn band_suffix(name: &str) -> Option<usize> {
    let pos = name.rfind('_')?;
    let tail = &name.as_bytes()[pos + 1..];
    match tail {
        [b'd' | b'a', digits @ ..] if !digits.is_empty() => {
            digits.iter().all(u8::is_ascii_digit).then_some(pos)
        }
        _ => None,
    }
}

/// Column groups eligible for per-feature classification: multi-band
/// features gather their band columns under the bare feature name,
/// single columns stand alone. First-appearance order.
pub fn feature_groups(columns: &[String]) -> Vec<(String, Vec<usize>)> {
    let mut groups: Vec<(String, Vec<usize>)> = Vec::new();
    for (idx, name) in columns.iter().enumerate() {
        let base = match band_suffix(name) {
            Some(pos) => &name[..pos],
            None => name.as_str(),
        };
        match groups.iter_mut().find(|(g, _)| g == base) {
            Some((_, cols)) => cols.push(idx),
            None => groups.push((base.to_string(), vec![idx])),
        }
    }
    groups
}

fn submatrix(matrix: &FeatureMatrix, cols: &[usize]) -> FeatureMatrix {
    let mut sub = FeatureMatrix::new(cols.iter().map(|&c| matrix.columns[c].clone()).collect());
    sub.metadata = matrix.metadata.clone();
    for i in 0..matrix.n_rows() {
        let row = cols.iter().map(|&c| matrix.rows[i][c]).collect();
        sub.push_row(matrix.ids[i].clone(), matrix.labels[i], row)
            .expect("column subset keeps row width");
    }
    sub
}

/// Cross-validate the requested feature group(s): a group name, "all"
/// (every group, one report each), or "combined" (every column at once).
pub fn classify_features(
    matrix: &FeatureMatrix,
    feature: &str,
    spec: ClassifierSpec,
    k: usize,
    seed: u64,
) -> Result<Vec<PerformanceReport>> {
    let groups = feature_groups(&matrix.columns);
    let selected: Vec<(String, Vec<usize>)> = match feature {
        "all" => groups,
        "combined" => vec![(
            "combined".to_string(),
            (0..matrix.n_cols()).collect(),
        )],
        name => {
            let group = groups.iter().find(|(g, _)| g == name).cloned();
            match group {
                Some(g) => vec![g],
                None => {
                    let valid: Vec<&str> = groups
                        .iter()
                        .map(|(g, _)| g.as_str())
                        .chain(["all", "combined"])
                        .collect();
                    return Err(Error::UnknownFeature {
                        name: name.to_string(),
                        valid: valid.join(", "),
                    });
                }
            }
        }
    };

    selected
        .into_iter()
        .map(|(name, cols)| {
            let sub = submatrix(matrix, &cols);
            let mut report = cross_validate(&sub, spec, k, seed)?;
            report.feature = name;
            Ok(report)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Tone plus noise, so every sub-band keeps enough recurrences for
    /// the match-counting entropies even on short test signals.
    fn noisy_tone_segment(id: &str, label: Label, seed: u64, n: usize) -> Segment {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let samples: Vec<f64> = (0..n)
            .map(|i| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let noise = ((state >> 11) as f64) / (1u64 << 53) as f64 - 0.5;
                (2.0 * std::f64::consts::PI * 5.0 * i as f64 / 173.61).sin() + 0.4 * noise
            })
            .collect();
        Segment::new(id.to_string(), label, 173.61, samples).unwrap()
    }

    /// Shallow decomposition keeps the coarsest band long enough for
    /// defined sample entropy on 1024-sample unit-test signals.
    fn tiny_config() -> PipelineConfig {
        PipelineConfig {
            levels: 3,
            tau_max: 10,
            d_max: 6,
            ..PipelineConfig::default()
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn config_round_trips_losslessly() {
        let mut config = PipelineConfig {
            healthy_dir: Some(PathBuf::from("/data/set-o")),
            epileptic_dir: Some(PathBuf::from("/data/set-s")),
            fs: 173.6100000000001,
            svm_gamma: Some(0.123456789012345678),
            ..PipelineConfig::default()
        };
        config.entropy.r = 0.2 + 1e-16;
        let text = config.to_config_string();
        let back = PipelineConfig::from_config_str(&text).unwrap();
        assert_eq!(config, back);
        // Defaults survive an empty file.
        assert_eq!(
            PipelineConfig::from_config_str("# only a comment\n\n").unwrap(),
            PipelineConfig::default()
        );
    }

    #[test]
    fn config_rejects_unknown_keys_and_bad_values() {
        assert!(PipelineConfig::from_config_str("no_such_key = 1\n").is_err());
        assert!(PipelineConfig::from_config_str("fs = fast\n").is_err());
        assert!(PipelineConfig::from_config_str("just a line\n").is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = PipelineConfig::default();
        let mut b = PipelineConfig::default();
        assert_eq!(a.hash(), b.hash());
        b.seed = 43;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn column_layout_is_62_wide() {
        let config = PipelineConfig::default();
        let columns = config.column_names();
        assert_eq!(columns.len(), 62);
        assert_eq!(columns[0], "emb_delay");
        assert_eq!(columns[1], "emb_dim");
        assert_eq!(columns[2], "app_en_d1");
        assert_eq!(columns[7], "app_en_a5");
        assert_eq!(columns[61], "log_en_a5");
    }

    #[test]
    fn extraction_layout_and_metadata() {
        let config = tiny_config();
        let segments = vec![
            noisy_tone_segment("h1", Label::Healthy, 1, 1024),
            noisy_tone_segment("e1", Label::Epileptic, 2, 1024),
        ];
        let matrix = extract_features(&config, &segments).unwrap();
        assert_eq!(matrix.n_rows(), 2);
        assert_eq!(matrix.n_cols(), 42, "2 embedding + 10 x 4 band columns");
        assert_eq!(matrix.columns[41], "log_en_a3");
        assert_eq!(matrix.labels, vec![Label::Healthy, Label::Epileptic]);
        assert_eq!(matrix.metadata["config_hash"], config.hash());
        assert_eq!(matrix.metadata["n_healthy"], "1");
        assert_eq!(matrix.metadata["n_epileptic"], "1");
        assert_eq!(matrix.metadata["seed"], "42");
        assert!(matrix.metadata.contains_key("tau_without_local_minimum"));
        // Embedding columns hold small positive integers.
        for row in &matrix.rows {
            assert!(row[0] >= 1.0 && row[0] <= config.tau_max as f64);
            assert!(row[1] >= 1.0 && row[1] <= config.d_max as f64);
            assert_eq!(row[0].fract(), 0.0);
            assert_eq!(row[1].fract(), 0.0);
        }
    }

    #[test]
    fn extraction_is_deterministic() {
        let config = tiny_config();
        let segments = vec![
            noisy_tone_segment("h1", Label::Healthy, 3, 1024),
            noisy_tone_segment("e1", Label::Epileptic, 4, 1024),
        ];
        let a = extract_features(&config, &segments).unwrap();
        let b = extract_features(&config, &segments).unwrap();
        assert_eq!(a.to_csv_string(), b.to_csv_string());
    }

    #[test]
    fn failures_carry_the_segment_id() {
        let config = tiny_config();
        let segments = vec![noisy_tone_segment("shorty", Label::Healthy, 5, 16)];
        match extract_features(&config, &segments) {
            Err(Error::InSegment { id, .. }) => assert_eq!(id, "shorty"),
            other => panic!("expected segment-tagged error, got {other:?}"),
        }
    }

    #[test]
    fn feature_groups_follow_column_layout() {
        let config = PipelineConfig::default();
        let groups = feature_groups(&config.column_names());
        assert_eq!(groups.len(), 12, "2 embedding + 10 entropy groups");
        assert_eq!(groups[0], ("emb_delay".to_string(), vec![0]));
        assert_eq!(groups[1], ("emb_dim".to_string(), vec![1]));
        assert_eq!(groups[2].0, "app_en");
        assert_eq!(groups[2].1, vec![2, 3, 4, 5, 6, 7]);
        assert_eq!(groups[11].0, "log_en");
    }

    #[test]
    fn unknown_feature_lists_valid_names() {
        let config = PipelineConfig::default();
        let mut matrix = FeatureMatrix::new(config.column_names());
        for i in 0..4 {
            let label = if i % 2 == 0 { Label::Healthy } else { Label::Epileptic };
            matrix
                .push_row(format!("s{i}"), label, vec![i as f64; 62])
                .unwrap();
        }
        let err = classify_features(&matrix, "speed_en", ClassifierSpec::Lda, 2, 1).unwrap_err();
        match err {
            Error::UnknownFeature { name, valid } => {
                assert_eq!(name, "speed_en");
                assert!(valid.contains("samp_en"));
                assert!(valid.contains("all"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn classify_all_returns_one_report_per_group() {
        // Synthetic matrix with a single informative group.
        let config = PipelineConfig::default();
        let mut matrix = FeatureMatrix::new(config.column_names());
        let mut state = 7u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / (1u64 << 53) as f64
        };
        for i in 0..24 {
            let label = if i % 2 == 0 { Label::Healthy } else { Label::Epileptic };
            let mut row: Vec<f64> = (0..62).map(|_| next()).collect();
            if label == Label::Epileptic {
                // samp_en columns are 8..14.
                for v in &mut row[8..14] {
                    *v += 10.0;
                }
            }
            matrix.push_row(format!("s{i}"), label, row).unwrap();
        }
        let reports =
            classify_features(&matrix, "all", ClassifierSpec::Lda, 4, 42).unwrap();
        assert_eq!(reports.len(), 12);
        let samp = reports.iter().find(|r| r.feature == "samp_en").unwrap();
        assert_eq!(samp.pooled_accuracy, 100.0);
        let combined =
            classify_features(&matrix, "combined", ClassifierSpec::Lda, 4, 42).unwrap();
        assert_eq!(combined.len(), 1);
        assert_eq!(combined[0].feature, "combined");
    }
}
