//! Stratified k-fold cross-validation and performance reporting.
//!
//! Folds are dealt per class: each class's indices are shuffled with a
//! seeded generator and handed round-robin to the k folds, so every fold's
//! class counts are within one sample of the global proportions. All
//! standardization statistics are fitted on the training split of each
//! fold (the `standardize_on_all` switch exists only as a leakage
//! diagnostic).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::lda::{lda_fit, lda_predict};
use crate::classify::svm::{svm_fit, svm_predict, Kernel};
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::par;
use crate::signal_io::Label;

#[derive(Debug, Clone, PartialEq)]
pub struct FoldIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Deterministic stratified folds.
///
/// Requires 2 <= k and k no larger than the smallest class, except that
/// k = n (leave-one-out) is always allowed; its folds are singletons,
/// which is as stratified as singletons can be.
pub fn stratified_kfold(labels: &[Label], k: usize, seed: u64) -> Result<Vec<FoldIndices>> {
    let n = labels.len();
    if k < 2 || k > n {
        return Err(Error::InvalidParam(format!(
            "fold count must lie in 2..={n}, got {k}"
        )));
    }
    let healthy: Vec<usize> = (0..n).filter(|&i| labels[i] == Label::Healthy).collect();
    let epileptic: Vec<usize> = (0..n).filter(|&i| labels[i] == Label::Epileptic).collect();
    if k != n {
        for (class, members) in [("healthy", &healthy), ("epileptic", &epileptic)] {
            if members.len() < k {
                return Err(Error::InvalidParam(format!(
                    "{class} class has {} members, fewer than {k} folds",
                    members.len()
                )));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tests: Vec<Vec<usize>> = vec![Vec::new(); k];
    // One cursor across both classes keeps overall fold sizes within one
    // sample too (a per-class restart would pile both classes onto the
    // same leading folds).
    let mut cursor = 0usize;
    for members in [healthy, epileptic] {
        let mut shuffled = members;
        shuffled.shuffle(&mut rng);
        for idx in shuffled {
            tests[cursor % k].push(idx);
            cursor += 1;
        }
    }

    Ok(tests
        .into_iter()
        .map(|mut test| {
            test.sort_unstable();
            let train = (0..n).filter(|i| !test.contains(i)).collect();
            FoldIndices { train, test }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Linear,
    /// `None` resolves per fold to 1 / (dim * mean feature variance) of
    /// the standardized training split.
    Rbf { gamma: Option<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassifierSpec {
    Lda,
    Svm { kernel: KernelSpec, c: f64, tol: f64 },
}

impl ClassifierSpec {
    pub fn default_svm() -> Self {
        ClassifierSpec::Svm {
            kernel: KernelSpec::Rbf { gamma: None },
            c: 1.0,
            tol: 1e-3,
        }
    }

    fn describe(&self) -> String {
        match self {
            ClassifierSpec::Lda => "lda".into(),
            ClassifierSpec::Svm { kernel, c, .. } => match kernel {
                KernelSpec::Linear => format!("svm(linear, C={c})"),
                KernelSpec::Rbf { gamma: Some(g) } => format!("svm(rbf gamma={g}, C={c})"),
                KernelSpec::Rbf { gamma: None } => format!("svm(rbf gamma=auto, C={c})"),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CvOptions {
    /// Fit standardization on the full matrix instead of each training
    /// split. Deliberately wrong; kept to demonstrate the leakage.
    pub standardize_on_all: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldMetrics {
    pub accuracy: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    pub fn_: usize,
}

/// Cross-validation outcome. Percentages throughout; the epileptic class
/// is the positive one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerformanceReport {
    pub feature: String,
    pub classifier: String,
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<FoldMetrics>,
    /// Unweighted means of the per-fold percentages.
    pub mean_accuracy: f64,
    pub mean_sensitivity: f64,
    pub mean_specificity: f64,
    /// Metrics of the summed confusion counts.
    pub pooled_accuracy: f64,
    pub pooled_sensitivity: f64,
    pub pooled_specificity: f64,
    pub confusion: [usize; 4],
}

fn percent(num: usize, den: usize) -> f64 {
    if den == 0 {
        100.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

fn metrics(tp: usize, tn: usize, fp: usize, fn_: usize) -> FoldMetrics {
    FoldMetrics {
        accuracy: percent(tp + tn, tp + tn + fp + fn_),
        sensitivity: percent(tp, tp + fn_),
        specificity: percent(tn, tn + fp),
        tp,
        tn,
        fp,
        fn_,
    }
}

/// Column means and SDs of the selected rows; SD 0 is left at 1 so a
/// constant column standardizes to zero instead of NaN.
fn standardizer(rows: &[Vec<f64>], subset: &[usize]) -> (Vec<f64>, Vec<f64>) {
    let d = rows[0].len();
    let n = subset.len() as f64;
    let mut means = vec![0.0; d];
    for &i in subset {
        for (m, v) in means.iter_mut().zip(&rows[i]) {
            *m += v;
        }
    }
    for m in &mut means {
        *m /= n;
    }
    let mut sds = vec![0.0; d];
    for &i in subset {
        for c in 0..d {
            let diff = rows[i][c] - means[c];
            sds[c] += diff * diff;
        }
    }
    for s in &mut sds {
        *s = (*s / n).sqrt();
        if *s == 0.0 {
            *s = 1.0;
        }
    }
    (means, sds)
}

fn apply_standardizer(row: &[f64], means: &[f64], sds: &[f64]) -> Vec<f64> {
    row.iter()
        .zip(means.iter().zip(sds))
        .map(|(v, (m, s))| (v - m) / s)
        .collect()
}

fn resolve_kernel(spec: KernelSpec, train: &[Vec<f64>]) -> Kernel {
    match spec {
        KernelSpec::Linear => Kernel::Linear,
        KernelSpec::Rbf { gamma: Some(g) } => Kernel::Rbf { gamma: g },
        KernelSpec::Rbf { gamma: None } => {
            let d = train[0].len();
            let n = train.len() as f64;
            let mut var_sum = 0.0;
            for c in 0..d {
                let mean: f64 = train.iter().map(|r| r[c]).sum::<f64>() / n;
                var_sum += train.iter().map(|r| (r[c] - mean) * (r[c] - mean)).sum::<f64>() / n;
            }
            let mean_var = var_sum / d as f64;
            let gamma = if mean_var > 0.0 {
                1.0 / (d as f64 * mean_var)
            } else {
                1.0 / d as f64
            };
            Kernel::Rbf { gamma }
        }
    }
}

pub fn cross_validate(
    matrix: &FeatureMatrix,
    spec: ClassifierSpec,
    k: usize,
    seed: u64,
) -> Result<PerformanceReport> {
    cross_validate_with(matrix, spec, k, seed, CvOptions::default())
}

pub fn cross_validate_with(
    matrix: &FeatureMatrix,
    spec: ClassifierSpec,
    k: usize,
    seed: u64,
    options: CvOptions,
) -> Result<PerformanceReport> {
    let folds = stratified_kfold(&matrix.labels, k, seed)?;
    let y: Vec<u8> = matrix
        .labels
        .iter()
        .map(|l| u8::from(*l == Label::Epileptic))
        .collect();
    let all: Vec<usize> = (0..matrix.n_rows()).collect();

    let outcomes = par::map_slice(&folds, |fold| -> Result<FoldMetrics> {
        let stat_subset: &[usize] = if options.standardize_on_all {
            &all
        } else {
            &fold.train
        };
        let (means, sds) = standardizer(&matrix.rows, stat_subset);
        let train_rows: Vec<Vec<f64>> = fold
            .train
            .iter()
            .map(|&i| apply_standardizer(&matrix.rows[i], &means, &sds))
            .collect();
        let train_labels: Vec<u8> = fold.train.iter().map(|&i| y[i]).collect();
        let test_rows: Vec<Vec<f64>> = fold
            .test
            .iter()
            .map(|&i| apply_standardizer(&matrix.rows[i], &means, &sds))
            .collect();

        let predictions = match spec {
            ClassifierSpec::Lda => {
                let model = lda_fit(&train_rows, &train_labels)?;
                lda_predict(&model, &test_rows)?
            }
            ClassifierSpec::Svm { kernel, c, tol } => {
                let kernel = resolve_kernel(kernel, &train_rows);
                let model = svm_fit(&train_rows, &train_labels, kernel, c, tol)?;
                svm_predict(&model, &test_rows)?
            }
        };

        let (mut tp, mut tn, mut fp, mut fn_) = (0, 0, 0, 0);
        for (&i, &pred) in fold.test.iter().zip(&predictions) {
            match (y[i], pred) {
                (1, 1) => tp += 1,
                (0, 0) => tn += 1,
                (0, 1) => fp += 1,
                _ => fn_ += 1,
            }
        }
        Ok(metrics(tp, tn, fp, fn_))
    });
    let fold_metrics: Vec<FoldMetrics> = outcomes.into_iter().collect::<Result<_>>()?;

    let n_folds = fold_metrics.len() as f64;
    let mean_of = |f: fn(&FoldMetrics) -> f64| {
        fold_metrics.iter().map(f).sum::<f64>() / n_folds
    };
    let (tp, tn, fp, fn_) = fold_metrics.iter().fold((0, 0, 0, 0), |acc, m| {
        (acc.0 + m.tp, acc.1 + m.tn, acc.2 + m.fp, acc.3 + m.fn_)
    });
    let pooled = metrics(tp, tn, fp, fn_);

    Ok(PerformanceReport {
        feature: matrix.columns.join("+"),
        classifier: spec.describe(),
        k,
        seed,
        mean_accuracy: mean_of(|m| m.accuracy),
        mean_sensitivity: mean_of(|m| m.sensitivity),
        mean_specificity: mean_of(|m| m.specificity),
        pooled_accuracy: pooled.accuracy,
        pooled_sensitivity: pooled.sensitivity,
        pooled_specificity: pooled.specificity,
        confusion: [tp, tn, fp, fn_],
        folds: fold_metrics,
    })
}
