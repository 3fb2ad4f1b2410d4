//! Group-difference statistics: Mann-Whitney U tests and per-feature
//! summary tables.
//!
//! Small pooled samples (n1 + n2 <= 25) get an exact two-sided p by
//! counting rank assignments; larger samples use the normal approximation
//! with continuity and tie corrections. Ties always receive midranks.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::signal_io::Label;

/// Largest pooled sample size handled by the exact method.
const EXACT_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq)]
pub struct UTestResult {
    /// min(u1, u2), the conventional reported statistic.
    pub u: f64,
    pub u1: f64,
    pub u2: f64,
    /// Tie-corrected, continuity-corrected normal statistic; computed even
    /// when the p-value itself comes from the exact method.
    pub z: f64,
    pub p_two_sided: f64,
    pub n1: usize,
    pub n2: usize,
    /// Whether the p-value came from exact enumeration.
    pub exact: bool,
    /// Whether the pooled sample contained ties (midranks assigned; the
    /// approximate variance subtracts the tie term).
    pub tie_correction_applied: bool,
}

/// Midranks of `values` (1-based, ties averaged), plus the run length of
/// each tied group in sorted order.
fn midranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut runs = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end share the average of ranks start+1..=end.
        let rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        runs.push(end - start);
        start = end;
    }
    (ranks, runs)
}

/// Variance of U under the null, with the tie correction subtracted.
fn rank_variance(n1: usize, n2: usize, runs: &[usize]) -> f64 {
    let n = (n1 + n2) as f64;
    let tie_term: f64 = runs
        .iter()
        .filter(|&&t| t > 1)
        .map(|&t| (t * t * t - t) as f64)
        .sum();
    (n1 * n2) as f64 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)))
}

/// Continuity-corrected two-sided normal p for u = min(u1, u2).
fn normal_p(u: f64, n1: usize, n2: usize, var: f64) -> (f64, f64) {
    if var <= 0.0 {
        return (0.0, 1.0);
    }
    let mean = (n1 * n2) as f64 / 2.0;
    let z = (u - mean + 0.5) / var.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    (z, (2.0 * normal.cdf(z)).min(1.0))
}

/// Exact two-sided p: P[U <= u] + P[U >= n1*n2 - u] over all equally
/// likely assignments of the pooled ranks to group sizes n1, n2.
///
/// Midranks are multiples of 1/2, so doubling makes them integers and the
/// count of assignments per rank sum follows from a subset-sum table.
fn exact_p(ranks: &[f64], n1: usize, u: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total_sum: usize = doubled.iter().sum();
    let mut dp = vec![vec![0u64; total_sum + 1]; n1 + 1];
    dp[0][0] = 1;
    for &r in &doubled {
        for k in (1..=n1.min(doubled.len())).rev() {
            for s in (r..=total_sum).rev() {
                let add = dp[k - 1][s - r];
                if add > 0 {
                    dp[k][s] += add;
                }
            }
        }
    }

    let n2 = ranks.len() - n1;
    // Doubled rank sum s maps to doubled U1 = s - n1(n1+1).
    let offset = (n1 * (n1 + 1)) as i64;
    let low_threshold = (2.0 * u).round() as i64;
    let high_threshold = 2 * (n1 * n2) as i64 - low_threshold;
    let (mut low, mut high, mut total) = (0u64, 0u64, 0u64);
    for (s, &count) in dp[n1].iter().enumerate() {
        if count == 0 {
            continue;
        }
        total += count;
        let u_doubled = s as i64 - offset;
        if u_doubled <= low_threshold {
            low += count;
        }
        if u_doubled >= high_threshold {
            high += count;
        }
    }
    (((low + high) as f64) / total as f64).min(1.0)
}

pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<UTestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput(
            "Mann-Whitney test needs samples in both groups".into(),
        ));
    }
    let (n1, n2) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, runs) = midranks(&pooled);

    let r1: f64 = ranks[..n1].iter().sum();
    let u1 = r1 - (n1 * (n1 + 1)) as f64 / 2.0;
    let u2 = (n1 * n2) as f64 - u1;
    let u = u1.min(u2);

    let ties = runs.iter().any(|&t| t > 1);
    let var = rank_variance(n1, n2, &runs);
    let (z, approx) = normal_p(u, n1, n2, var);
    let exact = n1 + n2 <= EXACT_LIMIT;
    let p = if exact { exact_p(&ranks, n1, u) } else { approx };

    Ok(UTestResult {
        u,
        u1,
        u2,
        z,
        p_two_sided: p,
        n1,
        n2,
        exact,
        tie_correction_applied: ties,
    })
}

/// One summary table row. The patient columns describe the epileptic set.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureStat {
    pub feature: String,
    pub healthy_mean: f64,
    pub healthy_sd: f64,
    pub patient_mean: f64,
    pub patient_sd: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub rows: Vec<FeatureStat>,
    pub n_healthy: usize,
    pub n_patient: usize,
}

impl GroupSummary {
    pub fn row(&self, feature: &str) -> Option<&FeatureStat> {
        self.rows.iter().find(|r| r.feature == feature)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out =
            String::from("feature,healthy_mean,healthy_sd,patient_mean,patient_sd,p_value\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.feature, r.healthy_mean, r.healthy_sd, r.patient_mean, r.patient_sd, r.p_value
            ));
        }
        out
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n-1 denominator); 0 for a single value.
fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

fn stat_row(feature: String, healthy: &[f64], patient: &[f64]) -> Result<FeatureStat> {
    let test = mann_whitney_u(healthy, patient)?;
    Ok(FeatureStat {
        feature,
        healthy_mean: mean(healthy),
        healthy_sd: sample_sd(healthy),
        patient_mean: mean(patient),
        patient_sd: sample_sd(patient),
        p_value: test.p_two_sided,
    })
}

const BAND_SUFFIXES: [&str; 6] = ["_d1", "_d2", "_d3", "_d4", "_d5", "_a5"];

/// The column's feature name with a trailing sub-band tag removed, if any.
fn band_base(name: &str) -> Option<&str> {
    BAND_SUFFIXES
        .iter()
        .find_map(|suffix| name.strip_suffix(suffix))
}

/// Per-column means, SDs and Mann-Whitney p-values between the two
/// classes; for every feature spread over several sub-band columns an
/// extra `<feature>_band_mean` row tests the per-segment mean across those
/// bands.
pub fn group_summary(matrix: &FeatureMatrix) -> Result<GroupSummary> {
    let n_healthy = matrix
        .labels
        .iter()
        .filter(|l| matches!(l, Label::Healthy))
        .count();
    let n_patient = matrix.n_rows() - n_healthy;
    if n_healthy == 0 || n_patient == 0 {
        let only = if n_healthy == 0 { "epileptic" } else { "healthy" };
        return Err(Error::SingleClass(only.into()));
    }

    let mut rows = Vec::new();
    for (c, name) in matrix.columns.iter().enumerate() {
        let (h, p) = matrix.column_by_class(c);
        rows.push(stat_row(name.clone(), &h, &p)?);
    }

    // Band aggregates, in first-appearance order of the base feature.
    let mut bases: Vec<&str> = Vec::new();
    for name in &matrix.columns {
        if let Some(base) = band_base(name) {
            if !bases.contains(&base) {
                bases.push(base);
            }
        }
    }
    for base in bases {
        let cols: Vec<usize> = matrix
            .columns
            .iter()
            .enumerate()
            .filter(|(_, n)| band_base(n) == Some(base))
            .map(|(c, _)| c)
            .collect();
        if cols.len() < 2 {
            continue;
        }
        let mut healthy = Vec::new();
        let mut patient = Vec::new();
        for (row, label) in matrix.rows.iter().zip(&matrix.labels) {
            let m = cols.iter().map(|&c| row[c]).sum::<f64>() / cols.len() as f64;
            match label {
                Label::Healthy => healthy.push(m),
                Label::Epileptic => patient.push(m),
            }
        }
        rows.push(stat_row(format!("{base}_band_mean"), &healthy, &patient)?);
    }

    Ok(GroupSummary {
        rows,
        n_healthy,
        n_patient,
    })
}
