//! Two-class linear discriminant analysis.
//!
//! Classes share a pooled within-class covariance; the decision rule is
//! the Gaussian discriminant reduced to a single projection: class 1 wins
//! when w.x exceeds a threshold built from the class midpoint and the
//! log-prior ratio.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};

/// Ridge strength relative to mean diagonal, enough to float collinear
/// sub-band columns without disturbing well-conditioned problems.
const RIDGE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct LdaModel {
    pub mean0: DVector<f64>,
    pub mean1: DVector<f64>,
    /// Pooled within-class covariance after regularization.
    pub covariance: DMatrix<f64>,
    pub priors: [f64; 2],
    /// w = covariance^-1 (mean1 - mean0).
    pub weights: DVector<f64>,
    /// Class 1 requires w.x > threshold; ties go to class 0.
    pub threshold: f64,
}

impl LdaModel {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Signed score: positive means class 1. `x` must have `dim()` entries.
    pub fn decision_value(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        let wx: f64 = self.weights.iter().zip(x).map(|(w, v)| w * v).sum();
        wx - self.threshold
    }
}

pub fn lda_fit(rows: &[Vec<f64>], labels: &[u8]) -> Result<LdaModel> {
    if rows.len() != labels.len() {
        return Err(Error::Matrix(format!(
            "{} rows but {} labels",
            rows.len(),
            labels.len()
        )));
    }
    let d = rows.first().map_or(0, |r| r.len());
    if d == 0 {
        return Err(Error::EmptyInput("LDA training set".into()));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != d) {
        return Err(Error::Matrix(format!(
            "ragged feature rows: {} vs {}",
            bad.len(),
            d
        )));
    }
    let n1 = labels.iter().filter(|&&l| l == 1).count();
    let n0 = labels.len() - n1;
    if n0 == 0 || n1 == 0 {
        let only = if n0 == 0 { "class 1" } else { "class 0" };
        return Err(Error::SingleClass(only.into()));
    }
    if n0 < 2 || n1 < 2 {
        return Err(Error::InvalidParam(format!(
            "LDA needs >= 2 samples per class, got {n0} and {n1}"
        )));
    }

    let mut mean0 = DVector::zeros(d);
    let mut mean1 = DVector::zeros(d);
    for (row, &label) in rows.iter().zip(labels) {
        let target = if label == 1 { &mut mean1 } else { &mut mean0 };
        for (t, v) in target.iter_mut().zip(row) {
            *t += v;
        }
    }
    mean0 /= n0 as f64;
    mean1 /= n1 as f64;

    let mut covariance = DMatrix::zeros(d, d);
    for (row, &label) in rows.iter().zip(labels) {
        let mu = if label == 1 { &mean1 } else { &mean0 };
        let c = DVector::from_row_slice(row) - mu;
        covariance += &c * c.transpose();
    }
    covariance /= (n0 + n1 - 2) as f64;
    let mut ridge = RIDGE * covariance.trace() / d as f64;
    if ridge <= 0.0 {
        ridge = 1e-12;
    }
    for i in 0..d {
        covariance[(i, i)] += ridge;
    }

    let chol = Cholesky::new(covariance.clone()).ok_or_else(|| {
        Error::Matrix("pooled covariance is not positive definite".into())
    })?;
    let weights = chol.solve(&(&mean1 - &mean0));
    let n = (n0 + n1) as f64;
    let priors = [n0 as f64 / n, n1 as f64 / n];
    let threshold = 0.5 * weights.dot(&(&mean0 + &mean1)) + (priors[0] / priors[1]).ln();

    Ok(LdaModel {
        mean0,
        mean1,
        covariance,
        priors,
        weights,
        threshold,
    })
}

pub fn lda_predict(model: &LdaModel, rows: &[Vec<f64>]) -> Result<Vec<u8>> {
    if let Some(bad) = rows.iter().find(|r| r.len() != model.dim()) {
        return Err(Error::Matrix(format!(
            "feature dimension {} does not match model dimension {}",
            bad.len(),
            model.dim()
        )));
    }
    Ok(rows
        .iter()
        .map(|r| u8::from(model.decision_value(r) > 0.0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gaussian_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
        let u1: f64 = rng.gen_range(1e-12..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        let r = (-2.0 * u1.ln()).sqrt();
        let t = 2.0 * std::f64::consts::PI * u2;
        (r * t.cos(), r * t.sin())
    }

    #[test]
    fn one_dimensional_midpoint_threshold() {
        let rows = vec![vec![-0.5], vec![0.5], vec![1.5], vec![2.5]];
        let labels = [0, 0, 1, 1];
        let model = lda_fit(&rows, &labels).unwrap();
        // Equal priors and variances: the boundary sits at the midpoint.
        let boundary = model.threshold / model.weights[0];
        assert!((boundary - 1.0).abs() < 1e-9, "boundary at {boundary}");
    }

    #[test]
    fn isotropic_two_dimensional_boundary() {
        let cross = [(-1.0, 0.0), (1.0, 0.0), (0.0, -1.0), (0.0, 1.0)];
        let mut rows: Vec<Vec<f64>> = cross.iter().map(|&(x, y)| vec![x, y]).collect();
        rows.extend(cross.iter().map(|&(x, y)| vec![x + 2.0, y]));
        let labels = [0, 0, 0, 0, 1, 1, 1, 1];
        let model = lda_fit(&rows, &labels).unwrap();
        assert!(
            model.weights[1].abs() <= 1e-9 * model.weights[0].abs(),
            "weights not along x: {:?}",
            model.weights
        );
        assert!(model.decision_value(&[1.0 + 1e-6, 7.0]) > 0.0);
        assert!(model.decision_value(&[1.0 - 1e-6, -7.0]) < 0.0);
    }

    #[test]
    fn boundary_point_takes_class_zero() {
        let rows = vec![vec![-1.0], vec![1.0], vec![1.0], vec![3.0]];
        let labels = [0, 0, 1, 1];
        let model = lda_fit(&rows, &labels).unwrap();
        // Means 0 and 2, equal priors: x = 1 is exactly on the boundary.
        assert_eq!(model.decision_value(&[1.0]), 0.0);
        assert_eq!(lda_predict(&model, &[vec![1.0]]).unwrap(), vec![0]);
    }

    #[test]
    fn predictions_match_gaussian_discriminant_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..30 {
            let (x, y) = gaussian_pair(&mut rng);
            rows.push(vec![x, 0.7 * y + 0.2 * x]);
            labels.push(0u8);
        }
        for _ in 0..20 {
            let (x, y) = gaussian_pair(&mut rng);
            rows.push(vec![x + 3.0, 0.7 * y + 0.2 * x + 1.0]);
            labels.push(1u8);
        }
        let model = lda_fit(&rows, &labels).unwrap();
        let pred = lda_predict(&model, &rows).unwrap();

        // Full Gaussian discriminant via explicit inverse, no shared code
        // with the projection path.
        let inv = model.covariance.clone().try_inverse().unwrap();
        let score = |x: &DVector<f64>, mu: &DVector<f64>, prior: f64| {
            x.dot(&(&inv * mu)) - 0.5 * mu.dot(&(&inv * mu)) + prior.ln()
        };
        for (row, &p) in rows.iter().zip(&pred) {
            let x = DVector::from_row_slice(row);
            let s0 = score(&x, &model.mean0, model.priors[0]);
            let s1 = score(&x, &model.mean1, model.priors[1]);
            assert_eq!(p, u8::from(s1 > s0), "row {row:?}: {s0} vs {s1}");
        }
    }

    #[test]
    fn predictions_invariant_under_affine_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..40 {
            let (x, y) = gaussian_pair(&mut rng);
            let shift = if i % 2 == 0 { 0.0 } else { 2.5 };
            rows.push(vec![x + shift, y - 0.3 * shift]);
            labels.push((i % 2) as u8);
        }
        let base = lda_predict(&lda_fit(&rows, &labels).unwrap(), &rows).unwrap();
        // Invertible map (x, y) -> (2x + 0.3y + 5, -0.5x + 1.2y - 1).
        let mapped: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| {
                vec![
                    2.0 * r[0] + 0.3 * r[1] + 5.0,
                    -0.5 * r[0] + 1.2 * r[1] - 1.0,
                ]
            })
            .collect();
        let moved = lda_predict(&lda_fit(&mapped, &labels).unwrap(), &mapped).unwrap();
        assert_eq!(base, moved);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(matches!(
            lda_fit(&[vec![1.0], vec![2.0]], &[0, 0]),
            Err(Error::SingleClass(_))
        ));
        assert!(lda_fit(&[vec![1.0], vec![2.0], vec![3.0]], &[0, 0, 1]).is_err());
        let model = lda_fit(
            &[vec![0.0], vec![0.1], vec![1.0], vec![1.1]],
            &[0, 0, 1, 1],
        )
        .unwrap();
        assert!(lda_predict(&model, &[vec![1.0, 2.0]]).is_err());
    }
}
