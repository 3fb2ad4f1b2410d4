//! Soft-margin SVM trained by sequential minimal optimization.
//!
//! The dual problem (minimize 0.5 a'Qa - e'a subject to y'a = 0 and
//! 0 <= a <= C, Q_ij = y_i y_j K_ij) is solved by repeatedly optimizing
//! the most violating pair of coefficients. Selection follows the
//! first-order rule: the pair realizing the largest KKT violation
//! m - M, where m and M scan the up/down index sets. Training stops when
//! the violation drops below `tol`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Linear,
    Rbf { gamma: f64 },
}

impl Kernel {
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            Kernel::Linear => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            Kernel::Rbf { gamma } => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-gamma * d2).exp()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SvmModel {
    pub kernel: Kernel,
    pub c: f64,
    pub support_vectors: Vec<Vec<f64>>,
    /// alpha_i * y_i for each support vector.
    pub coefficients: Vec<f64>,
    pub bias: f64,
    /// Largest KKT violation at termination (m - M).
    pub kkt_residual: f64,
    /// Primal objective minus dual objective at termination.
    pub duality_gap: f64,
    pub iterations: usize,
}

impl SvmModel {
    pub fn dim(&self) -> usize {
        self.support_vectors.first().map_or(0, |sv| sv.len())
    }

    /// Signed decision value: positive means class 1.
    pub fn decision_value(&self, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.coefficients)
            .map(|(sv, coef)| coef * self.kernel.eval(sv, x))
            .sum::<f64>()
            + self.bias
    }
}

/// Hard cap on pair optimizations; generous for the segment counts this
/// pipeline sees (hundreds of samples).
const MAX_ITERATIONS: usize = 200_000;

pub fn svm_fit(
    rows: &[Vec<f64>],
    labels: &[u8],
    kernel: Kernel,
    c: f64,
    tol: f64,
) -> Result<SvmModel> {
    if rows.len() != labels.len() {
        return Err(Error::Matrix(format!(
            "{} rows but {} labels",
            rows.len(),
            labels.len()
        )));
    }
    let d = rows.first().map_or(0, |r| r.len());
    if d == 0 {
        return Err(Error::EmptyInput("SVM training set".into()));
    }
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::Matrix("ragged feature rows".into()));
    }
    if !(c > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidParam(format!(
            "SVM needs C > 0 and tol > 0, got {c} and {tol}"
        )));
    }
    if let Kernel::Rbf { gamma } = kernel {
        if !(gamma > 0.0) {
            return Err(Error::InvalidParam(format!("RBF gamma must be > 0, got {gamma}")));
        }
    }
    let n = rows.len();
    let y: Vec<f64> = labels.iter().map(|&l| if l == 1 { 1.0 } else { -1.0 }).collect();
    if y.iter().all(|&v| v > 0.0) || y.iter().all(|&v| v < 0.0) {
        let only = if y[0] > 0.0 { "class 1" } else { "class 0" };
        return Err(Error::SingleClass(only.into()));
    }

    // Full Gram matrix; n stays small enough (a few hundred segments).
    let gram: Vec<Vec<f64>> = rows
        .iter()
        .map(|a| rows.iter().map(|b| kernel.eval(a, b)).collect())
        .collect();

    let mut alpha = vec![0.0f64; n];
    // Gradient of the dual objective; -e at alpha = 0.
    let mut grad = vec![-1.0f64; n];
    let mut iterations = 0usize;
    let residual = loop {
        // Maximal violating pair: i from the up set, j from the down set.
        let mut m = f64::NEG_INFINITY;
        let mut i = usize::MAX;
        let mut mm = f64::INFINITY;
        let mut j = usize::MAX;
        for t in 0..n {
            let v = -y[t] * grad[t];
            let up = if y[t] > 0.0 { alpha[t] < c } else { alpha[t] > 0.0 };
            let down = if y[t] > 0.0 { alpha[t] > 0.0 } else { alpha[t] < c };
            if up && v > m {
                m = v;
                i = t;
            }
            if down && v < mm {
                mm = v;
                j = t;
            }
        }
        if m - mm <= tol {
            break m - mm;
        }
        if iterations >= MAX_ITERATIONS {
            return Err(Error::NoConvergence {
                iterations,
                residual: m - mm,
            });
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        // Curvature along the feasible pair direction is the squared
        // feature-space distance, whatever the label combination.
        let mut quad = gram[i][i] + gram[j][j] - 2.0 * gram[i][j];
        if quad <= 0.0 {
            quad = 1e-12;
        }
        if y[i] != y[j] {
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else {
                if alpha[i] < 0.0 {
                    alpha[i] = 0.0;
                    alpha[j] = -diff;
                }
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = c + diff;
                }
            }
        } else {
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = sum;
                }
                if alpha[i] < 0.0 {
                    alpha[i] = 0.0;
                    alpha[j] = sum;
                }
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += y[t] * y[i] * gram[t][i] * di + y[t] * y[j] * gram[t][j] * dj;
        }
    };

    // Bias from free support vectors; for each, y_i - f_i must vanish.
    // With none free, center between the boundary violation bounds.
    let f_no_bias = |t: usize| y[t] * (grad[t] + 1.0);
    let free: Vec<usize> = (0..n)
        .filter(|&t| alpha[t] > 0.0 && alpha[t] < c)
        .collect();
    let bias = if free.is_empty() {
        let mut m = f64::NEG_INFINITY;
        let mut mm = f64::INFINITY;
        for t in 0..n {
            let v = -y[t] * grad[t];
            let up = if y[t] > 0.0 { alpha[t] < c } else { alpha[t] > 0.0 };
            let down = if y[t] > 0.0 { alpha[t] > 0.0 } else { alpha[t] < c };
            if up {
                m = m.max(v);
            }
            if down {
                mm = mm.min(v);
            }
        }
        (m + mm) / 2.0
    } else {
        free.iter().map(|&t| y[t] - f_no_bias(t)).sum::<f64>() / free.len() as f64
    };

    // Duality gap: primal (0.5 w'w + C sum xi) minus dual (e'a - 0.5 a'Qa),
    // where a'Qa = sum_i a_i (grad_i + 1) by the gradient identity.
    let quad_form: f64 = (0..n).map(|t| alpha[t] * (grad[t] + 1.0)).sum();
    let dual = alpha.iter().sum::<f64>() - 0.5 * quad_form;
    let slack: f64 = (0..n)
        .map(|t| (1.0 - y[t] * (f_no_bias(t) + bias)).max(0.0))
        .sum();
    let primal = 0.5 * quad_form + c * slack;
    let duality_gap = primal - dual;

    let mut support_vectors = Vec::new();
    let mut coefficients = Vec::new();
    for t in 0..n {
        if alpha[t] > 0.0 {
            support_vectors.push(rows[t].clone());
            coefficients.push(alpha[t] * y[t]);
        }
    }

    Ok(SvmModel {
        kernel,
        c,
        support_vectors,
        coefficients,
        bias,
        kkt_residual: residual,
        duality_gap,
        iterations,
    })
}

pub fn svm_predict(model: &SvmModel, rows: &[Vec<f64>]) -> Result<Vec<u8>> {
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
