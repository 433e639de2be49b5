use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::Samples;
use crate::error::{Error, Result};

/// Linear discriminant analysis with a ridge-regularised pooled covariance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    /// One row of `p` coefficients per class.
    pub coef: Vec<Vec<f64>>,
    pub intercept: Vec<f64>,
    pub ridge: f64,
}

/// Ridge added to the pooled covariance, relative to its mean diagonal.
pub const LDA_RIDGE: f64 = 1e-6;

pub fn train_lda(x: &Samples, y: &[usize], n_classes: usize) -> Result<LdaModel> {
    if y.len() != x.rows {
        return Err(Error::invalid("label count does not match rows"));
    }
    let p = x.cols;
    let mut counts = vec![0usize; n_classes];
    let mut means = vec![vec![0.0; p]; n_classes];
    for (i, &k) in y.iter().enumerate() {
        if k >= n_classes {
            return Err(Error::InvalidLabels(format!("class index {k} out of range")));
        }
        counts[k] += 1;
        for (m, v) in means[k].iter_mut().zip(x.row(i)) {
            *m += v;
        }
    }
    let present = counts.iter().filter(|&&c| c > 0).count();
    if present < 2 || counts.iter().any(|&c| c == 1) {
        return Err(Error::InvalidLabels(
            "LDA needs at least two classes with at least two rows each".into(),
        ));
    }
    for (m, &c) in means.iter_mut().zip(&counts) {
        if c > 0 {
            m.iter_mut().for_each(|v| *v /= c as f64);
        }
    }

    // Pooled within-class scatter divided by n (maximum-likelihood form).
    let mut cov = DMatrix::<f64>::zeros(p, p);
    let mut dev = DVector::<f64>::zeros(p);
    for (i, &k) in y.iter().enumerate() {
        for (d, (v, m)) in dev.iter_mut().zip(x.row(i).iter().zip(&means[k])) {
            *d = v - m;
        }
        cov.syger(1.0, &dev, &dev, 1.0);
    }
    cov /= x.rows as f64;
    let trace = cov.trace();
    let ridge = if trace > 0.0 { LDA_RIDGE * trace / p as f64 } else { LDA_RIDGE };
    for j in 0..p {
        cov[(j, j)] += ridge;
    }
    cov.fill_upper_triangle_with_lower_triangle();
    let chol = cov.cholesky().ok_or(Error::SingularCovariance)?;

    let n = x.rows as f64;
    let mut coef = Vec::with_capacity(n_classes);
    let mut intercept = Vec::with_capacity(n_classes);
    for (m, &c) in means.iter().zip(&counts) {
        if c == 0 {
            coef.push(vec![0.0; p]);
            intercept.push(f64::NEG_INFINITY);
            continue;
        }
        let mu = DVector::from_column_slice(m);
        let w = chol.solve(&mu);
        intercept.push(-0.5 * mu.dot(&w) + (c as f64 / n).ln());
        coef.push(w.iter().copied().collect());
    }
    Ok(LdaModel { coef, intercept, ridge })
}

impl LdaModel {
    pub fn scores(&self, row: &[f64]) -> Vec<f64> {
        self.coef
            .iter()
            .zip(&self.intercept)
            .map(|(w, b)| w.iter().zip(row).map(|(a, v)| a * v).sum::<f64>() + b)
            .collect()
    }

    pub fn predict_row(&self, row: &[f64]) -> usize {
        argmax(&self.scores(row))
    }

    pub fn predict(&self, x: &Samples) -> Vec<usize> {
        (0..x.rows).map(|i| self.predict_row(x.row(i))).collect()
    }
}

/// Index of the largest value; the lowest index wins ties.
pub(crate) fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in v.iter().enumerate().skip(1) {
        if s > v[best] {
            best = i;
        }
    }
    best
}
