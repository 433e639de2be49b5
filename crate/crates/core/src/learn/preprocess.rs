use serde::{Deserialize, Serialize};

use super::Samples;
use crate::error::{Error, Result};

/// Columns with population variance below this are treated as constant.
pub const CONSTANT_VARIANCE: f64 = 1e-12;
/// Absolute Pearson correlation above which the later column is dropped.
pub const MAX_CORRELATION: f64 = 0.9;

/// Indices of retained columns, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMask {
    pub n_cols: usize,
    pub keep: Vec<usize>,
}

impl ColumnMask {
    pub fn all(n_cols: usize) -> Self {
        ColumnMask { n_cols, keep: (0..n_cols).collect() }
    }

    pub fn apply(&self, x: &Samples) -> Samples {
        x.select_columns(&self.keep)
    }
}

/// Drop constant columns, then drop column `j` whenever some earlier
/// non-constant column `i < j` has `|corr(i, j)| > 0.9`. Fit on training
/// rows only.
pub fn prune_features(train: &Samples) -> Result<ColumnMask> {
    if train.rows < 2 {
        return Err(Error::invalid("pruning needs at least two rows"));
    }
    let n = train.rows as f64;
    let mut centred: Vec<(usize, Vec<f64>)> = Vec::new();
    for j in 0..train.cols {
        let mean = train.column(j).sum::<f64>() / n;
        let dev: Vec<f64> = train.column(j).map(|v| v - mean).collect();
        let var = dev.iter().map(|d| d * d).sum::<f64>() / n;
        if var.is_nan() {
            return Err(Error::invalid(format!("column {j} has non-finite training values")));
        }
        if var >= CONSTANT_VARIANCE {
            let norm = dev.iter().map(|d| d * d).sum::<f64>().sqrt();
            centred.push((j, dev.into_iter().map(|d| d / norm).collect()));
        }
    }
    let mut dropped = vec![false; centred.len()];
    for a in 0..centred.len() {
        for b in a + 1..centred.len() {
            if dropped[b] {
                continue;
            }
            let r: f64 = centred[a].1.iter().zip(&centred[b].1).map(|(x, y)| x * y).sum();
            if r.abs() > MAX_CORRELATION {
                dropped[b] = true;
            }
        }
    }
    let keep: Vec<usize> = centred
        .iter()
        .zip(&dropped)
        .filter(|(_, &d)| !d)
        .map(|((j, _), _)| *j)
        .collect();
    if keep.is_empty() {
        return Err(Error::AllColumnsDropped);
    }
    Ok(ColumnMask { n_cols: train.cols, keep })
}

/// Min-max scaling to `[0, 1]` fit on training rows. Test values outside the
/// training range are clamped; constant columns map to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(train: &Samples) -> Result<Self> {
        if train.rows == 0 {
            return Err(Error::invalid("cannot fit a scaler on zero rows"));
        }
        let mut min = vec![f64::INFINITY; train.cols];
        let mut max = vec![f64::NEG_INFINITY; train.cols];
        for i in 0..train.rows {
            for (j, &v) in train.row(i).iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::invalid(format!("column {j} has non-finite training values")));
                }
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        Ok(MinMaxScaler { min, max })
    }

    pub fn transform_value(&self, j: usize, v: f64) -> f64 {
        let span = self.max[j] - self.min[j];
        if span > 0.0 {
            ((v - self.min[j]) / span).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }

    pub fn transform(&self, x: &Samples) -> Samples {
        let mut data = x.data.clone();
        for row in data.chunks_exact_mut(x.cols) {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.transform_value(j, *v);
            }
        }
        Samples { rows: x.rows, cols: x.cols, data }
    }
}

/// Fit on train, transform both.
pub fn scale_features(train: &Samples, test: &Samples) -> Result<(Samples, Samples, MinMaxScaler)> {
    let scaler = MinMaxScaler::fit(train)?;
    Ok((scaler.transform(train), scaler.transform(test), scaler))
}
