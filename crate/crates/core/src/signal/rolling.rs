use crate::error::{Error, Result};

/// Steps between exact two-pass recomputations of the running moments.
pub const RECOMPUTE_EVERY: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct RollingStats {
    pub mean: Vec<f64>,
    /// Population standard deviation.
    pub std: Vec<f64>,
}

fn two_pass(window: &[f64]) -> (f64, f64) {
    let m = window.len() as f64;
    let mean = window.iter().sum::<f64>() / m;
    let var = window.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / m;
    (mean, var)
}

/// Mean and population standard deviation of every length-`m` run of `f`,
/// updated in constant time per step:
///
/// `mu_i = mu_{i-1} + (f_{i+m-1} - f_{i-1}) / m`
/// `var_i = var_{i-1} + mu_{i-1}^2 - mu_i^2 + (f_{i+m-1}^2 - f_{i-1}^2) / m`
///
/// The recurrence cancels badly for near-constant inputs, so the moments are
/// recomputed exactly every [`RECOMPUTE_EVERY`] steps and the variance is
/// clamped at zero.
pub fn rolling_mean_std(f: &[f64], m: usize) -> Result<RollingStats> {
    if m == 0 || f.len() < m {
        return Err(Error::InsufficientSubwindows { needed: m.max(1), available: f.len() });
    }
    let count = f.len() - m + 1;
    let mut mean = Vec::with_capacity(count);
    let mut std = Vec::with_capacity(count);
    let mf = m as f64;
    let (mut mu, mut var) = two_pass(&f[..m]);
    mean.push(mu);
    std.push(var.max(0.0).sqrt());
    for i in 1..count {
        if i % RECOMPUTE_EVERY == 0 {
            (mu, var) = two_pass(&f[i..i + m]);
        } else {
            let (old, new) = (f[i - 1], f[i + m - 1]);
            let next = mu + (new - old) / mf;
            var += mu * mu - next * next + (new * new - old * old) / mf;
            mu = next;
        }
        mean.push(mu);
        std.push(var.max(0.0).sqrt());
    }
    Ok(RollingStats { mean, std })
}

/// Rolling aggregation of per-subwindow feature vectors (rows) into
/// per-window mean and std vectors, column by column.
pub fn window_features<R: AsRef<[f64]>>(rows: &[R], m: usize) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    if m == 0 || rows.len() < m {
        return Err(Error::InsufficientSubwindows { needed: m.max(1), available: rows.len() });
    }
    let width = rows[0].as_ref().len();
    if rows.iter().any(|r| r.as_ref().len() != width) {
        return Err(Error::invalid("subwindow feature rows differ in length"));
    }
    let count = rows.len() - m + 1;
    let mut means = vec![vec![0.0; width]; count];
    let mut stds = vec![vec![0.0; width]; count];
    let mut column = vec![0.0; rows.len()];
    for j in 0..width {
        for (c, r) in column.iter_mut().zip(rows) {
            *c = r.as_ref()[j];
        }
        let stats = rolling_mean_std(&column, m)?;
        for w in 0..count {
            means[w][j] = stats.mean[w];
            stds[w][j] = stats.std[w];
        }
    }
    Ok((means, stds))
}
