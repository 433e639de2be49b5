use serde::{Deserialize, Serialize};

use super::lda::argmax;
use super::Samples;
use crate::error::{Error, Result};

pub const SVC_DEFAULT_C: f64 = 0.1;
/// Stop once the maximal KKT violation falls below this.
pub const SVC_TOLERANCE: f64 = 1e-4;
/// Iteration budget, in units of the training-set size.
pub const SVC_MAX_EPOCHS: usize = 10_000;
/// Above this many rows kernel rows are computed on demand instead of
/// caching the full Gram matrix.
const GRAM_CACHE_ROWS: usize = 5000;

/// One binary machine, `f(x) = w . x + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinarySvc {
    pub w: Vec<f64>,
    pub b: f64,
    /// Dual variables, one per training row.
    pub alpha: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl BinarySvc {
    pub fn decision(&self, row: &[f64]) -> f64 {
        dot(&self.w, row) + self.b
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Dual objective `0.5 a'Qa - sum(a)` with `Q_ij = y_i y_j x_i . x_j`.
pub fn dual_objective(x: &Samples, y: &[f64], alpha: &[f64]) -> f64 {
    let mut w = vec![0.0; x.cols];
    for i in 0..x.rows {
        for (wj, v) in w.iter_mut().zip(x.row(i)) {
            *wj += alpha[i] * y[i] * v;
        }
    }
    0.5 * dot(&w, &w) - alpha.iter().sum::<f64>()
}

/// Primal objective `0.5 |w|^2 + C sum(max(0, 1 - y f(x)))`.
pub fn primal_objective(x: &Samples, y: &[f64], m: &BinarySvc, c: f64) -> f64 {
    let hinge: f64 = (0..x.rows).map(|i| (1.0 - y[i] * m.decision(x.row(i))).max(0.0)).sum();
    0.5 * dot(&m.w, &m.w) + c * hinge
}

enum Kernel<'a> {
    Cached(Vec<f64>, usize),
    OnDemand(&'a Samples),
}

impl Kernel<'_> {
    fn row(&self, i: usize, out: &mut [f64]) {
        match self {
            Kernel::Cached(k, n) => out.copy_from_slice(&k[i * n..(i + 1) * n]),
            Kernel::OnDemand(x) => {
                for (t, o) in out.iter_mut().enumerate() {
                    *o = dot(x.row(i), x.row(t));
                }
            }
        }
    }
}

/// Soft-margin linear SVM with an unregularised bias, solved in the dual by
/// two-coordinate descent on the maximal violating pair. `y` holds +-1.
pub fn train_binary(x: &Samples, y: &[f64], c: f64) -> Result<BinarySvc> {
    if y.len() != x.rows {
        return Err(Error::invalid("label count does not match rows"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid(format!("SVC regularisation must be positive, got {c}")));
    }
    if !y.contains(&1.0) || !y.contains(&-1.0) {
        return Err(Error::InvalidLabels("binary SVC needs both signs".into()));
    }
    let n = x.rows;
    let kernel = if n <= GRAM_CACHE_ROWS {
        let mut k = vec![0.0; n * n];
        for i in 0..n {
            for t in 0..=i {
                let v = dot(x.row(i), x.row(t));
                k[i * n + t] = v;
                k[t * n + i] = v;
            }
        }
        Kernel::Cached(k, n)
    } else {
        Kernel::OnDemand(x)
    };
    let diag: Vec<f64> = (0..n).map(|i| dot(x.row(i), x.row(i))).collect();

    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let (mut ki, mut kj) = (vec![0.0; n], vec![0.0; n]);
    let budget = SVC_MAX_EPOCHS.saturating_mul(n.max(1));
    let mut iterations = 0;
    let mut converged = false;
    while iterations < budget {
        // i maximises -y G over the "up" set, j minimises it over "low".
        let (mut i, mut gmax) = (usize::MAX, f64::NEG_INFINITY);
        let (mut j, mut gmin) = (usize::MAX, f64::INFINITY);
        for t in 0..n {
            let v = -y[t] * grad[t];
            let up = if y[t] > 0.0 { alpha[t] < c } else { alpha[t] > 0.0 };
            let low = if y[t] > 0.0 { alpha[t] > 0.0 } else { alpha[t] < c };
            if up && v > gmax {
                gmax = v;
                i = t;
            }
            if low && v < gmin {
                gmin = v;
                j = t;
            }
        }
        if gmax - gmin < SVC_TOLERANCE {
            converged = true;
            break;
        }
        iterations += 1;
        kernel.row(i, &mut ki);
        kernel.row(j, &mut kj);
        let quad = (diag[i] + diag[j] - 2.0 * ki[j]).max(1e-12);
        let (ai, aj) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            // a_i - a_j is preserved: both move by t.
            let lo = (-ai).max(-aj);
            let hi = (c - ai).min(c - aj);
            let t = ((-grad[i] - grad[j]) / quad).clamp(lo, hi);
            alpha[i] = ai + t;
            alpha[j] = aj + t;
        } else {
            // a_i + a_j is preserved: a_i moves by -t, a_j by +t.
            let lo = (-aj).max(ai - c);
            let hi = ai.min(c - aj);
            let t = ((grad[i] - grad[j]) / quad).clamp(lo, hi);
            alpha[i] = ai - t;
            alpha[j] = aj + t;
        }
        let (di, dj) = (alpha[i] - ai, alpha[j] - aj);
        for t in 0..n {
            grad[t] += y[t] * (y[i] * ki[t] * di + y[j] * kj[t] * dj);
        }
    }

    let mut w = vec![0.0; x.cols];
    for t in 0..n {
        if alpha[t] != 0.0 {
            let s = alpha[t] * y[t];
            for (wj, v) in w.iter_mut().zip(x.row(t)) {
                *wj += s * v;
            }
        }
    }
    Ok(BinarySvc { w, b: -rho(&alpha, &grad, y, c), alpha, iterations, converged })
}

/// Offset from free support vectors, or the middle of the feasible interval
/// when every multiplier is at a bound.
fn rho(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free, mut sum) = (0usize, 0.0);
    for t in 0..alpha.len() {
        let yg = y[t] * grad[t];
        let positive = y[t] > 0.0;
        if alpha[t] >= c {
            if positive {
                lb = lb.max(yg);
            } else {
                ub = ub.min(yg);
            }
        } else if alpha[t] <= 0.0 {
            if positive {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            sum += yg;
        }
    }
    if free > 0 {
        sum / free as f64
    } else {
        0.5 * (ub + lb)
    }
}

/// Linear SVC. Two classes use a single machine with class 1 positive; more
/// classes use one-vs-rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvcModel {
    pub n_classes: usize,
    pub c: f64,
    pub machines: Vec<BinarySvc>,
}

impl SvcModel {
    pub fn converged(&self) -> bool {
        self.machines.iter().all(|m| m.converged)
    }

    pub fn decisions(&self, row: &[f64]) -> Vec<f64> {
        self.machines.iter().map(|m| m.decision(row)).collect()
    }

    pub fn predict_row(&self, row: &[f64]) -> usize {
        if self.n_classes == 2 {
            usize::from(self.machines[0].decision(row) > 0.0)
        } else {
            argmax(&self.decisions(row))
        }
    }

    pub fn predict(&self, x: &Samples) -> Vec<usize> {
        (0..x.rows).map(|i| self.predict_row(x.row(i))).collect()
    }
}

pub fn train_svc(x: &Samples, y: &[usize], n_classes: usize, c: f64) -> Result<SvcModel> {
    if y.len() != x.rows {
        return Err(Error::invalid("label count does not match rows"));
    }
    if let Some(k) = y.iter().find(|&&k| k >= n_classes) {
        return Err(Error::InvalidLabels(format!("class index {k} out of range")));
    }
    let mut present = vec![false; n_classes];
    y.iter().for_each(|&k| present[k] = true);
    if n_classes < 2 || present.iter().filter(|&&p| p).count() < 2 {
        return Err(Error::InvalidLabels("SVC needs at least two classes in the training rows".into()));
    }
    let signs = |positive: usize| -> Vec<f64> { y.iter().map(|&k| if k == positive { 1.0 } else { -1.0 }).collect() };
    let machines = if n_classes == 2 {
        vec![train_binary(x, &signs(1), c)?]
    } else {
        (0..n_classes)
            .map(|k| {
                if present[k] {
                    train_binary(x, &signs(k), c)
                } else {
                    // A class missing from the training rows is never predicted.
                    Ok(BinarySvc { w: vec![0.0; x.cols], b: f64::MIN, alpha: vec![0.0; x.rows], iterations: 0, converged: true })
                }
            })
            .collect::<Result<_>>()?
    };
    Ok(SvcModel { n_classes, c, machines })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs() -> (Samples, Vec<usize>) {
        let rows = vec![
            vec![0.0, 0.0],
            vec![0.5, 0.2],
            vec![0.2, 0.6],
            vec![4.0, 4.0],
            vec![4.5, 3.8],
            vec![3.7, 4.4],
        ];
        (Samples::from_rows(&rows).unwrap(), vec![0, 0, 0, 1, 1, 1])
    }

    #[test]
    fn separable_blobs_fit_exactly() {
        let (x, y) = blobs();
        let m = train_svc(&x, &y, 2, 1.0).unwrap();
        assert!(m.converged());
        assert_eq!(m.predict(&x), y);
    }

    #[test]
    fn label_exchange_negates_decisions() {
        let (x, y) = blobs();
        let flipped: Vec<usize> = y.iter().map(|k| 1 - k).collect();
        let a = train_svc(&x, &y, 2, SVC_DEFAULT_C).unwrap();
        let b = train_svc(&x, &flipped, 2, SVC_DEFAULT_C).unwrap();
        for i in 0..x.rows {
            assert_eq!(a.machines[0].decision(x.row(i)), -b.machines[0].decision(x.row(i)));
        }
        assert_eq!(b.predict(&x), flipped);
    }

    #[test]
    fn one_vs_rest_three_classes() {
        let rows = vec![
            vec![0.0, 0.0],
            vec![0.3, 0.1],
            vec![5.0, 0.0],
            vec![5.2, 0.3],
            vec![0.0, 5.0],
            vec![0.2, 5.3],
        ];
        let x = Samples::from_rows(&rows).unwrap();
        let y = vec![0, 0, 1, 1, 2, 2];
        let m = train_svc(&x, &y, 3, 10.0).unwrap();
        assert_eq!(m.machines.len(), 3);
        assert_eq!(m.predict(&x), y);
    }

    #[test]
    fn one_class_is_rejected() {
        let (x, _) = blobs();
        assert!(matches!(train_svc(&x, &[0; 6], 2, 0.1), Err(Error::InvalidLabels(_))));
    }
}
