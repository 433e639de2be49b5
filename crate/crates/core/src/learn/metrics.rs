use serde::{Deserialize, Serialize};

/// Class-by-class counts; `counts[true][predicted]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(labels: Vec<String>) -> Self {
        let k = labels.len();
        ConfusionMatrix { labels, counts: vec![vec![0; k]; k] }
    }

    pub fn from_predictions(labels: Vec<String>, truth: &[usize], predicted: &[usize]) -> Self {
        let mut m = ConfusionMatrix::new(labels);
        for (&t, &p) in truth.iter().zip(predicted) {
            m.counts[t][p] += 1;
        }
        m
    }

    /// Element-wise sum; both matrices must share labels.
    pub fn merge(&mut self, other: &ConfusionMatrix) {
        assert_eq!(self.labels, other.labels, "confusion matrices have different labels");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..self.counts.len()).map(|k| self.counts[k][k]).sum()
    }

    /// Trace over total; 0 for an empty matrix.
    pub fn accuracy(&self) -> f64 {
        let n = self.total();
        if n == 0 {
            0.0
        } else {
            self.correct() as f64 / n as f64
        }
    }

    /// Per-class F1, `None` for classes that never occur as truth or
    /// prediction.
    pub fn f1_scores(&self) -> Vec<Option<f64>> {
        let k = self.counts.len();
        (0..k)
            .map(|c| {
                let tp = self.counts[c][c] as f64;
                let fn_: f64 = (0..k).filter(|&j| j != c).map(|j| self.counts[c][j] as f64).sum();
                let fp: f64 = (0..k).filter(|&i| i != c).map(|i| self.counts[i][c] as f64).sum();
                let denom = 2.0 * tp + fp + fn_;
                (denom > 0.0).then(|| 2.0 * tp / denom)
            })
            .collect()
    }

    /// Unweighted mean of the defined per-class F1 scores.
    pub fn macro_f1(&self) -> f64 {
        let scores: Vec<f64> = self.f1_scores().into_iter().flatten().collect();
        if scores.is_empty() {
            0.0
        } else {
            scores.iter().sum::<f64>() / scores.len() as f64
        }
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }
}
