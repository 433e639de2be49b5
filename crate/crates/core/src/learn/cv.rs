use serde::{Deserialize, Serialize};

use super::lda::{train_lda, LdaModel};
use super::metrics::ConfusionMatrix;
use super::preprocess::{prune_features, ColumnMask, MinMaxScaler};
use super::svc::{train_svc, SvcModel, SVC_DEFAULT_C, SVC_MAX_EPOCHS};
use super::{Samples, WindowFeatureMatrix};
use crate::error::{Error, Result, ResultExt};
use crate::par;

fn default_c() -> f64 {
    SVC_DEFAULT_C
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassifierKind {
    Svc {
        #[serde(default = "default_c")]
        c: f64,
    },
    Lda,
}

impl Default for ClassifierKind {
    fn default() -> Self {
        ClassifierKind::Svc { c: SVC_DEFAULT_C }
    }
}

impl std::fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassifierKind::Svc { c } => write!(f, "svc(C={c})"),
            ClassifierKind::Lda => write!(f, "lda"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CvMode {
    #[default]
    Loso,
    Intra,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TrainedModel {
    Svc(SvcModel),
    Lda(LdaModel),
}

impl TrainedModel {
    pub fn predict(&self, x: &Samples) -> Vec<usize> {
        match self {
            TrainedModel::Svc(m) => m.predict(x),
            TrainedModel::Lda(m) => m.predict(x),
        }
    }

    pub fn converged(&self) -> bool {
        match self {
            TrainedModel::Svc(m) => m.converged(),
            TrainedModel::Lda(_) => true,
        }
    }
}

/// Everything fit on the training rows of one fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedFold {
    pub mask: ColumnMask,
    pub scaler: MinMaxScaler,
    pub model: TrainedModel,
}

impl FittedFold {
    pub fn predict(&self, test: &Samples) -> Vec<usize> {
        let x = self.scaler.transform(&self.mask.apply(test));
        self.model.predict(&x)
    }
}

/// Prune, scale and train using `train` only.
pub fn fit_fold(train: &Samples, y: &[usize], n_classes: usize, classifier: ClassifierKind) -> Result<FittedFold> {
    let mask = prune_features(train)?;
    let pruned = mask.apply(train);
    let scaler = MinMaxScaler::fit(&pruned)?;
    let x = scaler.transform(&pruned);
    let model = match classifier {
        ClassifierKind::Svc { c } => TrainedModel::Svc(train_svc(&x, y, n_classes, c)?),
        ClassifierKind::Lda => TrainedModel::Lda(train_lda(&x, y, n_classes)?),
    };
    Ok(FittedFold { mask, scaler, model })
}

/// Row indices of one train/test split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub name: String,
    pub subject: String,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// One fold per subject, in row order.
pub fn loso_folds(m: &WindowFeatureMatrix) -> Result<Vec<Fold>> {
    let subjects = m.subject_ids();
    if subjects.len() < 2 {
        return Err(Error::SingleSubject);
    }
    Ok(subjects
        .into_iter()
        .map(|s| {
            let (test, train): (Vec<usize>, Vec<usize>) = (0..m.n_rows()).partition(|&i| m.subjects[i] == s);
            Fold { name: s.clone(), subject: s, train, test }
        })
        .collect())
}

/// Two folds per subject: first halves against second halves and back.
/// Windows straddling a condition's temporal midpoint are left out; their
/// count is returned alongside.
pub fn intra_folds(m: &WindowFeatureMatrix) -> Result<(Vec<Fold>, usize)> {
    let mut folds = Vec::new();
    let mut dropped = 0;
    for s in m.subject_ids() {
        let rows: Vec<usize> = (0..m.n_rows()).filter(|&i| m.subjects[i] == s).collect();
        let mut conditions: Vec<_> = rows.iter().map(|&i| &m.labels[i]).collect();
        conditions.sort();
        conditions.dedup();
        let (mut first, mut second) = (Vec::new(), Vec::new());
        for c in conditions {
            let cr: Vec<usize> = rows.iter().copied().filter(|&i| &m.labels[i] == c).collect();
            let start = cr.iter().map(|&i| m.window_times[i].0).fold(f64::INFINITY, f64::min);
            let end = cr.iter().map(|&i| m.window_times[i].1).fold(f64::NEG_INFINITY, f64::max);
            let mid = 0.5 * (start + end);
            let (mut a, mut b) = (0, 0);
            for &i in &cr {
                let (ws, we) = m.window_times[i];
                if we <= mid {
                    first.push(i);
                    a += 1;
                } else if ws >= mid {
                    second.push(i);
                    b += 1;
                } else {
                    dropped += 1;
                }
            }
            if a == 0 || b == 0 {
                return Err(Error::ConditionTooShort { subject: s.clone(), condition: c.to_string() });
            }
        }
        first.sort_unstable();
        second.sort_unstable();
        folds.push(Fold { name: format!("{s}/first"), subject: s.clone(), train: first.clone(), test: second.clone() });
        folds.push(Fold { name: format!("{s}/second"), subject: s, train: second, test: first });
    }
    if folds.is_empty() {
        return Err(Error::invalid("feature matrix has no rows"));
    }
    Ok((folds, dropped))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub name: String,
    pub subject: String,
    pub accuracy: f64,
    pub n_train: usize,
    pub n_test: usize,
    pub kept_columns: usize,
    pub converged: bool,
    pub confusion: ConfusionMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectScore {
    pub subject: String,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub mode: CvMode,
    pub classifier: ClassifierKind,
    pub folds: Vec<FoldReport>,
    /// Per-subject accuracy: the fold accuracy under LOSO, the mean of the
    /// two half-swapped folds under intra-subject validation.
    pub subjects: Vec<SubjectScore>,
    /// Mean of the per-subject accuracies.
    pub mean_accuracy: f64,
    /// Trace over total of the summed confusion matrix.
    pub pooled_accuracy: f64,
    pub macro_f1: f64,
    pub confusion: ConfusionMatrix,
    pub dropped_windows: usize,
    pub warnings: Vec<String>,
}

pub fn cross_validate(m: &WindowFeatureMatrix, mode: CvMode, classifier: ClassifierKind) -> Result<CvReport> {
    match mode {
        CvMode::Loso => cross_validate_loso(m, classifier),
        CvMode::Intra => cross_validate_intra(m, classifier),
    }
}

pub fn cross_validate_loso(m: &WindowFeatureMatrix, classifier: ClassifierKind) -> Result<CvReport> {
    check_structure(m)?;
    let folds = loso_folds(m)?;
    run_folds(m, &folds, CvMode::Loso, classifier, 0)
}

pub fn cross_validate_intra(m: &WindowFeatureMatrix, classifier: ClassifierKind) -> Result<CvReport> {
    check_structure(m)?;
    let (folds, dropped) = intra_folds(m)?;
    run_folds(m, &folds, CvMode::Intra, classifier, dropped)
}

fn check_structure(m: &WindowFeatureMatrix) -> Result<()> {
    let n = m.n_rows();
    if m.values.len() != n * m.n_cols() || m.subjects.len() != n || m.window_times.len() != n {
        return Err(Error::invalid("feature matrix fields have inconsistent lengths"));
    }
    if m.classes().len() < 2 {
        return Err(Error::InvalidLabels(format!(
            "need at least two conditions, found {:?}",
            m.classes().iter().map(|c| c.as_str()).collect::<Vec<_>>()
        )));
    }
    Ok(())
}

/// Fit and score each fold independently, then merge in fold order.
pub fn run_folds(
    m: &WindowFeatureMatrix,
    folds: &[Fold],
    mode: CvMode,
    classifier: ClassifierKind,
    dropped_windows: usize,
) -> Result<CvReport> {
    let classes = m.classes();
    let labels: Vec<String> = classes.iter().map(|c| c.to_string()).collect();
    let y = m.class_indices(&classes);
    let k = classes.len();
    let reports = par::try_map(folds, |fold| -> Result<FoldReport> {
        let train = Samples::gather(m, &fold.train, None);
        let ytrain: Vec<usize> = fold.train.iter().map(|&i| y[i]).collect();
        let fitted = fit_fold(&train, &ytrain, k, classifier).context(|| format!("fold {}", fold.name))?;
        let test = Samples::gather(m, &fold.test, None);
        let truth: Vec<usize> = fold.test.iter().map(|&i| y[i]).collect();
        let pred = fitted.predict(&test);
        let confusion = ConfusionMatrix::from_predictions(labels.clone(), &truth, &pred);
        Ok(FoldReport {
            name: fold.name.clone(),
            subject: fold.subject.clone(),
            accuracy: confusion.accuracy(),
            n_train: fold.train.len(),
            n_test: fold.test.len(),
            kept_columns: fitted.mask.keep.len(),
            converged: fitted.model.converged(),
            confusion,
        })
    })?;

    let mut confusion = ConfusionMatrix::new(labels);
    let mut subjects: Vec<SubjectScore> = Vec::new();
    let mut per_subject: Vec<Vec<f64>> = Vec::new();
    let mut warnings = Vec::new();
    for r in &reports {
        confusion.merge(&r.confusion);
        if !r.converged {
            warnings.push(format!("fold {}: SVC did not converge within {SVC_MAX_EPOCHS} epochs", r.name));
        }
        match subjects.iter().position(|s| s.subject == r.subject) {
            Some(j) => per_subject[j].push(r.accuracy),
            None => {
                subjects.push(SubjectScore { subject: r.subject.clone(), accuracy: 0.0 });
                per_subject.push(vec![r.accuracy]);
            }
        }
    }
    for (s, accs) in subjects.iter_mut().zip(&per_subject) {
        s.accuracy = accs.iter().sum::<f64>() / accs.len() as f64;
    }
    let mean_accuracy = subjects.iter().map(|s| s.accuracy).sum::<f64>() / subjects.len().max(1) as f64;
    Ok(CvReport {
        mode,
        classifier,
        folds: reports,
        subjects,
        mean_accuracy,
        pooled_accuracy: confusion.accuracy(),
        macro_f1: confusion.macro_f1(),
        confusion,
        dropped_windows,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Condition;

    /// Two subjects, each with `per` windows per condition spanning 10 s
    /// with a 2 s shift; stress rows are offset by `gap` in every column.
    fn corpus(per: usize, gap: f64) -> WindowFeatureMatrix {
        let mut m = WindowFeatureMatrix::empty(vec!["a".into(), "b".into()]);
        for s in ["S1", "S2"] {
            for (c, off) in [(Condition::baseline(), 0.0), (Condition::stress(), gap)] {
                for i in 0..per {
                    let t = 2.0 * i as f64;
                    let v = [off + (i as f64 * 0.37).sin(), off + (i as f64 * 0.71).cos()];
                    m.push_row(&v, c.clone(), s, (t, t + 10.0)).unwrap();
                }
            }
        }
        m
    }

    #[test]
    fn separable_loso_is_perfect() {
        for classifier in [ClassifierKind::default(), ClassifierKind::Lda] {
            let r = cross_validate_loso(&corpus(8, 10.0), classifier).unwrap();
            assert_eq!(r.folds.len(), 2);
            assert_eq!(r.mean_accuracy, 1.0);
            assert_eq!(r.confusion.row_sums(), vec![16, 16]);
        }
    }

    #[test]
    fn intra_drops_straddling_windows() {
        // Windows [2i, 2i+10] for i < 8 cover [0, 24]; midpoint 12, so
        // windows starting at 4, 6, 8, 10 straddle it.
        let (folds, dropped) = intra_folds(&corpus(8, 10.0)).unwrap();
        assert_eq!(dropped, 2 * 2 * 4);
        assert_eq!(folds.len(), 4);
        let r = cross_validate_intra(&corpus(8, 10.0), ClassifierKind::Lda).unwrap();
        assert_eq!(r.mean_accuracy, 1.0);
        assert_eq!(r.subjects.len(), 2);
    }

    #[test]
    fn short_condition_is_rejected() {
        assert!(matches!(intra_folds(&corpus(2, 1.0)), Err(Error::ConditionTooShort { .. })));
    }

    #[test]
    fn single_subject_and_single_class() {
        let mut m = corpus(4, 1.0);
        let keep: Vec<usize> = (0..m.n_rows()).filter(|&i| m.subjects[i] == "S1").collect();
        let one = WindowFeatureMatrix {
            columns: m.columns.clone(),
            values: keep.iter().flat_map(|&i| m.row(i).to_vec()).collect(),
            labels: keep.iter().map(|&i| m.labels[i].clone()).collect(),
            subjects: keep.iter().map(|&i| m.subjects[i].clone()).collect(),
            window_times: keep.iter().map(|&i| m.window_times[i]).collect(),
        };
        assert!(matches!(cross_validate_loso(&one, ClassifierKind::Lda), Err(Error::SingleSubject)));
        m.labels.iter_mut().for_each(|l| *l = Condition::baseline());
        assert!(matches!(cross_validate_loso(&m, ClassifierKind::Lda), Err(Error::InvalidLabels(_))));
    }

    #[test]
    fn classifier_config_round_trips() {
        let k: ClassifierKind = serde_json::from_str(r#"{"kind":"svc"}"#).unwrap();
        assert_eq!(k, ClassifierKind::Svc { c: 0.1 });
        let k: ClassifierKind = serde_json::from_str(r#"{"kind":"lda"}"#).unwrap();
        assert_eq!(k, ClassifierKind::Lda);
    }
}
