//! Preprocessing, classifiers and cross-validation over window features.

pub mod cv;
pub mod lda;
pub mod matrix;
pub mod metrics;
pub mod preprocess;
pub mod svc;

pub use cv::{
    cross_validate, cross_validate_intra, cross_validate_loso, fit_fold, intra_folds, loso_folds, run_folds,
    ClassifierKind, CvMode, CvReport, FittedFold, Fold, FoldReport, SubjectScore, TrainedModel,
};
pub use lda::{train_lda, LdaModel, LDA_RIDGE};
pub use matrix::{Samples, WindowFeatureMatrix};
pub use metrics::ConfusionMatrix;
pub use preprocess::{prune_features, scale_features, ColumnMask, MinMaxScaler, CONSTANT_VARIANCE, MAX_CORRELATION};
pub use svc::{dual_objective, primal_objective, train_binary, train_svc, BinarySvc, SvcModel, SVC_DEFAULT_C, SVC_MAX_EPOCHS, SVC_TOLERANCE};
