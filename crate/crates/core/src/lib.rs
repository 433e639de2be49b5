//! Topological feature extraction for univariate physiological signals.
//!
//! Series are cut into overlapping subwindows, each subwindow is turned into
//! ten persistence diagrams (two level-set diagrams and the H0/H1 Rips
//! diagrams of four delay embeddings), each diagram into seven stable
//! features, and the 70-dimensional subwindow vectors are summarised per
//! window by their rolling mean and standard deviation. The `learn` module
//! trains LDA and linear SVM classifiers on the result under
//! leave-one-subject-out or intra-subject cross-validation.

pub mod commands;
pub mod config;
pub mod diagrams;
pub mod error;
pub mod homology;
pub mod io;
pub mod learn;
pub mod par;
pub mod pipeline;
pub mod signal;
pub mod synth;

pub use error::{Error, Result};
