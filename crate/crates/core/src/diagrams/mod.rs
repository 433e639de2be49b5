//! Stable vector features of persistence diagrams.

mod features;
mod layout;

pub use features::{betti_norms, get_features, landscape_envelope, landscape_norms, DiagramFeatures, FEATURE_NAMES};
pub use layout::{feature_layout, SlotDescriptor, FEATURES_PER_SUBWINDOW};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{PersistenceDiagram, DIAGRAMS_PER_SUBWINDOW};

/// Features of one subwindow: seven per diagram, in diagram order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubwindowFeatures(pub Vec<f64>);

impl SubwindowFeatures {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for SubwindowFeatures {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Concatenate [`get_features`] over the ten diagrams of a subwindow.
pub fn subwindow_vector(diagrams: &[PersistenceDiagram]) -> Result<SubwindowFeatures> {
    if diagrams.len() != DIAGRAMS_PER_SUBWINDOW {
        return Err(Error::WrongDiagramCount {
            expected: DIAGRAMS_PER_SUBWINDOW,
            got: diagrams.len(),
        });
    }
    Ok(subwindow_vector_unchecked(diagrams))
}

/// As [`subwindow_vector`] for schedules with a non-default diagram count.
pub fn subwindow_vector_unchecked(diagrams: &[PersistenceDiagram]) -> SubwindowFeatures {
    SubwindowFeatures(diagrams.iter().flat_map(|d| get_features(d).to_array()).collect())
}
