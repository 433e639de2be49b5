use serde::{Deserialize, Serialize};

use super::FEATURE_NAMES;
use crate::homology::DiagramSource;
use crate::signal::DelaySchedule;

pub const FEATURES_PER_SUBWINDOW: usize = 70;

/// What one slot of a subwindow feature vector holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotDescriptor {
    pub slot: usize,
    pub diagram: usize,
    pub source: DiagramSource,
    pub homology_dim: u8,
    pub feature: String,
    pub name: String,
}

/// Slot layout matching the diagram order of `get_diagrams`.
pub fn feature_layout(schedule: &DelaySchedule) -> Vec<SlotDescriptor> {
    let mut diagrams = vec![(DiagramSource::UpperLevelSet, 0u8), (DiagramSource::LowerLevelSet, 0u8)];
    for &multiplier in &schedule.multipliers {
        let src = DiagramSource::RipsEmbedding { multiplier };
        diagrams.push((src, 0));
        diagrams.push((src, 1));
    }
    let mut out = Vec::with_capacity(diagrams.len() * FEATURE_NAMES.len());
    for (di, (source, dim)) in diagrams.into_iter().enumerate() {
        for feature in FEATURE_NAMES {
            out.push(SlotDescriptor {
                slot: out.len(),
                diagram: di,
                source,
                homology_dim: dim,
                feature: feature.to_string(),
                name: format!("{source}_h{dim}_{feature}"),
            });
        }
    }
    out
}
