//! Persistence diagrams of subwindows: Rips persistence of delay embeddings
//! and level-set persistence of the raw series.

mod diagram;
mod distance;
mod levelset;
mod rips;
mod union_find;

pub use diagram::{DiagramSource, PersistenceDiagram, PersistenceInterval};
pub use distance::DistanceMatrix;
pub use levelset::{level_set_persistence, LevelSet};
pub use rips::{rips_persistence, rips_persistence_from_distances, RipsBarcode};
pub use union_find::UnionFind;

use crate::error::Result;
use crate::signal::{delay_embedding, DelaySchedule, SampleRate};

/// Diagrams per subwindow with the default four-level schedule.
pub const DIAGRAMS_PER_SUBWINDOW: usize = 10;

/// All diagrams of one subwindow, in a fixed order: upper level set, lower
/// level set, then (H0, H1) of the Rips filtration of the delay embedding for
/// each multiplier in `schedule`.
pub fn get_diagrams(sw: &[f64], fs: SampleRate, schedule: &DelaySchedule) -> Result<Vec<PersistenceDiagram>> {
    let dims = schedule.dimensions(fs)?;
    let mut out = Vec::with_capacity(2 + 2 * dims.len());
    out.push(level_set_persistence(sw, LevelSet::Upper)?);
    out.push(level_set_persistence(sw, LevelSet::Lower)?);
    for (&multiplier, &d) in schedule.multipliers.iter().zip(&dims) {
        let cloud = delay_embedding(sw, d, schedule.point_shift)?;
        let [h0, h1] = rips_persistence(&cloud)?.into_diagrams(DiagramSource::RipsEmbedding { multiplier });
        out.push(h0);
        out.push(h1);
    }
    Ok(out)
}
