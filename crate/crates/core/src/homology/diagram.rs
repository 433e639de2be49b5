use serde::{Deserialize, Serialize};
use std::fmt;

/// One bar of a barcode. Essential bars have `death = +inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistenceInterval {
    pub birth: f64,
    pub death: f64,
    pub dim: u8,
    pub essential: bool,
}

impl PersistenceInterval {
    pub fn finite(birth: f64, death: f64, dim: u8) -> Self {
        debug_assert!(death >= birth, "death {death} before birth {birth}");
        PersistenceInterval { birth, death, dim, essential: false }
    }

    pub fn essential(birth: f64, dim: u8) -> Self {
        PersistenceInterval { birth, death: f64::INFINITY, dim, essential: true }
    }

    pub fn lifetime(&self) -> f64 {
        self.death - self.birth
    }
}

/// Which filtration produced a diagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiagramSource {
    RipsEmbedding { multiplier: f64 },
    UpperLevelSet,
    LowerLevelSet,
}

impl fmt::Display for DiagramSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramSource::RipsEmbedding { multiplier } => write!(f, "rips{multiplier}"),
            DiagramSource::UpperLevelSet => f.write_str("upper"),
            DiagramSource::LowerLevelSet => f.write_str("lower"),
        }
    }
}

/// Multiset of intervals of a single homology dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub dim: u8,
    pub source: DiagramSource,
    pub intervals: Vec<PersistenceInterval>,
}

impl PersistenceDiagram {
    pub fn new(dim: u8, source: DiagramSource) -> Self {
        PersistenceDiagram { dim, source, intervals: Vec::new() }
    }

    pub fn push(&mut self, interval: PersistenceInterval) {
        debug_assert_eq!(interval.dim, self.dim);
        self.intervals.push(interval);
    }

    pub fn finite(&self) -> impl Iterator<Item = &PersistenceInterval> {
        self.intervals.iter().filter(|i| !i.essential)
    }

    pub fn essential(&self) -> impl Iterator<Item = &PersistenceInterval> {
        self.intervals.iter().filter(|i| i.essential)
    }

    /// Finite (birth, death) pairs sorted lexicographically.
    pub fn finite_pairs(&self) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> = self.finite().map(|i| (i.birth, i.death)).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        v
    }

    pub fn has_finite(&self) -> bool {
        self.finite().next().is_some()
    }
}
