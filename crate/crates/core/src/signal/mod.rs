//! Resampling, segmentation into windows and subwindows, delay embedding, and
//! rolling aggregation of subwindow features.

mod embed;
mod rate;
mod resample;
mod rolling;
mod window;

pub use embed::{delay_embedding, PointCloud};
pub use rate::SampleRate;
pub use resample::{average_channels, resample, resample_with_bound, DEFAULT_GRID_BOUND_HZ};
pub use rolling::{rolling_mean_std, window_features, RollingStats, RECOMPUTE_EVERY};
pub use window::{get_subwindows, subwindow_ranges, window_count, DelaySchedule, WindowSpec};

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Class label of a recording segment (e.g. `baseline`, `stress`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Condition(pub String);

impl Condition {
    pub fn new(label: impl Into<String>) -> Self {
        Condition(label.into())
    }

    pub fn baseline() -> Self {
        Condition::new("baseline")
    }

    pub fn stress() -> Self {
        Condition::new("stress")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One labeled univariate series for a (subject, condition, sensor) triple.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalRecord {
    pub subject_id: String,
    pub condition: Condition,
    pub sensor: String,
    pub fs: SampleRate,
    pub samples: Vec<f64>,
}

impl SignalRecord {
    pub fn new(
        subject_id: impl Into<String>,
        condition: Condition,
        sensor: impl Into<String>,
        fs: SampleRate,
        samples: Vec<f64>,
    ) -> Result<Self> {
        let record = SignalRecord {
            subject_id: subject_id.into(),
            condition,
            sensor: sensor.into(),
            fs,
            samples,
        };
        record.validate()?;
        Ok(record)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples.is_empty() {
            return Err(Error::invalid(format!(
                "record {}/{}/{} has no samples",
                self.subject_id, self.condition, self.sensor
            )));
        }
        if let Some(i) = self.samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "record {}/{}/{}: sample {i} is not finite",
                self.subject_id, self.condition, self.sensor
            )));
        }
        Ok(())
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.fs.hz()
    }
}
