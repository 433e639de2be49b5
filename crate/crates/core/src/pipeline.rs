//! Composition of the per-record stages: subwindowing, diagrams, subwindow
//! vectors and rolling window aggregation, and assembly of the window
//! feature matrix across sensors.

use serde::{Deserialize, Serialize};

use crate::diagrams::{feature_layout, subwindow_vector_unchecked, SubwindowFeatures};
use crate::error::{Error, Result, ResultExt};
use crate::homology::get_diagrams;
use crate::learn::WindowFeatureMatrix;
use crate::par;
use crate::signal::{subwindow_ranges, window_features, Condition, DelaySchedule, SignalRecord, WindowSpec};

/// Subwindow features of one record, in subwindow order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordFeatures {
    pub subject_id: String,
    pub condition: Condition,
    pub sensor: String,
    pub subwindow_shift_s: f64,
    pub subwindows: Vec<SubwindowFeatures>,
}

fn subwindow_slices<'a>(record: &'a SignalRecord, window: &WindowSpec) -> Result<Vec<&'a [f64]>> {
    let (len, shift) = window.subwindow_samples(record.fs)?;
    Ok(subwindow_ranges(record.samples.len(), len, shift)?
        .into_iter()
        .map(|r| &record.samples[r])
        .collect())
}

fn features_of(sw: &[f64], record: &SignalRecord, schedule: &DelaySchedule) -> Result<SubwindowFeatures> {
    Ok(subwindow_vector_unchecked(&get_diagrams(sw, record.fs, schedule)?))
}

fn wrap(record: &SignalRecord, window: &WindowSpec, subwindows: Vec<SubwindowFeatures>) -> RecordFeatures {
    RecordFeatures {
        subject_id: record.subject_id.clone(),
        condition: record.condition.clone(),
        sensor: record.sensor.clone(),
        subwindow_shift_s: window.subwindow_shift_s,
        subwindows,
    }
}

fn record_context(record: &SignalRecord) -> impl FnOnce() -> String + '_ {
    move || format!("subject {}, {}, {}", record.subject_id, record.sensor, record.condition)
}

/// Features of every subwindow of `record`, spread over the worker pool.
pub fn extract_record(record: &SignalRecord, window: &WindowSpec, schedule: &DelaySchedule) -> Result<RecordFeatures> {
    let slices = subwindow_slices(record, window).context(record_context(record))?;
    let subwindows = par::try_map(&slices, |sw| features_of(sw, record, schedule)).context(record_context(record))?;
    Ok(wrap(record, window, subwindows))
}

/// Single-threaded [`extract_record`].
pub fn extract_record_seq(record: &SignalRecord, window: &WindowSpec, schedule: &DelaySchedule) -> Result<RecordFeatures> {
    let slices = subwindow_slices(record, window).context(record_context(record))?;
    let subwindows = par::try_map_seq(&slices, |sw| features_of(sw, record, schedule)).context(record_context(record))?;
    Ok(wrap(record, window, subwindows))
}

/// Extract many records as one flat batch of subwindow tasks so that short
/// and long records share the pool evenly. Output follows input order.
pub fn extract_records(
    records: &[SignalRecord],
    window: &WindowSpec,
    schedule: &DelaySchedule,
) -> Result<Vec<RecordFeatures>> {
    window.validate()?;
    let mut tasks: Vec<(usize, &[f64])> = Vec::new();
    for (k, r) in records.iter().enumerate() {
        for sw in subwindow_slices(r, window).context(record_context(r))? {
            tasks.push((k, sw));
        }
    }
    let feats = par::try_map(&tasks, |&(k, sw)| features_of(sw, &records[k], schedule).context(record_context(&records[k])))?;
    let mut out: Vec<RecordFeatures> = records.iter().map(|r| wrap(r, window, Vec::new())).collect();
    for ((k, _), f) in tasks.iter().zip(feats) {
        out[*k].subwindows.push(f);
    }
    Ok(out)
}

/// Rolling mean and std of one record's subwindow features.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowRows {
    pub means: Vec<Vec<f64>>,
    pub stds: Vec<Vec<f64>>,
    /// (start, end) in seconds from the start of the record.
    pub spans: Vec<(f64, f64)>,
}

pub fn aggregate_windows(features: &RecordFeatures, window: &WindowSpec) -> Result<WindowRows> {
    let m = window.subwindows_per_window();
    let (means, stds) = window_features(&features.subwindows, m).context(|| {
        format!(
            "subject {}, {}, {}: window of {} s",
            features.subject_id, features.sensor, features.condition, window.window_s
        )
    })?;
    let spans = (0..means.len())
        .map(|i| {
            let start = i as f64 * window.window_shift_s;
            (start, start + window.window_s)
        })
        .collect();
    Ok(WindowRows { means, stds, spans })
}

/// Column names for `sensors`: per sensor, 70 means then 70 standard
/// deviations.
pub fn matrix_columns(sensors: &[String], schedule: &DelaySchedule) -> Vec<String> {
    let layout = feature_layout(schedule);
    let mut cols = Vec::with_capacity(sensors.len() * 2 * layout.len());
    for s in sensors {
        for stat in ["mean", "std"] {
            cols.extend(layout.iter().map(|slot| format!("{s}_{stat}_{}", slot.name)));
        }
    }
    cols
}

/// Assemble the window feature matrix. Rows are ordered by subject (first
/// appearance), then condition (first appearance), then window. Each
/// (subject, condition) needs features for every listed sensor; when sensors
/// yield different window counts the shortest is used.
pub fn build_matrix(
    features: &[RecordFeatures],
    sensors: &[String],
    window: &WindowSpec,
    schedule: &DelaySchedule,
) -> Result<WindowFeatureMatrix> {
    window.validate()?;
    let mut m = WindowFeatureMatrix::empty(matrix_columns(sensors, schedule));
    let mut subjects: Vec<&str> = Vec::new();
    for f in features {
        if !subjects.contains(&f.subject_id.as_str()) {
            subjects.push(&f.subject_id);
        }
    }
    for subject in subjects {
        let mut conditions: Vec<&Condition> = Vec::new();
        for f in features.iter().filter(|f| f.subject_id == subject) {
            if !conditions.contains(&&f.condition) {
                conditions.push(&f.condition);
            }
        }
        for condition in conditions {
            let mut per_sensor = Vec::with_capacity(sensors.len());
            for s in sensors {
                let f = features
                    .iter()
                    .find(|f| f.subject_id == subject && &f.condition == condition && &f.sensor == s)
                    .ok_or_else(|| Error::invalid(format!("subject {subject}, {condition}: no {s} recording")))?;
                per_sensor.push(aggregate_windows(f, window)?);
            }
            let count = per_sensor.iter().map(|w| w.spans.len()).min().unwrap_or(0);
            if per_sensor.iter().any(|w| w.spans.len() != count) {
                log::warn!("subject {subject}, {condition}: sensors disagree on window count, keeping {count}");
            }
            let mut row = Vec::with_capacity(m.n_cols());
            for i in 0..count {
                row.clear();
                for w in &per_sensor {
                    row.extend_from_slice(&w.means[i]);
                    row.extend_from_slice(&w.stds[i]);
                }
                m.push_row(&row, condition.clone(), subject, per_sensor[0].spans[i])?;
            }
        }
    }
    Ok(m)
}
