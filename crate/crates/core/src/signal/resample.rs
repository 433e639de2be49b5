use super::{SampleRate, SignalRecord};
use crate::error::{Error, Result};

/// Upper bound on the common interpolation grid rate.
pub const DEFAULT_GRID_BOUND_HZ: u64 = 100_000;

/// Resample `record` to `target` using [`DEFAULT_GRID_BOUND_HZ`].
pub fn resample(record: &SignalRecord, target: SampleRate) -> Result<SignalRecord> {
    resample_with_bound(record, target, DEFAULT_GRID_BOUND_HZ)
}

/// Integer decimation when `fs = k * target`; otherwise linear interpolation
/// onto the lcm grid of the two rates followed by integer decimation. No
/// anti-aliasing filter is applied.
pub fn resample_with_bound(
    record: &SignalRecord,
    target: SampleRate,
    grid_bound_hz: u64,
) -> Result<SignalRecord> {
    let samples = if record.fs == target {
        record.samples.clone()
    } else if let Some(k) = record.fs.integer_ratio(&target) {
        record.samples.iter().step_by(k as usize).copied().collect()
    } else {
        let err = || Error::NonCommensurateRates {
            from: record.fs.hz(),
            to: target.hz(),
            bound: grid_bound_hz,
        };
        let grid = record.fs.lcm(&target).ok_or_else(err)?;
        if grid.denom() != 1 || grid.numer() > grid_bound_hz {
            return Err(err());
        }
        let up = grid.integer_ratio(&record.fs).ok_or_else(err)?;
        let down = grid.integer_ratio(&target).ok_or_else(err)?;
        interpolate_decimate(&record.samples, up, down)
    };
    Ok(SignalRecord {
        subject_id: record.subject_id.clone(),
        condition: record.condition.clone(),
        sensor: record.sensor.clone(),
        fs: target,
        samples,
    })
}

// Output sample k sits at grid index k*down, i.e. source position k*down/up.
// Only grid points inside the source span are produced.
fn interpolate_decimate(x: &[f64], up: u64, down: u64) -> Vec<f64> {
    let last_grid = (x.len() as u64 - 1) * up;
    let count = last_grid / down + 1;
    (0..count)
        .map(|k| {
            let g = k * down;
            let i = (g / up) as usize;
            let rem = g % up;
            if rem == 0 {
                x[i]
            } else {
                let t = rem as f64 / up as f64;
                x[i] + (x[i + 1] - x[i]) * t
            }
        })
        .collect()
}

/// Sample-wise mean of equally long channels (e.g. accelerometer axes).
pub fn average_channels(channels: &[&[f64]]) -> Result<Vec<f64>> {
    let first = channels
        .first()
        .ok_or_else(|| Error::invalid("no channels to average"))?;
    if channels.iter().any(|c| c.len() != first.len()) {
        return Err(Error::invalid("channels differ in length"));
    }
    let n = channels.len() as f64;
    Ok((0..first.len())
        .map(|i| channels.iter().map(|c| c[i]).sum::<f64>() / n)
        .collect())
}
