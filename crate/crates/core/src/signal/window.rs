use serde::{Deserialize, Serialize};
use std::ops::Range;

use super::SampleRate;
use crate::error::{Error, Result};

/// Window and subwindow geometry, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WindowSpec {
    pub window_s: f64,
    pub window_shift_s: f64,
    pub subwindow_s: f64,
    pub subwindow_shift_s: f64,
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec {
            window_s: 60.0,
            window_shift_s: 2.0,
            subwindow_s: 4.0,
            subwindow_shift_s: 2.0,
        }
    }
}

impl WindowSpec {
    pub fn with_window(self, window_s: f64) -> Self {
        WindowSpec { window_s, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("window_s", self.window_s),
            ("window_shift_s", self.window_shift_s),
            ("subwindow_s", self.subwindow_s),
            ("subwindow_shift_s", self.subwindow_shift_s),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if self.subwindow_s > self.window_s {
            return Err(Error::invalid(format!(
                "subwindow_s ({}) exceeds window_s ({})",
                self.subwindow_s, self.window_s
            )));
        }
        if self.window_shift_s != self.subwindow_shift_s {
            return Err(Error::invalid(format!(
                "rolling aggregation needs window_shift_s == subwindow_shift_s ({} != {})",
                self.window_shift_s, self.subwindow_shift_s
            )));
        }
        let span = self.window_s - self.subwindow_s;
        let steps = span / self.subwindow_shift_s;
        if (steps - steps.round()).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "window_s - subwindow_s ({span}) is not a multiple of the shift ({})",
                self.subwindow_shift_s
            )));
        }
        Ok(())
    }

    /// Subwindows aggregated into one window.
    pub fn subwindows_per_window(&self) -> usize {
        ((self.window_s - self.subwindow_s) / self.subwindow_shift_s).round() as usize + 1
    }

    /// Subwindow length and shift in samples at `fs`.
    pub fn subwindow_samples(&self, fs: SampleRate) -> Result<(usize, usize)> {
        let len = samples(fs, self.subwindow_s, "subwindow_s")?;
        let shift = samples(fs, self.subwindow_shift_s, "subwindow_shift_s")?;
        Ok((len, shift))
    }
}

fn samples(fs: SampleRate, seconds: f64, what: &str) -> Result<usize> {
    match fs.samples_in(seconds) {
        Some(n) if n > 0 => Ok(n),
        _ => Err(Error::invalid(format!(
            "{what} = {seconds} s is not a positive whole number of samples at {fs} Hz"
        ))),
    }
}

/// Embedding dimensions as multiples of the sampling rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DelaySchedule {
    pub multipliers: Vec<f64>,
    #[serde(default = "default_point_shift")]
    pub point_shift: usize,
}

fn default_point_shift() -> usize {
    1
}

impl Default for DelaySchedule {
    fn default() -> Self {
        DelaySchedule {
            multipliers: vec![0.5, 1.0, 1.5, 2.0],
            point_shift: 1,
        }
    }
}

impl DelaySchedule {
    /// Embedding dimension for each multiplier at `fs`.
    pub fn dimensions(&self, fs: SampleRate) -> Result<Vec<usize>> {
        if self.point_shift == 0 {
            return Err(Error::invalid("point_shift must be at least 1"));
        }
        self.multipliers
            .iter()
            .map(|&m| {
                let d = m * fs.hz();
                let r = d.round();
                if !(m > 0.0) || (d - r).abs() > 1e-9 * d.max(1.0) || r < 2.0 {
                    Err(Error::invalid(format!(
                        "multiplier {m} at {fs} Hz does not give an integer dimension >= 2"
                    )))
                } else {
                    Ok(r as usize)
                }
            })
            .collect()
    }
}

/// Index ranges of subwindows of `len` samples every `shift` samples.
pub fn subwindow_ranges(total: usize, len: usize, shift: usize) -> Result<Vec<Range<usize>>> {
    if len == 0 || shift == 0 {
        return Err(Error::invalid("subwindow length and shift must be positive"));
    }
    if len > total {
        return Err(Error::WindowTooLong { needed: len, available: total });
    }
    let count = (total - len) / shift + 1;
    Ok((0..count).map(|i| i * shift..i * shift + len).collect())
}

/// Sliding subwindows of `length_s` seconds every `shift_s` seconds.
pub fn get_subwindows(x: &[f64], fs: SampleRate, length_s: f64, shift_s: f64) -> Result<Vec<&[f64]>> {
    let len = samples(fs, length_s, "subwindow length")?;
    let shift = samples(fs, shift_s, "subwindow shift")?;
    Ok(subwindow_ranges(x.len(), len, shift)?
        .into_iter()
        .map(|r| &x[r])
        .collect())
}

/// Number of windows covering `duration_s` seconds of signal.
pub fn window_count(duration_s: f64, window_s: f64, shift_s: f64) -> usize {
    if window_s > duration_s + 1e-9 {
        return 0;
    }
    ((duration_s - window_s) / shift_s + 1e-9).floor() as usize + 1
}
