//! Labeled synthetic respiration and ECG corpora. Baseline and stress
//! segments differ in respiratory rate, heart rate or heart-rate variability.

mod ecg;
mod resp;

pub use ecg::{beat_times, gen_ecg, render_beats, BEAT_TEMPLATE, HR_MAX_BPM, HR_MIN_BPM};
pub use resp::gen_resp;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::SignalRecord;

/// Heart-rate distribution of one condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeartRate {
    pub hr_bpm: f64,
    pub hr_sd_bpm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SynthSignal {
    Resp { baseline_rpm: f64, stress_rpm: f64 },
    Ecg { baseline: HeartRate, stress: HeartRate },
}

impl SynthSignal {
    pub fn sensor(&self) -> &'static str {
        match self {
            SynthSignal::Resp { .. } => "resp",
            SynthSignal::Ecg { .. } => "ecg",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthSpec {
    pub n_subjects: usize,
    pub duration_s: f64,
    pub fs: u64,
    pub signal: SynthSignal,
    /// Gaussian noise standard deviation relative to the signal's peak amplitude.
    pub noise: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            n_subjects: 20,
            duration_s: 120.0,
            fs: 50,
            signal: SynthSignal::Resp { baseline_rpm: 15.0, stress_rpm: 18.0 },
            noise: 0.1,
            seed: 0,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(format!("synth.{name} must be positive, got {v}")))
            }
        };
        if self.n_subjects == 0 {
            return Err(Error::invalid("synth.n_subjects must be at least 1"));
        }
        positive("duration_s", self.duration_s)?;
        positive("fs", self.fs as f64)?;
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            return Err(Error::invalid(format!("synth.noise must be nonnegative, got {}", self.noise)));
        }
        match self.signal {
            SynthSignal::Resp { baseline_rpm, stress_rpm } => {
                positive("signal.baseline_rpm", baseline_rpm)?;
                positive("signal.stress_rpm", stress_rpm)?;
            }
            SynthSignal::Ecg { baseline, stress } => {
                positive("signal.baseline.hr_bpm", baseline.hr_bpm)?;
                positive("signal.stress.hr_bpm", stress.hr_bpm)?;
                for (name, sd) in [("baseline", baseline.hr_sd_bpm), ("stress", stress.hr_sd_bpm)] {
                    if !(sd.is_finite() && sd >= 0.0) {
                        return Err(Error::invalid(format!("synth.signal.{name}.hr_sd_bpm must be nonnegative, got {sd}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn samples_per_condition(&self) -> usize {
        (self.duration_s * self.fs as f64).round() as usize
    }

    pub fn subject_id(index: usize) -> String {
        format!("S{:02}", index + 1)
    }

    /// Generator for subject `index`; subjects draw from disjoint seeds.
    pub fn subject_rng(&self, index: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(index as u64))
    }
}

/// Baseline and stress records of one subject.
#[derive(Debug, Clone, PartialEq)]
pub struct SubjectPair {
    pub baseline: SignalRecord,
    pub stress: SignalRecord,
}

pub fn gen_subject(spec: &SynthSpec, index: usize) -> Result<SubjectPair> {
    match spec.signal {
        SynthSignal::Resp { .. } => gen_resp(spec, index),
        SynthSignal::Ecg { .. } => gen_ecg(spec, index),
    }
}

/// All subjects of the corpus, generated in parallel.
pub fn generate(spec: &SynthSpec) -> Result<Vec<SubjectPair>> {
    spec.validate()?;
    let indices: Vec<usize> = (0..spec.n_subjects).collect();
    crate::par::try_map(&indices, |&i| gen_subject(spec, i))
}
