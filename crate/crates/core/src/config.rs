//! Experiment configuration, read from JSON.
//!
//! ```json
//! {
//!   "window": {"window_s": 60, "window_shift_s": 2, "subwindow_s": 4, "subwindow_shift_s": 2},
//!   "schedule": {"multipliers": [0.5, 1, 1.5, 2], "point_shift": 1},
//!   "sensors": ["resp"],
//!   "target_fs": 50,
//!   "classifier": {"kind": "svc", "c": 0.1},
//!   "cv": "loso",
//!   "synth": {"n_subjects": 20, "duration_s": 120, "fs": 50, "noise": 0.1,
//!             "signal": {"kind": "resp", "baseline_rpm": 15, "stress_rpm": 18}},
//!   "corpus": "path/to/corpus",
//!   "sweep_windows": [10, 20, 30, 60, 120],
//!   "out": "out",
//!   "seed": 0,
//!   "workers": 4
//! }
//! ```
//!
//! Every field is optional. Unknown fields are rejected. The top-level
//! `seed` drives the generator and replaces any `synth.seed`.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::learn::{ClassifierKind, CvMode};
use crate::signal::{DelaySchedule, SampleRate, WindowSpec};
use crate::synth::SynthSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub window: WindowSpec,
    pub schedule: DelaySchedule,
    /// Sensors to use, in column order; all manifest sensors when empty.
    pub sensors: Vec<String>,
    /// Resample every record to this rate before extraction.
    pub target_fs: Option<SampleRate>,
    pub classifier: ClassifierKind,
    pub cv: CvMode,
    pub synth: Option<SynthSpec>,
    /// Corpus directory to ingest; `<out>/corpus` when absent.
    pub corpus: Option<PathBuf>,
    /// Window lengths for the accuracy-versus-window-size sweep.
    pub sweep_windows: Vec<f64>,
    pub out: PathBuf,
    pub seed: u64,
    pub workers: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            window: WindowSpec::default(),
            schedule: DelaySchedule::default(),
            sensors: Vec::new(),
            target_fs: None,
            classifier: ClassifierKind::default(),
            cv: CvMode::default(),
            synth: None,
            corpus: None,
            sweep_windows: Vec::new(),
            out: PathBuf::from("out"),
            seed: 0,
            workers: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)
            .map_err(|e| Error::invalid(format!("config line {}, column {}: {e}", e.line(), e.column())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).context(format!("reading {}", path.display())))?;
        Self::from_json(&text).map_err(|e| e.context(path.display().to_string()))
    }

    /// Check every field against the invariants of the stage that uses it.
    pub fn validate(&self) -> Result<()> {
        fn field(name: &'static str) -> impl Fn(Error) -> Error {
            move |e| Error::invalid(format!("{name}: {e}"))
        }
        self.window.validate().map_err(field("window"))?;
        let dims_at = |fs: SampleRate| -> Result<()> {
            let dims = self.schedule.dimensions(fs).map_err(field("schedule"))?;
            let (len, _) = self.window.subwindow_samples(fs).map_err(field("window"))?;
            if let Some(&d) = dims.iter().find(|&&d| d > len) {
                return Err(Error::invalid(format!(
                    "schedule: embedding dimension {d} exceeds the {len}-sample subwindow at {fs} Hz"
                )));
            }
            Ok(())
        };
        if let Some(fs) = self.target_fs {
            dims_at(fs)?;
        }
        if let Some(s) = &self.synth {
            s.validate().map_err(field("synth"))?;
            if self.target_fs.is_none() {
                dims_at(SampleRate::hz_int(s.fs))?;
            }
        }
        if let ClassifierKind::Svc { c } = self.classifier {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::invalid(format!("classifier.c must be positive, got {c}")));
            }
        }
        for &w in &self.sweep_windows {
            self.window
                .with_window(w)
                .validate()
                .map_err(|e| Error::invalid(format!("sweep_windows: {w} s: {e}")))?;
        }
        if self.workers == Some(0) {
            return Err(Error::invalid("workers must be at least 1"));
        }
        Ok(())
    }

    /// The synth spec with the top-level seed applied.
    pub fn synth_spec(&self) -> SynthSpec {
        let mut s = self.synth.clone().unwrap_or_default();
        s.seed = self.seed;
        s
    }

    pub fn corpus_dir(&self) -> PathBuf {
        self.corpus.clone().unwrap_or_else(|| self.out.join("corpus"))
    }

    pub fn features_csv(&self) -> PathBuf {
        self.out.join("features.csv")
    }

    pub fn subwindows_csv(&self) -> PathBuf {
        self.out.join("subwindows.csv")
    }

    pub fn report_json(&self) -> PathBuf {
        self.out.join("report.json")
    }

    pub fn summary_txt(&self) -> PathBuf {
        self.out.join("summary.txt")
    }

    pub fn sweep_csv(&self) -> PathBuf {
        self.out.join("sweep.csv")
    }
}
