//! The `synth`, `extract`, `evaluate` and `all` stages. Each stage reads
//! its inputs from and writes its outputs to the directories named by the
//! configuration, so stages can be run separately.

use std::fs;
use std::time::Instant;

use crate::config::ExperimentConfig;
use crate::error::{Result, ResultExt};
use crate::io::{self, FeatureSchema, Manifest, SweepRow};
use crate::learn::{cross_validate, cross_validate_loso, CvReport, WindowFeatureMatrix};
use crate::pipeline::{build_matrix, extract_records, RecordFeatures};
use crate::signal::{resample, SignalRecord};
use crate::synth::generate;

/// Generate the synthetic corpus into the corpus directory.
pub fn cmd_synth(cfg: &ExperimentConfig) -> Result<Manifest> {
    let spec = cfg.synth_spec();
    let t = Instant::now();
    let records: Vec<SignalRecord> =
        generate(&spec)?.into_iter().flat_map(|p| [p.baseline, p.stress]).collect();
    let dir = cfg.corpus_dir();
    let manifest = io::write_corpus(&dir, &records, Some(spec.seed))?;
    log::info!(
        "synth: {} subjects of {} written to {} in {:.2?}",
        manifest.subjects.len(),
        spec.signal.sensor(),
        dir.display(),
        t.elapsed()
    );
    Ok(manifest)
}

/// Result of the extraction stage.
#[derive(Debug, Clone)]
pub struct Extracted {
    pub sensors: Vec<String>,
    pub subwindows: Vec<RecordFeatures>,
    pub matrix: WindowFeatureMatrix,
}

/// Read the corpus, resample, compute subwindow and window features, and
/// write the feature CSV, its schema and the subwindow dump.
pub fn cmd_extract(cfg: &ExperimentConfig) -> Result<Extracted> {
    cfg.validate()?;
    let dir = cfg.corpus_dir();
    let (manifest, records) = io::read_corpus(&dir)?;
    let sensors = if cfg.sensors.is_empty() { manifest.sensors.clone() } else { cfg.sensors.clone() };
    let mut selected = Vec::new();
    for r in records.into_iter().filter(|r| sensors.contains(&r.sensor)) {
        selected.push(match cfg.target_fs {
            Some(fs) if fs != r.fs => {
                let ctx = format!("resampling subject {}, {}, {}", r.subject_id, r.sensor, r.condition);
                resample(&r, fs).map_err(|e| e.context(ctx))?
            }
            _ => r,
        });
    }
    log::info!("extract: {} records, sensors {:?}", selected.len(), sensors);
    let t = Instant::now();
    let subwindows = extract_records(&selected, &cfg.window, &cfg.schedule)?;
    let n_sub: usize = subwindows.iter().map(|r| r.subwindows.len()).sum();
    log::info!(
        "extract: {n_sub} subwindows in {:.2?} ({:.2?} each)",
        t.elapsed(),
        t.elapsed() / n_sub.max(1) as u32
    );
    let matrix = build_matrix(&subwindows, &sensors, &cfg.window, &cfg.schedule)?;
    fs::create_dir_all(&cfg.out).context(|| format!("creating {}", cfg.out.display()))?;
    let path = cfg.features_csv();
    io::write_feature_csv(&path, &matrix)?;
    io::write_json(&io::schema_path(&path), &io::feature_schema(&sensors, &cfg.window, &cfg.schedule))?;
    io::write_subwindow_csv(&cfg.subwindows_csv(), &subwindows, &cfg.schedule)?;
    log::info!("extract: {} windows x {} columns written to {}", matrix.n_rows(), matrix.n_cols(), path.display());
    Ok(Extracted { sensors, subwindows, matrix })
}

#[derive(Debug, Clone)]
pub struct Evaluated {
    pub report: CvReport,
    pub sweep: Vec<SweepRow>,
}

/// LOSO accuracy for each window length, reusing one set of subwindow
/// features.
pub fn window_sweep(cfg: &ExperimentConfig, schema: &FeatureSchema, features: &[RecordFeatures]) -> Result<Vec<SweepRow>> {
    let mut sensors: Vec<String> = Vec::new();
    for c in &schema.columns {
        if !sensors.contains(&c.sensor) {
            sensors.push(c.sensor.clone());
        }
    }
    cfg.sweep_windows
        .iter()
        .map(|&w| {
            let window = schema.window.with_window(w);
            let m = build_matrix(features, &sensors, &window, &schema.schedule)?;
            let r = cross_validate_loso(&m, cfg.classifier).context(|| format!("sweep window {w} s"))?;
            log::info!("sweep: window {w} s, {} windows, accuracy {:.4}", m.n_rows(), r.mean_accuracy);
            Ok(SweepRow {
                window_s: w,
                n_windows: m.n_rows(),
                mean_accuracy: r.mean_accuracy,
                pooled_accuracy: r.pooled_accuracy,
                macro_f1: r.macro_f1,
            })
        })
        .collect()
}

/// Cross-validate the feature CSV and write the report, the summary table
/// and, when configured, the window-size sweep.
pub fn cmd_evaluate(cfg: &ExperimentConfig) -> Result<Evaluated> {
    cfg.validate()?;
    let path = cfg.features_csv();
    let matrix = io::read_feature_csv(&path)?;
    let t = Instant::now();
    let report = cross_validate(&matrix, cfg.cv, cfg.classifier)?;
    log::info!(
        "evaluate: {:?} {} accuracy {:.4}, macro F1 {:.4} in {:.2?}",
        cfg.cv,
        cfg.classifier,
        report.mean_accuracy,
        report.macro_f1,
        t.elapsed()
    );
    for w in &report.warnings {
        log::warn!("{w}");
    }
    io::write_json(&cfg.report_json(), &report)?;
    fs::write(cfg.summary_txt(), io::summary_table(&report)).context(|| format!("writing {}", cfg.summary_txt().display()))?;
    let mut sweep = Vec::new();
    if !cfg.sweep_windows.is_empty() {
        let schema: FeatureSchema = io::read_json(&io::schema_path(&path))?;
        let features = io::read_subwindow_csv(&cfg.subwindows_csv(), schema.window.subwindow_shift_s)?;
        sweep = window_sweep(cfg, &schema, &features)?;
        io::write_sweep_csv(&cfg.sweep_csv(), &sweep)?;
    }
    Ok(Evaluated { report, sweep })
}

/// Synthesize (when a synth section is configured), extract and evaluate.
pub fn cmd_all(cfg: &ExperimentConfig) -> Result<Evaluated> {
    cfg.validate()?;
    if cfg.synth.is_some() || cfg.corpus.is_none() {
        cmd_synth(cfg)?;
    }
    cmd_extract(cfg)?;
    cmd_evaluate(cfg)
}
