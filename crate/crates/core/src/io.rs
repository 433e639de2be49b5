//! On-disk formats: the corpus CSV and manifest, the window feature CSV
//! with its column schema, subwindow feature dumps, reports and sweeps.
//!
//! Corpus files hold one (subject, sensor) each with the header
//! `t_seconds,value,condition`. Several value columns (for example
//! `value_x,value_y,value_z`) are averaged sample-wise into one series.
//! Each condition must occupy one contiguous run of rows.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::diagrams::{feature_layout, SlotDescriptor, SubwindowFeatures};
use crate::error::{Error, Result, ResultExt};
use crate::learn::{CvReport, WindowFeatureMatrix};
use crate::pipeline::RecordFeatures;
use crate::signal::{average_channels, Condition, DelaySchedule, SampleRate, SignalRecord, WindowSpec};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Sampling rate shared by all sensors, or given per sensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CorpusRate {
    Single(SampleRate),
    PerSensor(BTreeMap<String, SampleRate>),
}

impl CorpusRate {
    pub fn for_sensor(&self, sensor: &str) -> Result<SampleRate> {
        match self {
            CorpusRate::Single(fs) => Ok(*fs),
            CorpusRate::PerSensor(map) => map
                .get(sensor)
                .copied()
                .ok_or_else(|| Error::invalid(format!("manifest has no sampling rate for sensor {sensor}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub fs: CorpusRate,
    pub subjects: Vec<String>,
    pub sensors: Vec<String>,
    pub conditions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn corpus_file(dir: &Path, subject: &str, sensor: &str) -> PathBuf {
    dir.join(format!("{subject}_{sensor}.csv"))
}

fn push_unique(v: &mut Vec<String>, s: &str) {
    if !v.iter().any(|x| x == s) {
        v.push(s.to_string());
    }
}

/// Write one CSV per (subject, sensor) plus the manifest. Records of a
/// subject and sensor are concatenated in input order on a continuous time
/// axis.
pub fn write_corpus(dir: &Path, records: &[SignalRecord], seed: Option<u64>) -> Result<Manifest> {
    fs::create_dir_all(dir).context(|| format!("creating {}", dir.display()))?;
    let (mut subjects, mut sensors, mut conditions) = (Vec::new(), Vec::new(), Vec::new());
    let mut rates: BTreeMap<String, SampleRate> = BTreeMap::new();
    for r in records {
        r.validate()?;
        push_unique(&mut subjects, &r.subject_id);
        push_unique(&mut sensors, &r.sensor);
        push_unique(&mut conditions, r.condition.as_str());
        if let Some(old) = rates.insert(r.sensor.clone(), r.fs) {
            if old != r.fs {
                return Err(Error::invalid(format!("sensor {} has more than one sampling rate", r.sensor)));
            }
        }
    }
    for subject in &subjects {
        for sensor in &sensors {
            let parts: Vec<&SignalRecord> =
                records.iter().filter(|r| &r.subject_id == subject && &r.sensor == sensor).collect();
            if parts.is_empty() {
                continue;
            }
            let path = corpus_file(dir, subject, sensor);
            let hz = parts[0].fs.hz();
            let mut w = csv::Writer::from_path(&path).context(|| format!("writing {}", path.display()))?;
            w.write_record(["t_seconds", "value", "condition"])?;
            let mut k = 0usize;
            for r in parts {
                for v in &r.samples {
                    w.write_record([format!("{}", k as f64 / hz), format!("{v}"), r.condition.to_string()])?;
                    k += 1;
                }
            }
            w.flush().context(|| format!("writing {}", path.display()))?;
        }
    }
    let distinct: Vec<SampleRate> = rates.values().copied().collect();
    let fs = if distinct.iter().all(|r| Some(r) == distinct.first()) && !distinct.is_empty() {
        CorpusRate::Single(distinct[0])
    } else {
        CorpusRate::PerSensor(rates)
    };
    let manifest = Manifest { fs, subjects, sensors, conditions, seed };
    write_json(&dir.join(MANIFEST_FILE), &manifest)?;
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    read_json(&dir.join(MANIFEST_FILE))
}

/// Read every (subject, sensor) file listed in the manifest, returning one
/// record per contiguous condition run.
pub fn read_corpus(dir: &Path) -> Result<(Manifest, Vec<SignalRecord>)> {
    let manifest = read_manifest(dir)?;
    let mut records = Vec::new();
    for subject in &manifest.subjects {
        for sensor in &manifest.sensors {
            let path = corpus_file(dir, subject, sensor);
            if !path.exists() {
                log::warn!("{} missing, skipping", path.display());
                continue;
            }
            let fs = manifest.fs.for_sensor(sensor)?;
            records.extend(read_corpus_file(&path, subject, sensor, fs)?);
        }
    }
    if records.is_empty() {
        return Err(Error::invalid(format!("no corpus files found in {}", dir.display())));
    }
    Ok((manifest, records))
}

pub fn read_corpus_file(path: &Path, subject: &str, sensor: &str, fs: SampleRate) -> Result<Vec<SignalRecord>> {
    let ctx = || format!("reading {}", path.display());
    let mut rdr = csv::Reader::from_path(path).context(ctx)?;
    let header = rdr.headers().context(ctx)?.clone();
    let cond_col = header
        .iter()
        .position(|h| h == "condition")
        .ok_or_else(|| Error::invalid("missing condition column").context(ctx()))?;
    let value_cols: Vec<usize> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| *h != "condition" && *h != "t_seconds")
        .map(|(i, _)| i)
        .collect();
    if value_cols.is_empty() {
        return Err(Error::invalid("no value column").context(ctx()));
    }
    let mut runs: Vec<(Condition, Vec<Vec<f64>>)> = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row.context(ctx)?;
        let at = || format!("{}, line {}", path.display(), line + 2);
        let label = row.get(cond_col).unwrap_or_default();
        if runs.last().map(|(c, _)| c.as_str()) != Some(label) {
            if runs.iter().any(|(c, _)| c.as_str() == label) {
                return Err(Error::invalid(format!("condition {label} is not contiguous")).context(at()));
            }
            runs.push((Condition::new(label), vec![Vec::new(); value_cols.len()]));
        }
        let channels = &mut runs.last_mut().expect("run pushed above").1;
        for (ch, &c) in channels.iter_mut().zip(&value_cols) {
            let text = row.get(c).unwrap_or_default();
            let v: f64 = text
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("cannot parse value {text:?}")).context(at()))?;
            if !v.is_finite() {
                return Err(Error::invalid(format!("non-finite value {text:?}")).context(at()));
            }
            ch.push(v);
        }
    }
    runs.into_iter()
        .map(|(condition, channels)| {
            let samples = if channels.len() == 1 {
                channels.into_iter().next().expect("one channel")
            } else {
                let refs: Vec<&[f64]> = channels.iter().map(Vec::as_slice).collect();
                average_channels(&refs)?
            };
            SignalRecord::new(subject, condition, sensor, fs, samples).context(ctx)
        })
        .collect()
}

/// Column descriptor of the window feature CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnDescriptor {
    pub index: usize,
    pub name: String,
    pub sensor: String,
    pub statistic: String,
    /// The subwindow slot this column summarises.
    pub slot: SlotDescriptor,
}

/// Sidecar describing the feature CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub key_columns: Vec<String>,
    pub window: WindowSpec,
    pub schedule: DelaySchedule,
    pub columns: Vec<ColumnDescriptor>,
}

pub const KEY_COLUMNS: [&str; 4] = ["subject", "condition", "window_start_s", "window_end_s"];

pub fn feature_schema(sensors: &[String], window: &WindowSpec, schedule: &DelaySchedule) -> FeatureSchema {
    let layout = feature_layout(schedule);
    let mut columns = Vec::new();
    for s in sensors {
        for stat in ["mean", "std"] {
            for slot in &layout {
                columns.push(ColumnDescriptor {
                    index: KEY_COLUMNS.len() + columns.len(),
                    name: format!("{s}_{stat}_{}", slot.name),
                    sensor: s.clone(),
                    statistic: stat.to_string(),
                    slot: slot.clone(),
                });
            }
        }
    }
    FeatureSchema {
        key_columns: KEY_COLUMNS.iter().map(|s| s.to_string()).collect(),
        window: *window,
        schedule: schedule.clone(),
        columns,
    }
}

pub fn schema_path(features_csv: &Path) -> PathBuf {
    features_csv.with_extension("schema.json")
}

pub fn write_feature_csv(path: &Path, m: &WindowFeatureMatrix) -> Result<()> {
    let ctx = || format!("writing {}", path.display());
    let mut w = csv::Writer::from_path(path).context(ctx)?;
    w.write_record(KEY_COLUMNS.iter().copied().chain(m.columns.iter().map(String::as_str)))?;
    let mut fields: Vec<String> = Vec::with_capacity(KEY_COLUMNS.len() + m.n_cols());
    for i in 0..m.n_rows() {
        fields.clear();
        fields.push(m.subjects[i].clone());
        fields.push(m.labels[i].to_string());
        fields.push(format!("{}", m.window_times[i].0));
        fields.push(format!("{}", m.window_times[i].1));
        fields.extend(m.row(i).iter().map(|v| format!("{v}")));
        w.write_record(&fields)?;
    }
    w.flush().context(ctx)?;
    Ok(())
}

fn parse_f64(text: &str, at: impl FnOnce() -> String) -> Result<f64> {
    text.trim()
        .parse()
        .map_err(|_| Error::invalid(format!("cannot parse number {text:?}")).context(at()))
}

pub fn read_feature_csv(path: &Path) -> Result<WindowFeatureMatrix> {
    let ctx = || format!("reading {}", path.display());
    let mut rdr = csv::Reader::from_path(path).context(ctx)?;
    let header = rdr.headers().context(ctx)?.clone();
    if header.len() < KEY_COLUMNS.len() || header.iter().zip(KEY_COLUMNS).any(|(a, b)| a != b) {
        return Err(Error::invalid(format!("header must start with {}", KEY_COLUMNS.join(","))).context(ctx()));
    }
    let mut m = WindowFeatureMatrix::empty(header.iter().skip(KEY_COLUMNS.len()).map(String::from).collect());
    let mut values = Vec::with_capacity(m.n_cols());
    for (line, row) in rdr.records().enumerate() {
        let row = row.context(ctx)?;
        let at = || format!("{}, line {}", path.display(), line + 2);
        values.clear();
        for text in row.iter().skip(KEY_COLUMNS.len()) {
            values.push(parse_f64(text, at)?);
        }
        let start = parse_f64(&row[2], at)?;
        let end = parse_f64(&row[3], at)?;
        m.push_row(&values, Condition::new(&row[1]), &row[0], (start, end)).context(at)?;
    }
    m.validate().context(ctx)?;
    Ok(m)
}

/// Subwindow feature dump: one row per subwindow of every record.
pub fn write_subwindow_csv(path: &Path, features: &[RecordFeatures], schedule: &DelaySchedule) -> Result<()> {
    let ctx = || format!("writing {}", path.display());
    let layout = feature_layout(schedule);
    let mut w = csv::Writer::from_path(path).context(ctx)?;
    let head = ["subject", "condition", "sensor", "subwindow", "start_s"];
    w.write_record(head.iter().map(|s| s.to_string()).chain(layout.iter().map(|s| s.name.clone())))?;
    for f in features {
        for (k, sw) in f.subwindows.iter().enumerate() {
            let mut fields = vec![
                f.subject_id.clone(),
                f.condition.to_string(),
                f.sensor.clone(),
                k.to_string(),
                format!("{}", k as f64 * f.subwindow_shift_s),
            ];
            fields.extend(sw.values().iter().map(|v| format!("{v}")));
            w.write_record(&fields)?;
        }
    }
    w.flush().context(ctx)?;
    Ok(())
}

pub fn read_subwindow_csv(path: &Path, subwindow_shift_s: f64) -> Result<Vec<RecordFeatures>> {
    let ctx = || format!("reading {}", path.display());
    let mut rdr = csv::Reader::from_path(path).context(ctx)?;
    let mut out: Vec<RecordFeatures> = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row.context(ctx)?;
        let at = || format!("{}, line {}", path.display(), line + 2);
        let values = row.iter().skip(5).map(|t| parse_f64(t, at)).collect::<Result<Vec<f64>>>()?;
        let same = out.last().is_some_and(|f| f.subject_id == row[0] && f.condition.as_str() == &row[1] && f.sensor == row[2]);
        if !same {
            out.push(RecordFeatures {
                subject_id: row[0].to_string(),
                condition: Condition::new(&row[1]),
                sensor: row[2].to_string(),
                subwindow_shift_s,
                subwindows: Vec::new(),
            });
        }
        let rec = out.last_mut().expect("record pushed above");
        if row[3].parse::<usize>().ok() != Some(rec.subwindows.len()) {
            return Err(Error::invalid("subwindow indices are not consecutive").context(at()));
        }
        rec.subwindows.push(SubwindowFeatures(values));
    }
    Ok(out)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).context(|| format!("writing {}", path.display()))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).context(|| format!("parsing {}", path.display()))
}

/// Plain-text summary of a report.
pub fn summary_table(report: &CvReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("mode        {:?}\n", report.mode).to_lowercase());
    s.push_str(&format!("classifier  {}\n", report.classifier));
    s.push_str(&format!("accuracy    {:.4} (mean over subjects)\n", report.mean_accuracy));
    s.push_str(&format!("pooled      {:.4}\n", report.pooled_accuracy));
    s.push_str(&format!("macro F1    {:.4}\n", report.macro_f1));
    if report.dropped_windows > 0 {
        s.push_str(&format!("dropped     {} windows at split midpoints\n", report.dropped_windows));
    }
    s.push_str("\nsubject     accuracy\n");
    for sc in &report.subjects {
        s.push_str(&format!("{:<11} {:.4}\n", sc.subject, sc.accuracy));
    }
    s.push_str("\nconfusion (rows true, columns predicted)\n");
    let width = report.confusion.labels.iter().map(String::len).max().unwrap_or(0).max(6);
    s.push_str(&format!("{:width$}", ""));
    for l in &report.confusion.labels {
        s.push_str(&format!(" {l:>width$}"));
    }
    s.push('\n');
    for (l, row) in report.confusion.labels.iter().zip(&report.confusion.counts) {
        s.push_str(&format!("{l:width$}"));
        for c in row {
            s.push_str(&format!(" {c:>width$}"));
        }
        s.push('\n');
    }
    for w in &report.warnings {
        s.push_str(&format!("warning: {w}\n"));
    }
    s
}

/// One row of an accuracy-versus-window-size sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub window_s: f64,
    pub n_windows: usize,
    pub mean_accuracy: f64,
    pub pooled_accuracy: f64,
    pub macro_f1: f64,
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).context(|| format!("writing {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let mut rdr = csv::Reader::from_path(path).context(|| format!("reading {}", path.display()))?;
    Ok(rdr.deserialize().collect::<std::result::Result<_, _>>()?)
}
