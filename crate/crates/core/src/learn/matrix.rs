use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Condition;

/// Per-window features with labels, subjects and window spans. Rows of one
/// subject are contiguous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowFeatureMatrix {
    pub columns: Vec<String>,
    /// Row-major, `rows * columns.len()` values.
    pub values: Vec<f64>,
    pub labels: Vec<Condition>,
    pub subjects: Vec<String>,
    /// (start, end) seconds of each window within its condition segment.
    pub window_times: Vec<(f64, f64)>,
}

impl WindowFeatureMatrix {
    pub fn empty(columns: Vec<String>) -> Self {
        WindowFeatureMatrix {
            columns,
            values: Vec::new(),
            labels: Vec::new(),
            subjects: Vec::new(),
            window_times: Vec::new(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let p = self.n_cols();
        &self.values[i * p..(i + 1) * p]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        let p = self.n_cols();
        &mut self.values[i * p..(i + 1) * p]
    }

    pub fn push_row(&mut self, values: &[f64], label: Condition, subject: &str, span: (f64, f64)) -> Result<()> {
        if values.len() != self.n_cols() {
            return Err(Error::invalid(format!(
                "row has {} values, matrix has {} columns",
                values.len(),
                self.n_cols()
            )));
        }
        self.values.extend_from_slice(values);
        self.labels.push(label);
        self.subjects.push(subject.to_string());
        self.window_times.push(span);
        Ok(())
    }

    /// Append all rows of `other`, which must have the same columns.
    pub fn append(&mut self, other: &WindowFeatureMatrix) -> Result<()> {
        if other.columns != self.columns {
            return Err(Error::invalid("cannot append matrices with different columns"));
        }
        self.values.extend_from_slice(&other.values);
        self.labels.extend_from_slice(&other.labels);
        self.subjects.extend_from_slice(&other.subjects);
        self.window_times.extend_from_slice(&other.window_times);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_rows();
        if self.values.len() != n * self.n_cols() || self.subjects.len() != n || self.window_times.len() != n {
            return Err(Error::invalid("feature matrix fields have inconsistent lengths"));
        }
        if let Some(k) = self.values.iter().position(|v| !v.is_finite()) {
            let p = self.n_cols().max(1);
            return Err(Error::invalid(format!(
                "non-finite value at row {}, column {}",
                k / p,
                self.columns.get(k % p).map_or("?", String::as_str)
            )));
        }
        let mut seen: Vec<&str> = Vec::new();
        for (i, s) in self.subjects.iter().enumerate() {
            if i > 0 && self.subjects[i - 1] == *s {
                continue;
            }
            if seen.contains(&s.as_str()) {
                return Err(Error::invalid(format!("rows of subject {s} are not contiguous")));
            }
            seen.push(s);
        }
        Ok(())
    }

    /// Distinct subjects in row order.
    pub fn subject_ids(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for s in &self.subjects {
            if out.last() != Some(s) && !out.contains(s) {
                out.push(s.clone());
            }
        }
        out
    }

    /// Sorted distinct labels; class index `k` is position `k` here.
    pub fn classes(&self) -> Vec<Condition> {
        let mut c = self.labels.clone();
        c.sort();
        c.dedup();
        c
    }

    pub fn class_indices(&self, classes: &[Condition]) -> Vec<usize> {
        self.labels
            .iter()
            .map(|l| classes.iter().position(|c| c == l).expect("label in class list"))
            .collect()
    }

    /// Keep only the listed columns, in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> WindowFeatureMatrix {
        let mut values = Vec::with_capacity(self.n_rows() * keep.len());
        for i in 0..self.n_rows() {
            let row = self.row(i);
            values.extend(keep.iter().map(|&j| row[j]));
        }
        WindowFeatureMatrix {
            columns: keep.iter().map(|&j| self.columns[j].clone()).collect(),
            values,
            labels: self.labels.clone(),
            subjects: self.subjects.clone(),
            window_times: self.window_times.clone(),
        }
    }
}

/// Dense row-major sample block used inside a fold.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Samples {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid("sample block has the wrong number of values"));
        }
        Ok(Samples { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("rows differ in length"));
        }
        Samples::new(rows.len(), cols, rows.concat())
    }

    /// Gather `rows` of `m`, restricted to `cols` (all columns when `None`).
    pub fn gather(m: &WindowFeatureMatrix, rows: &[usize], cols: Option<&[usize]>) -> Self {
        let ncols = cols.map_or(m.n_cols(), <[usize]>::len);
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for &i in rows {
            let row = m.row(i);
            match cols {
                Some(c) => data.extend(c.iter().map(|&j| row[j])),
                None => data.extend_from_slice(row),
            }
        }
        Samples { rows: rows.len(), cols: ncols, data }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.rows).map(move |i| self.data[i * self.cols + j])
    }

    pub fn select_columns(&self, keep: &[usize]) -> Samples {
        let mut data = Vec::with_capacity(self.rows * keep.len());
        for i in 0..self.rows {
            let row = self.row(i);
            data.extend(keep.iter().map(|&j| row[j]));
        }
        Samples { rows: self.rows, cols: keep.len(), data }
    }
}
