//! Feature matrix container and its CSV/JSON persistence.
//!
//! Rows are segments, columns are feature values, the label rides along as
//! the final CSV column. A metadata block (leading `# key = value` lines in
//! CSV, a `metadata` object in JSON) records every effective parameter so a
//! matrix file is self-describing and reproducible.
//!
//! Numbers are written with Rust's shortest-round-trip formatting, so
//! load → write → load is the identity on values.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal_io::Label;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub columns: Vec<String>,
    pub ids: Vec<String>,
    pub labels: Vec<Label>,
    /// Row-major values; every row has `columns.len()` entries.
    pub rows: Vec<Vec<f64>>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct JsonRecord {
    id: String,
    label: Label,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct JsonDoc {
    metadata: BTreeMap<String, String>,
    columns: Vec<String>,
    records: Vec<JsonRecord>,
}

impl FeatureMatrix {
    pub fn new(columns: Vec<String>) -> Self {
        FeatureMatrix {
            columns,
            ids: Vec::new(),
            labels: Vec::new(),
            rows: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn push_row(&mut self, id: String, label: Label, values: Vec<f64>) -> Result<()> {
        if values.len() != self.columns.len() {
            return Err(Error::Matrix(format!(
                "row {id} has {} values, expected {}",
                values.len(),
                self.columns.len()
            )));
        }
        self.ids.push(id);
        self.labels.push(label);
        self.rows.push(values);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of one column split by class: (healthy, epileptic).
    pub fn column_by_class(&self, col: usize) -> (Vec<f64>, Vec<f64>) {
        let mut healthy = Vec::new();
        let mut epileptic = Vec::new();
        for (row, label) in self.rows.iter().zip(&self.labels) {
            match label {
                Label::Healthy => healthy.push(row[col]),
                Label::Epileptic => epileptic.push(row[col]),
            }
        }
        (healthy, epileptic)
    }

    /// Sub-matrix of the named columns, same row order.
    pub fn select(&self, cols: &[usize]) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|row| cols.iter().map(|&c| row[c]).collect())
            .collect()
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out.push_str("id,");
        out.push_str(&self.columns.join(","));
        out.push_str(",label\n");
        for i in 0..self.rows.len() {
            out.push_str(&self.ids[i]);
            for v in &self.rows[i] {
                out.push(',');
                out.push_str(&format_value(*v));
            }
            out.push(',');
            out.push_str(self.labels[i].as_str());
            out.push('\n');
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut metadata = BTreeMap::new();
        let mut lines = text.lines().peekable();
        while let Some(line) = lines.peek() {
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('=') {
                    metadata.insert(k.trim().to_string(), v.trim().to_string());
                }
                lines.next();
            } else {
                break;
            }
        }
        let header = lines
            .next()
            .ok_or_else(|| Error::Matrix("missing CSV header".into()))?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 2 || cols[0] != "id" || cols[cols.len() - 1] != "label" {
            return Err(Error::Matrix(
                "CSV header must start with \"id\" and end with \"label\"".into(),
            ));
        }
        let columns: Vec<String> = cols[1..cols.len() - 1]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut matrix = FeatureMatrix::new(columns);
        matrix.metadata = metadata;
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != cols.len() {
                return Err(Error::Matrix(format!(
                    "data line {} has {} fields, expected {}",
                    lineno + 1,
                    fields.len(),
                    cols.len()
                )));
            }
            let id = fields[0].to_string();
            let label: Label = fields[fields.len() - 1].parse()?;
            let values = fields[1..fields.len() - 1]
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| Error::Matrix(format!("bad value {f:?} in row {id}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            matrix.push_row(id, label, values)?;
        }
        Ok(matrix)
    }

    pub fn to_json_string(&self) -> String {
        let doc = JsonDoc {
            metadata: self.metadata.clone(),
            columns: self.columns.clone(),
            records: (0..self.rows.len())
                .map(|i| JsonRecord {
                    id: self.ids[i].clone(),
                    label: self.labels[i],
                    values: self.rows[i].clone(),
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("feature matrix serializes");
        out.push('\n');
        out
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: JsonDoc = serde_json::from_str(text)
            .map_err(|e| Error::Matrix(format!("bad JSON feature matrix: {e}")))?;
        let mut matrix = FeatureMatrix::new(doc.columns);
        matrix.metadata = doc.metadata;
        for rec in doc.records {
            matrix.push_row(rec.id, rec.label, rec.values)?;
        }
        Ok(matrix)
    }

    /// Write as CSV or JSON depending on the file extension (`.json` means
    /// JSON, anything else CSV).
    pub fn write(&self, path: &Path) -> Result<()> {
        let text = if is_json(path) {
            self.to_json_string()
        } else {
            self.to_csv_string()
        };
        std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if is_json(path) {
            Self::from_json_str(&text)
        } else {
            Self::from_csv_str(&text)
        }
    }
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .map(|e| e.eq_ignore_ascii_case("json"))
        .unwrap_or(false)
}

/// Shortest decimal string that round-trips to the same f64.
pub fn format_value(v: f64) -> String {
    format!("{v}")
}
