//! Loading single-channel EEG segments from plain text files.
//!
//! The Bonn corpus distributes each segment as one ASCII file holding a
//! column of integer sample values (4097 samples at 173.61 Hz). The loader
//! accepts integer or decimal tokens separated by newlines or other
//! whitespace, so minor distribution variants parse too.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Class label of a segment. `Epileptic` is the positive class everywhere
/// downstream (sensitivity = true positive rate on seizure segments).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Healthy,
    Epileptic,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Healthy => "healthy",
            Label::Epileptic => "epileptic",
        }
    }

    /// Class index used by the classifiers: healthy 0, epileptic 1.
    pub fn class_index(self) -> usize {
        match self {
            Label::Healthy => 0,
            Label::Epileptic => 1,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "healthy" => Ok(Label::Healthy),
            "epileptic" => Ok(Label::Epileptic),
            other => Err(Error::Config(format!(
                "unknown label {other:?}, expected \"healthy\" or \"epileptic\""
            ))),
        }
    }
}

/// One EEG recording: sample vector, sampling rate, identity and class.
#[derive(Debug, Clone)]
pub struct Segment {
    pub id: String,
    pub label: Label,
    /// Sampling rate in Hz.
    pub fs: f64,
    /// Samples in microvolts, finite and non-empty.
    pub samples: Vec<f64>,
}

impl Segment {
    pub fn new(id: String, label: Label, fs: f64, samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInput(format!("segment {id}: no samples")));
        }
        if !(fs > 0.0 && fs.is_finite()) {
            return Err(Error::InvalidParam(format!(
                "sampling rate must be a positive finite number, got {fs}"
            )));
        }
        if let Some(pos) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidParam(format!(
                "segment {id}: non-finite sample at index {pos}"
            )));
        }
        Ok(Segment {
            id,
            label,
            fs,
            samples,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Parse one segment file. The id is the file stem; sample order follows
/// file order. Fails with the offending line number on the first token
/// that does not parse as a number.
pub fn load_segment(path: &Path, label: Label, fs: f64) -> Result<Segment> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        for token in line.split_whitespace() {
            let value: f64 = token.parse().map_err(|_| Error::BadSample {
                path: path.to_path_buf(),
                line: lineno + 1,
                token: token.to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::BadSample {
                    path: path.to_path_buf(),
                    line: lineno + 1,
                    token: token.to_string(),
                });
            }
            samples.push(value);
        }
    }
    if samples.is_empty() {
        return Err(Error::EmptyInput(format!("{}: no samples", path.display())));
    }
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Segment::new(id, label, fs, samples)
}

/// Load every regular file in `dir` as a segment, sorted by file name so
/// the dataset order is a pure function of the directory contents.
pub fn load_dataset(dir: &Path, label: Label, fs: f64) -> Result<Vec<Segment>> {
    let entries = std::fs::read_dir(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut paths = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let path = entry.path();
        let hidden = path
            .file_name()
            .map(|n| n.to_string_lossy().starts_with('.'))
            .unwrap_or(false);
        if path.is_file() && !hidden {
            paths.push(path);
        }
    }
    if paths.is_empty() {
        return Err(Error::EmptyInput(format!(
            "{}: no segment files found",
            dir.display()
        )));
    }
    paths.sort();
    paths
        .iter()
        .map(|p| load_segment(p, label, fs))
        .collect()
}
