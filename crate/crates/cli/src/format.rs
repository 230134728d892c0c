//! Joint PMF files.
//!
//! Two layouts are accepted. The structured one carries labels and a
//! row-major matrix, as TOML:
//!
//! ```toml
//! x_labels = ["a", "b"]
//! y_labels = ["u", "v"]
//! p = [[0.4, 0.1], [0.1, 0.4]]
//! ```
//!
//! or the same fields as a JSON object. The bare layout is a headerless
//! matrix, one row per line, entries separated by commas, semicolons or
//! whitespace, with `#` comments; labels become `x0, x1, …` and `y0, y1, …`.

use std::path::Path;

use renyidep::JointPmf;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointPmfFile {
    pub x_labels: Vec<String>,
    pub y_labels: Vec<String>,
    pub p: Vec<Vec<f64>>,
}

impl JointPmfFile {
    pub fn from_joint(j: &JointPmf) -> Self {
        JointPmfFile {
            x_labels: j.x_labels().to_vec(),
            y_labels: j.y_labels().to_vec(),
            p: (0..j.x_len()).map(|x| j.row(x).to_vec()).collect(),
        }
    }

    pub fn into_joint(self) -> std::result::Result<JointPmf, String> {
        let cols = self.y_labels.len();
        if let Some((i, r)) = self.p.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(format!("row {i} has {} entries, expected {cols}", r.len()));
        }
        if self.p.len() != self.x_labels.len() {
            return Err(format!(
                "{} rows for {} x_labels",
                self.p.len(),
                self.x_labels.len()
            ));
        }
        let flat = self.p.into_iter().flatten().collect();
        JointPmf::new(self.x_labels, self.y_labels, flat).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Toml,
    Json,
    Bare,
}

impl Layout {
    /// Guess from the extension, falling back to the content.
    pub fn detect(path: Option<&Path>, text: &str) -> Layout {
        match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("toml") => return Layout::Toml,
            Some("json") => return Layout::Json,
            _ => {}
        }
        let t = text.trim_start();
        if t.starts_with('{') {
            Layout::Json
        } else if t.contains('=') {
            Layout::Toml
        } else {
            Layout::Bare
        }
    }
}

pub fn parse_joint(text: &str, layout: Layout) -> std::result::Result<JointPmf, String> {
    match layout {
        Layout::Toml => toml::from_str::<JointPmfFile>(text)
            .map_err(|e| e.to_string())?
            .into_joint(),
        Layout::Json => serde_json::from_str::<JointPmfFile>(text)
            .map_err(|e| e.to_string())?
            .into_joint(),
        Layout::Bare => parse_bare(text),
    }
}

fn parse_bare(text: &str) -> std::result::Result<JointPmf, String> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| format!("line {}: `{s}` is not a number", lineno + 1))
            })
            .collect::<std::result::Result<Vec<f64>, String>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err("no matrix rows found".into());
    }
    JointPmf::from_rows(&rows).map_err(|e| e.to_string())
}

pub fn load_joint(path: &Path) -> Result<JointPmf> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_joint(&text, Layout::detect(Some(path), &text)).map_err(|msg| CliError::Parse {
        path: path.display().to_string(),
        msg,
    })
}

pub fn to_toml(j: &JointPmf) -> String {
    toml::to_string(&JointPmfFile::from_joint(j)).expect("plain data serializes")
}

pub fn to_json(j: &JointPmf) -> String {
    serde_json::to_string_pretty(&JointPmfFile::from_joint(j)).expect("plain data serializes")
}
