//! Instance and report files.
//!
//! Instances are plain UTF-8 text: `key = value` header lines (`n`, `m`,
//! optional `note`) followed by one whitespace-separated row of exact
//! rationals per agent. Lines starting with `#` are comments.
//!
//! ```text
//! # three agents, two resources
//! n = 3
//! m = 2
//! 1 1/10
//! 1/10 1
//! 1 1
//! ```
//!
//! Run and ratio reports are JSON with every rational written as an exact
//! `p/q` string. Agent, resource and split indices in files are one-based.

use serde::{Deserialize, Serialize};

use crate::dynamic::{Algorithm, StepSolution};
use crate::model::{normalize, Instance, ModelError, RawDemandMatrix, ShareVector};
use crate::property::saturated_resources;
use crate::rational::{exact_string, parse_rational, serde_exact, to_decimal, Rational};
use crate::ratio::{ObjectiveSet, RatioReport, StepRatio};

/// Significant digits used for decimal renderings in reports.
pub const DECIMAL_DIGITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FileError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid instance: {0}")]
    Validation(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInstance {
    pub instance: Instance,
    pub note: Option<String>,
    /// Zero-based rows whose largest entry was not 1 and were rescaled.
    pub normalized_rows: Vec<usize>,
}

impl ParsedInstance {
    pub fn was_normalized(&self) -> bool {
        !self.normalized_rows.is_empty()
    }
}

fn header_usize(value: &str, line: usize, column: usize, key: &str) -> Result<usize, ParseError> {
    value
        .parse()
        .map_err(|_| ParseError::at(line, column, format!("`{key}` must be a non-negative integer")))
}

/// Parses an instance document. Rows whose maximum differs from one are
/// normalized and listed in [`ParsedInstance::normalized_rows`].
pub fn parse_instance(text: &str) -> Result<ParsedInstance, FileError> {
    let mut n = None;
    let mut m = None;
    let mut note = None;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut last_line = 0;

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw_line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw_line.len() - raw_line.trim_start().len();
        if let Some((key, value)) = trimmed.split_once('=') {
            if !rows.is_empty() {
                return Err(ParseError::at(line, indent + 1, "header line after demand rows").into());
            }
            let key = key.trim();
            let eq = trimmed.find('=').unwrap_or(0);
            let value_col = indent + eq + 2 + (value.len() - value.trim_start().len());
            let value = value.trim();
            match key {
                "n" => n = Some(header_usize(value, line, value_col, "n")?),
                "m" => m = Some(header_usize(value, line, value_col, "m")?),
                "note" => note = Some(value.to_string()),
                other => {
                    return Err(ParseError::at(line, indent + 1, format!("unknown header key `{other}`")).into())
                }
            }
            continue;
        }
        let mut row = Vec::new();
        let mut offset = 0;
        for token in raw_line.split_whitespace() {
            let start = raw_line[offset..].find(token).map_or(offset, |p| p + offset);
            offset = start + token.len();
            let column = raw_line[..start].chars().count() + 1;
            let value = parse_rational(token).map_err(|e| ParseError::at(line, column, e.to_string()))?;
            row.push(value);
        }
        rows.push(row);
    }

    let n = n.ok_or_else(|| ParseError::at(last_line.max(1), 1, "missing header `n`"))?;
    let m = m.ok_or_else(|| ParseError::at(last_line.max(1), 1, "missing header `m`"))?;
    if n == 0 {
        return Err(ModelError::NoAgents.into());
    }
    if m == 0 {
        return Err(ModelError::NoResources.into());
    }
    if rows.len() != n {
        return Err(ModelError::LengthMismatch { n, found: rows.len() }.into());
    }
    if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
        return Err(ModelError::RaggedMatrix {
            row,
            expected: m,
            found: r.len(),
        }
        .into());
    }
    let raw = RawDemandMatrix::new(rows)?;
    let demands = normalize(&raw)?;
    let normalized_rows = raw
        .rows()
        .iter()
        .zip(&demands)
        .enumerate()
        .filter(|(_, (r, d))| r.as_slice() != d.coords())
        .map(|(i, _)| i)
        .collect();
    Ok(ParsedInstance {
        instance: Instance::new(n, demands)?,
        note,
        normalized_rows,
    })
}

pub fn write_instance(instance: &Instance, note: Option<&str>) -> String {
    let mut out = String::new();
    out.push_str(&format!("n = {}\nm = {}\n", instance.n(), instance.m()));
    if let Some(note) = note {
        let single_line = note.replace(['\n', '\r'], " ");
        out.push_str(&format!("note = {single_line}\n"));
    }
    for d in instance.demands() {
        let row: Vec<String> = d.coords().iter().map(exact_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub k: usize,
    pub tau: usize,
    #[serde(rename = "M", with = "serde_exact")]
    pub water_level: Rational,
    #[serde(with = "serde_exact::vec")]
    pub shares: Vec<Rational>,
    pub saturated_resources: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioRecord {
    pub k: usize,
    #[serde(with = "serde_exact")]
    pub online_sum: Rational,
    #[serde(with = "serde_exact::option", default, skip_serializing_if = "Option::is_none")]
    pub offline_maxsum: Option<Rational>,
    #[serde(with = "serde_exact::option", default, skip_serializing_if = "Option::is_none")]
    pub ratio1: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio1_decimal: Option<String>,
    #[serde(with = "serde_exact")]
    pub online_min: Rational,
    #[serde(with = "serde_exact::option", default, skip_serializing_if = "Option::is_none")]
    pub offline_maxmin: Option<Rational>,
    #[serde(with = "serde_exact::option", default, skip_serializing_if = "Option::is_none")]
    pub ratio2: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio2_decimal: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioReportFile {
    pub n: usize,
    pub m: usize,
    pub objective: String,
    pub per_step: Vec<RatioRecord>,
    #[serde(with = "serde_exact::option", default, skip_serializing_if = "Option::is_none")]
    pub cr1: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cr1_decimal: Option<String>,
    #[serde(with = "serde_exact::option", default, skip_serializing_if = "Option::is_none")]
    pub cr2: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cr2_decimal: Option<String>,
}

fn decimal(v: &Option<Rational>) -> Option<String> {
    v.as_ref().map(|r| to_decimal(r, DECIMAL_DIGITS))
}

impl RatioRecord {
    fn from_step(s: &StepRatio) -> Self {
        Self {
            k: s.k,
            online_sum: s.online_sum.clone(),
            offline_maxsum: s.offline_maxsum.clone(),
            ratio1: s.ratio1.clone(),
            ratio1_decimal: decimal(&s.ratio1),
            online_min: s.online_min.clone(),
            offline_maxmin: s.offline_maxmin.clone(),
            ratio2: s.ratio2.clone(),
            ratio2_decimal: decimal(&s.ratio2),
        }
    }
}

impl RatioReportFile {
    pub fn new(instance: &Instance, objectives: ObjectiveSet, report: &RatioReport) -> Self {
        let objective = match objectives {
            ObjectiveSet::Maxsum => "maxsum",
            ObjectiveSet::Maxmin => "maxmin",
            ObjectiveSet::Both => "both",
        };
        Self {
            n: instance.n(),
            m: instance.m(),
            objective: objective.to_string(),
            per_step: report.per_step.iter().map(RatioRecord::from_step).collect(),
            cr1_decimal: decimal(&report.cr1),
            cr1: report.cr1.clone(),
            cr2_decimal: decimal(&report.cr2),
            cr2: report.cr2.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReportFile {
    pub n: usize,
    pub m: usize,
    pub algorithm: String,
    pub steps: Vec<StepRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratios: Option<RatioReportFile>,
}

impl RunReportFile {
    pub fn new(instance: &Instance, algorithm: Algorithm, steps: &[StepSolution]) -> Self {
        let steps = steps
            .iter()
            .map(|s| StepRecord {
                k: s.step(),
                tau: s.split + 1,
                water_level: s.water_level.clone(),
                shares: s.shares.shares().to_vec(),
                saturated_resources: saturated_resources(instance, &s.shares)
                    .into_iter()
                    .map(|r| r + 1)
                    .collect(),
            })
            .collect();
        Self {
            n: instance.n(),
            m: instance.m(),
            algorithm: algorithm.name().to_string(),
            steps,
            ratios: None,
        }
    }

    pub fn with_ratios(mut self, ratios: RatioReportFile) -> Self {
        self.ratios = Some(ratios);
        self
    }

    /// Rebuilds the step solutions recorded in the file.
    pub fn to_steps(&self) -> Result<Vec<StepSolution>, ModelError> {
        self.steps
            .iter()
            .map(|r| {
                Ok(StepSolution {
                    shares: ShareVector::new(r.k, r.shares.clone())?,
                    water_level: r.water_level.clone(),
                    split: r.tau.saturating_sub(1),
                })
            })
            .collect()
    }

    /// The `steps` array alone, as written in the file.
    pub fn shares_section(&self) -> String {
        serde_json::to_string_pretty(&self.steps).expect("steps serialize")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn json_error(e: serde_json::Error) -> ParseError {
    ParseError::at(e.line(), e.column(), e.to_string())
}

pub fn parse_run_report(text: &str) -> Result<RunReportFile, ParseError> {
    serde_json::from_str(text).map_err(json_error)
}

pub fn parse_ratio_report(text: &str) -> Result<RatioReportFile, ParseError> {
    serde_json::from_str(text).map_err(json_error)
}
