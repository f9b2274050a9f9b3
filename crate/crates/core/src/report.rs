//! Convergence tables and their CSV / JSON serialization.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{Format, StudyKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Pass,
    Fail,
    /// Data row carrying no acceptance decision.
    Info,
    Error,
}

impl RowStatus {
    fn as_str(self) -> &'static str {
        match self {
            RowStatus::Pass => "pass",
            RowStatus::Fail => "fail",
            RowStatus::Info => "info",
            RowStatus::Error => "error",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "pass" => RowStatus::Pass,
            "fail" => RowStatus::Fail,
            "info" => RowStatus::Info,
            "error" => RowStatus::Error,
            _ => return Err(Error::Config(format!("bad status `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub kernel: String,
    /// `;`-separated extra parameters (`alpha=0.5`, `metric=mass_drift`, ...).
    pub params: String,
    pub h: Option<f64>,
    pub error: Option<f64>,
    /// `log₂(E(H)/E(H'))/log₂(H/H')` against the next smaller `H` of the group.
    pub ratio: Option<f64>,
    pub slope: Option<f64>,
    pub expected: Option<f64>,
    pub status: RowStatus,
    pub message: Option<String>,
}

impl ReportRow {
    pub fn new(kernel: impl Into<String>, params: impl Into<String>, h: Option<f64>) -> Self {
        Self {
            kernel: kernel.into(),
            params: params.into(),
            h,
            error: None,
            ratio: None,
            slope: None,
            expected: None,
            status: RowStatus::Info,
            message: None,
        }
    }

    pub fn failed(mut self, e: &Error) -> Self {
        self.status = RowStatus::Error;
        self.message = Some(e.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub id: String,
    pub study: StudyKind,
    pub tolerance: f64,
    pub rows: Vec<ReportRow>,
}

const HEADER: [&str; 9] = ["kernel", "params", "H", "error", "ratio", "slope", "expected", "status", "message"];

/// 12 significant digits, `.` decimal separator.
pub fn format_sig12(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        format!("{v}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_sig12).unwrap_or_default()
}

fn parse_opt(s: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| Error::Config(format!("bad number `{s}` in CSV")))
}

impl ConvergenceReport {
    pub fn new(id: impl Into<String>, study: StudyKind, tolerance: f64) -> Self {
        Self { id: id.into(), study, tolerance, rows: Vec::new() }
    }

    /// Sorts by kernel, then parameters, then `H` descending.
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            a.kernel
                .cmp(&b.kernel)
                .then_with(|| a.params.cmp(&b.params))
                .then_with(|| b.h.unwrap_or(f64::INFINITY).total_cmp(&a.h.unwrap_or(f64::INFINITY)))
        });
    }

    pub fn has_errors(&self) -> bool {
        self.rows.iter().any(|r| r.status == RowStatus::Error)
    }

    pub fn has_failures(&self) -> bool {
        self.rows.iter().any(|r| r.status == RowStatus::Fail)
    }

    /// `0` all rows pass, `2` a tolerance failure, `1` an execution error.
    pub fn exit_code(&self) -> i32 {
        if self.has_errors() {
            1
        } else if self.has_failures() {
            2
        } else {
            0
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(HEADER).expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.kernel.clone(),
                r.params.clone(),
                opt(r.h),
                opt(r.error),
                opt(r.ratio),
                opt(r.slope),
                opt(r.expected),
                r.status.as_str().to_string(),
                r.message.clone().unwrap_or_default(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("report JSON: {e}")))
    }

    pub fn emit(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => self.to_csv().into_bytes(),
            Format::Json => {
                let mut s = self.to_json();
                s.push('\n');
                s.into_bytes()
            }
        }
    }

    pub fn write(&self, format: Format, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        }
        std::fs::write(path, self.emit(format)).map_err(|e| io_error(path, e))
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

/// Parses CSV produced by [`ConvergenceReport::to_csv`] back into rows.
pub fn parse_csv(text: &str) -> Result<Vec<ReportRow>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header = rd.headers().map_err(|e| Error::Config(format!("CSV header: {e}")))?;
    if header.iter().ne(HEADER) {
        return Err(Error::Config("CSV header does not match the report layout".into()));
    }
    rd.records()
        .map(|rec| {
            let rec = rec.map_err(|e| Error::Config(format!("CSV: {e}")))?;
            let message = &rec[8];
            Ok(ReportRow {
                kernel: rec[0].to_string(),
                params: rec[1].to_string(),
                h: parse_opt(&rec[2])?,
                error: parse_opt(&rec[3])?,
                ratio: parse_opt(&rec[4])?,
                slope: parse_opt(&rec[5])?,
                expected: parse_opt(&rec[6])?,
                status: RowStatus::parse(&rec[7])?,
                message: (!message.is_empty()).then(|| message.to_string()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ConvergenceReport {
        let mut r = ConvergenceReport::new("t", StudyKind::Weakstar, 0.1);
        let mut a = ReportRow::new("eta_b", "", Some(0.125));
        a.error = Some(1.0 / 3.0);
        let mut b = ReportRow::new("eta_b", "", Some(0.25));
        b.error = Some(std::f64::consts::PI);
        b.ratio = Some(2.000000000000123);
        let c = ReportRow::new("eta_a", "x=1;y=2", Some(0.5)).failed(&Error::Config("bad, \"quoted\"".into()));
        r.rows = vec![a, b, c];
        r
    }

    #[test]
    fn header_only_and_one_row() {
        let mut r = ConvergenceReport::new("e", StudyKind::Weakstar, 0.1);
        assert_eq!(r.to_csv().lines().count(), 1);
        r.rows.push(ReportRow::new("k", "", Some(0.5)));
        assert_eq!(r.to_csv().lines().count(), 2);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn sort_and_exit_codes() {
        let mut r = sample();
        r.sort();
        assert_eq!(r.rows[0].kernel, "eta_a");
        assert_eq!(r.rows[1].h, Some(0.25));
        assert_eq!(r.exit_code(), 1);
        r.rows[0].status = RowStatus::Fail;
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn json_csv_round_trip() {
        let r = sample();
        let back = ConvergenceReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let rows = parse_csv(&back.to_csv()).unwrap();
        assert_eq!(rows.len(), r.rows.len());
        let round = |v: Option<f64>| v.map(|x| format_sig12(x).parse::<f64>().unwrap());
        for (got, want) in rows.iter().zip(&r.rows) {
            assert_eq!(got.kernel, want.kernel);
            assert_eq!(got.params, want.params);
            assert_eq!(got.h, round(want.h));
            assert_eq!(got.error, round(want.error));
            assert_eq!(got.ratio, round(want.ratio));
            assert_eq!(got.status, want.status);
            assert_eq!(got.message, want.message);
        }
        // and csv -> csv is a fixed point
        let mut again = r.clone();
        again.rows = rows;
        assert_eq!(again.to_csv(), r.to_csv());
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig12(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(format_sig12(1996.5), "1.99650000000e3");
    }
}
