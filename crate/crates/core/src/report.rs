//! Verification reports with a stable, machine-readable JSON rendering.
//!
//! Reports are serialized by hand so the byte layout is deterministic:
//! fixed top-level key order, params sorted by key, floats printed with 17
//! significant digits so they round-trip exactly.

use std::collections::BTreeMap;

/// A single named parameter recorded in a report.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Float(v)
    }
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Int(v as i64)
    }
}

impl From<bool> for ParamValue {
    fn from(v: bool) -> Self {
        ParamValue::Bool(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_owned())
    }
}

/// Outcome of one verification run. `worst_margin` is the minimum slack
/// observed over every inequality the run checks; the run passes exactly
/// when `worst_margin >= -tolerance`. `truncation_budget` echoes the
/// per-application population budget the run enforced. `elapsed_seconds`
/// is wall-clock time and is the only field exempt from byte-identical
/// reproducibility.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub test: String,
    pub params: BTreeMap<String, ParamValue>,
    pub seed: u64,
    pub samples: u64,
    pub worst_margin: f64,
    pub tolerance: f64,
    pub truncation_budget: f64,
    pub passed: bool,
    pub elapsed_seconds: f64,
}

/// 17-significant-digit scientific form, valid as a JSON number.
pub fn format_float(x: f64) -> String {
    debug_assert!(x.is_finite(), "reports must not contain non-finite values");
    format!("{x:.16e}")
}

fn escape_json(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

impl ParamValue {
    fn render(&self) -> String {
        match self {
            ParamValue::Float(v) => format_float(*v),
            ParamValue::Int(v) => v.to_string(),
            ParamValue::Text(v) => format!("\"{}\"", escape_json(v)),
            ParamValue::Bool(v) => v.to_string(),
        }
    }
}

impl VerificationReport {
    /// Single-line JSON object with fixed key order.
    pub fn to_json(&self) -> String {
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("\"{}\":{}", escape_json(k), v.render()))
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "{{\"test\":\"{}\",\"params\":{{{}}},\"seed\":{},\"samples\":{},\
             \"worst_margin\":{},\"tolerance\":{},\"truncation_budget\":{},\
             \"passed\":{},\"elapsed_seconds\":{}}}",
            escape_json(&self.test),
            params,
            self.seed,
            self.samples,
            format_float(self.worst_margin),
            format_float(self.tolerance),
            format_float(self.truncation_budget),
            self.passed,
            format_float(self.elapsed_seconds),
        )
    }

    /// One-line human summary: `PASS`/`FAIL`, name, margin, tolerance.
    pub fn summary_line(&self) -> String {
        format!(
            "{} {:<18} worst_margin={:+.3e} tolerance={:.1e} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.test,
            self.worst_margin,
            self.tolerance,
            self.elapsed_seconds,
        )
    }
}

/// JSON array of reports, one object per line.
pub fn reports_to_json(reports: &[VerificationReport]) -> String {
    let body = reports.iter().map(VerificationReport::to_json).collect::<Vec<_>>().join(",\n ");
    format!("[\n {body}\n]\n")
}
