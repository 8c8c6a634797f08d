//! Analysis reports: one JSON document per run, plus an aligned plain-text
//! rendering with numbers at 12 significant digits.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use super::document::RawDocument;
use crate::linalg::{Matrix, Tolerance, Vector};

#[derive(Clone, Debug, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input: InputInfo,
    pub tolerance: Tolerance,
    /// Member and vector indices in `result` count from this value.
    pub index_base: usize,
    pub result: Value,
    pub document: RawDocument,
    #[serde(skip)]
    pub text: String,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut t = Text::default();
        t.field("command", &self.command);
        t.field("input", &self.input.path);
        t.field("sha256", &self.input.sha256);
        t.field(
            "tolerance",
            format!(
                "rank {} / residual {}",
                fmt_num(self.tolerance.rank_eps),
                fmt_num(self.tolerance.residual_eps)
            ),
        );
        if let Some(name) = &self.document.name {
            t.field("name", name);
        }
        t.blank();
        let mut out = t.finish();
        out.push_str(&self.text);
        if !out.ends_with('\n') {
            out.push('\n');
        }
        out
    }
}

/// Twelve significant digits, trailing zeros dropped; exponent form outside
/// `[1e-4, 1e12)`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs();
    if !(1e-4..1e12).contains(&mag) {
        let s = format!("{x:.11e}");
        let (m, e) = s.split_once('e').unwrap();
        return format!("{}e{}", trim_zeros(m), e);
    }
    let digits = 11 - mag.log10().floor() as i32;
    let s = format!("{:.*}", digits.max(0) as usize, x);
    let s = trim_zeros(&s);
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Entries below `1e-12` of the largest entry print as 0.
fn snap(x: f64, scale: f64) -> f64 {
    if x.abs() <= SNAP * scale {
        0.0
    } else {
        x
    }
}

const SNAP: f64 = 1e-12;

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, &x| a.max(x.abs()))
}

pub fn fmt_vec(v: &[f64]) -> String {
    let scale = max_abs(v);
    let parts: Vec<String> = v.iter().map(|&x| fmt_num(snap(x, scale))).collect();
    format!("({})", parts.join(", "))
}

pub fn fmt_set(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|k| k.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn one_based(s: &[usize]) -> Vec<usize> {
    s.iter().map(|k| k + 1).collect()
}

pub fn matrix_json(m: &Matrix) -> Value {
    serde_json::to_value(m.to_rows()).expect("rows serialize")
}

pub fn vectors_json(vs: &[Vector]) -> Value {
    Value::Array(
        vs.iter()
            .map(|v| serde_json::to_value(v.as_slice()).expect("vector serializes"))
            .collect(),
    )
}

/// Plain-text accumulator with aligned `key: value` lines.
#[derive(Default)]
pub struct Text {
    out: String,
}

const KEY_WIDTH: usize = 26;

impl Text {
    pub fn heading(&mut self, s: &str) {
        if !self.out.is_empty() && !self.out.ends_with("\n\n") {
            self.out.push('\n');
        }
        let _ = writeln!(self.out, "{s}");
    }

    pub fn field(&mut self, key: &str, value: impl AsRef<str>) {
        let _ = writeln!(
            self.out,
            "  {:<width$} {}",
            format!("{key}:"),
            value.as_ref(),
            width = KEY_WIDTH
        );
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.out, "  {}", s.as_ref());
    }

    pub fn blank(&mut self) {
        self.out.push('\n');
    }

    pub fn matrix(&mut self, key: &str, m: &Matrix) {
        let scale = m.max_abs();
        let cells: Vec<Vec<String>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| fmt_num(snap(m[(i, j)], scale))).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        let _ = writeln!(self.out, "  {key}:");
        for row in cells {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            let _ = writeln!(self.out, "    [ {} ]", padded.join("  "));
        }
    }

    pub fn vectors(&mut self, key: &str, labels: &[String], vs: &[Vector]) {
        let _ = writeln!(self.out, "  {key}:");
        let lw = labels.iter().map(String::len).max().unwrap_or(0);
        for (l, v) in labels.iter().zip(vs) {
            let _ = writeln!(self.out, "    {l:<lw$}  {}", fmt_vec(v.as_slice()));
        }
    }

    pub fn finish(self) -> String {
        self.out
    }
}
