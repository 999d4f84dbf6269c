//! CSV and JSON writers for sweep tables and verification reports.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bounds::SweepRow;
use crate::error::{Error, Result};
use crate::verify::VerifyReport;

/// Column order of the sweep CSV.
pub const SWEEP_HEADER: [&str; 13] = [
    "C",
    "m",
    "gamma",
    "delta",
    "d_g",
    "k_g",
    "m_g",
    "regime",
    "thm3_bound",
    "chaining_empirical",
    "rademacher_mc",
    "risk_rhs",
    "skipped_reason",
];

pub const VERIFY_HEADER: [&str; 8] = [
    "check",
    "anchors",
    "instances",
    "skipped",
    "violations",
    "worst_margin",
    "passed",
    "detail",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Provenance embedded in every output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    pub tool: String,
    pub command: String,
    pub seed: u64,
    pub flags: BTreeMap<String, String>,
}

impl RunMetadata {
    pub fn new(command: &str, seed: u64, flags: BTreeMap<String, String>) -> Self {
        Self {
            tool: crate::TOOL_VERSION.to_string(),
            command: command.to_string(),
            seed,
            flags,
        }
    }

    fn comment_lines(&self) -> String {
        let flags: Vec<String> = self.flags.iter().map(|(k, v)| format!("--{k}={v}")).collect();
        format!(
            "# tool: {}\n# command: {}\n# seed: {}\n# flags: {}\n",
            self.tool,
            self.command,
            self.seed,
            flags.join(" ")
        )
    }
}

/// 17 significant digits in the style of C's `%.17g`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

/// Metadata comment lines followed by a CSV table.
pub fn table_csv(meta: &RunMetadata, header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(meta.comment_lines() + &String::from_utf8(body).expect("utf-8 fields"))
}

pub fn sweep_csv(meta: &RunMetadata, rows: &[SweepRow]) -> Result<String> {
    let cells = rows
        .iter()
        .map(|r| {
            vec![
                r.c.to_string(),
                format_number(r.m),
                format_number(r.gamma),
                format_number(r.delta),
                format_number(r.d_g),
                format_number(r.k_g),
                format_number(r.m_g),
                r.regime.to_string(),
                opt(r.thm3_bound),
                opt(r.chaining_empirical),
                opt(r.rademacher_mc),
                opt(r.risk_rhs),
                r.skipped_reason.clone().unwrap_or_default(),
            ]
        })
        .collect();
    table_csv(meta, &SWEEP_HEADER, cells)
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    metadata: &'a RunMetadata,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize)]
struct Rows<'a> {
    rows: &'a [SweepRow],
}

#[derive(Serialize)]
struct Checks<'a> {
    passed: bool,
    checks: &'a [crate::verify::CheckResult],
}

fn json_text<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

/// `{"metadata": .., key: body}`.
pub fn json_document<T: Serialize>(meta: &RunMetadata, key: &str, body: &T) -> String {
    let mut map = serde_json::Map::new();
    map.insert("metadata".into(), serde_json::to_value(meta).expect("metadata serializes"));
    map.insert(key.into(), serde_json::to_value(body).expect("body serializes"));
    json_text(&serde_json::Value::Object(map))
}

pub fn sweep_json(meta: &RunMetadata, rows: &[SweepRow]) -> String {
    json_text(&Document {
        metadata: meta,
        body: Rows { rows },
    })
}

pub fn verify_csv(meta: &RunMetadata, report: &VerifyReport) -> Result<String> {
    let cells = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                c.anchors.join(";"),
                c.instances.to_string(),
                c.skipped.to_string(),
                c.violations.to_string(),
                opt(c.worst_margin),
                c.passed().to_string(),
                c.detail.clone(),
            ]
        })
        .collect();
    table_csv(meta, &VERIFY_HEADER, cells)
}

pub fn verify_json(meta: &RunMetadata, report: &VerifyReport) -> String {
    json_text(&Document {
        metadata: meta,
        body: Checks {
            passed: report.passed(),
            checks: &report.checks,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{sweep, SweepGrid};

    #[test]
    fn number_format() {
        assert_eq!(format_number(8.0), "8");
        assert_eq!(format_number(0.1), "0.10000000000000001");
        assert_eq!(format_number(1e8), "100000000");
        assert_eq!(format_number(1e30), "1e+30");
        assert_eq!(format_number(1.5e-7), "1.4999999999999999e-07");
        assert_eq!(format_number(-2.5), "-2.5");
        for x in [std::f64::consts::PI, 1.0 / 3.0, 7.71601763253892, 1e-300, 6.02e23] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn sweep_outputs() {
        let grid = SweepGrid {
            c: vec![8, 50],
            m: vec![100.0],
            gamma: vec![1.0],
            d_g: vec![1.0, 3.0],
            k_g: 1.0,
            m_g: 1.0,
            delta: 0.05,
        };
        let rows = sweep(&grid, None).unwrap();
        let meta = RunMetadata::new("sweep", 7, BTreeMap::from([("c".into(), "8,50".into())]));
        let text = sweep_csv(&meta, &rows).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# tool: margin-bounds"));
        assert_eq!(lines.nth(3).unwrap(), SWEEP_HEADER.join(","));
        assert!(text.contains("# seed: 7"));
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body.len(), 5);
        assert!(body[4].ends_with("\""), "skipped reason is quoted: {}", body[4]);
        let json: serde_json::Value = serde_json::from_str(&sweep_json(&meta, &rows)).unwrap();
        let obj = json["rows"][0].as_object().unwrap();
        let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        let mut header = SWEEP_HEADER.to_vec();
        header.sort_unstable();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, header);
        assert_eq!(json["metadata"]["seed"], 7);
    }
}
