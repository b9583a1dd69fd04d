//! JSON and CSV serialization of run results.
//!
//! Every floating-point value is written with 17 significant digits so that
//! it parses back to the identical double.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::explorer::{RegionPoint, ScanEntry};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `x` with 17 significant digits; non-finite values become `null`.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn raw_number(x: f64) -> Box<RawValue> {
    RawValue::from_string(format_number(x)).expect("formatted float is valid JSON")
}

#[derive(Serialize)]
struct RelationRow {
    id: String,
    n: usize,
    worst_slack: Box<RawValue>,
    violations: usize,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    tool_version: &'a str,
    seed: u64,
    command: &'a str,
    config: &'a BTreeMap<String, String>,
    relations: Vec<RelationRow>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    values: BTreeMap<&'a str, Box<RawValue>>,
    wall_ms: u64,
}

/// Everything a report file carries besides the per-sample data.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunSummary {
    pub seed: u64,
    pub command: String,
    /// Effective options of the run, so the output can be regenerated.
    pub config: BTreeMap<String, String>,
    pub relations: Vec<ScanEntry>,
    /// Named scalar results (minima, converted values, errors).
    pub values: BTreeMap<String, f64>,
    pub wall_ms: u64,
}

impl RunSummary {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            seed,
            command: command.to_string(),
            ..Self::default()
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let report = JsonReport {
            tool_version: TOOL_VERSION,
            seed: self.seed,
            command: &self.command,
            config: &self.config,
            relations: self
                .relations
                .iter()
                .map(|e| RelationRow {
                    id: e.id.clone(),
                    n: e.n,
                    worst_slack: raw_number(e.worst_slack),
                    violations: e.violations,
                })
                .collect(),
            values: self.values.iter().map(|(k, v)| (k.as_str(), raw_number(*v))).collect(),
            wall_ms: self.wall_ms,
        };
        serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))
    }

    /// `id,n,worst_slack,violations` rows, or `name,value` rows when there
    /// are no relation entries.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let res = if self.relations.is_empty() {
            w.write_record(["name", "value"]).and_then(|_| {
                self.values
                    .iter()
                    .try_for_each(|(k, v)| w.write_record([k.clone(), format_number(*v)]))
            })
        } else {
            w.write_record(["id", "n", "worst_slack", "violations"]).and_then(|_| {
                self.relations.iter().try_for_each(|e| {
                    w.write_record([
                        e.id.clone(),
                        e.n.to_string(),
                        format_number(e.worst_slack),
                        e.violations.to_string(),
                    ])
                })
            })
        };
        res.map_err(csv_error)?;
        w.flush()?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Region samples as CSV with columns `h_a,h_b,purity`.
pub fn write_region_csv(points: &[RegionPoint], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["h_a", "h_b", "purity"]).map_err(csv_error)?;
    for p in points {
        w.write_record([format_number(p.h_a), format_number(p.h_b), format_number(p.purity)])
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, std::f64::consts::PI * 1e-300, -2.5e17, 0.0, f64::MIN_POSITIVE] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_number(f64::NAN), "null");
        assert_eq!(format_number(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn empty_report_is_valid_json() {
        let s = RunSummary::new("check", 3).to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["relations"], serde_json::json!([]));
        assert_eq!(v["seed"], 3);
        assert_eq!(v["tool_version"], TOOL_VERSION);
        assert!(v.get("wall_ms").is_some());
    }

    #[test]
    fn relation_rows_serialize() {
        let mut r = RunSummary::new("check", 1);
        r.relations.push(ScanEntry {
            id: "robertson".into(),
            n: 10,
            worst_slack: 0.125,
            violations: 0,
        });
        let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(v["relations"][0]["worst_slack"].as_f64(), Some(0.125));
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("id,n,worst_slack,violations"));
    }

    #[test]
    fn region_csv_header() {
        let mut buf = Vec::new();
        write_region_csv(&[RegionPoint { h_a: 0.1, h_b: 0.2, purity: 1.0 }], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "h_a,h_b,purity");
        assert_eq!(lines.len(), 2);
    }
}
