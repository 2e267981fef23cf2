//! Report rendering: rows to CSV or JSON (6-decimal floats, empty cell /
//! `null` for absent optionals), a CSV parser for round-tripping, and
//! per-(algorithm, m) mean summaries.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::experiment::ReportRow;
use crate::{BenchError, Result};

/// Fixed column order of every report.
pub const CSV_HEADER: &str =
    "algorithm,m,trial,srer_db,snr_db,ip,recovered,iterations,termination";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(format!("unknown format '{s}' (expected csv or json)")),
        }
    }
}

/// Rounds to the 6 decimal places the reports are quoted at.
fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn csv_opt_f64(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

fn csv_opt_bool(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

pub fn render_csv(rows: &[ReportRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.6},{},{},{},{},{}",
            r.algorithm,
            r.m,
            r.trial,
            r.srer_db,
            csv_opt_f64(r.snr_db),
            csv_opt_f64(r.ip),
            csv_opt_bool(r.recovered),
            r.iterations,
            r.termination
        );
    }
    out
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

fn json_num(x: f64) -> String {
    if x.is_finite() {
        format!("{}", round6(x))
    } else {
        "null".into()
    }
}

fn json_opt_num(v: Option<f64>) -> String {
    v.map(json_num).unwrap_or_else(|| "null".into())
}

fn json_opt_bool(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_else(|| "null".into())
}

/// JSON array of row objects with the same field names as the CSV
/// columns; floats carry the same 6-decimal precision.
pub fn render_json(rows: &[ReportRow]) -> String {
    if rows.is_empty() {
        return "[]\n".into();
    }
    let mut out = String::with_capacity(128 * rows.len());
    out.push_str("[\n");
    for (i, r) in rows.iter().enumerate() {
        let _ = write!(
            out,
            "  {{\"algorithm\":\"{}\",\"m\":{},\"trial\":{},\"srer_db\":{},\"snr_db\":{},\
             \"ip\":{},\"recovered\":{},\"iterations\":{},\"termination\":\"{}\"}}",
            json_escape(&r.algorithm),
            r.m,
            r.trial,
            json_num(r.srer_db),
            json_opt_num(r.snr_db),
            json_opt_num(r.ip),
            json_opt_bool(r.recovered),
            r.iterations,
            json_escape(&r.termination)
        );
        out.push_str(if i + 1 < rows.len() { ",\n" } else { "\n" });
    }
    out.push_str("]\n");
    out
}

pub fn render(rows: &[ReportRow], format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => render_csv(rows),
        ReportFormat::Json => render_json(rows),
    }
}

/// Inverse of [`render_csv`], for consuming reports programmatically.
pub fn parse_csv(text: &str) -> Result<Vec<ReportRow>> {
    let bad = |line: usize, msg: String| BenchError::Config(format!("csv line {line}: {msg}"));
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        Some((_, h)) => {
            return Err(bad(1, format!("expected header '{CSV_HEADER}', got '{h}'")))
        }
        None => return Err(bad(1, "empty input".into())),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(bad(lineno, format!("expected 9 fields, got {}", f.len())));
        }
        let num = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|e| bad(lineno, format!("{what}: {e}")))
        };
        let opt_num = |s: &str, what: &str| -> Result<Option<f64>> {
            if s.is_empty() { Ok(None) } else { num(s, what).map(Some) }
        };
        rows.push(ReportRow {
            algorithm: f[0].to_string(),
            m: f[1].parse().map_err(|e| bad(lineno, format!("m: {e}")))?,
            trial: f[2].parse().map_err(|e| bad(lineno, format!("trial: {e}")))?,
            srer_db: num(f[3], "srer_db")?,
            snr_db: opt_num(f[4], "snr_db")?,
            ip: opt_num(f[5], "ip")?,
            recovered: match f[6] {
                "" => None,
                "true" => Some(true),
                "false" => Some(false),
                other => return Err(bad(lineno, format!("recovered: bad flag '{other}'"))),
            },
            iterations: f[7].parse().map_err(|e| bad(lineno, format!("iterations: {e}")))?,
            termination: f[8].to_string(),
        });
    }
    Ok(rows)
}

/// Renders and writes the report to `path`, or to stdout when no path is
/// given.
pub fn emit_report(rows: &[ReportRow], format: ReportFormat, path: Option<&Path>) -> Result<()> {
    let rendered = render(rows, format);
    match path {
        Some(p) => fs::write(p, rendered).map_err(|source| BenchError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

/// Mean metrics over one (algorithm, m) cell of the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryLine {
    pub algorithm: String,
    pub m: usize,
    pub trials: usize,
    pub mean_srer_db: f64,
    /// Present when every row in the cell carries an output SNR.
    pub mean_snr_db: Option<f64>,
    /// Mean over the rows whose reconstruction had a defined information
    /// power; absent when none did.
    pub mean_ip: Option<f64>,
    /// Fraction of recovered trials, when the experiment tracks recovery.
    pub recovery_rate: Option<f64>,
}

/// Per-(algorithm, m) means, in first-appearance order of the cells.
/// Rows arrive in ascending trial order per cell, so each mean is summed
/// in a fixed order and reruns aggregate identically.
pub fn mean_summary(rows: &[ReportRow]) -> Vec<SummaryLine> {
    let mut order: Vec<(String, usize)> = Vec::new();
    for r in rows {
        let key = (r.algorithm.clone(), r.m);
        if !order.contains(&key) {
            order.push(key);
        }
    }
    order
        .into_iter()
        .map(|(algorithm, m)| {
            let cell: Vec<&ReportRow> =
                rows.iter().filter(|r| r.algorithm == algorithm && r.m == m).collect();
            let trials = cell.len();
            let tf = trials as f64;
            let mean_srer_db = cell.iter().map(|r| r.srer_db).sum::<f64>() / tf;
            let snrs: Vec<f64> = cell.iter().filter_map(|r| r.snr_db).collect();
            let mean_snr_db =
                (snrs.len() == trials).then(|| snrs.iter().sum::<f64>() / tf);
            let ips: Vec<f64> = cell.iter().filter_map(|r| r.ip).collect();
            let mean_ip =
                (!ips.is_empty()).then(|| ips.iter().sum::<f64>() / ips.len() as f64);
            let flags: Vec<bool> = cell.iter().filter_map(|r| r.recovered).collect();
            let recovery_rate = (flags.len() == trials)
                .then(|| flags.iter().filter(|&&b| b).count() as f64 / tf);
            SummaryLine { algorithm, m, trials, mean_srer_db, mean_snr_db, mean_ip, recovery_rate }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_rows() -> Vec<ReportRow> {
        vec![
            ReportRow {
                algorithm: "EMP".into(),
                m: 20,
                trial: 0,
                srer_db: 12.3456789,
                snr_db: Some(4.5),
                ip: Some(23.456),
                recovered: None,
                iterations: 17,
                termination: "EntropyGate".into(),
            },
            ReportRow {
                algorithm: "OMP".into(),
                m: 20,
                trial: 0,
                srer_db: -0.25,
                snr_db: None,
                ip: None,
                recovered: Some(true),
                iterations: 3,
                termination: "ResidualBelowEpsilon".into(),
            },
        ]
    }

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(render_csv(&[]), format!("{CSV_HEADER}\n"));
        assert_eq!(render_json(&[]), "[]\n");
        assert_eq!(parse_csv(&render_csv(&[])).unwrap(), vec![]);
    }

    #[test]
    fn one_row_renders_two_lines() {
        let rows = &sample_rows()[..1];
        let csv = render_csv(rows);
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(csv.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(
            csv.lines().nth(1).unwrap(),
            "EMP,20,0,12.345679,4.500000,23.456000,,17,EntropyGate"
        );
    }

    #[test]
    fn csv_round_trip_preserves_values_at_six_decimals() {
        let rows = sample_rows();
        let parsed = parse_csv(&render_csv(&rows)).unwrap();
        assert_eq!(parsed.len(), rows.len());
        for (p, r) in parsed.iter().zip(&rows) {
            assert_eq!(p.algorithm, r.algorithm);
            assert_eq!((p.m, p.trial, p.iterations), (r.m, r.trial, r.iterations));
            assert!((p.srer_db - r.srer_db).abs() <= 5e-7);
            assert_eq!(p.snr_db.is_some(), r.snr_db.is_some());
            if let (Some(a), Some(b)) = (p.snr_db, r.snr_db) {
                assert!((a - b).abs() <= 5e-7);
            }
            assert_eq!(p.recovered, r.recovered);
            assert_eq!(p.termination, r.termination);
        }
    }

    #[test]
    fn json_matches_the_csv_content() {
        let rows = sample_rows();
        let json = render_json(&rows);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let arr = parsed.as_array().unwrap();
        assert_eq!(arr.len(), 2);
        assert_eq!(arr[0]["algorithm"], "EMP");
        assert!((arr[0]["srer_db"].as_f64().unwrap() - 12.345679).abs() < 1e-9);
        assert!((arr[0]["snr_db"].as_f64().unwrap() - 4.5).abs() < 1e-9);
        assert!(arr[0]["recovered"].is_null());
        assert_eq!(arr[1]["recovered"], true);
        assert!(arr[1]["snr_db"].is_null());
        assert!(arr[1]["ip"].is_null());
        assert_eq!(arr[1]["termination"], "ResidualBelowEpsilon");
    }

    #[test]
    fn malformed_csv_is_rejected_with_line_context() {
        assert!(parse_csv("not,the,header\n").is_err());
        let bad_field = format!("{CSV_HEADER}\nEMP,20,0,oops,,,,3,Done\n");
        let err = parse_csv(&bad_field).unwrap_err().to_string();
        assert!(err.contains("line 2"), "got: {err}");
    }

    #[test]
    fn summary_averages_each_cell_in_trial_order() {
        let mk = |algorithm: &str, m: usize, trial: usize, srer: f64, snr: Option<f64>| ReportRow {
            algorithm: algorithm.into(),
            m,
            trial,
            srer_db: srer,
            snr_db: snr,
            ip: Some(10.0),
            recovered: Some(trial == 0),
            iterations: 1,
            termination: "SparsityReached".into(),
        };
        let rows = vec![
            mk("EMP", 20, 0, 1.0, Some(2.0)),
            mk("OMP", 20, 0, 3.0, Some(4.0)),
            mk("EMP", 20, 1, 2.0, Some(4.0)),
            mk("OMP", 20, 1, 5.0, Some(8.0)),
        ];
        let summary = mean_summary(&rows);
        assert_eq!(summary.len(), 2);
        assert_eq!(summary[0].algorithm, "EMP");
        assert_eq!(summary[0].trials, 2);
        assert!((summary[0].mean_srer_db - 1.5).abs() < 1e-12);
        assert_eq!(summary[0].mean_snr_db, Some(3.0));
        assert_eq!(summary[0].recovery_rate, Some(0.5));
        assert_eq!(summary[1].algorithm, "OMP");
        assert!((summary[1].mean_srer_db - 4.0).abs() < 1e-12);
        assert_eq!(summary[1].mean_snr_db, Some(6.0));
    }
}
