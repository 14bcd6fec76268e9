//! Report types: pass/fail clauses, per-experiment reports, curve payloads,
//! and the overall summary serialized to `summary.json`.
//!
//! Reports are deterministic: map keys are ordered, floats serialize with
//! shortest round-trip formatting, and wall times are excluded from the
//! serialized form.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;

use crate::Result;

#[derive(Clone, Debug, Serialize)]
pub struct Clause {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub threshold: String,
}

impl Clause {
    pub fn new(name: &str, pass: bool, value: f64, threshold: &str) -> Self {
        Self { name: name.into(), pass, value, threshold: threshold.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FitSummary {
    pub curve: String,
    pub model: String,
    pub amplitude: f64,
    pub rate: f64,
    pub exponent: f64,
    pub residual: f64,
}

/// Column-oriented numeric curve written as CSV or JSON next to the summary.
#[derive(Clone, Debug, Serialize)]
pub struct CurveData {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CurveData {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| (*c).into()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| fmt_e12(*v)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// C-style `%.12e`.
pub(crate) fn fmt_e12(x: f64) -> String {
    let s = format!("{x:.12e}");
    match s.find('e') {
        Some(pos) => {
            let (mantissa, exp) = s.split_at(pos);
            let exp: i32 = exp[1..].parse().expect("exponent");
            let sign = if exp < 0 { '-' } else { '+' };
            format!("{mantissa}e{sign}{:02}", exp.abs())
        }
        None => s,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub scalars: BTreeMap<String, f64>,
    pub fits: Vec<FitSummary>,
    pub clauses: Vec<Clause>,
    pub curve_files: Vec<String>,
    #[serde(skip)]
    pub wall: Duration,
}

impl ExperimentReport {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            parameters: BTreeMap::new(),
            scalars: BTreeMap::new(),
            fits: Vec::new(),
            clauses: Vec::new(),
            curve_files: Vec::new(),
            wall: Duration::ZERO,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters
            .insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn scalar(&mut self, key: &str, value: f64) {
        self.scalars.insert(key.into(), value);
    }

    pub fn clause(&mut self, name: &str, pass: bool, value: f64, threshold: &str) {
        self.clauses.push(Clause::new(name, pass, value, threshold));
    }

    pub fn all_pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }

    /// One line per clause, e.g. `PASS decay-sharpness/exponent: 0.465 (in [0.45, 0.55])`.
    pub fn print_clauses(&self) {
        for c in &self.clauses {
            println!(
                "{} {}/{}: {:.6} ({})",
                if c.pass { "PASS" } else { "FAIL" },
                self.name,
                c.name,
                c.value,
                c.threshold
            );
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub reports: Vec<ExperimentReport>,
    pub all_pass: bool,
}

impl Summary {
    pub fn new(reports: Vec<ExperimentReport>) -> Self {
        let all_pass = reports.iter().all(|r| r.all_pass());
        Self { reports, all_pass }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut f = std::fs::File::create(dir.join("summary.json"))?;
        f.write_all(self.to_json()?.as_bytes())?;
        f.write_all(b"\n")?;
        Ok(())
    }
}
