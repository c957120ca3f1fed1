//! Verification reports and their line-oriented text form.
//!
//! ```text
//! dendrite-report v1
//! config  h=2/9  mode=canonical  precision_start=128  precision_cap=100000
//! record  check=separation  depth=8  items_checked=9840  result=pass  min_margin=…  precision_digits=128  failures=0
//! record  check=onepoint  depth=6  …  failures=1
//! failure  <witness text>
//! ```
//!
//! Fields are tab-separated `key=value` pairs (shown with spaces above). Extra detail fields sit
//! between `precision_digits` and `failures`; a record with `failures=N`
//! is followed by exactly `N` `failure` lines.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

pub const FORMAT_HEADER: &str = "dendrite-report v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl Outcome {
    /// `Fail` dominates `Inconclusive`, which dominates `Pass`.
    pub fn combine(self, other: Outcome) -> Outcome {
        use Outcome::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }

    /// Process exit status: 0 pass, 1 fail, 2 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Inconclusive => 2,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
        })
    }
}

impl FromStr for Outcome {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pass" => Ok(Outcome::Pass),
            "fail" => Ok(Outcome::Fail),
            "inconclusive" => Ok(Outcome::Inconclusive),
            _ => Err(Error::MalformedReport(format!("unknown result {s:?}"))),
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub check_name: String,
    pub depth: usize,
    pub items_checked: u64,
    pub result: Outcome,
    pub min_margin: Option<Rational>,
    pub precision_digits: usize,
    pub details: Vec<(String, String)>,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn new(check_name: &str, depth: usize) -> Self {
        VerificationReport {
            check_name: check_name.to_string(),
            depth,
            items_checked: 0,
            result: Outcome::Pass,
            min_margin: None,
            precision_digits: 0,
            details: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.result == Outcome::Pass
    }

    pub fn detail(&self, key: &str) -> Option<&str> {
        self.details
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn add_detail(&mut self, key: &str, value: impl ToString) {
        self.details
            .push((key.to_string(), sanitize(&value.to_string())));
    }

    /// Keeps the smaller of the current and the given margin.
    pub fn note_margin(&mut self, margin: Rational) {
        if self.min_margin.as_ref().is_none_or(|m| &margin < m) {
            self.min_margin = Some(margin);
        }
    }

    /// Records a witness and downgrades the result to `outcome`.
    pub fn record_failure(&mut self, outcome: Outcome, witness: impl Into<String>) {
        self.result = self.result.combine(outcome);
        self.failures.push(sanitize(&witness.into()));
    }

    fn write_lines(&self, out: &mut String) {
        let margin = self
            .min_margin
            .as_ref()
            .map(format_rational)
            .unwrap_or_else(|| "-".to_string());
        out.push_str(&format!(
            "record\tcheck={}\tdepth={}\titems_checked={}\tresult={}\tmin_margin={}\tprecision_digits={}",
            self.check_name,
            self.depth,
            self.items_checked,
            self.result,
            margin,
            self.precision_digits
        ));
        for (k, v) in &self.details {
            out.push_str(&format!("\t{k}={v}"));
        }
        out.push_str(&format!("\tfailures={}\n", self.failures.len()));
        for f in &self.failures {
            out.push_str("failure\t");
            out.push_str(f);
            out.push('\n');
        }
    }
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c == '\t' || c == '\n' || c == '\r' {
                ' '
            } else {
                c
            }
        })
        .collect()
}

/// A full report document: configuration line plus records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportDocument {
    pub config: Vec<(String, String)>,
    pub reports: Vec<VerificationReport>,
}

impl ReportDocument {
    pub fn overall(&self) -> Outcome {
        self.reports
            .iter()
            .fold(Outcome::Pass, |acc, r| acc.combine(r.result))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(FORMAT_HEADER);
        out.push('\n');
        out.push_str("config");
        for (k, v) in &self.config {
            out.push_str(&format!("\t{k}={}", sanitize(v)));
        }
        out.push('\n');
        for r in &self.reports {
            r.write_lines(&mut out);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::MalformedReport(m.to_string());
        let mut lines = text.lines();
        if lines.next() != Some(FORMAT_HEADER) {
            return Err(bad("missing version header"));
        }
        let config_line = lines.next().ok_or_else(|| bad("missing config line"))?;
        let mut parts = config_line.split('\t');
        if parts.next() != Some("config") {
            return Err(bad("expected config line"));
        }
        let config = parts.map(split_kv).collect::<Result<Vec<_>>>()?;

        let mut reports = Vec::new();
        let mut pending_failures = 0usize;
        for line in lines {
            if let Some(witness) = line.strip_prefix("failure\t") {
                let current: &mut VerificationReport = reports
                    .last_mut()
                    .ok_or_else(|| bad("failure before record"))?;
                if pending_failures == 0 {
                    return Err(bad("unexpected failure line"));
                }
                current.failures.push(witness.to_string());
                pending_failures -= 1;
                continue;
            }
            if pending_failures != 0 {
                return Err(bad("missing failure lines"));
            }
            let mut parts = line.split('\t');
            if parts.next() != Some("record") {
                return Err(bad(&format!("unexpected line {line:?}")));
            }
            let fields = parts.map(split_kv).collect::<Result<Vec<_>>>()?;
            let get = |key: &str| {
                fields
                    .iter()
                    .find(|(k, _)| k == key)
                    .map(|(_, v)| v.as_str())
                    .ok_or_else(|| bad(&format!("missing field {key}")))
            };
            let num = |key: &str| -> Result<u64> {
                get(key)?
                    .parse()
                    .map_err(|_| bad(&format!("bad number in {key}")))
            };
            let margin = match get("min_margin")? {
                "-" => None,
                m => Some(parse_rational(m)?),
            };
            const FIXED: [&str; 7] = [
                "check",
                "depth",
                "items_checked",
                "result",
                "min_margin",
                "precision_digits",
                "failures",
            ];
            pending_failures = num("failures")? as usize;
            reports.push(VerificationReport {
                check_name: get("check")?.to_string(),
                depth: num("depth")? as usize,
                items_checked: num("items_checked")?,
                result: get("result")?.parse()?,
                min_margin: margin,
                precision_digits: num("precision_digits")? as usize,
                details: fields
                    .iter()
                    .filter(|(k, _)| !FIXED.contains(&k.as_str()))
                    .cloned()
                    .collect(),
                failures: Vec::new(),
            });
        }
        if pending_failures != 0 {
            return Err(bad("missing failure lines"));
        }
        Ok(ReportDocument { config, reports })
    }
}

fn split_kv(field: &str) -> Result<(String, String)> {
    field
        .split_once('=')
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .ok_or_else(|| Error::MalformedReport(format!("field {field:?} is not key=value")))
}
