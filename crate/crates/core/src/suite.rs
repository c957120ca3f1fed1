//! Runs the checks in a fixed order and collects one report document.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::dendrite::{postcritical_density, verify_tree};
use crate::error::{Error, Result};
use crate::geometry::System;
use crate::precision::{CSource, DEFAULT_PRECISION, PRECISION_CAP};
use crate::rational::{format_rational, frac, Rational};
use crate::report::{ReportDocument, VerificationReport};
use crate::separation::{
    verify_one_point, verify_osc, verify_pairwise_disjoint, verify_separation,
};
use crate::ternary::{DigitStream, EnumerationMode};

/// Version of the defaults below; bumped whenever one changes.
pub const DEFAULTS_VERSION: u32 = 1;

/// Shifts are searched for within this many digits of `c`.
pub const DEFAULT_SEARCH_DIGITS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Separation,
    Disjoint,
    Osc,
    OnePoint,
    Tree,
    Density,
}

impl Check {
    /// Suite order.
    pub const ALL: [Check; 6] = [
        Check::Separation,
        Check::Disjoint,
        Check::Osc,
        Check::OnePoint,
        Check::Tree,
        Check::Density,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Separation => "separation",
            Check::Disjoint => "disjoint",
            Check::Osc => "osc",
            Check::OnePoint => "onepoint",
            Check::Tree => "tree",
            Check::Density => "density",
        }
    }

    pub fn default_depth(self) -> usize {
        match self {
            Check::Separation => 8,
            Check::Disjoint => 5,
            Check::Osc => 3,
            Check::OnePoint => 6,
            Check::Tree => 5,
            Check::Density => 6,
        }
    }

    fn min_depth(self) -> usize {
        match self {
            Check::OnePoint => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown check {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub h: Rational,
    pub depths: [usize; 6],
    pub precision_start: usize,
    pub precision_cap: usize,
    pub mode: EnumerationMode,
    /// How the digit source is named in the report header.
    pub mode_label: String,
    pub max_search: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            h: frac(2, 9),
            depths: Check::ALL.map(Check::default_depth),
            precision_start: DEFAULT_PRECISION,
            precision_cap: PRECISION_CAP,
            mode: EnumerationMode::Canonical,
            mode_label: "canonical".into(),
            max_search: DEFAULT_SEARCH_DIGITS,
        }
    }
}

impl RunConfig {
    pub fn depth(&self, check: Check) -> usize {
        self.depths[check as usize]
    }

    pub fn set_depth(&mut self, check: Check, depth: usize) {
        self.depths[check as usize] = depth;
    }

    /// Sets every check's depth.
    pub fn set_all_depths(&mut self, depth: usize) {
        self.depths = [depth; 6];
    }

    /// Rejects bad settings before any check runs.
    pub fn validate(&self, checks: &[Check]) -> Result<()> {
        for &check in checks {
            let depth = self.depth(check);
            if depth < check.min_depth() {
                return Err(Error::InvalidArgument(format!(
                    "{check} needs depth at least {}, got {depth}",
                    check.min_depth()
                )));
            }
        }
        self.system()?.base_triangle()?;
        Ok(())
    }

    /// A fresh system, so each check reports its own precision use.
    pub fn system(&self) -> Result<System> {
        let stream = DigitStream::from_mode(self.mode.clone());
        let source = CSource::new(stream, self.precision_start, self.precision_cap)?;
        System::new(self.h.clone(), Arc::new(source))
    }

    pub fn header(&self) -> Vec<(String, String)> {
        vec![
            ("defaults".into(), format!("v{DEFAULTS_VERSION}")),
            ("h".into(), format_rational(&self.h)),
            ("mode".into(), self.mode_label.clone()),
            ("precision_start".into(), self.precision_start.to_string()),
            ("precision_cap".into(), self.precision_cap.to_string()),
        ]
    }
}

pub fn run_check(config: &RunConfig, check: Check) -> Result<VerificationReport> {
    let system = config.system()?;
    let depth = config.depth(check);
    match check {
        Check::Separation => verify_separation(&system, depth),
        Check::Disjoint => verify_pairwise_disjoint(&system, depth),
        Check::Osc => verify_osc(&system, depth),
        Check::OnePoint => verify_one_point(&system, depth),
        Check::Tree => verify_tree(&system, depth),
        Check::Density => postcritical_density(&system, depth, config.max_search),
    }
}

/// Runs `checks` in suite order after validating the configuration.
pub fn run_suite(config: &RunConfig, checks: &[Check]) -> Result<ReportDocument> {
    config.validate(checks)?;
    let mut ordered = checks.to_vec();
    ordered.sort();
    ordered.dedup();
    let reports = ordered
        .into_iter()
        .map(|check| run_check(config, check))
        .collect::<Result<_>>()?;
    Ok(ReportDocument {
        config: config.header(),
        reports,
    })
}
