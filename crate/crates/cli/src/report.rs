//! JSON verification reports (schema 1) and their aggregation rules.
//!
//! Determinism contract: all maps are ordered, no timestamps or host data
//! enter the report, and records are merged by point index — identical
//! (input, seed, jobs) produce byte-identical output.

use std::collections::BTreeMap;

use hkahler_core::ChartPoint64;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub tool_version: &'static str,
    pub command: String,
    pub potential_source: String,
    pub config: ConfigEcho,
    pub points: Vec<PointRecord>,
    pub aggregate: Aggregate,
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub tolerance: f64,
    pub jet_order: usize,
    pub seed: u64,
    pub rho: Vec<f64>,
    pub jobs: usize,
    pub grid: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointRecord {
    pub index: usize,
    pub z1: [f64; 2],
    pub z2: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    /// Normalized residual per check name.
    pub residuals: BTreeMap<String, f64>,
    /// Checks that could not run at this point, with the reason.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub skipped_checks: BTreeMap<String, String>,
    /// Set when the whole point was skipped.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl PointRecord {
    pub fn new(index: usize, p: &ChartPoint64) -> Self {
        PointRecord {
            index,
            z1: [p.z1.re, p.z1.im],
            z2: [p.z2.re, p.z2.im],
            rho: None,
            residuals: BTreeMap::new(),
            skipped_checks: BTreeMap::new(),
            skipped: None,
        }
    }

    pub fn skipped(index: usize, p: &ChartPoint64, reason: String) -> Self {
        let mut rec = Self::new(index, p);
        rec.skipped = Some(reason);
        rec
    }
}

#[derive(Debug, Serialize)]
pub struct Aggregate {
    pub max_residuals: BTreeMap<String, f64>,
    pub pass: BTreeMap<String, bool>,
    /// Checks reported for information only, with the reason they do not
    /// contribute to the verdict.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub informational: BTreeMap<String, String>,
    /// Reported values that are not residuals (κ, the HSC constant, ...).
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, f64>,
    pub skipped_points: usize,
    pub verdict: String,
}

/// Folds point records (plus optional run-level residuals) into the
/// aggregate. A check passes when its max normalized residual over the
/// non-skipped records is below the tolerance; informational checks are
/// excluded from the verdict.
pub fn aggregate(
    points: &[PointRecord],
    run_level: &BTreeMap<String, f64>,
    informational: BTreeMap<String, String>,
    notes: BTreeMap<String, f64>,
    tolerance: f64,
) -> Aggregate {
    let mut max_residuals: BTreeMap<String, f64> = run_level.clone();
    for rec in points {
        for (name, value) in &rec.residuals {
            let slot = max_residuals.entry(name.clone()).or_insert(0.0);
            if *value > *slot {
                *slot = *value;
            }
        }
    }
    let mut pass = BTreeMap::new();
    for (name, value) in &max_residuals {
        if !informational.contains_key(name) {
            pass.insert(name.clone(), *value < tolerance);
        }
    }
    let skipped_points = points.iter().filter(|r| r.skipped.is_some()).count();
    let verdict = if pass.values().all(|ok| *ok) {
        "pass"
    } else {
        "fail"
    };
    Aggregate {
        max_residuals,
        pass,
        informational,
        notes,
        skipped_points,
        verdict: verdict.to_string(),
    }
}

/// Human summary on stderr; every number shown also sits in the JSON
/// under the same check name.
pub fn print_summary(report: &VerificationReport) {
    eprintln!(
        "hkahler {}: {} points ({} skipped)",
        report.command,
        report.points.len(),
        report.aggregate.skipped_points
    );
    for (name, value) in &report.aggregate.max_residuals {
        match report.aggregate.pass.get(name) {
            Some(ok) => eprintln!(
                "  {name}: max {value:.3e} {}",
                if *ok { "pass" } else { "FAIL" }
            ),
            None => {
                let reason = report
                    .aggregate
                    .informational
                    .get(name)
                    .map(String::as_str)
                    .unwrap_or("informational");
                eprintln!("  {name}: max {value:.3e} (informational: {reason})");
            }
        }
    }
    for (name, value) in &report.aggregate.notes {
        eprintln!("  {name} = {value:.9}");
    }
    eprintln!("verdict: {}", report.aggregate.verdict);
}
