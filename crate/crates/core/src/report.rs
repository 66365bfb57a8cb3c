//! Residual reports and their aggregation across sample points.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// One verified identity or condition, aggregated over sample points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub check_id: String,
    pub paper_ref: String,
    pub samples_used: usize,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub notes: String,
}

pub const INFORMATIONAL: &str = "informational";

impl ResidualReport {
    pub fn is_informational(&self) -> bool {
        self.notes.starts_with(INFORMATIONAL)
    }

    /// Whether the report counts against the exit status.
    pub fn is_failure(&self) -> bool {
        !self.pass && !self.is_informational()
    }
}

/// Tolerance class of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TolClass {
    /// Identities evaluated purely through exact differentiation.
    Ad,
    /// Pipelines mixing frames, projections and solves.
    Mixed,
    /// Pure linear-algebra reconstructions.
    Exact,
    /// Condition-number bounds.
    Cond,
    /// Two-sided boolean agreement; the tolerance is the vanishing threshold.
    Iff,
}

/// Static description of a check.
#[derive(Clone, Copy, Debug)]
pub struct CheckSpec {
    pub id: &'static str,
    pub formula: &'static str,
    pub tol: TolClass,
    pub informational: bool,
}

impl CheckSpec {
    pub const fn new(id: &'static str, formula: &'static str, tol: TolClass) -> Self {
        CheckSpec { id, formula, tol, informational: false }
    }

    pub const fn info(id: &'static str, formula: &'static str, tol: TolClass) -> Self {
        CheckSpec { id, formula, tol, informational: true }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    pub ad: f64,
    pub mixed: f64,
    pub exact: f64,
    pub cond: f64,
    pub overrides: BTreeMap<String, f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { ad: 1e-8, mixed: 1e-6, exact: 1e-10, cond: 1e6, overrides: BTreeMap::new() }
    }
}

impl Tolerances {
    pub fn for_check(&self, spec: &CheckSpec) -> f64 {
        if let Some(&t) = self.overrides.get(spec.id) {
            return t;
        }
        match spec.tol {
            TolClass::Ad => self.ad,
            TolClass::Mixed | TolClass::Iff => self.mixed,
            TolClass::Exact => self.exact,
            TolClass::Cond => self.cond,
        }
    }
}

/// Per-point result of a check.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Residual(f64),
    /// Magnitudes of the direct measure and of the stated equivalent
    /// condition; only their vanishing is compared.
    Iff { direct: f64, condition: f64 },
    /// Not evaluable at this point.
    Skip(String),
}

/// Finite stand-in for non-finite residuals so JSON stays parseable.
const NON_FINITE: f64 = f64::MAX;

fn finite(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        NON_FINITE
    }
}

/// Aggregate per-point outcomes (in point order) into one report.
pub fn aggregate(spec: &CheckSpec, tol: f64, outcomes: &[Outcome], extra: Option<&str>) -> ResidualReport {
    let mut notes: Vec<String> = Vec::new();
    if spec.informational {
        notes.push(INFORMATIONAL.to_string());
    }
    let skipped: Vec<&str> =
        outcomes.iter().filter_map(|o| if let Outcome::Skip(s) = o { Some(s.as_str()) } else { None }).collect();
    let used = outcomes.len() - skipped.len();
    let mut report = ResidualReport {
        check_id: spec.id.to_string(),
        paper_ref: spec.formula.to_string(),
        samples_used: used,
        max_residual: 0.0,
        mean_residual: 0.0,
        tol,
        pass: true,
        notes: String::new(),
    };
    if used == 0 {
        if !spec.informational {
            notes.insert(0, INFORMATIONAL.to_string());
        }
        notes.push(format!("skipped: {}", skipped.first().copied().unwrap_or("no sample points")));
        if let Some(e) = extra {
            notes.push(e.to_string());
        }
        report.notes = notes.join("; ");
        return report;
    }
    let is_iff = outcomes.iter().any(|o| matches!(o, Outcome::Iff { .. }));
    if is_iff {
        let mut agree = 0usize;
        let (mut dn, mut cn) = (0usize, 0usize);
        let mut bad: Vec<usize> = Vec::new();
        for (i, o) in outcomes.iter().enumerate() {
            if let Outcome::Iff { direct, condition } = o {
                let d = !(*direct < tol);
                let c = !(*condition < tol);
                dn += d as usize;
                cn += c as usize;
                if d == c {
                    agree += 1;
                } else {
                    bad.push(i);
                }
            }
        }
        let frac = agree as f64 / used as f64;
        report.max_residual = 1.0 - frac;
        report.mean_residual = 1.0 - frac;
        report.pass = agree == used;
        notes.push(format!("agreement {agree}/{used}; direct nonzero at {dn}, condition nonzero at {cn}"));
        if !bad.is_empty() {
            let shown: Vec<String> = bad.iter().take(20).map(|i| i.to_string()).collect();
            let more = if bad.len() > 20 { ", ..." } else { "" };
            notes.push(format!("disagreeing points [{}{}]", shown.join(", "), more));
        }
    } else {
        let vals: Vec<f64> =
            outcomes.iter().filter_map(|o| if let Outcome::Residual(v) = o { Some(*v) } else { None }).collect();
        let mut max = 0.0f64;
        let mut arg = 0usize;
        let mut sum = 0.0;
        let mut nonfinite = false;
        for (i, &v) in vals.iter().enumerate() {
            if !v.is_finite() {
                nonfinite = true;
            }
            let v = finite(v);
            if v > max {
                max = v;
                arg = i;
            }
            sum += v;
        }
        report.max_residual = max;
        report.mean_residual = finite(sum / vals.len() as f64);
        report.pass = !nonfinite && max < tol;
        if nonfinite {
            notes.push("non-finite residual encountered".into());
        }
        if max > 0.0 {
            let mut s = String::new();
            let _ = write!(s, "max at sample {arg}");
            notes.push(s);
        }
    }
    if !skipped.is_empty() {
        notes.push(format!("{} points skipped ({})", skipped.len(), skipped[0]));
    }
    if let Some(e) = extra {
        notes.push(e.to_string());
    }
    report.notes = notes.join("; ");
    report
}

/// A skipped check with an explicit reason.
pub fn skipped(spec: &CheckSpec, tol: f64, reason: &str) -> ResidualReport {
    aggregate(spec, tol, &[Outcome::Skip(reason.to_string())], None)
}

/// Build one report per spec from point-major outcome rows.
pub fn aggregate_all(
    specs: &[CheckSpec],
    tols: &Tolerances,
    rows: &[Vec<Outcome>],
    extra: &BTreeMap<&'static str, String>,
) -> Vec<ResidualReport> {
    specs
        .iter()
        .enumerate()
        .map(|(c, spec)| {
            let col: Vec<Outcome> = rows.iter().map(|r| r[c].clone()).collect();
            aggregate(spec, tols.for_check(spec), &col, extra.get(spec.id).map(|s| s.as_str()))
        })
        .collect()
}

pub fn to_json(reports: &[ResidualReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialise")
}

pub fn from_json(s: &str) -> serde_json::Result<Vec<ResidualReport>> {
    serde_json::from_str(s)
}

/// Aligned text table with pass/fail markers.
pub fn to_text(reports: &[ResidualReport]) -> String {
    let w = reports.iter().map(|r| r.check_id.len()).max().unwrap_or(8).max(8);
    let mut out = String::new();
    let _ = writeln!(out, "{:<6} {:<w$} {:>11} {:>11} {:>9} {:>5}  notes", "status", "check", "max", "mean", "tol", "n");
    for r in reports {
        let mark = if r.samples_used == 0 {
            "skip"
        } else if r.pass {
            "PASS"
        } else if r.is_informational() {
            "info"
        } else {
            "FAIL"
        };
        let _ = writeln!(
            out,
            "{:<6} {:<w$} {:>11.3e} {:>11.3e} {:>9.1e} {:>5}  {}",
            mark, r.check_id, r.max_residual, r.mean_residual, r.tol, r.samples_used, r.notes
        );
    }
    let fails = reports.iter().filter(|r| r.is_failure()).count();
    let _ = writeln!(out, "{} checks, {} failing", reports.len(), fails);
    out
}
