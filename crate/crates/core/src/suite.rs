//! Run configuration and suite orchestration.

use crate::ambient::Ambient;
use crate::catalog::{entry, parse_config, CatalogEntry, EntryParams};
use crate::contact::{
    check_contact_metric, check_sasakian, check_sasakian_statistical, CONTACT_CHECKS, SASAKIAN_CHECKS,
    SASAKIAN_STATISTICAL_CHECKS,
};
use crate::error::{GeomError, Result};
use crate::lightlike::{check_frames, plan};
use crate::oracle::{check_ambient_oracles, check_submanifold_oracles};
use crate::qs::{check_qs_axioms, QS_CHECKS};
use crate::report::{skipped, CheckSpec, ResidualReport, Tolerances};
use crate::sampling::{sample_points, Domain};
use crate::sgl::check_sgl;
use crate::sgl::theorems::{check_geodesic, check_integrability, check_lemma, check_parallelism};
use crate::statistical::check_statistical;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Axioms,
    Frames,
    Sgl,
    Integrability,
    Parallelism,
    Geodesic,
    Lemma,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Axioms,
        Suite::Frames,
        Suite::Sgl,
        Suite::Integrability,
        Suite::Parallelism,
        Suite::Geodesic,
        Suite::Lemma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Frames => "frames",
            Suite::Sgl => "sgl",
            Suite::Integrability => "integrability",
            Suite::Parallelism => "parallelism",
            Suite::Geodesic => "geodesic",
            Suite::Lemma => "lemma",
        }
    }
}

impl FromStr for Suite {
    type Err = GeomError;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            GeomError::Usage(format!("unknown suite '{s}' ({} | all)", names.join(" | ")))
        })
    }
}

/// Comma-separated suite list; `all` expands to every suite. Order follows
/// [`Suite::ALL`] and duplicates are dropped.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(Suite::ALL);
        } else {
            out.push(part.parse()?);
        }
    }
    if out.is_empty() {
        return Err(GeomError::Usage("no suite given".into()));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Where the geometry comes from.
#[derive(Clone, Debug)]
pub enum Source {
    Entry(String),
    /// Contents of a custom-immersion config file.
    Config { name: String, text: String },
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub source: Source,
    pub suites: Vec<Suite>,
    pub samples: usize,
    pub seed: u64,
    pub tols: Tolerances,
    pub params: EntryParams,
}

impl RunConfig {
    pub fn new(source: Source) -> Self {
        RunConfig {
            source,
            suites: Suite::ALL.to_vec(),
            samples: 50,
            seed: 42,
            tols: Tolerances::default(),
            params: EntryParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(GeomError::Usage("samples must be at least 1".into()));
        }
        let t = &self.tols;
        if [t.ad, t.mixed, t.exact, t.cond].iter().chain(t.overrides.values()).any(|v| !(*v > 0.0)) {
            return Err(GeomError::Usage("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn load(&self) -> Result<CatalogEntry> {
        match &self.source {
            Source::Entry(name) => entry(name, &self.params),
            Source::Config { name, text } => parse_config(name, text),
        }
    }
}

fn skip_all(specs: &[CheckSpec], tols: &Tolerances, reason: &str) -> Vec<ResidualReport> {
    specs.iter().map(|s| skipped(s, tols.for_check(s), reason)).collect()
}

/// Ambient axioms on `n` points of `[-1, 1]^d`.
pub fn run_axioms(a: &Ambient, n: usize, seed: u64, tols: &Tolerances) -> Result<Vec<ResidualReport>> {
    let pts = sample_points(&Domain::cube(a.dim(), -1.0, 1.0), n, seed)?;
    let mut out = check_statistical(a, &pts, seed, tols)?;
    if a.has_contact() {
        out.extend(check_contact_metric(a, &pts, seed, tols)?);
        out.extend(check_sasakian(a, &pts, seed, tols)?);
        out.extend(check_sasakian_statistical(a, &pts, seed, tols)?);
        out.extend(check_qs_axioms(a, &pts, seed, tols)?);
    } else {
        for specs in [CONTACT_CHECKS, SASAKIAN_CHECKS, SASAKIAN_STATISTICAL_CHECKS, QS_CHECKS] {
            out.extend(skip_all(specs, tols, "no contact structure"));
        }
    }
    out.extend(check_ambient_oracles(a, &pts, seed, tols)?);
    Ok(out)
}

/// Run every selected suite. Reports come in suite order, then check order.
pub fn run_suite(cfg: &RunConfig) -> Result<Vec<ResidualReport>> {
    cfg.validate()?;
    let e = cfg.load()?;
    let (a, imm, tols, seed) = (&e.ambient, &e.immersion, &cfg.tols, cfg.seed);
    let mut out = Vec::new();
    if cfg.suites.contains(&Suite::Axioms) {
        out.extend(run_axioms(a, cfg.samples, seed, tols)?);
    }
    if cfg.suites.iter().all(|s| *s == Suite::Axioms) {
        return Ok(out);
    }
    let p = plan(a, imm)?;
    let pts = sample_points(&imm.domain, cfg.samples, seed)?;
    let expected = matches!(cfg.source, Source::Entry(_)).then_some(&e.expected);
    for s in &cfg.suites {
        match s {
            Suite::Axioms => {}
            Suite::Frames => {
                out.extend(check_frames(a, imm, &p, &pts, seed, tols)?);
                out.extend(check_submanifold_oracles(a, imm, &p, &pts, seed, tols)?);
            }
            Suite::Sgl => out.extend(check_sgl(a, imm, &p, &pts, seed, tols, expected)?),
            Suite::Integrability => out.extend(check_integrability(a, imm, &p, &pts, seed, tols)?),
            Suite::Parallelism => out.extend(check_parallelism(a, imm, &p, &pts, seed, tols)?),
            Suite::Geodesic => out.extend(check_geodesic(a, imm, &p, &pts, seed, tols)?),
            Suite::Lemma => out.extend(check_lemma(a, imm, &p, &pts, seed, tols)?),
        }
    }
    Ok(out)
}

/// Exit status for a finished run: 0 iff no non-informational check fails.
pub fn exit_status(reports: &[ResidualReport]) -> i32 {
    if reports.iter().any(ResidualReport::is_failure) {
        1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        assert_eq!(parse_suites("all").unwrap(), Suite::ALL.to_vec());
        assert_eq!(parse_suites("lemma,frames,lemma").unwrap(), vec![Suite::Frames, Suite::Lemma]);
        assert!(matches!(parse_suites("bogus"), Err(GeomError::Usage(_))));
        assert!(matches!(parse_suites(""), Err(GeomError::Usage(_))));
    }

    #[test]
    fn rejects_bad_config() {
        let mut c = RunConfig::new(Source::Entry("example_3_2".into()));
        c.samples = 0;
        assert!(matches!(run_suite(&c), Err(GeomError::Usage(_))));
        let mut c = RunConfig::new(Source::Entry("nope".into()));
        c.samples = 1;
        assert!(matches!(run_suite(&c), Err(GeomError::Usage(_))));
        let mut c = RunConfig::new(Source::Entry("null_line".into()));
        c.tols.mixed = -1.0;
        assert!(matches!(run_suite(&c), Err(GeomError::Usage(_))));
    }

    #[test]
    fn null_line_frames_report_rank_one() {
        let mut c = RunConfig::new(Source::Entry("null_line".into()));
        c.suites = vec![Suite::Frames];
        c.samples = 5;
        let r = run_suite(&c).unwrap();
        assert_eq!(exit_status(&r), 0);
        let rank = r.iter().find(|r| r.check_id == "frame.radical_rank_constant").unwrap();
        assert!(rank.notes.contains("r = 1"), "{rank:?}");
    }
}
