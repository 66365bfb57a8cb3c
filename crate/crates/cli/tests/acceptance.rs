//! Acceptance criteria 1–9. Prints one line per criterion.
//!
//! Criterion 5 contains the identity `∇̃′ᵗ_X ξ = ∇′ᵗ_X ξ`, which does not hold
//! on φ-invariant radicals (the `η(X)Tξ` term lands in the radical part, see
//! `screen.nabla_rad.corrected`). It is evaluated as stated and expected to
//! fail for exactly that check; any other outcome fails this test.

use sgl_core::catalog::{build_ambient, entry, EntryParams};
use sgl_core::contact::{check_contact_metric, check_sasakian, check_sasakian_statistical};
use sgl_core::lightlike::{check_frames, plan};
use sgl_core::oracle::{check_ambient_oracles, check_submanifold_oracles};
use sgl_core::qs::check_qs_axioms;
use sgl_core::report::{ResidualReport, Tolerances};
use sgl_core::sampling::{sample_points, Domain};
use sgl_core::sgl::theorems::{check_geodesic, check_integrability, check_lemma, check_parallelism};
use sgl_core::sgl::{check_sgl, classify_sgl};
use sgl_core::statistical::check_statistical;
use std::process::Command;
use std::time::{Duration, Instant};

const SEED: u64 = 42;
/// Criteria expected to be red, with the only checks allowed to cause it.
const EXPECTED_RED: &[(u32, &[&str])] = &[(5, &["screen.nabla_rad"])];

struct Verdict {
    pass: bool,
    detail: String,
    /// Checks responsible for a failure.
    culprits: Vec<String>,
}

fn find<'a>(rs: &'a [ResidualReport], id: &str) -> &'a ResidualReport {
    rs.iter().find(|r| r.check_id == id).unwrap_or_else(|| panic!("no report {id}"))
}

/// Every listed report must have `max_residual < bound` (and pass).
fn bounded(rs: &[&ResidualReport], bound: f64) -> Verdict {
    let bad: Vec<&&ResidualReport> = rs.iter().filter(|r| !(r.max_residual < bound && r.pass)).collect();
    let worst = rs.iter().max_by(|a, b| a.max_residual.total_cmp(&b.max_residual)).unwrap();
    Verdict {
        pass: bad.is_empty(),
        detail: format!("{} checks, worst {} = {:.2e} (bound {bound:.0e})", rs.len(), worst.check_id, worst.max_residual),
        culprits: bad.iter().map(|r| r.check_id.clone()).collect(),
    }
}

fn tols() -> Tolerances {
    Tolerances::default()
}

fn criteria_1_2() -> (Verdict, Verdict) {
    let a = build_ambient(6, 3, 0.3).unwrap();
    let pts = sample_points(&Domain::cube(13, -1.0, 1.0), 100, SEED).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let t0 = Instant::now();
    let rs = pool.install(|| {
        let mut rs = check_statistical(&a, &pts, SEED, &tols()).unwrap();
        rs.extend(check_contact_metric(&a, &pts, SEED, &tols()).unwrap());
        rs.extend(check_sasakian(&a, &pts, SEED, &tols()).unwrap());
        rs.extend(check_sasakian_statistical(&a, &pts, SEED, &tols()).unwrap());
        rs
    });
    let elapsed = t0.elapsed();
    let qs = check_qs_axioms(&a, &pts, SEED, &tols()).unwrap();
    let mut c1 = bounded(&rs.iter().collect::<Vec<_>>(), 1e-8);
    let fast = elapsed < Duration::from_secs(10);
    c1.pass &= fast;
    if !fast {
        c1.culprits.push("runtime".into());
    }
    c1.detail += &format!(", {:.2} s single-threaded", elapsed.as_secs_f64());
    (c1, bounded(&qs.iter().collect::<Vec<_>>(), 1e-8))
}

fn example(lambda: f64) -> (sgl_core::catalog::CatalogEntry, sgl_core::lightlike::FramePlan, Vec<Vec<f64>>) {
    let e = entry("example_3_2", &EntryParams { lambda, ..EntryParams::default() }).unwrap();
    let p = plan(&e.ambient, &e.immersion).unwrap();
    let pts = sample_points(&e.immersion.domain, 50, SEED).unwrap();
    (e, p, pts)
}

fn criterion_3(frames: &[ResidualReport]) -> Verdict {
    let rank = find(frames, "frame.radical_rank_constant");
    let mut v = bounded(&[find(frames, "frame.pairing"), find(frames, "frame.ltr_null")], 1e-8);
    let rec = bounded(&[find(frames, "frame.reconstruction")], 1e-10);
    v.pass &= rank.pass && rec.pass;
    v.culprits.extend(rec.culprits);
    if !rank.pass {
        v.culprits.push(rank.check_id.clone());
    }
    v.detail = format!("{}; {}; reconstruction {:.2e}", rank.notes, v.detail, find(frames, "frame.reconstruction").max_residual);
    v
}

fn criterion_4() -> Verdict {
    let (e, p, pts) = example(0.3);
    let rs = check_sgl(&e.ambient, &e.immersion, &p, &pts, SEED, &tols(), Some(&e.expected)).unwrap();
    let inv = find(&rs, "sgl.radical_invariant");
    let cond = find(&rs, "sgl.e0_nondegenerate");
    let class = find(&rs, "sgl.classification");
    let mut culprits = Vec::new();
    for (ok, id) in [(inv.max_residual < 1e-6, &inv.check_id), (cond.max_residual < 1e6, &cond.check_id), (class.pass, &class.check_id)] {
        if !ok {
            culprits.push(id.clone());
        }
    }
    let control = |name: &str| {
        let e = entry(name, &EntryParams::default()).unwrap();
        let p = plan(&e.ambient, &e.immersion).unwrap();
        let pts = sample_points(&e.immersion.domain, 50, SEED).unwrap();
        classify_sgl(&e.ambient, &e.immersion, &p, &pts, &tols()).unwrap()
    };
    let (nl, ip) = (control("null_line"), control("invariant_plane"));
    if nl.r != 1 {
        culprits.push("null_line r".into());
    }
    if !(ip.sgl && ip.e_prime_dim == 0) {
        culprits.push("invariant_plane E'".into());
    }
    Verdict {
        pass: culprits.is_empty(),
        detail: format!(
            "φ(Rad) residual {:.2e}, E0 cond {:.2e}, {}; null_line r = {}; invariant_plane E' = {}",
            inv.max_residual, cond.max_residual, class.notes, nl.r, ip.e_prime_dim
        ),
        culprits,
    }
}

fn criterion_5(frames: &[ResidualReport]) -> Verdict {
    let ids = [
        "gw.reconstruction",
        "induced.connection_relation",
        "induced.h_l",
        "induced.h_s",
        "screen.h_prime",
        "screen.nabla_rad",
        "induced.metric_defect",
    ];
    let mut v = bounded(&ids.iter().map(|id| find(frames, id)).collect::<Vec<_>>(), 1e-6);
    let iff = find(frames, "thm.induced_metric_iff_hl_zero");
    v.pass &= iff.pass;
    if !iff.pass {
        v.culprits.push(iff.check_id.clone());
    }
    let worst: Vec<String> = v.culprits.iter().map(|id| format!("{id} = {:.2e}", find(frames, id).max_residual)).collect();
    v.detail = format!("{}; D ρ̃ vs h̃^l: {}; failing: [{}]", v.detail, iff.notes, worst.join(", "));
    v
}

fn criterion_6() -> Verdict {
    let mut rs = Vec::new();
    for lambda in [0.0, 0.3] {
        let (e, p, pts) = example(lambda);
        rs.extend(check_lemma(&e.ambient, &e.immersion, &p, &pts, SEED, &tols()).unwrap());
    }
    bounded(&rs.iter().collect::<Vec<_>>(), 1e-6)
}

fn criterion_7() -> Verdict {
    let mut culprits = Vec::new();
    let mut n = 0;
    for name in ["example_3_2", "null_line", "invariant_plane", "geodesic_subspace"] {
        let e = entry(name, &EntryParams::default()).unwrap();
        let p = plan(&e.ambient, &e.immersion).unwrap();
        let pts = sample_points(&e.immersion.domain, 50, SEED).unwrap();
        let (a, imm) = (&e.ambient, &e.immersion);
        let mut rs = check_frames(a, imm, &p, &pts, SEED, &tols()).unwrap();
        rs.extend(check_integrability(a, imm, &p, &pts, SEED, &tols()).unwrap());
        rs.extend(check_parallelism(a, imm, &p, &pts, SEED, &tols()).unwrap());
        rs.extend(check_geodesic(a, imm, &p, &pts, SEED, &tols()).unwrap());
        for r in rs.iter().filter(|r| r.check_id.starts_with("thm.")) {
            n += 1;
            if r.is_failure() {
                culprits.push(format!("{name}:{} ({})", r.check_id, r.notes));
            }
        }
    }
    Verdict { pass: culprits.is_empty(), detail: format!("{n} iff reports over 4 entries"), culprits }
}

fn criterion_8() -> Verdict {
    let a = build_ambient(6, 3, 0.3).unwrap();
    let apts = sample_points(&Domain::cube(13, -1.0, 1.0), 100, SEED).unwrap();
    let mut rs = check_ambient_oracles(&a, &apts, SEED, &tols()).unwrap();
    let (e, p, pts) = example(0.3);
    rs.extend(check_submanifold_oracles(&e.ambient, &e.immersion, &p, &pts, SEED, &tols()).unwrap());
    let mut v = bounded(&rs.iter().collect::<Vec<_>>(), 1e-6);
    v.detail += &format!(", {} points each", rs[0].samples_used);
    v
}

fn criterion_9() -> Verdict {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_sglv"))
            .args(["run", "--entry", "example_3_2", "--suite", "all", "--samples", "50", "--seed", "42"])
            .args(["--format", "json", "--threads", threads])
            .output()
            .unwrap();
        assert!(out.status.code().is_some_and(|c| c <= 1), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let runs: Vec<Vec<u8>> = ["1", "1", "4", "0"].into_iter().map(run).collect();
    let same = runs.windows(2).all(|w| w[0] == w[1]);
    Verdict {
        pass: same,
        detail: format!("4 runs (threads 1, 1, 4, default), {} bytes each", runs[0].len()),
        culprits: if same { vec![] } else { vec!["json differs".into()] },
    }
}

fn main() {
    let (e, p, pts) = example(0.3);
    let frames = check_frames(&e.ambient, &e.immersion, &p, &pts, SEED, &tols()).unwrap();
    let (c1, c2) = criteria_1_2();
    let verdicts = [
        (1, "ambient axioms", c1),
        (2, "QS axioms", c2),
        (3, "frame contract", criterion_3(&frames)),
        (4, "SGL classification", criterion_4()),
        (5, "decomposition consistency", criterion_5(&frames)),
        (6, "lemma splits", criterion_6()),
        (7, "iff agreement", criterion_7()),
        (8, "oracle cross-check", criterion_8()),
        (9, "determinism", criterion_9()),
    ];
    let mut unexpected = Vec::new();
    for (n, name, v) in &verdicts {
        let expected_red = EXPECTED_RED.iter().find(|(k, _)| k == n).map(|(_, ids)| *ids);
        let mark = match (v.pass, expected_red) {
            (true, None) => "PASS",
            (false, Some(ids)) if v.culprits.iter().all(|c| ids.contains(&c.as_str())) => "FAIL (expected)",
            _ => {
                unexpected.push(*n);
                if v.pass { "PASS (unexpected)" } else { "FAIL" }
            }
        };
        println!("criterion {n} [{name}]: {mark}: {}", v.detail);
        if !v.pass {
            println!("    failing: {}", v.culprits.join(", "));
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
