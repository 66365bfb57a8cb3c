//! Property-based invariants of the engine.

use proptest::prelude::*;
use sgl_core::catalog::{build_ambient, entry, EntryParams, Mapping};
use sgl_core::expr::Expr;
use sgl_core::lightlike::plan;
use sgl_core::report::{aggregate, from_json, to_json, CheckSpec, Outcome, ResidualReport, TolClass, Tolerances};
use sgl_core::sampling::{map_points, sample_points, Domain};
use sgl_core::sgl::theorems::check_lemma;
use sgl_core::sgl::{check_sgl, classify_sgl};
use sgl_core::suite::run_axioms;

const SPEC: CheckSpec = CheckSpec::new("prop.residual", "a = b", TolClass::Mixed);

fn report() -> impl Strategy<Value = ResidualReport> {
    (".{0,12}", ".{0,12}", 0usize..1000, 0.0f64..1e3, 0.0f64..1e3, 1e-12f64..1.0, any::<bool>(), ".{0,40}").prop_map(
        |(check_id, paper_ref, samples_used, max_residual, mean_residual, tol, pass, notes)| ResidualReport {
            check_id,
            paper_ref,
            samples_used,
            max_residual,
            mean_residual,
            tol,
            pass,
            notes,
        },
    )
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(-5.0f64..5.0).prop_map(Expr::c), (0usize..3).prop_map(Expr::var)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            inner.prop_map(|a| Expr::Neg(Box::new(a))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn samples_are_deterministic_and_in_box(seed in any::<u64>(), n in 1usize..40, dim in 1usize..8, lo in -3.0f64..0.0, w in 0.1f64..3.0) {
        let d = Domain::cube(dim, lo, lo + w);
        let a = sample_points(&d, n, seed).unwrap();
        prop_assert_eq!(&a, &sample_points(&d, n, seed).unwrap());
        prop_assert_eq!(a.len(), n);
        prop_assert!(a.iter().flatten().all(|x| *x >= lo && *x < lo + w));
        prop_assert_ne!(a, sample_points(&d, n, seed.wrapping_add(1)).unwrap());
    }

    #[test]
    fn json_round_trip(reports in prop::collection::vec(report(), 0..6)) {
        prop_assert_eq!(from_json(&to_json(&reports)).unwrap(), reports);
    }

    #[test]
    fn residual_pass_iff_below_tol(vals in prop::collection::vec(0.0f64..2.0, 1..30), tol in 1e-3f64..2.0) {
        let outs: Vec<Outcome> = vals.iter().map(|v| Outcome::Residual(*v)).collect();
        let r = aggregate(&SPEC, tol, &outs, None);
        let max = vals.iter().cloned().fold(0.0, f64::max);
        prop_assert_eq!(r.max_residual, max);
        prop_assert!(r.mean_residual <= r.max_residual * (1.0 + 1e-12));
        prop_assert_eq!(r.pass, max < tol);
        prop_assert_eq!(r.samples_used, vals.len());
    }

    #[test]
    fn iff_pass_iff_full_agreement(pairs in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..30)) {
        let tol = 0.5;
        let outs: Vec<Outcome> = pairs.iter().map(|&(d, c)| Outcome::Iff { direct: d, condition: c }).collect();
        let r = aggregate(&CheckSpec::new("prop.iff", "P iff Q", TolClass::Iff), tol, &outs, None);
        let agree = pairs.iter().all(|&(d, c)| (d < tol) == (c < tol));
        prop_assert_eq!(r.pass, agree);
    }

    #[test]
    fn parallel_map_keeps_order(n in 1usize..200, threads in 1usize..5) {
        let pts: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64]).collect();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let got = pool.install(|| map_points(&pts, |i, p| Ok(p[0] * 2.0 + i as f64))).unwrap();
        let want: Vec<f64> = (0..n).map(|i| 3.0 * i as f64).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn expressions_survive_printing(e in expr(), x in prop::collection::vec(-2.0f64..2.0, 3)) {
        let back = Expr::parse(&e.to_string()).unwrap();
        let (a, b) = (e.eval(&x), back.eval(&x));
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{} -> {}: {} vs {}", e, back, a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The model satisfies every ambient axiom for any deformation and signature.
    #[test]
    fn ambient_axioms_hold_for_any_lambda(n in 1usize..4, qf in 0.0f64..1.0, lambda in -2.0f64..2.0, seed in any::<u64>()) {
        let q = ((n + 1) as f64 * qf) as usize;
        let a = build_ambient(n, q, lambda).unwrap();
        for r in run_axioms(&a, 8, seed, &Tolerances::default()).unwrap() {
            prop_assert!(!r.is_failure(), "{:?}", r);
        }
    }

    /// SGL type and block dimensions do not depend on the deformation.
    #[test]
    fn classification_ignores_lambda(lambda in -2.0f64..2.0, seed in any::<u64>()) {
        let e = entry("example_3_2", &EntryParams { lambda, ..EntryParams::default() }).unwrap();
        let p = plan(&e.ambient, &e.immersion).unwrap();
        let pts = sample_points(&e.immersion.domain, 6, seed).unwrap();
        let c = classify_sgl(&e.ambient, &e.immersion, &p, &pts, &Tolerances::default()).unwrap();
        prop_assert!(c.sgl);
        prop_assert_eq!((c.r, c.e0_dim, c.e_prime_dim), (2, 2, 2));
    }

    /// The lemma splittings hold for any deformation.
    #[test]
    fn lemma_holds_for_any_lambda(lambda in -2.0f64..2.0, seed in any::<u64>()) {
        let e = entry("example_3_2", &EntryParams { lambda, ..EntryParams::default() }).unwrap();
        let p = plan(&e.ambient, &e.immersion).unwrap();
        let pts = sample_points(&e.immersion.domain, 5, seed).unwrap();
        for r in check_lemma(&e.ambient, &e.immersion, &p, &pts, seed, &Tolerances::default()).unwrap() {
            prop_assert!(!r.is_failure(), "{:?}", r);
        }
    }

    /// The pinned mapping is the SGL one and the alternative is not.
    #[test]
    fn mapping_switch_decides_sgl(alpha in 0.2f64..0.8, seed in any::<u64>()) {
        for (mapping, want) in [(Mapping::Interleaved, true), (Mapping::BasisOrder, false)] {
            let e = entry("example_3_2", &EntryParams { alpha, mapping, ..EntryParams::default() }).unwrap();
            let p = plan(&e.ambient, &e.immersion).unwrap();
            let pts = sample_points(&e.immersion.domain, 4, seed).unwrap();
            let c = classify_sgl(&e.ambient, &e.immersion, &p, &pts, &Tolerances::default()).unwrap();
            prop_assert_eq!(c.sgl, want, "alpha {}, {:?}", alpha, mapping);
        }
    }
}

#[test]
fn sgl_suite_reports_every_check_once() {
    let e = entry("example_3_2", &EntryParams::default()).unwrap();
    let p = plan(&e.ambient, &e.immersion).unwrap();
    let pts = sample_points(&e.immersion.domain, 3, 9).unwrap();
    let r = check_sgl(&e.ambient, &e.immersion, &p, &pts, 9, &Tolerances::default(), Some(&e.expected)).unwrap();
    let mut ids: Vec<&str> = r.iter().map(|r| r.check_id.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    assert_eq!(ids.len(), r.len());
}
