//! Central-difference cross-checks of every exactly differentiated quantity:
//! ambient metric, structure tensors, probe fields, immersion Jacobians,
//! frame jets and field jets along the immersion.

use crate::ambient::Ambient;
use crate::calculus::{directional, metric_derivatives};
use crate::error::Result;
use crate::fields::{MetricField, VectorField};
use crate::lightlike::relations::{random_combos, FD_STEP};
use crate::lightlike::{Block, Frame, FramePlan, Immersion, PointContext, TField};
use crate::linalg::Mat;
use crate::report::{aggregate_all, CheckSpec, Outcome, ResidualReport, TolClass, Tolerances};
use crate::sampling::{map_points, point_rng};
use crate::scalar::{lift, seed, Scalar};
use crate::statistical::probe_fields;
use rand::Rng;
use std::collections::BTreeMap;

/// Points used by the spot-check.
pub const SPOT_POINTS: usize = 10;

pub const AMBIENT_ORACLES: &[CheckSpec] = &[
    CheckSpec::new("oracle.metric", "∂g exact = central difference", TolClass::Mixed),
    CheckSpec::new("oracle.eta", "∂η exact = central difference", TolClass::Mixed),
    CheckSpec::new("oracle.phi", "∂φ exact = central difference", TolClass::Mixed),
    CheckSpec::new("oracle.k", "∂K(X,Y) exact = central difference", TolClass::Mixed),
    CheckSpec::new("oracle.probe_fields", "D_V X exact = central difference", TolClass::Mixed),
];

pub const SUBMANIFOLD_ORACLES: &[CheckSpec] = &[
    CheckSpec::new("oracle.jacobian", "∂X/∂u exact = central difference", TolClass::Mixed),
    CheckSpec::new("oracle.frame_jet", "∂ₖ frame exact = central difference", TolClass::Mixed),
    CheckSpec::new("oracle.field_jet", "∂ₖ of section, T- and w-fields exact = central difference", TolClass::Mixed),
    CheckSpec::new("oracle.pairing", "X ρ̃(Y,Z) exact = central difference", TolClass::Mixed),
];

const SALT: u64 = 71;

fn shifted(p: &[f64], k: usize, h: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    q[k] += h;
    q
}

/// Largest `|exact − (f(p + h eₖ) − f(p − h eₖ)) / 2h|` over `k` and components.
fn compare<F>(p: &[f64], exact: impl Fn(usize) -> Vec<f64>, f: F) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let mut worst = 0.0f64;
    for k in 0..p.len() {
        let up = f(&shifted(p, k, FD_STEP))?;
        let dn = f(&shifted(p, k, -FD_STEP))?;
        let ex = exact(k);
        for i in 0..ex.len() {
            worst = worst.max((ex[i] - (up[i] - dn[i]) / (2.0 * FD_STEP)).abs());
        }
    }
    Ok(worst)
}

fn unit(n: usize, k: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[k] = 1.0;
    e
}

fn flat(m: &Mat<f64>) -> Vec<f64> {
    m.data.clone()
}

fn eps_mat<S: Scalar>(m: &Mat<crate::scalar::Dual<S>>) -> Vec<S> {
    m.data.iter().map(|v| v.eps).collect()
}

fn ambient_row(a: &Ambient, p: &[f64], i: usize, seed_: u64) -> Result<Vec<Outcome>> {
    let d = a.dim();
    let gd = metric_derivatives(a, p);
    let metric = compare(p, |k| flat(&gd[k]), |q| Ok(flat(&MetricField::eval(a, q))))?;
    let mut out = vec![Outcome::Residual(metric)];
    if a.has_contact() {
        let eta = compare(
            p,
            |k| a.eta(&seed(p, &unit(d, k))).expect("contact").iter().map(|v| v.eps).collect(),
            |q| a.eta(q),
        )?;
        let phi = compare(p, |k| eps_mat(&a.phi(&seed(p, &unit(d, k))).expect("contact")), |q| Ok(flat(&a.phi(q)?)))?;
        out.push(Outcome::Residual(eta));
        out.push(Outcome::Residual(phi));
    } else {
        out.push(Outcome::Skip("no contact structure".into()));
        out.push(Outcome::Skip("no contact structure".into()));
    }
    let mut rng = point_rng(seed_, i, SALT);
    let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let y: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let k = compare(
        p,
        |l| a.k_apply(&seed(p, &unit(d, l)), &lift(&x), &lift(&y)).iter().map(|v| v.eps).collect(),
        |q| Ok(a.k_apply(q, &x, &y)),
    )?;
    out.push(Outcome::Residual(k));
    let probes = probe_fields(d, seed_, i, SALT, 2);
    let mut worst = 0.0f64;
    for f in &probes {
        worst = worst.max(compare(p, |l| directional(f, p, &unit(d, l)), |q| Ok(f.eval(q)))?);
    }
    out.push(Outcome::Residual(worst));
    Ok(out)
}

/// Oracles for the ambient structure on the first [`SPOT_POINTS`] samples.
pub fn check_ambient_oracles(
    a: &Ambient,
    samples: &[Vec<f64>],
    seed: u64,
    tols: &Tolerances,
) -> Result<Vec<ResidualReport>> {
    let pts = &samples[..samples.len().min(SPOT_POINTS)];
    let rows = map_points(pts, |i, p| ambient_row(a, p, i, seed))?;
    Ok(aggregate_all(AMBIENT_ORACLES, tols, &rows, &BTreeMap::new()))
}

fn submanifold_row(a: &Ambient, imm: &Immersion, plan: &FramePlan, u: &[f64], i: usize, seed: u64) -> Result<Vec<Outcome>> {
    let m = plan.m;
    let jac = imm.jacobian(u);
    let jres = compare(u, |k| jac.col(k), |q| Ok(imm.point(q)))?;
    let ctx = PointContext::new(a, imm, plan, u)?;
    let frame = compare(u, |k| flat(&ctx.frame_derivative(k)), |q| Ok(flat(&Frame::build(a, imm, &ctx.plan, q)?.f)))?;

    let combos = random_combos(seed, i, SALT, m, 2);
    let mut fields: Vec<TField> = combos.clone();
    fields.push(TField::project(&[Block::E0, Block::Rad, Block::Nu], combos[0].clone()));
    fields.push(TField::Basis(Block::Ltr, 0));
    if plan.contact {
        fields.push(TField::t_of(combos[1].clone()));
        fields.push(TField::w_of(combos[1].clone()));
    }
    let fields: Vec<TField> =
        fields.into_iter().filter(|t| !matches!(t, TField::Basis(Block::Ltr, _)) || plan.r > 0).collect();
    let mut jet = 0.0f64;
    for t in &fields {
        let j = ctx.jet(t);
        jet = jet.max(compare(u, |k| j.d[k].clone(), |q| Ok(t.eval(&ctx.plan, &Frame::build(a, imm, &ctx.plan, q)?)))?);
    }

    let (y, z) = (&combos[0], &combos[1]);
    let (jy, jz) = (ctx.jet(y), ctx.jet(z));
    let pairing = compare(
        u,
        |k| vec![ctx.derivative_of_pairing(&jac.col(k), &jy, &jz)],
        |q| {
            let f = Frame::build(a, imm, &ctx.plan, q)?;
            let (yv, zv) = (y.eval(&ctx.plan, &f), z.eval(&ctx.plan, &f));
            Ok(vec![crate::linalg::bilinear(&f.g, &yv, &zv)])
        },
    )?;
    Ok(vec![
        Outcome::Residual(jres),
        Outcome::Residual(frame),
        Outcome::Residual(jet),
        Outcome::Residual(pairing),
    ])
}

/// Oracles along the immersion on the first [`SPOT_POINTS`] parameter samples.
pub fn check_submanifold_oracles(
    a: &Ambient,
    imm: &Immersion,
    plan: &FramePlan,
    samples: &[Vec<f64>],
    seed: u64,
    tols: &Tolerances,
) -> Result<Vec<ResidualReport>> {
    let pts = &samples[..samples.len().min(SPOT_POINTS)];
    let rows = map_points(pts, |i, u| submanifold_row(a, imm, plan, u, i, seed))?;
    Ok(aggregate_all(SUBMANIFOLD_ORACLES, tols, &rows, &BTreeMap::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{entry, EntryParams, ENTRY_NAMES};
    use crate::lightlike::plan;
    use crate::sampling::{sample_points, Domain};

    #[test]
    fn ambient_oracles_agree() {
        let a = Ambient::sasakian(6, 3, 0.3).unwrap();
        let pts = sample_points(&Domain::cube(13, -1.0, 1.0), 12, 1).unwrap();
        for r in check_ambient_oracles(&a, &pts, 1, &Tolerances::default()).unwrap() {
            assert!(r.pass && r.samples_used == SPOT_POINTS, "{r:?}");
        }
    }

    #[test]
    fn submanifold_oracles_agree() {
        for name in ENTRY_NAMES {
            let e = entry(name, &EntryParams::default()).unwrap();
            let p = plan(&e.ambient, &e.immersion).unwrap();
            let pts = sample_points(&e.immersion.domain, 4, 2).unwrap();
            for r in check_submanifold_oracles(&e.ambient, &e.immersion, &p, &pts, 2, &Tolerances::default()).unwrap() {
                assert!(r.pass, "{name}: {r:?}");
            }
        }
    }

    #[test]
    fn oracle_detects_a_wrong_derivative() {
        let p = [0.3, -0.2];
        let r = compare(&p, |_| vec![1.0], |q| Ok(vec![q[0] * q[0] + q[1]])).unwrap();
        // ∂₀ = 0.6, ∂₁ = 1
        assert!((r - 0.4).abs() < 1e-8, "{r}");
    }
}
