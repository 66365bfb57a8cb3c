//! SGL classification, the projections `P₀, P₁, Q` and the `T, w, B, C`
//! splits of φ.

pub mod theorems;

use crate::ambient::Ambient;
use crate::catalog::Expected;
use crate::error::Result;
use crate::lightlike::relations::{ensure_constant_rank, random_combos};
use crate::ambient::Conn;
use crate::lightlike::frame::TANGENT;
use crate::lightlike::point::{add_scaled, sub};
use crate::lightlike::{Block, FramePlan, Gauge, Immersion, PointContext};
use crate::linalg::{condition_number, norm, Mat};
use crate::report::{aggregate_all, CheckSpec, Outcome, ResidualReport, TolClass, Tolerances};
use crate::sampling::map_points;
use std::collections::BTreeMap;

pub const SGL_CHECKS: &[CheckSpec] = &[
    CheckSpec::new("sgl.radical_invariant", "φ(Rad TN) = Rad TN", TolClass::Mixed),
    CheckSpec::new("sgl.e0_nondegenerate", "cond ρ̃|E₀", TolClass::Cond),
    CheckSpec::new("sgl.e0_invariant", "φ(E₀) = E₀", TolClass::Mixed),
    CheckSpec::new("sgl.nu_tangent", "ν ∈ Γ(TN)", TolClass::Mixed),
    CheckSpec::new("sgl.projection_reconstruction", "X = P₀X + P₁X + QX + η(X)ν", TolClass::Exact),
    CheckSpec::new("sgl.phi_split", "φX = TX + wX", TolClass::Exact),
    CheckSpec::new("sgl.bc_split", "φV = BV + CV", TolClass::Exact),
    CheckSpec::new("sgl.w_on_e", "wX = 0 for X ∈ Γ(E)", TolClass::Mixed),
    CheckSpec::new("sgl.t_squared", "T²X = −X + η(X)ν for X ∈ Γ(E ⊥ ν)", TolClass::Mixed),
    CheckSpec::new("sgl.eprime_t", "TY ∈ Γ(E′), wY ∈ Γ(S(TN⊥)) for Y ∈ Γ(E′)", TolClass::Mixed),
    CheckSpec::info("sgl.eprime_not_invariant", "‖wY‖ for Y ∈ Γ(E′)", TolClass::Mixed),
    CheckSpec::new("sgl.classification", "radical φ-invariant and E₀ nondegenerate", TolClass::Exact),
    CheckSpec::new("catalog.expected", "classification matches the catalogue", TolClass::Exact),
];

const SALT: u64 = 51;
const E_BLOCKS: &[Block] = &[Block::E0, Block::Rad];
const E_NU_BLOCKS: &[Block] = &[Block::E0, Block::Rad, Block::Nu];

/// Largest `cond ρ̃|E₀` still counted as nondegenerate.
pub const E0_COND_MAX: f64 = 1e6;

/// Classification record over a sample set.
#[derive(Clone, Debug, PartialEq)]
pub struct SglClass {
    pub contact: bool,
    pub radical_invariant: bool,
    pub e0_nondegenerate: bool,
    pub nu_tangent: bool,
    /// `E′ = 0`, the invariant case.
    pub e_prime_trivial: bool,
    /// `w(E′) ⊂ S(TN⊥)` is nonzero somewhere.
    pub w_nontrivial: bool,
    pub r: usize,
    pub e0_dim: usize,
    pub e_prime_dim: usize,
    pub sgl: bool,
}

impl SglClass {
    pub fn note(&self) -> String {
        format!(
            "sgl = {}; radical_invariant = {}; e0_nondegenerate = {}; nu_tangent = {}; r = {}, E0 = {}, E' = {}",
            self.sgl, self.radical_invariant, self.e0_nondegenerate, self.nu_tangent, self.r, self.e0_dim, self.e_prime_dim
        )
    }
}

/// Per-point classification measures.
#[derive(Clone, Debug, Default)]
struct Measures {
    rad_inv: f64,
    e0_cond: f64,
    e0_inv: f64,
    nu_tan: f64,
    w_eprime: f64,
}

fn measures(ctx: &PointContext) -> Measures {
    let outside = |v: &[f64], keep: &[Block]| norm(&sub(v, &ctx.part(v, keep)));
    let rad_inv = max_of(ctx.basis(Block::Rad).iter().map(|xi| outside(&ctx.phi(xi), &[Block::Rad])));
    let e0 = ctx.basis(Block::E0);
    let gram = Mat::from_fn(e0.len(), e0.len(), |a, b| ctx.g(&e0[a], &e0[b]));
    let e0_inv = max_of(e0.iter().map(|e| outside(&ctx.phi(e), &[Block::E0])));
    let nu = ctx.nu();
    let nu_tan = outside(&nu, TANGENT);
    let w_eprime = max_of(ctx.basis(Block::EPrime).iter().map(|y| norm(&ctx.tr_phi(y))));
    Measures { rad_inv, e0_cond: condition_number(&gram), e0_inv, nu_tan, w_eprime }
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::NAN } else { m.max(v) })
}

/// Whether the theorem suites apply, and why not otherwise.
pub fn sgl_precondition(plan: &FramePlan) -> Option<&'static str> {
    if !plan.contact {
        Some("no contact structure")
    } else if !plan.nu_tangent {
        Some("ν is not tangent")
    } else if !plan.radical_invariant || plan.gauge != Gauge::PhiAdapted {
        Some("not SGL: radical distribution is not φ-invariant")
    } else {
        None
    }
}

pub fn classify_sgl(
    a: &Ambient,
    imm: &Immersion,
    plan: &FramePlan,
    samples: &[Vec<f64>],
    tols: &Tolerances,
) -> Result<SglClass> {
    ensure_constant_rank(a, imm, plan, samples)?;
    let tol = tols.for_check(&SGL_CHECKS[0]);
    let ms = if plan.contact {
        map_points(samples, |_, u| Ok(measures(&PointContext::new(a, imm, plan, u)?)))?
    } else {
        Vec::new()
    };
    let worst = |f: fn(&Measures) -> f64| max_of(ms.iter().map(f));
    let contact = plan.contact;
    let radical_invariant = contact && worst(|m| m.rad_inv) < tol;
    let e0_nondegenerate = contact && worst(|m| m.e0_cond) < E0_COND_MAX;
    let e_prime_dim = plan.dim(Block::EPrime);
    Ok(SglClass {
        contact,
        radical_invariant,
        e0_nondegenerate,
        nu_tangent: contact && worst(|m| m.nu_tan) < tol,
        e_prime_trivial: e_prime_dim == 0,
        w_nontrivial: contact && worst(|m| m.w_eprime) >= tol,
        r: plan.r,
        e0_dim: plan.dim(Block::E0),
        e_prime_dim,
        sgl: radical_invariant && e0_nondegenerate,
    })
}

/// `(P₀X, P₁X, QX, η(X))`.
pub fn decompose_tangent(ctx: &PointContext, x: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>, f64) {
    (ctx.part(x, &[Block::E0]), ctx.part(x, &[Block::Rad]), ctx.part(x, &[Block::EPrime]), ctx.eta(x))
}

fn sgl_row(ctx: &PointContext, i: usize, seed: u64, tol: f64, expected: Option<&Expected>, plan_r: usize) -> Vec<Outcome> {
    let plan = &ctx.plan;
    let m = measures(ctx);
    let combos = random_combos(seed, i, SALT, plan.m, 3);
    let xs: Vec<Vec<f64>> = combos.iter().map(|t| ctx.value(t)).collect();
    let nu = ctx.nu();
    let mut out = vec![
        Outcome::Residual(m.rad_inv),
        Outcome::Residual(m.e0_cond),
        Outcome::Residual(m.e0_inv),
        Outcome::Residual(m.nu_tan),
    ];
    out.push(Outcome::Residual(max_of(xs.iter().map(|x| {
        let (p0, p1, q, e) = decompose_tangent(ctx, x);
        let sum: Vec<f64> = (0..x.len()).map(|k| p0[k] + p1[k] + q[k] + e * nu[k]).collect();
        norm(&sub(x, &sum))
    }))));
    out.push(Outcome::Residual(max_of(xs.iter().map(|x| {
        let fx = ctx.phi(x);
        norm(&sub(&sub(&fx, &ctx.t(x)), &ctx.tr_phi(x)))
    }))));
    let trans: Vec<Vec<f64>> = [Block::Ltr, Block::W].iter().flat_map(|&b| ctx.basis(b)).collect();
    out.push(Outcome::Residual(max_of(trans.iter().map(|v| {
        let fv = ctx.phi(v);
        norm(&sub(&sub(&fv, &ctx.part(&fv, TANGENT)), &ctx.part(&fv, &[Block::Ltr, Block::W])))
    }))));
    let e_vecs: Vec<Vec<f64>> = E_BLOCKS.iter().flat_map(|&b| ctx.basis(b)).collect();
    out.push(Outcome::Residual(max_of(e_vecs.iter().map(|x| norm(&ctx.tr_phi(x))))));
    let e_nu: Vec<Vec<f64>> = E_NU_BLOCKS.iter().flat_map(|&b| ctx.basis(b)).collect();
    out.push(Outcome::Residual(max_of(e_nu.iter().map(|x| {
        let tt = ctx.t(&ctx.t(x));
        norm(&add_scaled(&add_scaled(&tt, 1.0, x), -ctx.eta(x), &nu))
    }))));
    let eprime = ctx.basis(Block::EPrime);
    if eprime.is_empty() {
        out.push(Outcome::Skip("E' = 0".into()));
        out.push(Outcome::Skip("E' = 0".into()));
    } else {
        out.push(Outcome::Residual(max_of(eprime.iter().map(|y| {
            let ty = ctx.t(y);
            norm(&sub(&ty, &ctx.part(&ty, &[Block::EPrime]))) + norm(&ctx.part(&ctx.tr_phi(y), &[Block::Ltr]))
        }))));
        out.push(Outcome::Residual(m.w_eprime));
    }
    let sgl_here = m.rad_inv < tol && m.e0_cond < E0_COND_MAX;
    out.push(Outcome::Residual(if sgl_here { 0.0 } else { 1.0 }));
    out.push(match expected {
        None => Outcome::Skip("no catalogue expectation".into()),
        Some(e) => {
            let mut miss = 0usize;
            miss += e.r.is_some_and(|r| r != plan_r) as usize;
            miss += e.sgl.is_some_and(|s| s != sgl_here) as usize;
            miss += e.e_prime.is_some_and(|d| d != plan.dim(Block::EPrime)) as usize;
            if e.totally_geodesic {
                let jets: Vec<_> = combos.iter().map(|t| ctx.jet(t)).collect();
                let h = max_of(xs.iter().flat_map(|x| jets.iter().map(|y| norm(&ctx.gauss(Conn::Qs, x, y).normal()))));
                miss += (h >= tol) as usize;
            }
            Outcome::Residual(miss as f64)
        }
    });
    out
}

/// Run the SGL suite. `expected` comes from the catalogue, if any.
pub fn check_sgl(
    a: &Ambient,
    imm: &Immersion,
    plan: &FramePlan,
    samples: &[Vec<f64>],
    seed: u64,
    tols: &Tolerances,
    expected: Option<&Expected>,
) -> Result<Vec<ResidualReport>> {
    ensure_constant_rank(a, imm, plan, samples)?;
    let tol = tols.for_check(&SGL_CHECKS[0]);
    let mut extra: BTreeMap<&'static str, String> = BTreeMap::new();
    let rows: Vec<Vec<Outcome>> = if !plan.contact {
        let r_ok = expected.and_then(|e| e.r).is_none_or(|r| r == plan.r);
        samples
            .iter()
            .map(|_| {
                let mut row: Vec<Outcome> =
                    SGL_CHECKS[..SGL_CHECKS.len() - 1].iter().map(|_| Outcome::Skip("no contact structure".into())).collect();
                row.push(match expected {
                    None => Outcome::Skip("no catalogue expectation".into()),
                    Some(e) => Outcome::Residual((!r_ok) as usize as f64 + e.sgl.is_some_and(|s| s) as usize as f64),
                });
                row
            })
            .collect()
    } else {
        let class = classify_sgl(a, imm, plan, samples, tols)?;
        extra.insert("sgl.classification", class.note());
        map_points(samples, |i, u| {
            let ctx = PointContext::new(a, imm, plan, u)?;
            Ok(sgl_row(&ctx, i, seed, tol, expected, plan.r))
        })?
    };
    extra.insert("catalog.expected", format!("r = {}; {}", plan.r, plan.dims_note()));
    Ok(aggregate_all(SGL_CHECKS, tols, &rows, &extra))
}
