//! Integrability, parallelism and geodesicity of the SGL distributions, and
//! the split identities for `φ` along the submanifold.
//!
//! Sections of a distribution are frame projections of random constant
//! combinations of coordinate fields. Equivalences are checked as agreement
//! of the vanishing of a direct measure and of the stated condition.

use super::sgl_precondition;
use crate::ambient::{Ambient, Conn};
use crate::error::Result;
use crate::lightlike::frame::{SCREEN, TANGENT};
use crate::lightlike::point::{add_scaled, sub};
use crate::lightlike::relations::{ensure_constant_rank, random_combos};
use crate::lightlike::{Block, FieldJet, FramePlan, Immersion, PointContext, Split, TField};
use crate::linalg::norm;
use crate::report::{aggregate_all, CheckSpec, Outcome, ResidualReport, TolClass, Tolerances};
use crate::sampling::map_points;
use std::collections::BTreeMap;

const E0: &[Block] = &[Block::E0];
const E0_NU: &[Block] = &[Block::E0, Block::Nu];
const E: &[Block] = &[Block::E0, Block::Rad];
const E_NU: &[Block] = &[Block::E0, Block::Rad, Block::Nu];
const EP: &[Block] = &[Block::EPrime];
const EP_NU: &[Block] = &[Block::EPrime, Block::Nu];
const E0_RAD: &[Block] = &[Block::E0, Block::Rad];

/// Sections drawn per distribution.
const SECTIONS: usize = 3;

pub const INTEGRABILITY_CHECKS: &[CheckSpec] = &[
    CheckSpec::new(
        "thm.e0_integrable",
        "E₀ integrable iff 2ρ̃(Y,φX) = η(D̃_X ν)η(Y) − η(D̃_Y ν)η(X)",
        TolClass::Iff,
    ),
    CheckSpec::new(
        "thm.e0_nu_integrable",
        "E₀⊥ν integrable iff ρ̃(D′_X φY − D′_Y φX, TZ) = ρ̃(h̃^s(Y,φX) − h̃^s(X,φY), wZ) and ρ̃(h̃′(X,φY) − h̃′(Y,φX), φN′) = 0",
        TolClass::Iff,
    ),
    CheckSpec::new("thm.e_not_integrable", "E not integrable: ρ̃([X,Y],ν) = 2ρ̃(Y,φX) − …", TolClass::Iff),
    CheckSpec::new(
        "thm.e_nu_integrable",
        "E⊥ν integrable iff ρ̃(D′_X φY − D′_Y φX, TZ) = ρ̃(h̃^s(Y,φX) − h̃^s(X,φY), wZ)",
        TolClass::Iff,
    ),
    CheckSpec::new(
        "thm.eprime_integrable",
        "E′ integrable iff 2ρ̃(Y,φX) = η(D̃_X ν)η(Y) − η(D̃_Y ν)η(X)",
        TolClass::Iff,
    ),
    CheckSpec::new(
        "thm.eprime_nu_integrable",
        "E′⊥ν integrable iff D_Y TZ − D_Z TY − Ã_wZ Y + Ã_wY Z has no E₀, Rad component",
        TolClass::Iff,
    ),
];

pub const PARALLELISM_CHECKS: &[CheckSpec] = &[
    CheckSpec::new("thm.e_not_parallel", "E not parallel: ρ̃(D_X Y, ν) = ρ̃(Y,φX)", TolClass::Iff),
    CheckSpec::new(
        "thm.e_nu_parallel",
        "E⊥ν parallel iff ρ̃(D_X TZ, φY) = ρ̃(φY, Ã_wZ X) and h̃^l(X,TZ) = −D̃^l(X,wZ)",
        TolClass::Iff,
    ),
    CheckSpec::new("thm.eprime_not_parallel", "E′ not parallel: ρ̃(D_Y Z, ν) = ρ̃(Z,φY)", TolClass::Iff),
    CheckSpec::new(
        "thm.eprime_nu_parallel",
        "E′⊥ν parallel iff D′_Y TZ − Ã_wZ Y has no E₀, Rad component",
        TolClass::Iff,
    ),
];

pub const GEODESIC_CHECKS: &[CheckSpec] = &[
    CheckSpec::new("geo.foliation_rad", "ρ̃(D̃_X Y, ξ) = ρ̃(h̃^l(X,Y), ξ)", TolClass::Mixed),
    CheckSpec::new("geo.foliation_w", "ρ̃(D̃_X Y, W) = ρ̃(h̃^s(X,Y), W)", TolClass::Mixed),
    CheckSpec::new("geo.foliation_screen", "ρ̃(D̃_X Y, Z) = ρ̃(D_X Y, Z)", TolClass::Mixed),
    CheckSpec::new(
        "thm.e_nu_foliation",
        "E⊥ν totally geodesic foliation iff E⊥ν-geodesic and D-parallel",
        TolClass::Iff,
    ),
    CheckSpec::new(
        "thm.mixed_geodesic_1",
        "mixed geodesic iff h̃^l(X,TZ) = −D̃^l(X,wZ) and ρ̃(Ã_wZ X − D_X TZ, BW) = ρ̃(h̃^s(X,TZ) + ∇̃^s_X wZ, CW)",
        TolClass::Iff,
    ),
    CheckSpec::new(
        "thm.mixed_geodesic_2",
        "mixed geodesic iff h̃^l(X,TZ) = −D̃^l(X,wZ) and w(Ã_wZ X − D_X TZ) = C(h̃^s(X,TZ) + ∇̃^s_X wZ)",
        TolClass::Iff,
    ),
    CheckSpec::info("geo.e_geodesic", "h̃(X,Y) for X, Y ∈ Γ(E)", TolClass::Mixed),
];

pub const LEMMA_CHECKS: &[CheckSpec] = &[
    CheckSpec::new(
        "lemma.tangential",
        "D_X TY − Ã_wY X = T D_X Y + B h̃^s(X,Y) − η(Y)X + ρ(X,Y)ν",
        TolClass::Mixed,
    ),
    CheckSpec::new("lemma.ltr", "h̃^l(X,TY) + D̃^l(X,wY) = C h̃^l(X,Y)", TolClass::Mixed),
    CheckSpec::new(
        "lemma.screen_transversal",
        "h̃^s(X,TY) + ∇̃^s_X wY = w D_X Y + C h̃^s(X,Y)",
        TolClass::Mixed,
    ),
    CheckSpec::new(
        "lemma.final_tangential",
        "D_X Z = −T D_X TZ + T Ã_wZ X − B h̃^s(X,TZ) − B ∇̃^s_X wZ + η(Z)φX + η(D_X Z)ν",
        TolClass::Mixed,
    ),
];

const SALT: u64 = 61;

/// Section fields of one distribution at one point.
struct Sec {
    t: TField,
    j: FieldJet,
}

struct Env<'c, 'a> {
    ctx: &'c PointContext<'a>,
    nu: FieldJet,
    seed: u64,
    index: usize,
    specs: &'static [CheckSpec],
    tols: &'c Tolerances,
}

impl<'c, 'a> Env<'c, 'a> {
    fn new(ctx: &'c PointContext<'a>, seed: u64, index: usize, specs: &'static [CheckSpec], tols: &'c Tolerances) -> Self {
        Env { nu: ctx.jet(&TField::Nu), ctx, seed, index, specs, tols }
    }

    fn tol(&self, id: &str) -> f64 {
        let spec = self.specs.iter().find(|s| s.id == id).expect("known check id");
        self.tols.for_check(spec)
    }

    fn dim(&self, dist: &[Block]) -> usize {
        dist.iter().map(|&b| self.ctx.plan.dim(b)).sum()
    }

    /// Sections of `dist`, salted so that distinct uses draw distinct fields.
    fn sections(&self, dist: &[Block], salt: u64) -> Vec<Sec> {
        random_combos(self.seed, self.index, SALT + salt, self.ctx.plan.m, SECTIONS)
            .into_iter()
            .map(|c| {
                let t = TField::project(dist, c);
                Sec { j: self.ctx.jet(&t), t }
            })
            .collect()
    }

    fn jet(&self, t: TField) -> FieldJet {
        self.ctx.jet(&t)
    }

    /// Gauss splitting of `D̃_X Y`.
    fn d(&self, x: &[f64], y: &FieldJet) -> Split {
        self.ctx.gauss(Conn::Qs, x, y)
    }

    /// `Ã_V X`.
    fn a(&self, v: &FieldJet, x: &[f64]) -> Vec<f64> {
        self.ctx.shape(Conn::Qs, x, v)
    }

    /// Size of the tangent component of `v` outside `dist`.
    fn outside(&self, v: &[f64], dist: &[Block]) -> f64 {
        let rest: Vec<Block> = TANGENT.iter().copied().filter(|b| !dist.contains(b)).collect();
        norm(&self.ctx.part(v, &rest))
    }

    /// `2ρ̃(Y,φX) − η(D̃_X ν)η(Y) + η(D̃_Y ν)η(X)`.
    fn nu_expr(&self, x: &[f64], y: &[f64]) -> f64 {
        let c = self.ctx;
        let dxn = c.conn(Conn::Qs, x, &self.nu);
        let dyn_ = c.conn(Conn::Qs, y, &self.nu);
        2.0 * c.g(y, &c.phi(x)) - c.eta(&dxn) * c.eta(y) + c.eta(&dyn_) * c.eta(x)
    }

    /// Unordered pairs of distinct sections.
    fn pairs<'s>(&self, s: &'s [Sec]) -> Vec<(&'s Sec, &'s Sec)> {
        (0..s.len()).flat_map(|a| (a + 1..s.len()).map(move |b| (a, b))).map(|(a, b)| (&s[a], &s[b])).collect()
    }

    /// Ordered pairs, diagonal included.
    fn ordered<'s>(&self, s: &'s [Sec], t: &'s [Sec]) -> Vec<(&'s Sec, &'s Sec)> {
        s.iter().flat_map(|a| t.iter().map(move |b| (a, b))).collect()
    }

    fn basis_fields(&self, b: Block) -> Vec<Sec> {
        (0..self.ctx.plan.dim(b))
            .map(|k| {
                let t = TField::Basis(b, k);
                Sec { j: self.ctx.jet(&t), t }
            })
            .collect()
    }
}

/// One outcome from per-pair `(direct, condition)` magnitudes: the first
/// disagreeing pair if any, else the maxima.
fn iff(pairs: impl IntoIterator<Item = (f64, f64)>, tol: f64) -> Outcome {
    let (mut dm, mut cm) = (0.0f64, 0.0f64);
    for (d, c) in pairs {
        if (d < tol) != (c < tol) {
            return Outcome::Iff { direct: d, condition: c };
        }
        dm = dm.max(d);
        cm = cm.max(c);
    }
    Outcome::Iff { direct: dm, condition: cm }
}

fn insufficient(dist: &[Block]) -> Outcome {
    let names: Vec<&str> = dist.iter().map(|b| b.name()).collect();
    Outcome::Skip(format!("insufficient rank: {} has fewer than 2 independent sections", names.join("+")))
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::NAN } else { m.max(v) })
}

/// The `Z ∈ E′` and `N′ ∈ ltr` conditions shared by the E₀⊥ν and E⊥ν
/// theorems, for one pair `X, Y`.
fn screen_bracket_conditions(env: &Env, x: &Sec, y: &Sec, with_ltr: bool) -> f64 {
    let c = env.ctx;
    let dxfy = env.d(&x.j.val, &env.jet(TField::phi(y.t.clone())));
    let dyfx = env.d(&y.j.val, &env.jet(TField::phi(x.t.clone())));
    let dscreen = sub(&c.part(&dxfy.tan, SCREEN), &c.part(&dyfx.tan, SCREEN));
    let hs = sub(&dyfx.str, &dxfy.str);
    let mut worst = max_of(c.basis(Block::EPrime).iter().map(|z| (c.g(&dscreen, &c.t(z)) - c.g(&hs, &c.tr_phi(z))).abs()));
    if with_ltr {
        let hp = sub(&c.part(&dxfy.tan, &[Block::Rad]), &c.part(&dyfx.tan, &[Block::Rad]));
        worst = worst.max(max_of(c.basis(Block::Ltr).iter().map(|n| c.g(&hp, &c.phi(n)).abs())));
    }
    worst
}

fn integrability_row(env: &Env) -> Vec<Outcome> {
    let c = env.ctx;
    let mut out = Vec::new();
    let bracket = |x: &Sec, y: &Sec| c.bracket(&x.j, &y.j);

    // E₀, E, E′: the ν-component condition
    let nu_thm = |dist: &[Block], salt: u64, id: &str| -> Outcome {
        if env.dim(dist) < 2 {
            return insufficient(dist);
        }
        let s = env.sections(dist, salt);
        iff(env.pairs(&s).into_iter().map(|(x, y)| (env.outside(&bracket(x, y), dist), env.nu_expr(&x.j.val, &y.j.val).abs())), env.tol(id))
    };

    out.push(nu_thm(E0, 0, "thm.e0_integrable"));
    out.push(if env.dim(E0) < 2 {
        insufficient(E0)
    } else {
        let s = env.sections(E0, 1);
        iff(
            env.pairs(&s).into_iter().map(|(x, y)| (env.outside(&bracket(x, y), E0_NU), screen_bracket_conditions(env, x, y, true))),
            env.tol("thm.e0_nu_integrable"),
        )
    });
    out.push(nu_thm(E, 2, "thm.e_not_integrable"));
    out.push(if env.dim(E) < 2 {
        insufficient(E)
    } else {
        let s = env.sections(E, 3);
        iff(
            env.pairs(&s).into_iter().map(|(x, y)| (env.outside(&bracket(x, y), E_NU), screen_bracket_conditions(env, x, y, false))),
            env.tol("thm.e_nu_integrable"),
        )
    });
    out.push(nu_thm(EP, 4, "thm.eprime_integrable"));
    out.push(if env.dim(EP_NU) < 2 {
        insufficient(EP_NU)
    } else {
        let s = env.sections(EP_NU, 5);
        iff(
            env.pairs(&s).into_iter().map(|(y, z)| {
                let (ty, tz) = (env.jet(TField::t_of(y.t.clone())), env.jet(TField::t_of(z.t.clone())));
                let (wy, wz) = (env.jet(TField::w_of(y.t.clone())), env.jet(TField::w_of(z.t.clone())));
                let v = sub(&env.d(&y.j.val, &tz).tan, &env.d(&z.j.val, &ty).tan);
                let v = sub(&v, &env.a(&wz, &y.j.val));
                let v = add_scaled(&v, 1.0, &env.a(&wy, &z.j.val));
                (env.outside(&bracket(y, z), EP_NU), norm(&c.part(&v, E0_RAD)))
            }),
            env.tol("thm.eprime_nu_integrable"),
        )
    });
    out
}

fn parallelism_row(env: &Env) -> Vec<Outcome> {
    let c = env.ctx;
    let mut out = Vec::new();
    let not_parallel = |dist: &[Block], salt: u64, id: &str| -> Outcome {
        if env.dim(dist) < 2 {
            return insufficient(dist);
        }
        let s = env.sections(dist, salt);
        iff(
            env.ordered(&s, &s).into_iter().map(|(x, y)| {
                (env.outside(&env.d(&x.j.val, &y.j).tan, dist), c.g(&y.j.val, &c.phi(&x.j.val)).abs())
            }),
            env.tol(id),
        )
    };
    out.push(not_parallel(E, 10, "thm.e_not_parallel"));
    out.push(if env.dim(E_NU) < 2 {
        insufficient(E_NU)
    } else {
        let s = env.sections(E_NU, 11);
        let zs = env.basis_fields(Block::EPrime);
        let tw: Vec<(FieldJet, FieldJet)> =
            zs.iter().map(|z| (env.jet(TField::t_of(z.t.clone())), env.jet(TField::w_of(z.t.clone())))).collect();
        iff(
            env.ordered(&s, &s).into_iter().map(|(x, y)| {
                let direct = env.outside(&env.d(&x.j.val, &y.j).tan, E_NU);
                let fy = c.phi(&y.j.val);
                let cond = max_of(tw.iter().map(|(tz, wz)| {
                    let dtz = env.d(&x.j.val, tz);
                    let c1 = (c.g(&dtz.tan, &fy) - c.g(&fy, &env.a(wz, &x.j.val))).abs();
                    let c2 = norm(&add_scaled(&dtz.ltr, 1.0, &env.d(&x.j.val, wz).ltr));
                    c1.max(c2)
                }));
                (direct, cond)
            }),
            env.tol("thm.e_nu_parallel"),
        )
    });
    out.push(not_parallel(EP, 12, "thm.eprime_not_parallel"));
    out.push(if env.dim(EP_NU) < 2 {
        insufficient(EP_NU)
    } else {
        let s = env.sections(EP_NU, 13);
        iff(
            env.ordered(&s, &s).into_iter().map(|(y, z)| {
                let direct = env.outside(&env.d(&y.j.val, &z.j).tan, EP_NU);
                let tz = env.jet(TField::t_of(z.t.clone()));
                let wz = env.jet(TField::w_of(z.t.clone()));
                let dprime = c.part(&env.d(&y.j.val, &tz).tan, SCREEN);
                let v = sub(&dprime, &env.a(&wz, &y.j.val));
                (direct, norm(&c.part(&v, E0_RAD)))
            }),
            env.tol("thm.eprime_nu_parallel"),
        )
    });
    out
}

/// Condition (1) of both mixed-geodesic theorems: `‖h̃^l(X,TZ) + D̃^l(X,wZ)‖`.
fn mixed_condition_1(env: &Env, x: &[f64], tz: &FieldJet, wz: &FieldJet) -> f64 {
    norm(&add_scaled(&env.d(x, tz).ltr, 1.0, &env.d(x, wz).ltr))
}

/// Condition (2) of the first mixed-geodesic theorem for one `W`:
/// `ρ̃(Ã_wZ X − D_X TZ, BW) − ρ̃(h̃^s(X,TZ) + ∇̃^s_X wZ, CW)`.
///
/// `hs_shift` is added to `h̃^s(X,TZ)`, for perturbation controls.
pub fn mixed_condition_2(ctx: &PointContext, x: &[f64], z: &TField, w: &[f64], hs_shift: &[f64]) -> f64 {
    let tz = ctx.jet(&TField::t_of(z.clone()));
    let wz = ctx.jet(&TField::w_of(z.clone()));
    let dtz = ctx.gauss(Conn::Qs, x, &tz);
    let dwz = ctx.gauss(Conn::Qs, x, &wz);
    let a_wz: Vec<f64> = dwz.tan.iter().map(|v| -v).collect();
    let lhs = ctx.g(&sub(&a_wz, &dtz.tan), &ctx.t(w));
    let hs = add_scaled(&add_scaled(&dtz.str, 1.0, hs_shift), 1.0, &dwz.str);
    lhs - ctx.g(&hs, &ctx.tr_phi(w))
}

fn geodesic_row(env: &Env) -> Vec<Outcome> {
    let c = env.ctx;
    let mut out = Vec::new();
    let rad = c.basis(Block::Rad);
    let ws = c.basis(Block::W);
    let zs = c.basis(Block::EPrime);
    if env.dim(E_NU) < 2 {
        out.extend((0..4).map(|_| insufficient(E_NU)));
    } else {
        let s = env.sections(E_NU, 20);
        let (mut fr, mut fw, mut fs) = (0.0f64, 0.0f64, 0.0f64);
        let mut pairs = Vec::new();
        for (x, y) in env.ordered(&s, &s) {
            let full = c.conn(Conn::Qs, &x.j.val, &y.j);
            let sp = c.split(&full);
            let mut direct = 0.0f64;
            for xi in &rad {
                fr = fr.max((c.g(&full, xi) - c.g(&sp.ltr, xi)).abs());
                direct = direct.max(c.g(&full, xi).abs());
            }
            for w in &ws {
                fw = fw.max((c.g(&full, w) - c.g(&sp.str, w)).abs());
                direct = direct.max(c.g(&full, w).abs());
            }
            for z in &zs {
                fs = fs.max((c.g(&full, z) - c.g(&sp.tan, z)).abs());
                direct = direct.max(c.g(&full, z).abs());
            }
            let cond = norm(&sp.ltr).max(norm(&sp.str)).max(env.outside(&sp.tan, E_NU));
            pairs.push((direct, cond));
        }
        out.extend([fr, fw, fs].map(Outcome::Residual));
        out.push(iff(pairs, env.tol("thm.e_nu_foliation")));
    }
    if env.dim(E) < 2 || env.dim(EP_NU) < 2 {
        let d = if env.dim(E) < 2 { E } else { EP_NU };
        out.push(insufficient(d));
        out.push(insufficient(d));
    } else {
        let xs = env.sections(E, 21);
        let zs = env.sections(EP_NU, 22);
        let (mut p1, mut p2) = (Vec::new(), Vec::new());
        for (x, z) in env.ordered(&xs, &zs) {
            let direct = norm(&env.d(&x.j.val, &z.j).normal());
            let tz = env.jet(TField::t_of(z.t.clone()));
            let wz = env.jet(TField::w_of(z.t.clone()));
            let c1 = mixed_condition_1(env, &x.j.val, &tz, &wz);
            let zero = vec![0.0; c.plan.d];
            let c2 = max_of(ws.iter().map(|w| mixed_condition_2(c, &x.j.val, &z.t, w, &zero).abs()));
            let dtz = env.d(&x.j.val, &tz);
            let dwz = env.d(&x.j.val, &wz);
            let lhs = c.tr_phi(&sub(&env.a(&wz, &x.j.val), &dtz.tan));
            let rhs = c.tr_phi(&add_scaled(&dtz.str, 1.0, &dwz.str));
            let c3 = norm(&sub(&lhs, &rhs));
            p1.push((direct, c1.max(c2)));
            p2.push((direct, c1.max(c3)));
        }
        out.push(iff(p1, env.tol("thm.mixed_geodesic_1")));
        out.push(iff(p2, env.tol("thm.mixed_geodesic_2")));
    }
    out.push(if env.dim(E) < 1 {
        insufficient(E)
    } else {
        let s = env.sections(E, 23);
        Outcome::Residual(max_of(env.ordered(&s, &s).into_iter().map(|(x, y)| norm(&env.d(&x.j.val, &y.j).normal()))))
    });
    out
}

/// The three split residuals for one pair `X, Y`.
pub fn lemma_residuals(ctx: &PointContext, x: &[f64], y: &TField) -> [f64; 3] {
    let c = ctx;
    let yj = c.jet(y);
    let ty = c.jet(&TField::t_of(y.clone()));
    let wy = c.jet(&TField::w_of(y.clone()));
    let dy = c.gauss(Conn::Qs, x, &yj);
    let dty = c.gauss(Conn::Qs, x, &ty);
    let dwy = c.gauss(Conn::Qs, x, &wy);
    let a_wy: Vec<f64> = dwy.tan.iter().map(|v| -v).collect();
    let nu = c.nu();
    // D_X TY − Ã_wY X − T D_X Y − B h̃^s + η(Y)X − ρ(X,Y)ν
    let mut t = sub(&dty.tan, &a_wy);
    t = sub(&t, &c.t(&dy.tan));
    t = sub(&t, &c.t(&dy.str));
    t = add_scaled(&t, c.eta(&yj.val), x);
    t = add_scaled(&t, -c.g(x, &yj.val), &nu);
    let l = sub(&add_scaled(&dty.ltr, 1.0, &dwy.ltr), &c.tr_phi(&dy.ltr));
    let s = sub(&sub(&add_scaled(&dty.str, 1.0, &dwy.str), &c.tr_phi(&dy.tan)), &c.tr_phi(&dy.str));
    [norm(&t), norm(&l), norm(&s)]
}

/// `D_X Z` minus the right-hand side of the final tangential formula.
pub fn final_tangential_residual(ctx: &PointContext, x: &[f64], z: &TField) -> f64 {
    let c = ctx;
    let zj = c.jet(z);
    let tz = c.jet(&TField::t_of(z.clone()));
    let wz = c.jet(&TField::w_of(z.clone()));
    let dz = c.gauss(Conn::Qs, x, &zj).tan;
    let dtz = c.gauss(Conn::Qs, x, &tz);
    let dwz = c.gauss(Conn::Qs, x, &wz);
    let a_wz: Vec<f64> = dwz.tan.iter().map(|v| -v).collect();
    let mut rhs: Vec<f64> = c.t(&dtz.tan).iter().map(|v| -v).collect();
    rhs = add_scaled(&rhs, 1.0, &c.t(&a_wz));
    rhs = sub(&rhs, &c.t(&dtz.str));
    rhs = sub(&rhs, &c.t(&dwz.str));
    rhs = add_scaled(&rhs, c.eta(&zj.val), &c.phi(x));
    rhs = add_scaled(&rhs, c.eta(&dz), &c.nu());
    norm(&sub(&dz, &rhs))
}

fn lemma_row(env: &Env) -> Vec<Outcome> {
    let c = env.ctx;
    let combos = random_combos(env.seed, env.index, SALT + 30, c.plan.m, SECTIONS);
    let mut pairs: Vec<(Vec<f64>, TField)> = Vec::new();
    for a in &combos {
        for b in &combos {
            pairs.push((c.value(a), b.clone()));
        }
    }
    pairs.push((c.nu(), TField::Nu));
    let mut worst = [0.0f64; 3];
    for (x, y) in &pairs {
        for (k, v) in lemma_residuals(c, x, y).into_iter().enumerate() {
            worst[k] = worst[k].max(v);
        }
    }
    let mut out: Vec<Outcome> = worst.into_iter().map(Outcome::Residual).collect();
    out.push(if env.dim(E0) == 0 || env.dim(EP) == 0 {
        Outcome::Skip("E0 or E' is zero".into())
    } else {
        let xs = env.sections(E0, 31);
        let zs = env.sections(EP, 32);
        Outcome::Residual(max_of(env.ordered(&xs, &zs).into_iter().map(|(x, z)| final_tangential_residual(c, &x.j.val, &z.t))))
    });
    out
}

type RowFn = fn(&Env) -> Vec<Outcome>;

fn run(
    specs: &'static [CheckSpec],
    row: RowFn,
    a: &Ambient,
    imm: &Immersion,
    plan: &FramePlan,
    samples: &[Vec<f64>],
    seed: u64,
    tols: &Tolerances,
) -> Result<Vec<ResidualReport>> {
    ensure_constant_rank(a, imm, plan, samples)?;
    let rows = match sgl_precondition(plan) {
        Some(reason) => samples.iter().map(|_| specs.iter().map(|_| Outcome::Skip(reason.into())).collect()).collect(),
        None => map_points(samples, |i, u| {
            let ctx = PointContext::new(a, imm, plan, u)?;
            Ok(row(&Env::new(&ctx, seed, i, specs, tols)))
        })?,
    };
    Ok(aggregate_all(specs, tols, &rows, &BTreeMap::new()))
}

pub fn check_integrability(
    a: &Ambient,
    imm: &Immersion,
    plan: &FramePlan,
    samples: &[Vec<f64>],
    seed: u64,
    tols: &Tolerances,
) -> Result<Vec<ResidualReport>> {
    run(INTEGRABILITY_CHECKS, integrability_row, a, imm, plan, samples, seed, tols)
}

pub fn check_parallelism(
    a: &Ambient,
    imm: &Immersion,
    plan: &FramePlan,
    samples: &[Vec<f64>],
    seed: u64,
    tols: &Tolerances,
) -> Result<Vec<ResidualReport>> {
    run(PARALLELISM_CHECKS, parallelism_row, a, imm, plan, samples, seed, tols)
}

pub fn check_geodesic(
    a: &Ambient,
    imm: &Immersion,
    plan: &FramePlan,
    samples: &[Vec<f64>],
    seed: u64,
    tols: &Tolerances,
) -> Result<Vec<ResidualReport>> {
    run(GEODESIC_CHECKS, geodesic_row, a, imm, plan, samples, seed, tols)
}

pub fn check_lemma(
    a: &Ambient,
    imm: &Immersion,
    plan: &FramePlan,
    samples: &[Vec<f64>],
    seed: u64,
    tols: &Tolerances,
) -> Result<Vec<ResidualReport>> {
    run(LEMMA_CHECKS, lemma_row, a, imm, plan, samples, seed, tols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{entry, EntryParams};
    use crate::lightlike::plan;
    use crate::sampling::sample_points;

    fn all_reports(name: &str, params: &EntryParams, n: usize) -> Vec<ResidualReport> {
        let e = entry(name, params).unwrap();
        let p = plan(&e.ambient, &e.immersion).unwrap();
        let pts = sample_points(&e.immersion.domain, n, 42).unwrap();
        let t = Tolerances::default();
        let mut all = check_integrability(&e.ambient, &e.immersion, &p, &pts, 42, &t).unwrap();
        all.extend(check_parallelism(&e.ambient, &e.immersion, &p, &pts, 42, &t).unwrap());
        all.extend(check_geodesic(&e.ambient, &e.immersion, &p, &pts, 42, &t).unwrap());
        all.extend(check_lemma(&e.ambient, &e.immersion, &p, &pts, 42, &t).unwrap());
        all
    }

    #[test]
    fn theorems_hold_on_catalogue() {
        for name in ["example_3_2", "invariant_plane", "geodesic_subspace"] {
            for r in all_reports(name, &EntryParams::default(), 8) {
                assert!(!r.is_failure(), "{name}: {r:?}");
            }
        }
    }

    #[test]
    fn lemma_holds_without_deformation() {
        let params = EntryParams { lambda: 0.0, ..Default::default() };
        for r in all_reports("example_3_2", &params, 6).iter().filter(|r| r.check_id.starts_with("lemma.")) {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn non_integrability_is_observed_everywhere() {
        let reports = all_reports("example_3_2", &EntryParams::default(), 8);
        for id in ["thm.e_not_integrable", "thm.e_not_parallel", "thm.eprime_not_parallel"] {
            let r = reports.iter().find(|r| r.check_id == id).unwrap();
            assert!(r.notes.contains("direct nonzero at 8, condition nonzero at 8"), "{r:?}");
        }
    }

    #[test]
    fn skipped_when_not_sgl() {
        let params = EntryParams { mapping: crate::catalog::Mapping::BasisOrder, ..Default::default() };
        for r in all_reports("example_3_2", &params, 3) {
            assert!(r.notes.contains("not SGL"), "{r:?}");
        }
    }

    #[test]
    fn mixed_condition_2_is_linear_in_hs_perturbation() {
        let e = entry("example_3_2", &EntryParams::default()).unwrap();
        let p = plan(&e.ambient, &e.immersion).unwrap();
        let u = sample_points(&e.immersion.domain, 1, 9).unwrap().remove(0);
        let ctx = PointContext::new(&e.ambient, &e.immersion, &p, &u).unwrap();
        let x = ctx.value(&TField::project(E, TField::combo(&[0.3, -0.2, 0.5, 0.1, 0.7, -0.4, 0.2])));
        let z = TField::Basis(Block::EPrime, 0);
        let w = ctx.basis(Block::W)[0].clone();
        let dir = ctx.tr_phi(&w);
        let base = mixed_condition_2(&ctx, &x, &z, &w, &vec![0.0; p.d]);
        assert!(base.abs() < 1e-10);
        let slope = -ctx.g(&dir, &ctx.tr_phi(&w));
        assert!(slope.abs() > 1e-3);
        for eps in [1e-3, 1e-2, 1e-1, 1.0] {
            let shift: Vec<f64> = dir.iter().map(|v| eps * v).collect();
            let r = mixed_condition_2(&ctx, &x, &z, &w, &shift);
            assert!((r - base - eps * slope).abs() < 1e-10 * (1.0 + eps), "eps {eps}: {r}");
        }
    }
}
