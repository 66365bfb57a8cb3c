//! The frames suite: frame contract, Gauss–Weingarten splittings and the
//! relations between the objects induced by ∇̄, ∇̄* and D̃.

use super::frame::{radical_rank, Block, Frame, FramePlan, Immersion, RANK_REL, SCREEN};
use super::point::{add_scaled, sub, FieldJet, PointContext, Split, TField};
use crate::ambient::{Ambient, Conn};
use crate::error::{GeomError, Result};
use crate::linalg::{condition_number, norm, numerical_rank, Mat};
use crate::report::{aggregate_all, CheckSpec, Outcome, ResidualReport, TolClass, Tolerances};
use crate::sampling::{map_points, point_rng};
use crate::statistical::require_samples;
use rand::Rng;
use std::collections::BTreeMap;

/// Central-difference step for smoothness and oracle checks.
pub const FD_STEP: f64 = 1e-5;

pub const FRAME_CHECKS: &[CheckSpec] = &[
    CheckSpec::new("frame.immersion_rank", "rank ∂X/∂u = m", TolClass::Exact),
    CheckSpec::new("frame.radical_rank_constant", "rank Rad(TN) constant", TolClass::Exact),
    CheckSpec::new("frame.radical_null", "ρ̃(ξᵢ, ∂ₖX) = 0", TolClass::Ad),
    CheckSpec::new("frame.pairing", "ρ̃(N′ᵢ, ξⱼ) = δᵢⱼ", TolClass::Ad),
    CheckSpec::new("frame.ltr_null", "ρ̃(N′ᵢ, N′ⱼ) = 0", TolClass::Ad),
    CheckSpec::new("frame.screen_orthogonal", "S(TN) ⟂ Rad(TN), S(TN) ⟂ ltr(TN)", TolClass::Mixed),
    CheckSpec::new("frame.w_orthogonal", "S(TN⊥) ⟂ TN, S(TN⊥) ⟂ ltr(TN)", TolClass::Mixed),
    CheckSpec::new("frame.screen_nondegenerate", "cond ρ̃|S(TN)", TolClass::Cond),
    CheckSpec::new("frame.w_nondegenerate", "cond ρ̃|S(TN⊥)", TolClass::Cond),
    CheckSpec::new("frame.spans", "cond [S(TN) Rad ltr S(TN⊥)]", TolClass::Cond),
    CheckSpec::new("frame.reconstruction", "v = Σ frame components of v", TolClass::Exact),
    CheckSpec::new("frame.smoothness", "∂ₖ frame (exact) = central difference", TolClass::Mixed),
    CheckSpec::new("gw.reconstruction", "D̃_X Y = D_X Y + h̃^l(X,Y) + h̃^s(X,Y)", TolClass::Exact),
    CheckSpec::new("gw.h_symmetric", "h^l, h^s symmetric", TolClass::Mixed),
    CheckSpec::new("gw.h_symmetric_dual", "h*^l, h*^s symmetric", TolClass::Mixed),
    CheckSpec::new("gw.weingarten_reconstruction", "D̃_X V = −Ã_V X + (D̃_X V)^l + (D̃_X V)^s", TolClass::Exact),
    CheckSpec::new("induced.connection_relation", "D_X Y = ∇_X Y − η(X)TY − K(X,Y)", TolClass::Mixed),
    CheckSpec::new("induced.h_l", "h̃^l(X,Y) = h^l(X,Y)", TolClass::Mixed),
    CheckSpec::new("induced.h_s", "h̃^s(X,Y) = h^s(X,Y) − η(X)wY", TolClass::Mixed),
    CheckSpec::new("induced.metric_defect", "(D_X ρ̃)(Y,Z) = ρ̃(h̃^l(X,Y),Z) + ρ̃(Y,h̃^l(X,Z))", TolClass::Mixed),
    CheckSpec::new("induced.torsion", "T^D(X,Y) = η(Y)TX − η(X)TY", TolClass::Mixed),
    CheckSpec::new("induced.lc_pair", "ρ̃(h^s(X,Y),W) + ρ̃(Y,D*^l(X,W)) = ρ̃(Y,A*_W X)", TolClass::Mixed),
    CheckSpec::new("induced.radical_pair", "ρ̃(h^l(X,Y),ξ) + ρ̃(Y,∇*_X ξ) + ρ̃(Y,h*^l(X,ξ)) = 0", TolClass::Mixed),
    CheckSpec::new(
        "induced.codazzi_defect",
        "(∇_X ρ)(Y,Z) − (∇_Y ρ)(X,Z) = ρ̃(Y,h^l(X,Z)) − ρ̃(X,h^l(Y,Z))",
        TolClass::Mixed,
    ),
    CheckSpec::new(
        "induced.duality_defect",
        "Xρ(Y,Z) − ρ(∇_X Y,Z) − ρ(Y,∇*_X Z) = ρ̃(h^l(X,Y),Z) + ρ̃(Y,h*^l(X,Z))",
        TolClass::Mixed,
    ),
    CheckSpec::new("thm.induced_metric_iff_hl_zero", "D ρ̃ = 0 iff h̃^l = 0", TolClass::Iff),
    CheckSpec::new("screen.pairing_h_l", "ρ̃(h^l(X,PY),ξ) = ρ(A*′_ξ X,PY) and starred", TolClass::Mixed),
    CheckSpec::new("screen.pairing_h_prime", "ρ̃(h′(X,PY),N′) = ρ(A*_N′ X,PY) and starred", TolClass::Mixed),
    CheckSpec::new("screen.shape_symmetric", "ρ(A′_ξ PX,PY) = ρ(PX,A′_ξ PY)", TolClass::Mixed),
    CheckSpec::new("screen.connection", "D′_X PY = ∇′_X PY − η(X)TPY − K(X,PY)", TolClass::Mixed),
    CheckSpec::new("screen.h_prime", "h̃′(X,PY) = h′(X,PY)", TolClass::Mixed),
    CheckSpec::new("screen.shape_rad", "Ã′_ξ X = A′_ξ X + η(X)Tξ + K(X,ξ)", TolClass::Mixed),
    CheckSpec::info("screen.shape_rad.corrected", "Ã′_ξ X = A′_ξ X + K(X,ξ)", TolClass::Mixed),
    CheckSpec::new("screen.nabla_rad", "∇̃′ᵗ_X ξ = ∇′ᵗ_X ξ", TolClass::Mixed),
    CheckSpec::info("screen.nabla_rad.corrected", "∇̃′ᵗ_X ξ = ∇′ᵗ_X ξ − η(X)Tξ", TolClass::Mixed),
    CheckSpec::info("weingarten.shape_ltr", "Ã_N′ X = A_N′ X + K(X,N′)", TolClass::Mixed),
    CheckSpec::new("weingarten.nabla_ltr", "∇̃^l_X N′ = ∇^l_X N′", TolClass::Mixed),
    CheckSpec::info("weingarten.nabla_ltr.corrected", "∇̃^l_X N′ = ∇^l_X N′ − η(X)(φN′)^l", TolClass::Mixed),
    CheckSpec::info("weingarten.ds", "D̃^s(X,N′) = D^s(X,N′)", TolClass::Mixed),
];

const SALT: u64 = 41;
const NO_CONTACT: &str = "no contact structure";
const NO_RADICAL: &str = "no radical (r = 0)";

/// Structural preconditions shared by every submanifold suite: full rank
/// and constant radical rank at every sample.
pub fn ensure_constant_rank(a: &Ambient, imm: &Immersion, plan: &FramePlan, samples: &[Vec<f64>]) -> Result<()> {
    require_samples(samples, imm.param_dim())?;
    let ranks = map_points(samples, |_, u| radical_rank(a, imm, u))?;
    if let Some((i, r)) = ranks.iter().enumerate().find(|(_, &r)| r != plan.r) {
        return Err(GeomError::RankInstability(format!(
            "radical rank {r} at sample {i} ({:?}) but {} at the reference point",
            samples[i], plan.r
        )));
    }
    Ok(())
}

/// Random constant-coefficient combinations of coordinate fields.
pub fn random_combos(seed: u64, index: usize, salt: u64, m: usize, n: usize) -> Vec<TField> {
    let mut rng = point_rng(seed, index, salt);
    (0..n).map(|_| TField::combo(&(0..m).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>())).collect()
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::NAN } else { m.max(v) })
}

/// Gauss splittings of the three connections on every ordered pair.
struct Pairs {
    qs: Vec<Vec<Split>>,
    nb: Vec<Vec<Split>>,
    ns: Vec<Vec<Split>>,
}

impl Pairs {
    fn new(ctx: &PointContext, f: &[FieldJet]) -> Self {
        let grid = |c: Conn| -> Vec<Vec<Split>> {
            f.iter().map(|x| f.iter().map(|y| ctx.gauss(c, &x.val, y)).collect()).collect()
        };
        Pairs { qs: grid(Conn::Qs), nb: grid(Conn::Nabla), ns: grid(Conn::NablaStar) }
    }
}

fn frame_rows(ctx: &PointContext, imm: &Immersion, i: usize, seed: u64) -> Result<Vec<Outcome>> {
    let plan = &ctx.plan;
    let f0 = &ctx.f0;
    let r = plan.r;
    let m = plan.m;
    let rad = ctx.basis(Block::Rad);
    let ltr = ctx.basis(Block::Ltr);
    let ws = ctx.basis(Block::W);
    let screen: Vec<Vec<f64>> = SCREEN.iter().flat_map(|&b| ctx.basis(b)).collect();
    let jcols = f0.j.cols_vec();
    let mut out = Vec::new();

    out.push(Outcome::Residual(m.abs_diff(numerical_rank(&f0.j, RANK_REL)) as f64));
    let gram = Mat::gram(&f0.j, &f0.g, &f0.j);
    out.push(Outcome::Residual(m.abs_diff(numerical_rank(&gram, RANK_REL) + r) as f64));
    if r == 0 {
        out.push(Outcome::Skip(NO_RADICAL.into()));
        out.push(Outcome::Skip(NO_RADICAL.into()));
        out.push(Outcome::Skip(NO_RADICAL.into()));
    } else {
        out.push(Outcome::Residual(max_of(rad.iter().flat_map(|x| jcols.iter().map(|j| ctx.g(x, j).abs())))));
        let (ltr, rad) = (&ltr, &rad);
        out.push(Outcome::Residual(max_of((0..r).flat_map(|a| {
            (0..r).map(move |b| (ctx.g(&ltr[a], &rad[b]) - if a == b { 1.0 } else { 0.0 }).abs())
        }))));
        out.push(Outcome::Residual(max_of(ltr.iter().flat_map(|a| ltr.iter().map(|b| ctx.g(a, b).abs())))));
    }
    out.push(Outcome::Residual(max_of(
        screen.iter().flat_map(|s| rad.iter().chain(&ltr).map(|v| ctx.g(s, v).abs()).collect::<Vec<_>>()),
    )));
    out.push(Outcome::Residual(max_of(
        ws.iter().flat_map(|w| jcols.iter().chain(&ltr).map(|v| ctx.g(w, v).abs()).collect::<Vec<_>>()),
    )));
    let gram_of = |vs: &[Vec<f64>]| Mat::from_fn(vs.len(), vs.len(), |a, b| ctx.g(&vs[a], &vs[b]));
    out.push(Outcome::Residual(condition_number(&gram_of(&screen))));
    out.push(Outcome::Residual(condition_number(&gram_of(&ws))));
    out.push(Outcome::Residual(condition_number(&f0.f)));

    let mut rng = point_rng(seed, i, SALT + 1);
    let recon = (0..3)
        .map(|_| {
            let v: Vec<f64> = (0..plan.d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let back = f0.f.mul_vec(&f0.finv.mul_vec(&v));
            norm(&sub(&v, &back))
        })
        .collect::<Vec<_>>();
    out.push(Outcome::Residual(max_of(recon)));

    let mut smooth = 0.0f64;
    for k in 0..m {
        let mut up = ctx.u.clone();
        let mut dn = ctx.u.clone();
        up[k] += FD_STEP;
        dn[k] -= FD_STEP;
        let fp = Frame::build(ctx.a, imm, &ctx.plan, &up)?.f;
        let fm = Frame::build(ctx.a, imm, &ctx.plan, &dn)?.f;
        let ad = ctx.frame_derivative(k);
        for (idx, v) in ad.data.iter().enumerate() {
            let fd = (fp.data[idx] - fm.data[idx]) / (2.0 * FD_STEP);
            smooth = smooth.max((fd - v).abs());
        }
    }
    out.push(Outcome::Residual(smooth));
    Ok(out)
}

fn induced_rows(ctx: &PointContext, i: usize, seed: u64) -> Vec<Outcome> {
    let plan = &ctx.plan;
    let contact = plan.contact;
    let r = plan.r;
    let combos = random_combos(seed, i, SALT, plan.m, 3);
    let fields: Vec<FieldJet> = combos.iter().map(|t| ctx.jet(t)).collect();
    let screen_fields: Vec<FieldJet> = combos.iter().map(|t| ctx.jet(&TField::project(SCREEN, t.clone()))).collect();
    let pairs = Pairs::new(ctx, &fields);
    let n = fields.len();
    let val = |a: usize| fields[a].val.as_slice();
    let rad: Vec<FieldJet> = (0..r).map(|j| ctx.jet(&TField::Basis(Block::Rad, j))).collect();
    let ltr: Vec<FieldJet> = (0..r).map(|j| ctx.jet(&TField::Basis(Block::Ltr, j))).collect();
    let ws: Vec<FieldJet> = (0..plan.dim(Block::W)).map(|j| ctx.jet(&TField::Basis(Block::W, j))).collect();
    let mut out = Vec::new();
    let nc = || Outcome::Skip(NO_CONTACT.into());
    let nr = || Outcome::Skip(NO_RADICAL.into());

    // gw
    let main = if contact { &pairs.qs } else { &pairs.nb };
    let conn_main = if contact { Conn::Qs } else { Conn::Nabla };
    let mut rec = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            let full = ctx.conn(conn_main, val(a), &fields[b]);
            rec = rec.max(norm(&sub(&full, &main[a][b].sum())));
        }
    }
    out.push(Outcome::Residual(rec));
    let sym = |grid: &Vec<Vec<Split>>| {
        let mut s = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                s = s.max(norm(&sub(&grid[a][b].ltr, &grid[b][a].ltr)) + norm(&sub(&grid[a][b].str, &grid[b][a].str)));
            }
        }
        Outcome::Residual(s)
    };
    out.push(sym(&pairs.nb));
    out.push(sym(&pairs.ns));
    let mut wrec = 0.0f64;
    for v in ltr.iter().chain(&ws) {
        for a in 0..n {
            let full = ctx.conn(conn_main, val(a), v);
            wrec = wrec.max(norm(&sub(&full, &ctx.split(&full).sum())));
        }
    }
    out.push(Outcome::Residual(wrec));

    // induced
    if contact {
        let (mut c48, mut hl, mut hs, mut met, mut tor) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        let (mut direct, mut cond) = (0.0f64, 0.0f64);
        for a in 0..n {
            let x = val(a);
            let ex = ctx.eta(x);
            for b in 0..n {
                let y = val(b);
                let (q, nb) = (&pairs.qs[a][b], &pairs.nb[a][b]);
                let ty = ctx.t(y);
                let want = sub(&add_scaled(&nb.tan, -ex, &ty), &ctx.k(x, y));
                c48 = c48.max(norm(&sub(&q.tan, &want)));
                hl = hl.max(norm(&sub(&q.ltr, &nb.ltr)));
                hs = hs.max(norm(&add_scaled(&sub(&q.str, &nb.str), ex, &ctx.tr_phi(y))));
                cond = cond.max(norm(&q.ltr));
                for c in 0..n {
                    let z = val(c);
                    let dm = ctx.derivative_of_pairing(x, &fields[b], &fields[c])
                        - ctx.g(&q.tan, z)
                        - ctx.g(y, &pairs.qs[a][c].tan);
                    direct = direct.max(dm.abs());
                    met = met.max((dm - ctx.g(&q.ltr, z) - ctx.g(y, &pairs.qs[a][c].ltr)).abs());
                }
                let br = ctx.bracket(&fields[a], &fields[b]);
                let td = sub(&sub(&q.tan, &pairs.qs[b][a].tan), &br);
                let want_t = sub(&ctx.t(x).iter().map(|v| v * ctx.eta(y)).collect::<Vec<_>>(), &ty.iter().map(|v| v * ex).collect::<Vec<_>>());
                tor = tor.max(norm(&sub(&td, &want_t)));
            }
        }
        for v in [c48, hl, hs, met, tor] {
            out.push(Outcome::Residual(v));
        }
        out.push(lc_pair(ctx, &pairs, &fields, &ws));
        out.push(radical_pair(ctx, &pairs, &fields, &rad));
        out.extend(codazzi_duality(ctx, &pairs, &fields));
        out.push(Outcome::Iff { direct, condition: cond });
    } else {
        out.extend((0..5).map(|_| nc()));
        out.push(lc_pair(ctx, &pairs, &fields, &ws));
        out.push(radical_pair(ctx, &pairs, &fields, &rad));
        out.extend(codazzi_duality(ctx, &pairs, &fields));
        out.push(nc());
    }

    // screen and Weingarten relations
    if r == 0 {
        out.extend((0..3).map(|_| nr()));
    } else {
        out.extend(screen_pairings(ctx, &fields, &screen_fields, &rad, &ltr));
    }
    if !contact {
        out.extend((0..10).map(|_| nc()));
        return out;
    }
    let (mut conn_res, mut hp) = (0.0f64, 0.0f64);
    for a in 0..n {
        let x = val(a);
        for b in 0..n {
            let py = &screen_fields[b];
            let dq = ctx.gauss(Conn::Qs, x, py).tan;
            let dn = ctx.gauss(Conn::Nabla, x, py).tan;
            let (dp, hpq) = (ctx.part(&dq, SCREEN), ctx.part(&dq, &[Block::Rad]));
            let (np, hpn) = (ctx.part(&dn, SCREEN), ctx.part(&dn, &[Block::Rad]));
            let want = sub(&add_scaled(&np, -ctx.eta(x), &ctx.t(&py.val)), &ctx.k(x, &py.val));
            conn_res = conn_res.max(norm(&sub(&dp, &want)));
            hp = hp.max(norm(&sub(&hpq, &hpn)));
        }
    }
    out.push(Outcome::Residual(conn_res));
    out.push(Outcome::Residual(hp));
    if r == 0 {
        out.extend((0..8).map(|_| nr()));
        return out;
    }
    let (mut sr, mut src, mut nrad, mut nradc) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut sl, mut nl, mut nlc, mut ds) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for a in 0..n {
        let x = val(a);
        let ex = ctx.eta(x);
        for xi in &rad {
            let dq = ctx.gauss(Conn::Qs, x, xi).tan;
            let dn = ctx.gauss(Conn::Nabla, x, xi).tan;
            let shape_q: Vec<f64> = ctx.part(&dq, SCREEN).iter().map(|v| -v).collect();
            let shape_n: Vec<f64> = ctx.part(&dn, SCREEN).iter().map(|v| -v).collect();
            let (tq, tn) = (ctx.part(&dq, &[Block::Rad]), ctx.part(&dn, &[Block::Rad]));
            let txi = ctx.t(&xi.val);
            let kx = ctx.k(x, &xi.val);
            let base = add_scaled(&shape_n, 1.0, &kx);
            sr = sr.max(norm(&sub(&shape_q, &add_scaled(&base, ex, &txi))));
            src = src.max(norm(&sub(&shape_q, &base)));
            nrad = nrad.max(norm(&sub(&tq, &tn)));
            nradc = nradc.max(norm(&sub(&tq, &add_scaled(&tn, -ex, &txi))));
        }
        for np in &ltr {
            let q = ctx.gauss(Conn::Qs, x, np);
            let nb = ctx.gauss(Conn::Nabla, x, np);
            let kx = ctx.k(x, &np.val);
            // Ã = −q.tan, A = −nb.tan
            sl = sl.max(norm(&add_scaled(&sub(&nb.tan, &q.tan), -1.0, &kx)));
            nl = nl.max(norm(&sub(&q.ltr, &nb.ltr)));
            let corr = sub(&add_scaled(&nb.ltr, -ex, &ctx.part(&ctx.phi(&np.val), &[Block::Ltr])), &ctx.part(&kx, &[Block::Ltr]));
            nlc = nlc.max(norm(&sub(&q.ltr, &corr)));
            ds = ds.max(norm(&sub(&q.str, &nb.str)));
        }
    }
    for v in [sr, src, nrad, nradc, sl, nl, nlc, ds] {
        out.push(Outcome::Residual(v));
    }
    out
}

fn lc_pair(ctx: &PointContext, pairs: &Pairs, f: &[FieldJet], ws: &[FieldJet]) -> Outcome {
    if ws.is_empty() {
        return Outcome::Skip("S(TN⊥) = 0".into());
    }
    let mut res = 0.0f64;
    for a in 0..f.len() {
        for w in ws {
            let s = ctx.gauss(Conn::NablaStar, &f[a].val, w);
            for b in 0..f.len() {
                let y = &f[b].val;
                // A*_W X = −s.tan
                let v = ctx.g(&pairs.nb[a][b].str, &w.val) + ctx.g(y, &s.ltr) + ctx.g(y, &s.tan);
                res = res.max(v.abs());
            }
        }
    }
    Outcome::Residual(res)
}

fn radical_pair(ctx: &PointContext, pairs: &Pairs, f: &[FieldJet], rad: &[FieldJet]) -> Outcome {
    if rad.is_empty() {
        return Outcome::Skip(NO_RADICAL.into());
    }
    let mut res = 0.0f64;
    for a in 0..f.len() {
        for xi in rad {
            let s = ctx.gauss(Conn::NablaStar, &f[a].val, xi);
            for b in 0..f.len() {
                let y = &f[b].val;
                let v = ctx.g(&pairs.nb[a][b].ltr, &xi.val) + ctx.g(y, &s.tan) + ctx.g(y, &s.ltr);
                res = res.max(v.abs());
            }
        }
    }
    Outcome::Residual(res)
}

fn codazzi_duality(ctx: &PointContext, pairs: &Pairs, f: &[FieldJet]) -> [Outcome; 2] {
    let n = f.len();
    let nabla_g = |a: usize, b: usize, c: usize| {
        ctx.derivative_of_pairing(&f[a].val, &f[b], &f[c])
            - ctx.g(&pairs.nb[a][b].tan, &f[c].val)
            - ctx.g(&f[b].val, &pairs.nb[a][c].tan)
    };
    let (mut cod, mut dual) = (0.0f64, 0.0f64);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = nabla_g(a, b, c) - nabla_g(b, a, c);
                let rhs = ctx.g(&f[b].val, &pairs.nb[a][c].ltr) - ctx.g(&f[a].val, &pairs.nb[b][c].ltr);
                cod = cod.max((lhs - rhs).abs());
                let l2 = ctx.derivative_of_pairing(&f[a].val, &f[b], &f[c])
                    - ctx.g(&pairs.nb[a][b].tan, &f[c].val)
                    - ctx.g(&f[b].val, &pairs.ns[a][c].tan);
                let r2 = ctx.g(&pairs.nb[a][b].ltr, &f[c].val) + ctx.g(&f[b].val, &pairs.ns[a][c].ltr);
                dual = dual.max((l2 - r2).abs());
            }
        }
    }
    [Outcome::Residual(cod), Outcome::Residual(dual)]
}

fn screen_pairings(
    ctx: &PointContext,
    f: &[FieldJet],
    pf: &[FieldJet],
    rad: &[FieldJet],
    ltr: &[FieldJet],
) -> [Outcome; 3] {
    let n = f.len();
    let (mut phl, mut php, mut sym) = (0.0f64, 0.0f64, 0.0f64);
    for a in 0..n {
        let x = &f[a].val;
        for pyb in pf {
            let nb = ctx.gauss(Conn::Nabla, x, pyb);
            let ns = ctx.gauss(Conn::NablaStar, x, pyb);
            for xi in rad {
                let a_star: Vec<f64> = ctx.part(&ctx.gauss(Conn::NablaStar, x, xi).tan, SCREEN).iter().map(|v| -v).collect();
                let a_pl: Vec<f64> = ctx.part(&ctx.gauss(Conn::Nabla, x, xi).tan, SCREEN).iter().map(|v| -v).collect();
                phl = phl.max((ctx.g(&nb.ltr, &xi.val) - ctx.g(&a_star, &pyb.val)).abs());
                phl = phl.max((ctx.g(&ns.ltr, &xi.val) - ctx.g(&a_pl, &pyb.val)).abs());
            }
            let hp = ctx.part(&nb.tan, &[Block::Rad]);
            let hps = ctx.part(&ns.tan, &[Block::Rad]);
            for np in ltr {
                let a_star = ctx.shape(Conn::NablaStar, x, np);
                let a_pl = ctx.shape(Conn::Nabla, x, np);
                php = php.max((ctx.g(&hp, &np.val) - ctx.g(&a_star, &pyb.val)).abs());
                php = php.max((ctx.g(&hps, &np.val) - ctx.g(&a_pl, &pyb.val)).abs());
            }
        }
        let pxa = ctx.part(x, SCREEN);
        for b in 0..n {
            let pyb = ctx.part(&f[b].val, SCREEN);
            for xi in rad {
                let sh = |v: &[f64]| -> Vec<f64> {
                    ctx.part(&ctx.gauss(Conn::Nabla, v, xi).tan, SCREEN).iter().map(|t| -t).collect()
                };
                sym = sym.max((ctx.g(&sh(&pxa), &pyb) - ctx.g(&pxa, &sh(&pyb))).abs());
            }
        }
    }
    [Outcome::Residual(phl), Outcome::Residual(php), Outcome::Residual(sym)]
}

/// Run the frames suite on `samples` (parameter points).
pub fn check_frames(
    a: &Ambient,
    imm: &Immersion,
    plan: &FramePlan,
    samples: &[Vec<f64>],
    seed: u64,
    tols: &Tolerances,
) -> Result<Vec<ResidualReport>> {
    ensure_constant_rank(a, imm, plan, samples)?;
    let rows = map_points(samples, |i, u| {
        let ctx = PointContext::new(a, imm, plan, u)?;
        let mut row = frame_rows(&ctx, imm, i, seed)?;
        row.extend(induced_rows(&ctx, i, seed));
        Ok(row)
    })?;
    let mut extra = BTreeMap::new();
    extra.insert("frame.radical_rank_constant", format!("r = {}; {}", plan.r, plan.dims_note()));
    extra.insert("frame.spans", format!("gauge {:?}", plan.gauge));
    extra.insert("weingarten.shape_ltr", "the η(X)B term is omitted: no screen transversal field is bound".into());
    extra.insert("weingarten.ds", "the η(X)C term is omitted: no screen transversal field is bound".into());
    Ok(aggregate_all(FRAME_CHECKS, tols, &rows, &extra))
}
