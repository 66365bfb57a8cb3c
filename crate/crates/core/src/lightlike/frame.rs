//! Immersions and smooth adapted frames along them.
//!
//! A frame at a parameter point is the ambient basis
//! `[E₀ | Rad | E′ | ν | ltr | S(TN⊥)]`. Every null space in the construction
//! is taken with an [`AnchoredNullSpace`]; a [`FramePlan`] fixes the block
//! structure at a reference point and is re-anchored at each evaluation point
//! (see [`FramePlan::localize`]), so the same code evaluated on dual numbers gives exact derivatives of the frame.

use crate::ambient::Ambient;
use crate::calculus::directional_map;
use crate::error::{GeomError, Result};
use crate::fields::{ExprMap, SmoothMap};
use crate::linalg::{condition_number, norm, numerical_rank, AnchoredNullSpace, Mat};
use crate::sampling::Domain;
use crate::scalar::Scalar;
use std::ops::Range;

/// Singular values below this fraction of the largest count as zero.
pub const RANK_REL: f64 = 1e-9;
/// Relative threshold for structural yes/no decisions at the reference point.
const STRUCT_TOL: f64 = 1e-8;

/// A parametrised submanifold `u ↦ X(u)` over a box.
#[derive(Clone, Debug)]
pub struct Immersion {
    pub name: String,
    pub map: ExprMap,
    pub domain: Domain,
}

impl Immersion {
    pub fn new(name: &str, map: ExprMap, domain: Domain) -> Result<Self> {
        domain.validate()?;
        if domain.dim() != map.domain {
            return Err(GeomError::Dimension(format!(
                "immersion has {} parameters but the domain box has {}",
                map.domain,
                domain.dim()
            )));
        }
        if let Some(k) = map.comps.iter().position(|e| e.arity() > map.domain) {
            return Err(GeomError::Usage(format!(
                "component {} uses u{} but only {} parameters are declared",
                k + 1,
                map.comps[k].arity(),
                map.domain
            )));
        }
        Ok(Immersion { name: name.to_string(), map, domain })
    }

    pub fn param_dim(&self) -> usize {
        self.map.domain
    }

    pub fn ambient_dim(&self) -> usize {
        self.map.comps.len()
    }

    pub fn point<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        SmoothMap::eval(&self.map, u)
    }

    /// Columns `∂X/∂uᵏ`.
    pub fn jacobian<S: Scalar>(&self, u: &[S]) -> Mat<S> {
        let m = self.param_dim();
        let cols: Vec<Vec<S>> = (0..m)
            .map(|k| {
                let mut e = vec![S::zero(); m];
                e[k] = S::one();
                directional_map(&self.map, u, &e)
            })
            .collect();
        Mat::from_cols(self.ambient_dim(), &cols)
    }
}

/// The frame blocks, in frame order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    E0,
    Rad,
    EPrime,
    Nu,
    Ltr,
    W,
}

pub const BLOCKS: [Block; 6] = [Block::E0, Block::Rad, Block::EPrime, Block::Nu, Block::Ltr, Block::W];
pub const TANGENT: &[Block] = &[Block::E0, Block::Rad, Block::EPrime, Block::Nu];
pub const SCREEN: &[Block] = &[Block::E0, Block::EPrime, Block::Nu];
pub const TRANSVERSAL: &[Block] = &[Block::Ltr, Block::W];

impl Block {
    pub fn name(self) -> &'static str {
        match self {
            Block::E0 => "E0",
            Block::Rad => "Rad",
            Block::EPrime => "E'",
            Block::Nu => "nu",
            Block::Ltr => "ltr",
            Block::W => "S(TN⊥)",
        }
    }
}

/// How the lightlike transversal bundle is normalised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gauge {
    /// Symmetrised under φ, so that φ(ltr) = ltr.
    PhiAdapted,
    /// Least-squares dual of the radical with the quadratic ξ-correction.
    Classical,
}

/// Everything about the frame that is fixed once for the whole domain.
#[derive(Clone, Debug)]
pub struct FramePlan {
    pub m: usize,
    pub d: usize,
    pub r: usize,
    pub gauge: Gauge,
    pub contact: bool,
    pub nu_tangent: bool,
    /// Whether φ(Rad) ⊂ Rad held at the reference point.
    pub radical_invariant: bool,
    rad: AnchoredNullSpace,
    screen: AnchoredNullSpace,
    w: AnchoredNullSpace,
    e0: Option<AnchoredNullSpace>,
    ep: Option<AnchoredNullSpace>,
    dims: [usize; 6],
    pub reference: Vec<f64>,
}

impl FramePlan {
    pub fn dim(&self, b: Block) -> usize {
        self.dims[b as usize]
    }

    pub fn range(&self, b: Block) -> Range<usize> {
        let start: usize = self.dims[..b as usize].iter().sum();
        start..start + self.dims[b as usize]
    }

    pub fn dims_note(&self) -> String {
        BLOCKS.iter().map(|&b| format!("{} = {}", b.name(), self.dim(b))).collect::<Vec<_>>().join(", ")
    }

    pub fn indices(&self, blocks: &[Block]) -> Vec<usize> {
        blocks.iter().flat_map(|&b| self.range(b)).collect()
    }

    /// The same structure with every null space re-anchored at `u`, so the
    /// frame is well scaled near `u`. Fails if the block structure at `u`
    /// differs from this plan.
    pub fn localize(&self, a: &Ambient, imm: &Immersion, u: &[f64]) -> Result<FramePlan> {
        let local = plan_at(a, imm, u)?;
        if local.dims != self.dims || local.gauge != self.gauge || local.nu_tangent != self.nu_tangent {
            return Err(GeomError::RankInstability(format!(
                "at {u:?}: {} ({:?}), reference {} ({:?})",
                local.dims_note(),
                local.gauge,
                self.dims_note(),
                self.gauge
            )));
        }
        Ok(local)
    }
}

/// The frame and the ambient data at one parameter point.
#[derive(Clone, Debug)]
pub struct Frame<S> {
    pub x: Vec<S>,
    pub j: Mat<S>,
    pub g: Mat<S>,
    pub phi: Option<Mat<S>>,
    pub eta: Option<Vec<S>>,
    pub nu: Option<Vec<S>>,
    /// Full frame, columns in block order.
    pub f: Mat<S>,
    pub finv: Mat<S>,
}

struct Ambients<S> {
    x: Vec<S>,
    j: Mat<S>,
    g: Mat<S>,
    phi: Option<Mat<S>>,
    eta: Option<Vec<S>>,
    nu: Option<Vec<S>>,
}

fn ambient_data<S: Scalar>(a: &Ambient, imm: &Immersion, u: &[S]) -> Result<Ambients<S>> {
    if a.dim() != imm.ambient_dim() {
        return Err(GeomError::Dimension(format!(
            "immersion has {} components, ambient dimension is {}",
            imm.ambient_dim(),
            a.dim()
        )));
    }
    if u.len() != imm.param_dim() {
        return Err(GeomError::Dimension(format!("parameter point of length {}", u.len())));
    }
    let x = imm.point(u);
    let j = imm.jacobian(u);
    let g = a.metric(&x);
    let (phi, eta, nu) = match a.model() {
        Some(m) => (Some(m.phi(&x)), Some(m.eta(&x)), Some(m.nu())),
        None => (None, None, None),
    };
    Ok(Ambients { x, j, g, phi, eta, nu })
}

/// `ltr` basis dual to `xi` with `ρ̃(N′,ξ) = I`, `ρ̃(N′,N′) = 0` and, when
/// `nu` is given, `η(N′) = 0`.
fn ltr_basis<S: Scalar>(
    g: &Mat<S>,
    xi: &Mat<S>,
    nu_eta: Option<(&[S], &[S])>,
    phi: Option<&Mat<S>>,
) -> Result<Mat<S>> {
    if xi.cols == 0 {
        return Ok(Mat::zeros(g.rows, 0));
    }
    let a = g.mul(xi);
    let l0 = a.mul(&a.transpose().mul(&a).inverse()?);
    let l1 = match nu_eta {
        Some((nu, eta)) => {
            let c = l0.tmul_vec(eta);
            Mat::from_fn(l0.rows, l0.cols, |i, k| l0[(i, k)] - nu[i] * c[k])
        }
        None => l0,
    };
    let nh = match phi {
        Some(phi) => {
            let rm = Mat::gram(&l1, g, &phi.mul(xi));
            let rinv_t = rm.transpose().inverse().map_err(|_| {
                GeomError::Frame("the pairing ρ̃(N′, φξ) is singular; the radical is not φ-invariant".into())
            })?;
            l1.sub(&phi.mul(&l1).mul(&rinv_t)).scale(S::cst(0.5))
        }
        None => l1,
    };
    let q = Mat::gram(&nh, g, &nh);
    Ok(nh.sub(&xi.mul(&q).scale(S::cst(0.5))))
}

/// Rows `[N′ᵀgJ; νᵀgJ]`: the screen directions avoiding ν are its null space.
fn screen_rows<S: Scalar>(j: &Mat<S>, g: &Mat<S>, n: &Mat<S>, nu: Option<&[S]>) -> Mat<S> {
    let gj = g.mul(j);
    let top = n.transpose().mul(&gj);
    match nu {
        Some(nu) => Mat::vcat(&[&top, &Mat::from_rows(j.cols, &[gj.tmul_vec(nu)])]),
        None => top,
    }
}

fn w_rows<S: Scalar>(j: &Mat<S>, g: &Mat<S>, n: &Mat<S>) -> Mat<S> {
    Mat::vcat(&[&j.transpose().mul(g), &n.transpose().mul(g)])
}

/// `(I − P)φS₁`, with `P` the ρ̃-orthogonal projector onto span S₁.
fn e0_rows<S: Scalar>(g: &Mat<S>, phi: &Mat<S>, s1: &Mat<S>) -> Result<Mat<S>> {
    let fs = phi.mul(s1);
    if s1.cols == 0 {
        return Ok(fs);
    }
    let gs = Mat::gram(s1, g, s1);
    let coef = gs.solve(&s1.transpose().mul(&g.mul(&fs)))?;
    Ok(fs.sub(&s1.mul(&coef)))
}

fn choose(what: &str, a: &Mat<f64>, expected: Option<usize>) -> Result<AnchoredNullSpace> {
    let rank = numerical_rank(a, RANK_REL);
    if let Some(e) = expected {
        if rank != e {
            return Err(GeomError::Frame(format!("{what} has rank {rank}, expected {e}")));
        }
    }
    AnchoredNullSpace::choose(a, rank)
}

fn in_span(j: &Mat<f64>, v: &[f64]) -> Result<f64> {
    let jt = j.transpose();
    let c = jt.mul(j).solve_vec(&jt.mul_vec(v))?;
    let back = j.mul_vec(&c);
    Ok(norm(&v.iter().zip(&back).map(|(a, b)| a - b).collect::<Vec<_>>()))
}

/// Choose all null-space patterns at the parameter point `u`.
pub fn plan_at(a: &Ambient, imm: &Immersion, u: &[f64]) -> Result<FramePlan> {
    let amb = ambient_data(a, imm, u)?;
    let (m, d) = (imm.param_dim(), imm.ambient_dim());
    if numerical_rank(&amb.j, RANK_REL) != m {
        return Err(GeomError::Immersion(format!("{u:?}")));
    }
    let gram = Mat::gram(&amb.j, &amb.g, &amb.j);
    let rank_g = numerical_rank(&gram, RANK_REL);
    let rad = AnchoredNullSpace::choose(&gram, rank_g)?;
    let xi = amb.j.mul(&rad.null_space(&gram)?);
    let r = xi.cols;

    let contact = a.has_contact();
    let nu_tangent = match &amb.nu {
        Some(nu) => in_span(&amb.j, nu)? < STRUCT_TOL * norm(nu),
        None => false,
    };
    let radical_invariant = match &amb.phi {
        Some(phi) if r > 0 => {
            let fx = phi.mul(&xi);
            let off: f64 = (0..r).map(|k| in_span(&amb.j, &fx.col(k))).sum::<Result<f64>>()?;
            let normal = norm(&amb.j.transpose().mul(&amb.g.mul(&fx)).data);
            off + normal < STRUCT_TOL * (1.0 + norm(&fx.data))
        }
        Some(_) => true,
        None => false,
    };
    let gauge = if contact && nu_tangent && radical_invariant { Gauge::PhiAdapted } else { Gauge::Classical };

    let nu_t = if nu_tangent { amb.nu.as_deref() } else { None };
    let nu_eta = nu_t.zip(amb.eta.as_deref());
    let adapted_phi = if gauge == Gauge::PhiAdapted { amb.phi.as_ref() } else { None };
    let n = ltr_basis(&amb.g, &xi, nu_eta, adapted_phi)?;

    let srows = screen_rows(&amb.j, &amb.g, &n, nu_t);
    let screen = choose("screen constraint", &srows, Some(r + nu_tangent as usize))?;
    let s1 = amb.j.mul(&screen.null_space(&srows)?);

    let wrows = w_rows(&amb.j, &amb.g, &n);
    let w = choose("normal constraint", &wrows, Some(m + r))?;

    let (e0, ep, dim_e0, dim_ep) = match &amb.phi {
        Some(phi) => {
            let erows = e0_rows(&amb.g, phi, &s1)?;
            let e0 = choose("E0 constraint", &erows, None)?;
            let e0v = phi.mul(&s1).mul(&e0.null_space(&erows)?);
            let prow = Mat::gram(&e0v, &amb.g, &s1);
            let ep = choose("E' constraint", &prow, Some(e0v.cols))?;
            let (de0, dep) = (e0.nullity(), ep.nullity());
            (Some(e0), Some(ep), de0, dep)
        }
        None => (None, None, 0, s1.cols),
    };
    let dims = [dim_e0, r, dim_ep, nu_tangent as usize, r, w.nullity()];
    if dims.iter().sum::<usize>() != d {
        return Err(GeomError::Frame(format!("frame blocks {dims:?} do not add up to dimension {d}")));
    }
    let plan = FramePlan {
        m,
        d,
        r,
        gauge,
        contact,
        nu_tangent,
        radical_invariant,
        rad,
        screen,
        w,
        e0,
        ep,
        dims,
        reference: u.to_vec(),
    };
    let f = Frame::build(a, imm, &plan, u)?;
    let cond = condition_number(&f.f);
    if !(cond < 1e12) {
        return Err(GeomError::Degenerate { what: "frame at the reference point".into(), cond });
    }
    Ok(plan)
}

/// Reference point for the pivot patterns: the box centre, or a fixed
/// off-centre point when the immersion is singular at the centre.
pub fn reference_point(imm: &Immersion) -> Vec<f64> {
    let c = imm.domain.center();
    if numerical_rank(&imm.jacobian(&c), RANK_REL) == imm.param_dim() {
        return c;
    }
    let golden = 0.618_033_988_749_895;
    (0..imm.param_dim())
        .map(|k| {
            let t = (0.5 + golden * (k + 1) as f64).fract();
            imm.domain.lo[k] + t * (imm.domain.hi[k] - imm.domain.lo[k])
        })
        .collect()
}

/// Plan at [`reference_point`].
pub fn plan(a: &Ambient, imm: &Immersion) -> Result<FramePlan> {
    plan_at(a, imm, &reference_point(imm))
}

/// Numerical radical rank at `u`.
pub fn radical_rank(a: &Ambient, imm: &Immersion, u: &[f64]) -> Result<usize> {
    let amb = ambient_data(a, imm, u)?;
    if numerical_rank(&amb.j, RANK_REL) != imm.param_dim() {
        return Err(GeomError::Immersion(format!("{u:?}")));
    }
    let gram = Mat::gram(&amb.j, &amb.g, &amb.j);
    Ok(imm.param_dim() - numerical_rank(&gram, RANK_REL))
}

impl<S: Scalar> Frame<S> {
    pub fn build(a: &Ambient, imm: &Immersion, plan: &FramePlan, u: &[S]) -> Result<Self> {
        let amb = ambient_data(a, imm, u)?;
        let gram = Mat::gram(&amb.j, &amb.g, &amb.j);
        let xi = amb.j.mul(&plan.rad.null_space(&gram)?);
        let nu_t = if plan.nu_tangent { amb.nu.as_deref() } else { None };
        let nu_eta = nu_t.zip(amb.eta.as_deref());
        let adapted_phi = if plan.gauge == Gauge::PhiAdapted { amb.phi.as_ref() } else { None };
        let n = ltr_basis(&amb.g, &xi, nu_eta, adapted_phi)?;
        let srows = screen_rows(&amb.j, &amb.g, &n, nu_t);
        let s1 = amb.j.mul(&plan.screen.null_space(&srows)?);
        let w = plan.w.null_space(&w_rows(&amb.j, &amb.g, &n))?;
        let (e0, ep) = match (&amb.phi, &plan.e0, &plan.ep) {
            (Some(phi), Some(pe0), Some(pep)) => {
                let erows = e0_rows(&amb.g, phi, &s1)?;
                let e0 = phi.mul(&s1).mul(&pe0.null_space(&erows)?);
                let ep = s1.mul(&pep.null_space(&Mat::gram(&e0, &amb.g, &s1))?);
                (e0, ep)
            }
            _ => (Mat::zeros(plan.d, 0), s1),
        };
        let nu_col = match nu_t {
            Some(nu) => Mat::from_cols(plan.d, &[nu.to_vec()]),
            None => Mat::zeros(plan.d, 0),
        };
        let f = Mat::hcat(&[&e0, &xi, &ep, &nu_col, &n, &w]);
        if f.cols != plan.d {
            return Err(GeomError::Frame(format!("frame has {} columns, expected {}", f.cols, plan.d)));
        }
        let finv = f.inverse().map_err(|_| GeomError::Frame("frame does not span the ambient space".into()))?;
        Ok(Frame { x: amb.x, j: amb.j, g: amb.g, phi: amb.phi, eta: amb.eta, nu: amb.nu, f, finv })
    }

    pub fn block(&self, plan: &FramePlan, b: Block) -> Mat<S> {
        let r = plan.range(b);
        self.f.col_range(r.start, r.end)
    }

    pub fn vector(&self, plan: &FramePlan, b: Block, i: usize) -> Vec<S> {
        self.f.col(plan.range(b).start + i)
    }

    /// Component of `v` along the given blocks of the frame.
    pub fn project(&self, plan: &FramePlan, blocks: &[Block], v: &[S]) -> Vec<S> {
        let c = self.finv.mul_vec(v);
        let mut out = vec![S::zero(); plan.d];
        for k in plan.indices(blocks) {
            for i in 0..plan.d {
                out[i] += self.f[(i, k)] * c[k];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::linalg::bilinear;

    fn null_line() -> (Ambient, Immersion) {
        let map = ExprMap::new(1, vec![Expr::var(0), Expr::var(0)]);
        (Ambient::flat(vec![-1.0, 1.0]), Immersion::new("null_line", map, Domain::cube(1, -1.0, 1.0)).unwrap())
    }

    #[test]
    fn linear_jacobian_is_the_matrix() {
        let map = ExprMap::new(2, vec![Expr::var(0) * Expr::c(2.0), Expr::var(1) - Expr::var(0), Expr::c(1.0)]);
        let imm = Immersion::new("lin", map, Domain::cube(2, -1.0, 1.0)).unwrap();
        let j = imm.jacobian(&[0.3, -0.2]);
        assert_eq!(j.data, vec![2.0, 0.0, -1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn null_line_frame_by_hand() {
        let (a, imm) = null_line();
        let plan = plan(&a, &imm).unwrap();
        assert_eq!(plan.r, 1);
        assert_eq!(plan.gauge, Gauge::Classical);
        let f = Frame::build(&a, &imm, &plan, &[0.4]).unwrap();
        assert_eq!(f.vector(&plan, Block::Rad, 0), vec![1.0, 1.0]);
        let n = f.vector(&plan, Block::Ltr, 0);
        assert!((n[0] + 0.5).abs() < 1e-15 && (n[1] - 0.5).abs() < 1e-15, "{n:?}");
        assert!((bilinear(&f.g, &n, &[1.0, 1.0]) - 1.0).abs() < 1e-15);
        assert_eq!(bilinear(&f.g, &n, &n), 0.0);
    }

    #[test]
    fn riemannian_curve_has_no_radical() {
        let map = ExprMap::new(1, vec![Expr::var(0).cos(), Expr::var(0).sin()]);
        let imm = Immersion::new("circle", map, Domain::cube(1, -1.0, 1.0)).unwrap();
        let a = Ambient::flat(vec![1.0, 1.0]);
        let plan = plan(&a, &imm).unwrap();
        assert_eq!(plan.r, 0);
        assert_eq!(plan.dim(Block::Ltr), 0);
        assert_eq!(plan.dim(Block::W), 1);
        assert_eq!(plan.dim(Block::EPrime), 1);
    }

    #[test]
    fn rank_deficient_immersion_is_rejected() {
        let map = ExprMap::new(2, vec![Expr::var(0), Expr::var(0) * Expr::c(2.0), Expr::c(0.0)]);
        let imm = Immersion::new("bad", map, Domain::cube(2, -1.0, 1.0)).unwrap();
        let a = Ambient::flat(vec![1.0, 1.0, 1.0]);
        assert!(matches!(plan(&a, &imm), Err(GeomError::Immersion(_))));
    }

    #[test]
    fn parameter_arity_checked() {
        let map = ExprMap::new(1, vec![Expr::var(1)]);
        assert!(Immersion::new("x", map, Domain::cube(1, 0.0, 1.0)).is_err());
    }
}
