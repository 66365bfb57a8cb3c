//! Fields along an immersion and their ambient derivatives at one point.
//!
//! Tangent and transversal fields are expressions in the frame ([`TField`]).
//! Evaluating them on the frame at `u` and on its first-order jets gives the
//! value and all parameter derivatives exactly, and the ambient derivative
//! along a tangent vector `X = J a` is `Σ aₖ ∂ₖY`.

use super::frame::{Block, Frame, FramePlan, Immersion, TANGENT};
use crate::ambient::{Ambient, Conn};
use crate::calculus::{christoffel, Christoffel};
use crate::error::{GeomError, Result};
use crate::linalg::{bilinear, dot, Mat};
use crate::scalar::{seed, Scalar, D1};

/// A vector field along the immersion, built from frame data.
#[derive(Clone, Debug, PartialEq)]
pub enum TField {
    /// `∂X/∂uᵏ`.
    Coord(usize),
    Basis(Block, usize),
    Nu,
    Phi(Box<TField>),
    /// Frame component along the listed blocks.
    Project(Vec<Block>, Box<TField>),
    Scale(f64, Box<TField>),
    Sum(Vec<TField>),
}

impl TField {
    /// `Σ cₖ ∂X/∂uᵏ`.
    pub fn combo(c: &[f64]) -> TField {
        TField::Sum(c.iter().enumerate().map(|(k, &v)| TField::Scale(v, Box::new(TField::Coord(k)))).collect())
    }

    pub fn project(blocks: &[Block], t: TField) -> TField {
        TField::Project(blocks.to_vec(), Box::new(t))
    }

    pub fn phi(t: TField) -> TField {
        TField::Phi(Box::new(t))
    }

    /// Tangential part `TY` of `φY`.
    pub fn t_of(t: TField) -> TField {
        TField::project(TANGENT, TField::phi(t))
    }

    /// Transversal part `wY` of `φY`.
    pub fn w_of(t: TField) -> TField {
        TField::project(super::frame::TRANSVERSAL, TField::phi(t))
    }

    pub fn eval<S: Scalar>(&self, plan: &FramePlan, f: &Frame<S>) -> Vec<S> {
        match self {
            TField::Coord(k) => f.j.col(*k),
            TField::Basis(b, i) => f.vector(plan, *b, *i),
            TField::Nu => f.nu.clone().unwrap_or_else(|| vec![S::zero(); plan.d]),
            TField::Phi(t) => {
                let v = t.eval(plan, f);
                match &f.phi {
                    Some(phi) => phi.mul_vec(&v),
                    None => vec![S::zero(); plan.d],
                }
            }
            TField::Project(bs, t) => f.project(plan, bs, &t.eval(plan, f)),
            TField::Scale(c, t) => t.eval(plan, f).into_iter().map(|v| v.scale(*c)).collect(),
            TField::Sum(ts) => {
                let mut acc = vec![S::zero(); plan.d];
                for t in ts {
                    for (a, b) in acc.iter_mut().zip(t.eval(plan, f)) {
                        *a += b;
                    }
                }
                acc
            }
        }
    }
}

/// Value and parameter derivatives `∂ₖ` of a field at one point.
#[derive(Clone, Debug)]
pub struct FieldJet {
    pub val: Vec<f64>,
    pub d: Vec<Vec<f64>>,
}

/// Frame-block components of an ambient vector.
#[derive(Clone, Debug)]
pub struct Split {
    pub tan: Vec<f64>,
    pub ltr: Vec<f64>,
    pub str: Vec<f64>,
}

impl Split {
    pub fn sum(&self) -> Vec<f64> {
        (0..self.tan.len()).map(|i| self.tan[i] + self.ltr[i] + self.str[i]).collect()
    }

    /// `h = h^l + h^s`.
    pub fn normal(&self) -> Vec<f64> {
        (0..self.tan.len()).map(|i| self.ltr[i] + self.str[i]).collect()
    }
}

/// Everything needed to evaluate submanifold identities at one point.
pub struct PointContext<'a> {
    pub a: &'a Ambient,
    /// The caller's plan re-anchored at `u`.
    pub plan: FramePlan,
    pub u: Vec<f64>,
    pub f0: Frame<f64>,
    jets: Vec<Frame<D1>>,
    /// `∂ₖ g` along the immersion.
    gd: Vec<Mat<f64>>,
    pub ch: Christoffel,
    pinv: Mat<f64>,
}

impl<'a> PointContext<'a> {
    pub fn new(a: &'a Ambient, imm: &Immersion, plan: &FramePlan, u: &[f64]) -> Result<Self> {
        let plan = plan.localize(a, imm, u)?;
        let f0 = Frame::build(a, imm, &plan, u)?;
        let m = plan.m;
        let jets: Vec<Frame<D1>> = (0..m)
            .map(|k| {
                let mut e = vec![0.0; m];
                e[k] = 1.0;
                Frame::build(a, imm, &plan, &seed(u, &e))
            })
            .collect::<Result<_>>()?;
        let gd = jets.iter().map(|f| Mat::from_fn(plan.d, plan.d, |i, j| f.g[(i, j)].eps)).collect();
        let ch = christoffel(a, &f0.x)?;
        let jt = f0.j.transpose();
        let pinv = jt.mul(&f0.j).solve(&jt)?;
        Ok(PointContext { a, plan, u: u.to_vec(), f0, jets, gd, ch, pinv })
    }

    pub fn x(&self) -> &[f64] {
        &self.f0.x
    }

    pub fn value(&self, t: &TField) -> Vec<f64> {
        t.eval(&self.plan, &self.f0)
    }

    pub fn jet(&self, t: &TField) -> FieldJet {
        let val = self.value(t);
        let d = self.jets.iter().map(|f| t.eval(&self.plan, f).iter().map(|v| v.eps).collect()).collect();
        FieldJet { val, d }
    }

    /// Frame jets, for smoothness checks.
    pub fn frame_derivative(&self, k: usize) -> Mat<f64> {
        let f = &self.jets[k].f;
        Mat::from_fn(f.rows, f.cols, |i, j| f[(i, j)].eps)
    }

    /// Parameter coefficients of a tangent vector.
    pub fn params_of(&self, x: &[f64]) -> Vec<f64> {
        self.pinv.mul_vec(x)
    }

    /// Flat derivative `∂_X Y` along the immersion.
    pub fn deriv(&self, x: &[f64], y: &FieldJet) -> Vec<f64> {
        let c = self.params_of(x);
        let mut out = vec![0.0; self.plan.d];
        for (k, ck) in c.iter().enumerate() {
            for i in 0..self.plan.d {
                out[i] += ck * y.d[k][i];
            }
        }
        out
    }

    /// `conn_X Y` for a tangent vector `x`.
    pub fn conn(&self, c: Conn, x: &[f64], y: &FieldJet) -> Vec<f64> {
        let dy = self.deriv(x, y);
        self.a.covariant(c, &self.ch, self.x(), x, &y.val, &dy)
    }

    /// `[X, Y]` of two tangent fields.
    pub fn bracket(&self, x: &FieldJet, y: &FieldJet) -> Vec<f64> {
        let a = self.deriv(&x.val, y);
        let b = self.deriv(&y.val, x);
        (0..a.len()).map(|i| a[i] - b[i]).collect()
    }

    /// `X ρ̃(Y, Z)`.
    pub fn derivative_of_pairing(&self, x: &[f64], y: &FieldJet, z: &FieldJet) -> f64 {
        let c = self.params_of(x);
        let g = &self.f0.g;
        c.iter()
            .enumerate()
            .map(|(k, ck)| {
                ck * (bilinear(g, &y.d[k], &z.val) + bilinear(&self.gd[k], &y.val, &z.val) + bilinear(g, &y.val, &z.d[k]))
            })
            .sum()
    }

    pub fn g(&self, a: &[f64], b: &[f64]) -> f64 {
        bilinear(&self.f0.g, a, b)
    }

    pub fn phi(&self, v: &[f64]) -> Vec<f64> {
        match &self.f0.phi {
            Some(p) => p.mul_vec(v),
            None => vec![0.0; v.len()],
        }
    }

    pub fn eta(&self, v: &[f64]) -> f64 {
        self.f0.eta.as_ref().map_or(0.0, |e| dot(e, v))
    }

    pub fn nu(&self) -> Vec<f64> {
        self.f0.nu.clone().unwrap_or_else(|| vec![0.0; self.plan.d])
    }

    pub fn k(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.a.k_apply(self.x(), x, y)
    }

    pub fn part(&self, v: &[f64], blocks: &[Block]) -> Vec<f64> {
        self.f0.project(&self.plan, blocks, v)
    }

    pub fn split(&self, v: &[f64]) -> Split {
        Split { tan: self.part(v, TANGENT), ltr: self.part(v, &[Block::Ltr]), str: self.part(v, &[Block::W]) }
    }

    /// Gauss splitting of `conn_X Y`.
    pub fn gauss(&self, c: Conn, x: &[f64], y: &FieldJet) -> Split {
        self.split(&self.conn(c, x, y))
    }

    /// Shape operator `A_V X = −(conn_X V)^T`.
    pub fn shape(&self, c: Conn, x: &[f64], v: &FieldJet) -> Vec<f64> {
        self.gauss(c, x, v).tan.iter().map(|t| -t).collect()
    }

    /// Tangential part `T` of `φv`.
    pub fn t(&self, v: &[f64]) -> Vec<f64> {
        self.part(&self.phi(v), TANGENT)
    }

    /// Transversal part of `φv` (`w` on tangent, `C` on transversal vectors).
    pub fn tr_phi(&self, v: &[f64]) -> Vec<f64> {
        self.part(&self.phi(v), super::frame::TRANSVERSAL)
    }

    pub fn basis(&self, b: Block) -> Vec<Vec<f64>> {
        self.plan.range(b).map(|k| self.f0.f.col(k)).collect()
    }

    pub fn require_contact(&self) -> Result<()> {
        if self.plan.contact {
            Ok(())
        } else {
            Err(GeomError::Usage("no contact structure".into()))
        }
    }
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    crate::linalg::sub(a, b)
}

/// `a + s·b`.
pub fn add_scaled(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::fields::ExprMap;
    use crate::lightlike::frame::plan;
    use crate::linalg::norm;
    use crate::sampling::Domain;

    fn paraboloid() -> (Ambient, Immersion) {
        // graph of z = u1² + u1 u2 in Euclidean R³
        let u = |i| Expr::var(i);
        let map = ExprMap::new(2, vec![u(0), u(1), u(0) * u(0) + u(0) * u(1)]);
        (Ambient::flat(vec![1.0; 3]), Immersion::new("graph", map, Domain::cube(2, -1.0, 1.0)).unwrap())
    }

    #[test]
    fn second_fundamental_form_of_a_graph() {
        let (a, imm) = paraboloid();
        let plan = plan(&a, &imm).unwrap();
        let ctx = PointContext::new(&a, &imm, &plan, &[0.3, -0.2]).unwrap();
        let x = ctx.jet(&TField::Coord(0));
        let y = ctx.jet(&TField::Coord(1));
        // ∂₀∂₁X = (0, 0, 1); its normal part is h(∂₀, ∂₁)
        let s = ctx.gauss(Conn::LeviCivita, &x.val, &y);
        let n = [-(2.0 * 0.3 - 0.2), -0.3, 1.0];
        let nn: f64 = n.iter().map(|v| v * v).sum();
        for i in 0..3 {
            assert!((s.str[i] - n[i] / nn).abs() < 1e-14);
        }
        assert!(norm(&sub(&s.sum(), &[0.0, 0.0, 1.0])) < 1e-14);
    }

    #[test]
    fn coordinate_fields_commute() {
        let (a, imm) = paraboloid();
        let plan = plan(&a, &imm).unwrap();
        let ctx = PointContext::new(&a, &imm, &plan, &[0.1, 0.5]).unwrap();
        let x = ctx.jet(&TField::Coord(0));
        let y = ctx.jet(&TField::Coord(1));
        assert!(norm(&ctx.bracket(&x, &y)) < 1e-15);
    }

    #[test]
    fn pairing_derivative_matches_metric_compatibility() {
        let (a, imm) = paraboloid();
        let plan = plan(&a, &imm).unwrap();
        let ctx = PointContext::new(&a, &imm, &plan, &[0.1, 0.5]).unwrap();
        let x = ctx.jet(&TField::combo(&[0.3, 0.7]));
        let y = ctx.jet(&TField::Coord(1));
        let z = ctx.jet(&TField::Basis(Block::W, 0));
        let lhs = ctx.derivative_of_pairing(&x.val, &y, &z);
        let rhs = ctx.g(&ctx.conn(Conn::LeviCivita, &x.val, &y), &z.val)
            + ctx.g(&y.val, &ctx.conn(Conn::LeviCivita, &x.val, &z));
        assert!((lhs - rhs).abs() < 1e-13);
    }
}
