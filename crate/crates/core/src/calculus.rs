//! Ambient calculus: directional derivatives, brackets, the Levi-Civita
//! connection via the Koszul formula, exterior derivative and Nijenhuis
//! tensor. All derivatives are exact (dual numbers).

use crate::error::{GeomError, Result};
use crate::fields::{MetricField, OneForm, SmoothMap, TensorField11, VectorField};
use crate::linalg::{condition_number, dot, sub, Lu, Mat};
use crate::scalar::{eps_parts, seed, Dual, Scalar};

/// Metrics whose Gram matrix is worse conditioned than this are degenerate.
pub const DEGENERATE_COND: f64 = 1e12;

fn check_dim(what: &str, want: usize, got: usize) -> Result<()> {
    if want != got {
        return Err(GeomError::Dimension(format!("{what}: expected {want}, got {got}")));
    }
    Ok(())
}

/// `D_dir F (p)` for a smooth map.
pub fn directional_map<F: SmoothMap, S: Scalar>(f: &F, p: &[S], dir: &[S]) -> Vec<S> {
    eps_parts(&f.eval(&seed(p, dir)))
}

/// `D_dir Y (p)` componentwise.
pub fn directional<Y: VectorField, S: Scalar>(y: &Y, p: &[S], dir: &[S]) -> Vec<S> {
    eps_parts(&y.eval(&seed(p, dir)))
}

/// Second directional derivative `D_a D_b F (p)` through nested duals.
pub fn second_directional<F: SmoothMap>(f: &F, p: &[f64], a: &[f64], b: &[f64]) -> Vec<f64> {
    let inner: Vec<Dual<f64>> = seed(p, b);
    let outer: Vec<Dual<Dual<f64>>> =
        inner.iter().zip(a).map(|(&x, &ai)| Dual::new(x, Dual::new(ai, 0.0))).collect();
    f.eval(&outer).iter().map(|d| d.eps.eps).collect()
}

/// `[X, Y](p) = D_X Y − D_Y X`.
pub fn lie_bracket<X: VectorField, Y: VectorField>(x: &X, y: &Y, p: &[f64]) -> Result<Vec<f64>> {
    check_dim("lie_bracket field dimensions", x.dim(), y.dim())?;
    check_dim("lie_bracket point", x.dim(), p.len())?;
    let xv = x.eval(p);
    let yv = y.eval(p);
    Ok(sub(&directional(y, p, &xv), &directional(x, p, &yv)))
}

/// Christoffel symbols `Γᵏᵢⱼ` at one point, together with the metric there.
#[derive(Clone, Debug)]
pub struct Christoffel {
    pub dim: usize,
    /// Indexed `[k][i][j]`.
    pub gamma: Vec<Vec<Vec<f64>>>,
    pub g: Mat<f64>,
}

impl Christoffel {
    /// `Γ(X, Y)ᵏ = Γᵏᵢⱼ Xⁱ Yʲ`.
    pub fn apply(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|k| {
                let mut acc = 0.0;
                for i in 0..self.dim {
                    if x[i] == 0.0 {
                        continue;
                    }
                    acc += x[i] * dot(&self.gamma[k][i], y);
                }
                acc
            })
            .collect()
    }
}

/// `∂ₗ g` for every coordinate direction.
pub fn metric_derivatives<G: MetricField>(g: &G, p: &[f64]) -> Vec<Mat<f64>> {
    let n = g.dim();
    (0..n)
        .map(|l| {
            let mut e = vec![0.0; n];
            e[l] = 1.0;
            let gd = g.eval(&seed(p, &e));
            Mat::from_fn(n, n, |i, j| gd[(i, j)].eps)
        })
        .collect()
}

/// Christoffel symbols from the Koszul formula on coordinate fields,
/// `Γₗᵢⱼ = ½(∂ᵢgₗⱼ + ∂ⱼgₗᵢ − ∂ₗgᵢⱼ)`, then solved against `g` with a
/// complete-pivoting LU.
pub fn christoffel<G: MetricField>(g: &G, p: &[f64]) -> Result<Christoffel> {
    let n = g.dim();
    check_dim("christoffel point", n, p.len())?;
    let gm = g.eval(p);
    let cond = condition_number(&gm);
    if !(cond < DEGENERATE_COND) {
        return Err(GeomError::Degenerate { what: "metric Gram matrix".into(), cond });
    }
    let dg = metric_derivatives(g, p);
    let lu = Lu::new(&gm)?;
    let mut gamma = vec![vec![vec![0.0; n]; n]; n];
    for i in 0..n {
        for j in i..n {
            let lower: Vec<f64> =
                (0..n).map(|l| 0.5 * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)])).collect();
            let upper = lu.solve_vec(&lower)?;
            for k in 0..n {
                gamma[k][i][j] = upper[k];
                gamma[k][j][i] = upper[k];
            }
        }
    }
    Ok(Christoffel { dim: n, gamma, g: gm })
}

/// `∇°_X Y (p)` for the Levi-Civita connection of `g`.
pub fn levi_civita<G: MetricField, X: VectorField, Y: VectorField>(
    g: &G,
    x: &X,
    y: &Y,
    p: &[f64],
) -> Result<Vec<f64>> {
    check_dim("levi_civita field dimensions", g.dim(), x.dim())?;
    check_dim("levi_civita field dimensions", g.dim(), y.dim())?;
    let ch = christoffel(g, p)?;
    Ok(covariant_with(&ch, x, y, p))
}

/// `D_X Y + Γ(X, Y)` with precomputed symbols.
pub fn covariant_with<X: VectorField, Y: VectorField>(ch: &Christoffel, x: &X, y: &Y, p: &[f64]) -> Vec<f64> {
    let xv = x.eval(p);
    let yv = y.eval(p);
    let dy = directional(y, p, &xv);
    let gam = ch.apply(&xv, &yv);
    dy.iter().zip(&gam).map(|(a, b)| a + b).collect()
}

/// `X(η(Y))` at `p`.
pub fn derivative_of_pairing<F: OneForm, X: VectorField, Y: VectorField>(
    eta: &F,
    x: &X,
    y: &Y,
    p: &[f64],
) -> f64 {
    let xv = x.eval(p);
    let pd = seed(p, &xv);
    dot(&eta.eval(&pd), &y.eval(&pd)).eps
}

/// `X(g(Y, Z))` at `p`.
pub fn derivative_of_metric_pairing<G: MetricField, X: VectorField, Y: VectorField, Z: VectorField>(
    g: &G,
    x: &X,
    y: &Y,
    z: &Z,
    p: &[f64],
) -> f64 {
    let xv = x.eval(p);
    let pd = seed(p, &xv);
    let gm = g.eval(&pd);
    dot(&y.eval(&pd), &gm.mul_vec(&z.eval(&pd))).eps
}

/// `dη(X, Y) = X η(Y) − Y η(X) − η([X, Y])`, no ½ factor.
pub fn exterior_derivative<F: OneForm, X: VectorField, Y: VectorField>(
    eta: &F,
    x: &X,
    y: &Y,
    p: &[f64],
) -> Result<f64> {
    check_dim("exterior_derivative", eta.dim(), x.dim())?;
    check_dim("exterior_derivative", eta.dim(), y.dim())?;
    let br = lie_bracket(x, y, p)?;
    let e = eta.eval(p);
    Ok(derivative_of_pairing(eta, x, y, p) - derivative_of_pairing(eta, y, x, p) - dot(&e, &br))
}

/// `N_φ(X,Y) = [φX,φY] − φ[φX,Y] − φ[X,φY] + φ²[X,Y]`.
pub fn nijenhuis<T: TensorField11, X: VectorField, Y: VectorField>(
    phi: &T,
    x: &X,
    y: &Y,
    p: &[f64],
) -> Result<Vec<f64>> {
    check_dim("nijenhuis", phi.dim(), x.dim())?;
    check_dim("nijenhuis", phi.dim(), y.dim())?;
    use crate::fields::Applied;
    let px = Applied { t: phi, x };
    let py = Applied { t: phi, x: y };
    let f = phi.eval(p);
    let a = lie_bracket(&px, &py, p)?;
    let b = f.mul_vec(&lie_bracket(&px, y, p)?);
    let c = f.mul_vec(&lie_bracket(x, &py, p)?);
    let d = f.mul_vec(&f.mul_vec(&lie_bracket(x, y, p)?));
    Ok((0..a.len()).map(|i| a[i] - b[i] - c[i] + d[i]).collect())
}
