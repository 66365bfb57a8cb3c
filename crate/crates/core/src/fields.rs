//! Smooth fields on a coordinate domain.
//!
//! Fields are generic over the scalar type so that one definition serves for
//! values and for exact derivatives. A field is always a genuine field: the
//! calculus routines differentiate it, they never extend a point vector.

use crate::expr::Expr;
use crate::linalg::Mat;
use crate::scalar::Scalar;
use rand::Rng;

/// A smooth map from coordinates to real tuples.
pub trait SmoothMap: Sync {
    fn domain_dim(&self) -> usize;
    fn codomain_dim(&self) -> usize;
    fn eval<S: Scalar>(&self, p: &[S]) -> Vec<S>;
}

/// Vector field: a smooth map whose output is read as tangent components.
pub trait VectorField: Sync {
    fn dim(&self) -> usize;
    fn eval<S: Scalar>(&self, p: &[S]) -> Vec<S>;
}

/// Covector field.
pub trait OneForm: Sync {
    fn dim(&self) -> usize;
    fn eval<S: Scalar>(&self, p: &[S]) -> Vec<S>;
}

/// (1,1) tensor field, stored as the matrix acting on components.
pub trait TensorField11: Sync {
    fn dim(&self) -> usize;
    fn eval<S: Scalar>(&self, p: &[S]) -> Mat<S>;
}

/// Symmetric (0,2) tensor field of constant index.
pub trait MetricField: Sync {
    fn dim(&self) -> usize;
    /// Number of negative eigenvalues.
    fn index(&self) -> usize;
    fn eval<S: Scalar>(&self, p: &[S]) -> Mat<S>;
}

/// Component functions given as expressions in `u1..un`.
#[derive(Clone, Debug)]
pub struct ExprMap {
    pub domain: usize,
    pub comps: Vec<Expr>,
}

impl ExprMap {
    pub fn new(domain: usize, comps: Vec<Expr>) -> Self {
        ExprMap { domain, comps }
    }
}

impl SmoothMap for ExprMap {
    fn domain_dim(&self) -> usize {
        self.domain
    }
    fn codomain_dim(&self) -> usize {
        self.comps.len()
    }
    fn eval<S: Scalar>(&self, p: &[S]) -> Vec<S> {
        self.comps.iter().map(|e| e.eval(p)).collect()
    }
}

impl VectorField for ExprMap {
    fn dim(&self) -> usize {
        self.domain
    }
    fn eval<S: Scalar>(&self, p: &[S]) -> Vec<S> {
        SmoothMap::eval(self, p)
    }
}

impl OneForm for ExprMap {
    fn dim(&self) -> usize {
        self.domain
    }
    fn eval<S: Scalar>(&self, p: &[S]) -> Vec<S> {
        SmoothMap::eval(self, p)
    }
}

/// Constant-coefficient field.
#[derive(Clone, Debug)]
pub struct ConstField(pub Vec<f64>);

impl VectorField for ConstField {
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn eval<S: Scalar>(&self, _p: &[S]) -> Vec<S> {
        self.0.iter().map(|&v| S::cst(v)).collect()
    }
}

/// `a + B p + c ⊙ sin(p)`: a cheap, genuinely non-constant test field.
#[derive(Clone, Debug)]
pub struct AffineSinField {
    pub a: Vec<f64>,
    pub b: Mat<f64>,
    pub c: Vec<f64>,
}

impl AffineSinField {
    pub fn random<R: Rng>(dim: usize, rng: &mut R) -> Self {
        let mut u = || rng.gen_range(-1.0..1.0);
        let a = (0..dim).map(|_| u()).collect();
        let b = Mat::from_fn(dim, dim, |_, _| u());
        let c = (0..dim).map(|_| u()).collect();
        AffineSinField { a, b, c }
    }
}

impl VectorField for AffineSinField {
    fn dim(&self) -> usize {
        self.a.len()
    }
    fn eval<S: Scalar>(&self, p: &[S]) -> Vec<S> {
        (0..self.a.len())
            .map(|i| {
                let mut v = S::cst(self.a[i]) + S::cst(self.c[i]) * p[i].sin();
                for j in 0..p.len() {
                    v += S::cst(self.b[(i, j)]) * p[j];
                }
                v
            })
            .collect()
    }
}

/// The field `p ↦ T(p) X(p)`.
pub struct Applied<'a, T: TensorField11, X: VectorField> {
    pub t: &'a T,
    pub x: &'a X,
}

impl<T: TensorField11, X: VectorField> VectorField for Applied<'_, T, X> {
    fn dim(&self) -> usize {
        self.x.dim()
    }
    fn eval<S: Scalar>(&self, p: &[S]) -> Vec<S> {
        self.t.eval(p).mul_vec(&self.x.eval(p))
    }
}

/// Identity (1,1) tensor.
pub struct Identity(pub usize);

impl TensorField11 for Identity {
    fn dim(&self) -> usize {
        self.0
    }
    fn eval<S: Scalar>(&self, _p: &[S]) -> Mat<S> {
        Mat::identity(self.0)
    }
}

/// Constant diagonal metric.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatMetric(pub Vec<f64>);

impl MetricField for FlatMetric {
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn index(&self) -> usize {
        self.0.iter().filter(|&&s| s < 0.0).count()
    }
    fn eval<S: Scalar>(&self, _p: &[S]) -> Mat<S> {
        let mut g = Mat::zeros(self.0.len(), self.0.len());
        for (i, &s) in self.0.iter().enumerate() {
            g[(i, i)] = S::cst(s);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn expr_map_evaluates_components() {
        let m = ExprMap::new(2, vec![Expr::parse("u1*u2").unwrap(), Expr::parse("u2").unwrap()]);
        assert_eq!(SmoothMap::eval(&m, &[2.0, 3.0]), vec![6.0, 3.0]);
        assert_eq!(m.codomain_dim(), 2);
    }

    #[test]
    fn applied_identity_is_the_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = AffineSinField::random(3, &mut rng);
        let id = Identity(3);
        let p = [0.1, -0.2, 0.3];
        assert_eq!(Applied { t: &id, x: &x }.eval(&p), x.eval(&p));
    }

    #[test]
    fn flat_metric_index() {
        assert_eq!(FlatMetric(vec![-1.0, 1.0, 1.0]).index(), 1);
    }
}
