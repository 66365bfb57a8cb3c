//! The ambient structure: metric, contact triple (φ, η, ν), difference
//! tensor K and the connections derived from them.
//!
//! The Sasakian model lives on R^(2n+1) with coordinates
//! `(x¹..xⁿ, y¹..yⁿ, z)` and index 2q. With `εᵢ = −1` for `i ≤ q` and `+1`
//! otherwise:
//!
//! ```text
//! η  = ½(dz − Σ εᵢ yⁱ dxⁱ)          ν = 2∂z
//! g  = η⊗η + ¼ Σ εᵢ (dxⁱ⊗dxⁱ + dyⁱ⊗dyⁱ)
//! φ∂xⁱ = −∂yⁱ,   φ∂yⁱ = ∂xⁱ + εᵢ yⁱ ∂z,   φ∂z = 0
//! ```
//!
//! The signs εᵢ in η and φ are what make the negative-index blocks Sasakian
//! as well; the suite re-verifies every axiom rather than trusting this.

use crate::calculus::Christoffel;
use crate::error::{GeomError, Result};
use crate::fields::{FlatMetric, MetricField, OneForm, TensorField11, VectorField};
use crate::linalg::{dot, Mat};
use crate::scalar::Scalar;

/// The flat indefinite Sasakian model.
#[derive(Clone, Debug, PartialEq)]
pub struct SasakianModel {
    pub n: usize,
    pub q: usize,
    eps: Vec<f64>,
    /// Multiplier on the reported contact form; 1 except in negative controls.
    pub eta_scale: f64,
}

impl SasakianModel {
    pub fn new(n: usize, q: usize) -> Result<Self> {
        if n == 0 || 2 * q >= 2 * n + 1 {
            return Err(GeomError::Usage(format!("invalid model parameters n = {n}, q = {q}")));
        }
        let eps = (0..n).map(|i| if i < q { -1.0 } else { 1.0 }).collect();
        Ok(SasakianModel { n, q, eps, eta_scale: 1.0 })
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn eps(&self, i: usize) -> f64 {
        self.eps[i]
    }

    /// Contact form without the control multiplier; the metric uses this one.
    fn eta_true<S: Scalar>(&self, p: &[S]) -> Vec<S> {
        let n = self.n;
        let mut e = vec![S::zero(); 2 * n + 1];
        for i in 0..n {
            e[i] = p[n + i].scale(-0.5 * self.eps[i]);
        }
        e[2 * n] = S::cst(0.5);
        e
    }

    pub fn eta<S: Scalar>(&self, p: &[S]) -> Vec<S> {
        let e = self.eta_true(p);
        if self.eta_scale == 1.0 {
            e
        } else {
            e.into_iter().map(|v| v.scale(self.eta_scale)).collect()
        }
    }

    pub fn nu<S: Scalar>(&self) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim()];
        v[2 * self.n] = S::cst(2.0);
        v
    }

    pub fn phi<S: Scalar>(&self, p: &[S]) -> Mat<S> {
        let n = self.n;
        let mut f = Mat::zeros(2 * n + 1, 2 * n + 1);
        for i in 0..n {
            f[(n + i, i)] = S::cst(-1.0);
            f[(i, n + i)] = S::one();
            f[(2 * n, n + i)] = p[n + i].scale(self.eps[i]);
        }
        f
    }

    pub fn metric<S: Scalar>(&self, p: &[S]) -> Mat<S> {
        let d = self.dim();
        let e = self.eta_true(p);
        let mut g = Mat::from_fn(d, d, |i, j| e[i] * e[j]);
        for i in 0..self.n {
            let s = S::cst(0.25 * self.eps[i]);
            g[(i, i)] += s;
            g[(self.n + i, self.n + i)] += s;
        }
        g
    }
}

/// The difference tensor family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KTensor {
    Zero,
    /// `K(X,Y) = λ η(X) η(Y) ν`.
    EtaEtaNu { lambda: f64 },
    /// `λ η(X)η(Y)ν + μ η(Y) X`: neither symmetric nor self-adjoint, used
    /// as a negative control.
    Perturbed { lambda: f64, mu: f64 },
}

impl KTensor {
    /// `−K`, which exchanges the two connections of the pair.
    pub fn negated(self) -> Self {
        match self {
            KTensor::Zero => KTensor::Zero,
            KTensor::EtaEtaNu { lambda } => KTensor::EtaEtaNu { lambda: -lambda },
            KTensor::Perturbed { lambda, mu } => KTensor::Perturbed { lambda: -lambda, mu: -mu },
        }
    }

    pub fn from_lambda(lambda: f64) -> Self {
        if lambda == 0.0 {
            KTensor::Zero
        } else {
            KTensor::EtaEtaNu { lambda }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Geometry {
    Sasakian(SasakianModel),
    /// Constant diagonal metric without contact structure.
    Flat(FlatMetric),
}

/// Which ambient connection to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Conn {
    LeviCivita,
    /// `∇̄ = ∇° + K`.
    Nabla,
    /// `∇̄* = ∇° − K`.
    NablaStar,
    /// `D̃ = ∇̄ − K − η⊗φ`.
    Qs,
    /// `D̃ = ∇̄* + K − η⊗φ`, the same connection built from the dual side.
    QsFromDual,
}

/// Metric, contact triple and K on one coordinate domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Ambient {
    pub geometry: Geometry,
    pub k: KTensor,
}

impl Ambient {
    pub fn sasakian(n: usize, q: usize, lambda: f64) -> Result<Self> {
        Ok(Ambient { geometry: Geometry::Sasakian(SasakianModel::new(n, q)?), k: KTensor::from_lambda(lambda) })
    }

    pub fn flat(signs: Vec<f64>) -> Self {
        Ambient { geometry: Geometry::Flat(FlatMetric(signs)), k: KTensor::Zero }
    }

    pub fn with_k(mut self, k: KTensor) -> Self {
        self.k = k;
        self
    }

    pub fn model(&self) -> Option<&SasakianModel> {
        match &self.geometry {
            Geometry::Sasakian(m) => Some(m),
            Geometry::Flat(_) => None,
        }
    }

    pub fn has_contact(&self) -> bool {
        self.model().is_some()
    }

    fn model_or_err(&self) -> Result<&SasakianModel> {
        self.model().ok_or_else(|| GeomError::Usage("ambient has no contact structure".into()))
    }

    pub fn eta<S: Scalar>(&self, p: &[S]) -> Result<Vec<S>> {
        Ok(self.model_or_err()?.eta(p))
    }

    pub fn nu<S: Scalar>(&self) -> Result<Vec<S>> {
        Ok(self.model_or_err()?.nu())
    }

    pub fn phi<S: Scalar>(&self, p: &[S]) -> Result<Mat<S>> {
        Ok(self.model_or_err()?.phi(p))
    }

    /// Sign pattern of the metric in coordinate order (diagonal part).
    pub fn signature(&self) -> Vec<f64> {
        match &self.geometry {
            Geometry::Flat(f) => f.0.clone(),
            Geometry::Sasakian(m) => {
                let mut s: Vec<f64> = (0..m.n).map(|i| m.eps(i)).collect();
                s.extend((0..m.n).map(|i| m.eps(i)));
                s.push(1.0);
                s
            }
        }
    }

    /// `K(X, Y)` at `p`.
    pub fn k_apply<S: Scalar>(&self, p: &[S], x: &[S], y: &[S]) -> Vec<S> {
        let d = self.dim();
        let m = match (&self.k, self.model()) {
            (KTensor::Zero, _) | (_, None) => return vec![S::zero(); d],
            (_, Some(m)) => m,
        };
        let e = m.eta(p);
        let (ex, ey) = (dot(&e, x), dot(&e, y));
        let nu: Vec<S> = m.nu();
        match self.k {
            KTensor::Zero => unreachable!(),
            KTensor::EtaEtaNu { lambda } => nu.iter().map(|&v| S::cst(lambda) * ex * ey * v).collect(),
            KTensor::Perturbed { lambda, mu } => {
                (0..d).map(|i| S::cst(lambda) * ex * ey * nu[i] + S::cst(mu) * ey * x[i]).collect()
            }
        }
    }

    /// The zeroth-order part `conn_X Y − ∇°_X Y` at `p`.
    pub fn correction(&self, conn: Conn, p: &[f64], x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let k = || self.k_apply(p, x, y);
        let eta_phi = || -> Vec<f64> {
            match self.model() {
                Some(m) => {
                    let ex = dot(&m.eta(p), x);
                    m.phi(p).mul_vec(y).iter().map(|v| ex * v).collect()
                }
                None => vec![0.0; d],
            }
        };
        match conn {
            Conn::LeviCivita => vec![0.0; d],
            Conn::Nabla => k(),
            Conn::NablaStar => k().iter().map(|v| -v).collect(),
            // ∇̄ − K − η⊗φ, built from the corrections of ∇̄ and ∇̄*
            Conn::Qs => {
                let (nabla, kv, ep) = (self.correction(Conn::Nabla, p, x, y), k(), eta_phi());
                (0..d).map(|i| nabla[i] - kv[i] - ep[i]).collect()
            }
            // ∇̄* + K − η⊗φ
            Conn::QsFromDual => {
                let (star, kv, ep) = (self.correction(Conn::NablaStar, p, x, y), k(), eta_phi());
                (0..d).map(|i| star[i] + kv[i] - ep[i]).collect()
            }
        }
    }

    /// `conn_X Y` from the derivative `dy = D_X Y` and precomputed symbols.
    pub fn covariant(&self, conn: Conn, ch: &Christoffel, p: &[f64], x: &[f64], y: &[f64], dy: &[f64]) -> Vec<f64> {
        let gam = ch.apply(x, y);
        let corr = self.correction(conn, p, x, y);
        (0..dy.len()).map(|i| dy[i] + gam[i] + corr[i]).collect()
    }

    /// `conn_X Y (p)` for genuine fields.
    pub fn connection<X: VectorField, Y: VectorField>(&self, conn: Conn, x: &X, y: &Y, p: &[f64]) -> Result<Vec<f64>> {
        let ch = crate::calculus::christoffel(self, p)?;
        Ok(self.connection_with(conn, &ch, x, y, p))
    }

    pub fn connection_with<X: VectorField, Y: VectorField>(
        &self,
        conn: Conn,
        ch: &Christoffel,
        x: &X,
        y: &Y,
        p: &[f64],
    ) -> Vec<f64> {
        let xv = x.eval(p);
        let yv = y.eval(p);
        let dy = crate::calculus::directional(y, p, &xv);
        self.covariant(conn, ch, p, &xv, &yv, &dy)
    }
}

impl MetricField for Ambient {
    fn dim(&self) -> usize {
        match &self.geometry {
            Geometry::Sasakian(m) => m.dim(),
            Geometry::Flat(f) => f.0.len(),
        }
    }
    fn index(&self) -> usize {
        match &self.geometry {
            Geometry::Sasakian(m) => 2 * m.q,
            Geometry::Flat(f) => f.index(),
        }
    }
    fn eval<S: Scalar>(&self, p: &[S]) -> Mat<S> {
        match &self.geometry {
            Geometry::Sasakian(m) => m.metric(p),
            Geometry::Flat(f) => f.eval(p),
        }
    }
}

impl Ambient {
    pub fn dim(&self) -> usize {
        MetricField::dim(self)
    }

    pub fn metric<S: Scalar>(&self, p: &[S]) -> Mat<S> {
        MetricField::eval(self, p)
    }
}

/// η as a one-form field.
pub struct EtaForm<'a>(pub &'a SasakianModel);

impl OneForm for EtaForm<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval<S: Scalar>(&self, p: &[S]) -> Vec<S> {
        self.0.eta(p)
    }
}

/// φ as a (1,1) tensor field.
pub struct PhiTensor<'a>(pub &'a SasakianModel);

impl TensorField11 for PhiTensor<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval<S: Scalar>(&self, p: &[S]) -> Mat<S> {
        self.0.phi(p)
    }
}

/// The characteristic field ν.
pub struct Reeb<'a>(pub &'a SasakianModel);

impl VectorField for Reeb<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval<S: Scalar>(&self, _p: &[S]) -> Vec<S> {
        self.0.nu()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{bilinear, singular_values};

    #[test]
    fn signature_of_r13_6() {
        let a = Ambient::sasakian(6, 3, 0.3).unwrap();
        let s = a.signature();
        let want = [-1., -1., -1., 1., 1., 1., -1., -1., -1., 1., 1., 1., 1.];
        assert_eq!(s, want);
        assert_eq!(MetricField::index(&a), 6);
        // eigenvalue count of the actual metric at a generic point
        let p: Vec<f64> = (0..13).map(|i| 0.1 * i as f64 - 0.6).collect();
        let g = a.metric(&p);
        let ev = crate::linalg::to_nalgebra(&g).symmetric_eigenvalues();
        assert_eq!(ev.iter().filter(|&&v| v < 0.0).count(), 6);
        assert!(singular_values(&g).last().unwrap() > &1e-3);
    }

    #[test]
    fn invalid_parameters() {
        assert!(SasakianModel::new(0, 0).is_err());
        assert!(SasakianModel::new(2, 2).is_ok());
        assert!(SasakianModel::new(2, 3).is_err());
    }

    #[test]
    fn nu_is_unit_and_metric_dual_of_eta() {
        let m = SasakianModel::new(2, 1).unwrap();
        let p = [0.3, -0.2, 0.5, 0.7, 0.1];
        let g = m.metric(&p);
        let nu: Vec<f64> = m.nu();
        assert!((bilinear(&g, &nu, &nu) - 1.0).abs() < 1e-15);
        let gnu = g.mul_vec(&nu);
        let e = m.eta(&p);
        for i in 0..5 {
            assert!((gnu[i] - e[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn k_on_nu_nu() {
        // K = λ η⊗η⊗ν with X = Y = ν gives λν
        let a = Ambient::sasakian(2, 1, 0.3).unwrap();
        let p = [0.1, 0.2, 0.3, 0.4, 0.5];
        let nu: Vec<f64> = a.nu().unwrap();
        let k = a.k_apply(&p, &nu, &nu);
        assert!((k[4] - 0.6).abs() < 1e-15 && k[..4].iter().all(|v| *v == 0.0));
    }

    #[test]
    fn flat_ambient_has_no_contact() {
        let a = Ambient::flat(vec![-1.0, 1.0]);
        assert!(!a.has_contact());
        assert!(a.eta::<f64>(&[0.0, 0.0]).is_err());
        assert_eq!(a.k_apply(&[0.0, 0.0], &[1.0, 0.0], &[1.0, 0.0]), vec![0.0, 0.0]);
    }
}
