//! Verifiers for the contact metric, Sasakian and Sasakian statistical
//! structures of the ambient model.

use crate::ambient::{Ambient, Conn, EtaForm, PhiTensor, Reeb, SasakianModel};
use crate::calculus::{christoffel, exterior_derivative, nijenhuis};
use crate::error::{GeomError, Result};
use crate::fields::{Applied, VectorField};
use crate::linalg::{bilinear, dot, norm};
use crate::report::{aggregate_all, CheckSpec, Outcome, ResidualReport, TolClass, Tolerances};
use crate::sampling::map_points;
use crate::statistical::{probe_fields, require_samples};
use std::collections::BTreeMap;

/// Factor `c` in `dη(X,Y) = c ρ̃(X, φY)` for the model under the no-½
/// exterior-derivative convention.
pub const D_ETA_SCALE: f64 = 2.0;

fn model(a: &Ambient) -> Result<&SasakianModel> {
    a.model().ok_or_else(|| GeomError::Usage("ambient has no contact structure".into()))
}

fn combo(terms: &[(f64, &[f64])]) -> Vec<f64> {
    let d = terms[0].1.len();
    (0..d).map(|k| terms.iter().map(|(c, v)| c * v[k]).sum()).collect()
}

pub const CONTACT_CHECKS: &[CheckSpec] = &[
    CheckSpec::new("contact.phi_nu", "φν = 0", TolClass::Exact),
    CheckSpec::new("contact.eta_phi", "η ∘ φ = 0", TolClass::Exact),
    CheckSpec::new("contact.eta_nu", "η(ν) = 1", TolClass::Exact),
    CheckSpec::new("contact.nu_unit", "ρ̃(ν,ν) = 1", TolClass::Exact),
    CheckSpec::new("contact.eta_metric_dual", "ρ̃(X, ν) = η(X)", TolClass::Exact),
    CheckSpec::new("contact.phi_squared", "φ²X = −X + η(X)ν", TolClass::Exact),
    CheckSpec::new("contact.phi_skew", "ρ̃(φX, Y) + ρ̃(X, φY) = 0", TolClass::Exact),
    CheckSpec::new("contact.compatible", "ρ̃(φX, φY) = ρ̃(X,Y) − η(X)η(Y)", TolClass::Exact),
    CheckSpec::new("contact.d_eta", "dη(X,Y) = ρ̃(X, φY)", TolClass::Ad),
];

const SALT_CONTACT: u64 = 21;

pub fn check_contact_metric(a: &Ambient, samples: &[Vec<f64>], seed: u64, tols: &Tolerances) -> Result<Vec<ResidualReport>> {
    let m = model(a)?;
    let d = a.dim();
    require_samples(samples, d)?;
    let rows = map_points(samples, |i, p| {
        let f = probe_fields(d, seed, i, SALT_CONTACT, 2);
        let (x, y) = (&f[0], &f[1]);
        let (xv, yv) = (x.eval(p), y.eval(p));
        let g = m.metric(p);
        let phi = m.phi(p);
        let eta = m.eta(p);
        let nu: Vec<f64> = m.nu();
        let (fx, fy) = (phi.mul_vec(&xv), phi.mul_vec(&yv));
        let ex = dot(&eta, &xv);
        let ey = dot(&eta, &yv);
        let phi2 = combo(&[(1.0, &phi.mul_vec(&fx)), (1.0, &xv), (-ex, &nu)]);
        let deta = exterior_derivative(&EtaForm(m), x, y, p)?;
        Ok(vec![
            Outcome::Residual(norm(&phi.mul_vec(&nu))),
            Outcome::Residual(norm(&phi.tmul_vec(&eta))),
            Outcome::Residual((dot(&eta, &nu) - 1.0).abs()),
            Outcome::Residual((bilinear(&g, &nu, &nu) - 1.0).abs()),
            Outcome::Residual((bilinear(&g, &xv, &nu) - ex).abs()),
            Outcome::Residual(norm(&phi2)),
            Outcome::Residual((bilinear(&g, &fx, &yv) + bilinear(&g, &xv, &fy)).abs()),
            Outcome::Residual((bilinear(&g, &fx, &fy) - bilinear(&g, &xv, &yv) + ex * ey).abs()),
            Outcome::Residual((deta - D_ETA_SCALE * bilinear(&g, &xv, &fy)).abs()),
        ])
    })?;
    let mut extra = BTreeMap::new();
    extra.insert("contact.d_eta", format!("scale factor {D_ETA_SCALE} under dη(X,Y) = Xη(Y) − Yη(X) − η([X,Y])"));
    Ok(aggregate_all(CONTACT_CHECKS, tols, &rows, &extra))
}

pub const SASAKIAN_CHECKS: &[CheckSpec] = &[
    CheckSpec::new("sasaki.nu_derivative", "∇°_X ν = −φX", TolClass::Ad),
    CheckSpec::new("sasaki.phi_derivative", "(∇°_X φ)Y = ρ̃(X,Y)ν − η(Y)X", TolClass::Ad),
    CheckSpec::new("sasaki.normal", "N_φ(X,Y) + dη(X,Y)ν = 0", TolClass::Ad),
];

const SALT_SASAKI: u64 = 22;

/// `(conn_X φ)Y = conn_X(φY) − φ(conn_X Y)`.
fn phi_derivative<X: VectorField, Y: VectorField>(
    a: &Ambient,
    m: &SasakianModel,
    ch: &crate::calculus::Christoffel,
    conn_outer: Conn,
    conn_inner: Conn,
    x: &X,
    y: &Y,
    p: &[f64],
) -> Vec<f64> {
    let phi_t = PhiTensor(m);
    let fy = Applied { t: &phi_t, x: y };
    let outer = a.connection_with(conn_outer, ch, x, &fy, p);
    let inner = m.phi(p).mul_vec(&a.connection_with(conn_inner, ch, x, y, p));
    combo(&[(1.0, &outer), (-1.0, &inner)])
}

pub fn check_sasakian(a: &Ambient, samples: &[Vec<f64>], seed: u64, tols: &Tolerances) -> Result<Vec<ResidualReport>> {
    let m = model(a)?;
    let d = a.dim();
    require_samples(samples, d)?;
    let rows = map_points(samples, |i, p| {
        let f = probe_fields(d, seed, i, SALT_SASAKI, 2);
        let (x, y) = (&f[0], &f[1]);
        let (xv, yv) = (x.eval(p), y.eval(p));
        let ch = christoffel(a, p)?;
        let nu: Vec<f64> = m.nu();
        let phi = m.phi(p);
        let fx = phi.mul_vec(&xv);
        let dnu = a.connection_with(Conn::LeviCivita, &ch, x, &Reeb(m), p);
        let dphi = phi_derivative(a, m, &ch, Conn::LeviCivita, Conn::LeviCivita, x, y, p);
        let gxy = bilinear(&ch.g, &xv, &yv);
        let ey = dot(&m.eta(p), &yv);
        let n = nijenhuis(&PhiTensor(m), x, y, p)?;
        let deta = exterior_derivative(&EtaForm(m), x, y, p)?;
        Ok(vec![
            Outcome::Residual(norm(&combo(&[(1.0, &dnu), (1.0, &fx)]))),
            Outcome::Residual(norm(&combo(&[(1.0, &dphi), (-gxy, &nu), (ey, &xv)]))),
            Outcome::Residual(norm(&combo(&[(1.0, &n), (deta, &nu)]))),
        ])
    })?;
    Ok(aggregate_all(SASAKIAN_CHECKS, tols, &rows, &BTreeMap::new()))
}

pub const SASAKIAN_STATISTICAL_CHECKS: &[CheckSpec] = &[
    CheckSpec::new("sasstat.k_phi", "K(X,φY) + φK(X,Y) = 0", TolClass::Exact),
    CheckSpec::new("sasstat.phi_derivative", "∇̄_X φY − φ∇̄*_X Y = ρ̃(X,Y)ν − η(Y)X", TolClass::Ad),
    CheckSpec::new("sasstat.nu_derivative", "∇̄_X ν = −φX + ρ̃(∇̄_X ν, ν)ν", TolClass::Ad),
    CheckSpec::new("sasstat.dual_phi_derivative", "∇̄*_X φY − φ∇̄_X Y = ρ̃(X,Y)ν − η(Y)X", TolClass::Ad),
    CheckSpec::new("sasstat.dual_nu_derivative", "∇̄*_X ν = −φX + ρ̃(∇̄*_X ν, ν)ν", TolClass::Ad),
    CheckSpec::new("sasstat.correction_forms_agree", "ρ̃(∇̄_X ν, ν) = η(∇̄_X ν)", TolClass::Exact),
];

const SALT_SASSTAT: u64 = 23;

pub fn check_sasakian_statistical(
    a: &Ambient,
    samples: &[Vec<f64>],
    seed: u64,
    tols: &Tolerances,
) -> Result<Vec<ResidualReport>> {
    let m = model(a)?;
    let d = a.dim();
    require_samples(samples, d)?;
    let rows = map_points(samples, |i, p| {
        let f = probe_fields(d, seed, i, SALT_SASSTAT, 2);
        let (x, y) = (&f[0], &f[1]);
        let (xv, yv) = (x.eval(p), y.eval(p));
        let ch = christoffel(a, p)?;
        let nu: Vec<f64> = m.nu();
        let phi = m.phi(p);
        let eta = m.eta(p);
        let (fx, fy) = (phi.mul_vec(&xv), phi.mul_vec(&yv));
        let gxy = bilinear(&ch.g, &xv, &yv);
        let ey = dot(&eta, &yv);
        let kphi = combo(&[(1.0, &a.k_apply(p, &xv, &fy)), (1.0, &phi.mul_vec(&a.k_apply(p, &xv, &yv)))]);
        let rhs = combo(&[(gxy, &nu), (-ey, &xv)]);
        let mut out = vec![Outcome::Residual(norm(&kphi))];
        let lhs = phi_derivative(a, m, &ch, Conn::Nabla, Conn::NablaStar, x, y, p);
        out.push(Outcome::Residual(norm(&combo(&[(1.0, &lhs), (-1.0, &rhs)]))));
        let nu_res = |conn: Conn| {
            let dnu = a.connection_with(conn, &ch, x, &Reeb(m), p);
            let c = bilinear(&ch.g, &dnu, &nu);
            (norm(&combo(&[(1.0, &dnu), (1.0, &fx), (-c, &nu)])), c - dot(&eta, &dnu))
        };
        let (nb, agree) = nu_res(Conn::Nabla);
        out.push(Outcome::Residual(nb));
        let lhs = phi_derivative(a, m, &ch, Conn::NablaStar, Conn::Nabla, x, y, p);
        out.push(Outcome::Residual(norm(&combo(&[(1.0, &lhs), (-1.0, &rhs)]))));
        out.push(Outcome::Residual(nu_res(Conn::NablaStar).0));
        out.push(Outcome::Residual(agree.abs()));
        Ok(out)
    })?;
    Ok(aggregate_all(SASAKIAN_STATISTICAL_CHECKS, tols, &rows, &BTreeMap::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::KTensor;
    use crate::fields::ConstField;
    use crate::sampling::{sample_points, Domain};

    fn points(dim: usize, n: usize) -> Vec<Vec<f64>> {
        sample_points(&Domain::cube(dim, -1.0, 1.0), n, 5).unwrap()
    }

    fn get<'a>(r: &'a [ResidualReport], id: &str) -> &'a ResidualReport {
        r.iter().find(|r| r.check_id == id).unwrap()
    }

    #[test]
    fn model_r13_6_is_contact_metric_and_sasakian() {
        let a = Ambient::sasakian(6, 3, 0.3).unwrap();
        let pts = points(13, 25);
        let t = Tolerances::default();
        for r in check_contact_metric(&a, &pts, 1, &t).unwrap().iter().chain(&check_sasakian(&a, &pts, 1, &t).unwrap()) {
            assert!(r.pass, "{r:?}");
        }
        for r in check_sasakian_statistical(&a, &pts, 1, &t).unwrap() {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn nu_derivative_along_nu_vanishes() {
        let a = Ambient::sasakian(2, 1, 0.0).unwrap();
        let nu = ConstField(a.nu().unwrap());
        let v = a.connection(Conn::LeviCivita, &nu, &nu, &[0.2, 0.1, -0.4, 0.3, 0.0]).unwrap();
        assert!(norm(&v) < 1e-14);
    }

    #[test]
    fn d_eta_scale_is_two() {
        let a = Ambient::sasakian(2, 1, 0.0).unwrap();
        let m = a.model().unwrap();
        let x = ConstField(vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        let y = ConstField(vec![0.0, 0.0, 1.0, 0.0, 0.0]);
        let p = [0.0; 5];
        let deta = exterior_derivative(&EtaForm(m), &x, &y, &p).unwrap();
        let g = m.metric(&p);
        let gxfy = bilinear(&g, &x.0, &m.phi(&p).mul_vec(&y.0));
        assert!((deta - 2.0 * gxfy).abs() < 1e-15 && gxfy.abs() > 0.1);
    }

    #[test]
    fn corrupted_eta_is_flagged() {
        let mut m = SasakianModel::new(2, 1).unwrap();
        m.eta_scale = 2.0;
        let a = Ambient { geometry: crate::ambient::Geometry::Sasakian(m), k: KTensor::Zero };
        let r = check_contact_metric(&a, &points(5, 10), 1, &Tolerances::default()).unwrap();
        let e = get(&r, "contact.eta_nu");
        assert!(!e.pass && (e.max_residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flat_ambient_is_usage_error() {
        let a = Ambient::flat(vec![-1.0, 1.0]);
        assert!(matches!(check_contact_metric(&a, &points(2, 1), 0, &Tolerances::default()), Err(GeomError::Usage(_))));
    }

    #[test]
    fn zero_k_reduces_to_sasakian_identity() {
        let a = Ambient::sasakian(2, 1, 0.0).unwrap();
        let pts = points(5, 10);
        let t = Tolerances::default();
        let s = check_sasakian(&a, &pts, 4, &t).unwrap();
        let st = check_sasakian_statistical(&a, &pts, 4, &t).unwrap();
        assert!(get(&st, "sasstat.k_phi").max_residual == 0.0);
        assert!(get(&s, "sasaki.phi_derivative").pass && get(&st, "sasstat.phi_derivative").pass);
    }
}
