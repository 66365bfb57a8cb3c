//! The statistical pair `∇̄ = ∇° + K`, `∇̄* = ∇° − K` and its verifier.

use crate::ambient::{Ambient, Conn};
use crate::calculus::{christoffel, derivative_of_metric_pairing, lie_bracket, Christoffel};
use crate::error::{GeomError, Result};
use crate::fields::{AffineSinField, VectorField};
use crate::linalg::{bilinear, norm, sub};
use crate::report::{aggregate_all, CheckSpec, Outcome, ResidualReport, TolClass, Tolerances};
use crate::sampling::{map_points, point_rng};
use std::collections::BTreeMap;

pub fn nabla<X: VectorField, Y: VectorField>(a: &Ambient, x: &X, y: &Y, p: &[f64]) -> Result<Vec<f64>> {
    a.connection(Conn::Nabla, x, y, p)
}

pub fn nabla_star<X: VectorField, Y: VectorField>(a: &Ambient, x: &X, y: &Y, p: &[f64]) -> Result<Vec<f64>> {
    a.connection(Conn::NablaStar, x, y, p)
}

/// `n` random test fields for sample `index`.
pub fn probe_fields(dim: usize, seed: u64, index: usize, salt: u64, n: usize) -> Vec<AffineSinField> {
    let mut rng = point_rng(seed, index, salt);
    (0..n).map(|_| AffineSinField::random(dim, &mut rng)).collect()
}

pub(crate) fn require_samples(samples: &[Vec<f64>], dim: usize) -> Result<()> {
    if samples.is_empty() {
        return Err(GeomError::Usage("empty sample set".into()));
    }
    if let Some(p) = samples.iter().find(|p| p.len() != dim) {
        return Err(GeomError::Dimension(format!("sample point has {} coordinates, ambient has {dim}", p.len())));
    }
    Ok(())
}

/// `(conn_X g)(Y, Z) = X g(Y,Z) − g(conn_X Y, Z) − g(Y, conn_X Z)`.
pub(crate) fn metric_derivative<X: VectorField, Y: VectorField, Z: VectorField>(
    a: &Ambient,
    ch: &Christoffel,
    conn: Conn,
    x: &X,
    y: &Y,
    z: &Z,
    p: &[f64],
) -> f64 {
    let g = &ch.g;
    let dxy = a.connection_with(conn, ch, x, y, p);
    let dxz = a.connection_with(conn, ch, x, z, p);
    derivative_of_metric_pairing(a, x, y, z, p) - bilinear(g, &dxy, &z.eval(p)) - bilinear(g, &y.eval(p), &dxz)
}

/// `|conn_X Y − conn_Y X − [X,Y]|`.
pub(crate) fn torsion_norm<X: VectorField, Y: VectorField>(
    a: &Ambient,
    ch: &Christoffel,
    conn: Conn,
    x: &X,
    y: &Y,
    p: &[f64],
) -> Result<f64> {
    let t = sub(&sub(&a.connection_with(conn, ch, x, y, p), &a.connection_with(conn, ch, y, x, p)), &lie_bracket(x, y, p)?);
    Ok(norm(&t))
}

pub const STATISTICAL_CHECKS: &[CheckSpec] = &[
    CheckSpec::new("lc.metric", "X ρ̃(Y,Z) = ρ̃(∇°_X Y, Z) + ρ̃(Y, ∇°_X Z)", TolClass::Ad),
    CheckSpec::new("lc.torsion", "∇°_X Y − ∇°_Y X = [X,Y]", TolClass::Ad),
    CheckSpec::new("stat.torsion", "∇̄_X Y − ∇̄_Y X = [X,Y]", TolClass::Ad),
    CheckSpec::new("stat.torsion_dual", "∇̄*_X Y − ∇̄*_Y X = [X,Y]", TolClass::Ad),
    CheckSpec::new("stat.codazzi", "(∇̄_X ρ̃)(Y,Z) = (∇̄_Y ρ̃)(X,Z)", TolClass::Ad),
    CheckSpec::new("stat.duality", "X ρ̃(Y,Z) = ρ̃(∇̄_X Y, Z) + ρ̃(Y, ∇̄*_X Z)", TolClass::Ad),
    CheckSpec::new("stat.k_symmetric", "K(X,Y) = K(Y,X)", TolClass::Exact),
    CheckSpec::new("stat.k_self_adjoint", "ρ̃(K_X Y, Z) = ρ̃(Y, K_X Z)", TolClass::Exact),
    CheckSpec::new("stat.mean_connection", "½(∇̄_X Y + ∇̄*_X Y) = ∇°_X Y", TolClass::Exact),
    CheckSpec::new("stat.difference", "∇̄_X Y − ∇̄*_X Y = 2K(X,Y)", TolClass::Exact),
];

const SALT: u64 = 11;

/// Residuals of the statistical axioms at every sample point.
pub fn check_statistical(a: &Ambient, samples: &[Vec<f64>], seed: u64, tols: &Tolerances) -> Result<Vec<ResidualReport>> {
    let d = a.dim();
    require_samples(samples, d)?;
    let rows = map_points(samples, |i, p| {
        let f = probe_fields(d, seed, i, SALT, 3);
        let (x, y, z) = (&f[0], &f[1], &f[2]);
        let ch = christoffel(a, p)?;
        let (xv, yv, zv) = (x.eval(p), y.eval(p), z.eval(p));
        let g = &ch.g;
        let lc = a.connection_with(Conn::LeviCivita, &ch, x, y, p);
        let nb = a.connection_with(Conn::Nabla, &ch, x, y, p);
        let ns = a.connection_with(Conn::NablaStar, &ch, x, y, p);
        let kxy = a.k_apply(p, &xv, &yv);
        let kyx = a.k_apply(p, &yv, &xv);
        let kxz = a.k_apply(p, &xv, &zv);
        let codazzi = metric_derivative(a, &ch, Conn::Nabla, x, y, z, p) - metric_derivative(a, &ch, Conn::Nabla, y, x, z, p);
        let dxz_star = a.connection_with(Conn::NablaStar, &ch, x, z, p);
        let duality = derivative_of_metric_pairing(a, x, y, z, p) - bilinear(g, &nb, &zv) - bilinear(g, &yv, &dxz_star);
        let mean: Vec<f64> = (0..d).map(|k| 0.5 * (nb[k] + ns[k]) - lc[k]).collect();
        let diff: Vec<f64> = (0..d).map(|k| nb[k] - ns[k] - 2.0 * kxy[k]).collect();
        Ok(vec![
            Outcome::Residual(metric_derivative(a, &ch, Conn::LeviCivita, x, y, z, p).abs()),
            Outcome::Residual(torsion_norm(a, &ch, Conn::LeviCivita, x, y, p)?),
            Outcome::Residual(torsion_norm(a, &ch, Conn::Nabla, x, y, p)?),
            Outcome::Residual(torsion_norm(a, &ch, Conn::NablaStar, x, y, p)?),
            Outcome::Residual(codazzi.abs()),
            Outcome::Residual(duality.abs()),
            Outcome::Residual(norm(&sub(&kxy, &kyx))),
            Outcome::Residual((bilinear(g, &kxy, &zv) - bilinear(g, &yv, &kxz)).abs()),
            Outcome::Residual(norm(&mean)),
            Outcome::Residual(norm(&diff)),
        ])
    })?;
    Ok(aggregate_all(STATISTICAL_CHECKS, tols, &rows, &BTreeMap::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::KTensor;
    use crate::calculus::levi_civita;
    use crate::fields::ConstField;
    use crate::sampling::{sample_points, Domain};

    fn points(dim: usize, n: usize) -> Vec<Vec<f64>> {
        sample_points(&Domain::cube(dim, -1.0, 1.0), n, 3).unwrap()
    }

    fn get<'a>(r: &'a [ResidualReport], id: &str) -> &'a ResidualReport {
        r.iter().find(|r| r.check_id == id).unwrap()
    }

    #[test]
    fn zero_k_reproduces_levi_civita() {
        let a = Ambient::sasakian(2, 1, 0.0).unwrap();
        let f = probe_fields(5, 1, 0, 0, 2);
        let p = [0.1, -0.3, 0.4, 0.2, 0.9];
        let lc = levi_civita(&a, &f[0], &f[1], &p).unwrap();
        assert_eq!(nabla(&a, &f[0], &f[1], &p).unwrap(), lc);
        assert_eq!(nabla_star(&a, &f[0], &f[1], &p).unwrap(), lc);
    }

    #[test]
    fn k_on_reeb_field() {
        let a = Ambient::sasakian(2, 1, 0.3).unwrap();
        let nu = ConstField(a.nu().unwrap());
        let p = [0.5, 0.2, -0.1, 0.7, 0.3];
        let lc = levi_civita(&a, &nu, &nu, &p).unwrap();
        let got = nabla(&a, &nu, &nu, &p).unwrap();
        // K(ν,ν) = λ η(ν)² ν = 0.3 · 2∂z
        for k in 0..5 {
            let kv = if k == 4 { 0.6 } else { 0.0 };
            assert!((got[k] - lc[k] - kv).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_k_passes_at_exact_tolerance() {
        let a = Ambient::sasakian(2, 1, 0.0).unwrap();
        let r = check_statistical(&a, &points(5, 20), 9, &Tolerances::default()).unwrap();
        assert!(r.iter().all(|r| r.max_residual < 1e-10), "{r:#?}");
    }

    #[test]
    fn model_k_passes() {
        let a = Ambient::sasakian(3, 1, 0.3).unwrap();
        let r = check_statistical(&a, &points(7, 30), 9, &Tolerances::default()).unwrap();
        assert!(r.iter().all(|r| r.pass), "{r:#?}");
    }

    #[test]
    fn perturbed_k_is_flagged() {
        let a = Ambient::sasakian(2, 1, 0.3).unwrap().with_k(KTensor::Perturbed { lambda: 0.3, mu: 1e-2 });
        let r = check_statistical(&a, &points(5, 30), 9, &Tolerances::default()).unwrap();
        let cod = get(&r, "stat.codazzi");
        assert!(!cod.pass && cod.max_residual > 1e-3 && cod.max_residual < 1e-1, "{cod:?}");
        assert!(!get(&r, "stat.duality").pass);
        assert!(!get(&r, "stat.k_symmetric").pass);
        assert!(get(&r, "lc.metric").pass);
    }

    #[test]
    fn empty_samples_rejected() {
        let a = Ambient::sasakian(1, 0, 0.3).unwrap();
        assert!(matches!(check_statistical(&a, &[], 0, &Tolerances::default()), Err(GeomError::Usage(_))));
    }
}
