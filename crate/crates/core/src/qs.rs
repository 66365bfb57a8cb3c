//! The quarter-symmetric metric connection `D̃_X Y = ∇̄_X Y − K(X,Y) − η(X)φY`.

use crate::ambient::{Ambient, Conn, PhiTensor, Reeb, SasakianModel};
use crate::calculus::{christoffel, lie_bracket, Christoffel};
use crate::error::{GeomError, Result};
use crate::fields::{Applied, VectorField};
use crate::linalg::{bilinear, dot, norm};
use crate::report::{aggregate_all, CheckSpec, Outcome, ResidualReport, TolClass, Tolerances};
use crate::sampling::map_points;
use crate::statistical::{metric_derivative, probe_fields, require_samples};
use std::collections::BTreeMap;

fn model(a: &Ambient) -> Result<&SasakianModel> {
    a.model().ok_or_else(|| GeomError::Usage("the quarter-symmetric connection needs a contact structure".into()))
}

pub fn qs_apply<X: VectorField, Y: VectorField>(a: &Ambient, x: &X, y: &Y, p: &[f64]) -> Result<Vec<f64>> {
    model(a)?;
    a.connection(Conn::Qs, x, y, p)
}

fn torsion_with<X: VectorField, Y: VectorField>(
    a: &Ambient,
    ch: &Christoffel,
    conn: Conn,
    x: &X,
    y: &Y,
    p: &[f64],
) -> Result<Vec<f64>> {
    let xy = a.connection_with(conn, ch, x, y, p);
    let yx = a.connection_with(conn, ch, y, x, p);
    let br = lie_bracket(x, y, p)?;
    Ok((0..xy.len()).map(|k| xy[k] - yx[k] - br[k]).collect())
}

/// `T(X,Y) = D̃_X Y − D̃_Y X − [X,Y]`.
pub fn qs_torsion<X: VectorField, Y: VectorField>(a: &Ambient, x: &X, y: &Y, p: &[f64]) -> Result<Vec<f64>> {
    model(a)?;
    let ch = christoffel(a, p)?;
    torsion_with(a, &ch, Conn::Qs, x, y, p)
}

/// `η(Y)φX − η(X)φY`.
pub fn expected_torsion(m: &SasakianModel, p: &[f64], x: &[f64], y: &[f64]) -> Vec<f64> {
    let eta = m.eta(p);
    let phi = m.phi(p);
    let (fx, fy) = (phi.mul_vec(x), phi.mul_vec(y));
    let (ex, ey) = (dot(&eta, x), dot(&eta, y));
    (0..x.len()).map(|k| ey * fx[k] - ex * fy[k]).collect()
}

pub const QS_CHECKS: &[CheckSpec] = &[
    CheckSpec::new("qs.constructions_agree", "∇̄_X Y − K(X,Y) − η(X)φY = ∇̄*_X Y + K(X,Y) − η(X)φY", TolClass::Exact),
    CheckSpec::new("qs.metric", "(D̃_X ρ̃)(Y,Z) = 0", TolClass::Ad),
    CheckSpec::new("qs.torsion", "T(X,Y) = η(Y)φX − η(X)φY", TolClass::Ad),
    CheckSpec::new("qs.torsion_antisymmetric", "T(X,Y) + T(Y,X) = 0", TolClass::Ad),
    CheckSpec::new("qs.phi_derivative", "(D̃_X φ)Y = ρ̃(X,Y)ν − η(Y)X", TolClass::Ad),
    CheckSpec::new("qs.nu_derivative", "D̃_X ν = −φX + η(D̃_X ν)ν", TolClass::Ad),
    CheckSpec::new("qs.phi_nu_consistency", "φ(D̃_X ν) = −(D̃_X φ)ν", TolClass::Ad),
];

const SALT: u64 = 31;

pub fn check_qs_axioms(a: &Ambient, samples: &[Vec<f64>], seed: u64, tols: &Tolerances) -> Result<Vec<ResidualReport>> {
    check_qs_axioms_with(a, Conn::Qs, samples, seed, tols)
}

/// The same residuals with `conn` in place of `D̃`; other choices serve as
/// negative controls.
pub fn check_qs_axioms_with(
    a: &Ambient,
    conn: Conn,
    samples: &[Vec<f64>],
    seed: u64,
    tols: &Tolerances,
) -> Result<Vec<ResidualReport>> {
    let m = model(a)?;
    let d = a.dim();
    require_samples(samples, d)?;
    let phi_t = PhiTensor(m);
    let reeb = Reeb(m);
    let rows = map_points(samples, |i, p| {
        let f = probe_fields(d, seed, i, SALT, 3);
        let (x, y, z) = (&f[0], &f[1], &f[2]);
        let (xv, yv) = (x.eval(p), y.eval(p));
        let ch = christoffel(a, p)?;
        let nu: Vec<f64> = m.nu();
        let phi = m.phi(p);
        let eta = m.eta(p);
        let fx = phi.mul_vec(&xv);

        let v1 = a.connection_with(Conn::Qs, &ch, x, y, p);
        let v2 = a.connection_with(Conn::QsFromDual, &ch, x, y, p);
        let agree: Vec<f64> = (0..d).map(|k| v1[k] - v2[k]).collect();

        let txy = torsion_with(a, &ch, conn, x, y, p)?;
        let tyx = torsion_with(a, &ch, conn, y, x, p)?;
        let want = expected_torsion(m, p, &xv, &yv);
        let tres: Vec<f64> = (0..d).map(|k| txy[k] - want[k]).collect();
        let anti: Vec<f64> = (0..d).map(|k| txy[k] + tyx[k]).collect();

        let fy = Applied { t: &phi_t, x: y };
        let dphi_y: Vec<f64> = {
            let outer = a.connection_with(conn, &ch, x, &fy, p);
            let inner = phi.mul_vec(&a.connection_with(conn, &ch, x, y, p));
            (0..d).map(|k| outer[k] - inner[k]).collect()
        };
        let gxy = bilinear(&ch.g, &xv, &yv);
        let ey = dot(&eta, &yv);
        let phi_res: Vec<f64> = (0..d).map(|k| dphi_y[k] - gxy * nu[k] + ey * xv[k]).collect();

        let dnu = a.connection_with(conn, &ch, x, &reeb, p);
        let en = dot(&eta, &dnu);
        let nu_res: Vec<f64> = (0..d).map(|k| dnu[k] + fx[k] - en * nu[k]).collect();

        // (D̃_X φ)ν = D̃_X(φν) − φ D̃_X ν with φν = 0
        let phinu = Applied { t: &phi_t, x: &reeb };
        let outer = a.connection_with(conn, &ch, x, &phinu, p);
        let fdnu = phi.mul_vec(&dnu);
        let dphi_nu: Vec<f64> = (0..d).map(|k| outer[k] - fdnu[k]).collect();
        let cons: Vec<f64> = (0..d).map(|k| fdnu[k] + dphi_nu[k]).collect();

        Ok(vec![
            Outcome::Residual(norm(&agree)),
            Outcome::Residual(metric_derivative(a, &ch, conn, x, y, z, p).abs()),
            Outcome::Residual(norm(&tres)),
            Outcome::Residual(norm(&anti)),
            Outcome::Residual(norm(&phi_res)),
            Outcome::Residual(norm(&nu_res)),
            Outcome::Residual(norm(&cons)),
        ])
    })?;
    Ok(aggregate_all(QS_CHECKS, tols, &rows, &BTreeMap::new()))
}
