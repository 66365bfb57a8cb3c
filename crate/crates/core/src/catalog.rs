//! Built-in ambient models, immersions and controls, plus the text config
//! for custom immersions.

use crate::ambient::Ambient;
use crate::error::{GeomError, Result};
use crate::expr::Expr;
use crate::fields::ExprMap;
use crate::lightlike::Immersion;
use crate::sampling::Domain;
use std::collections::BTreeMap;

pub const ENTRY_NAMES: &[&str] = &["example_3_2", "null_line", "invariant_plane", "geodesic_subspace"];

pub const DEFAULT_ALPHA: f64 = 0.4;
pub const DEFAULT_LAMBDA: f64 = 0.3;

/// How the 13-tuple of the example is placed into `(x¹..x⁶, y¹..y⁶, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mapping {
    /// Tuple entries taken in slot order.
    BasisOrder,
    /// Tuple read as `(x₁, y₁, x₂, y₂, …, z)`.
    Interleaved,
}

impl std::str::FromStr for Mapping {
    type Err = GeomError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basis_order" => Ok(Mapping::BasisOrder),
            "interleaved" => Ok(Mapping::Interleaved),
            _ => Err(GeomError::Usage(format!("unknown mapping '{s}' (basis_order | interleaved)"))),
        }
    }
}

/// Stored expectations; the suite re-derives each one.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Expected {
    pub r: Option<usize>,
    pub sgl: Option<bool>,
    pub e_prime: Option<usize>,
    pub totally_geodesic: bool,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub ambient: Ambient,
    pub immersion: Immersion,
    pub expected: Expected,
}

#[derive(Clone, Copy, Debug)]
pub struct EntryParams {
    pub lambda: f64,
    pub alpha: f64,
    pub mapping: Mapping,
}

impl Default for EntryParams {
    fn default() -> Self {
        EntryParams { lambda: DEFAULT_LAMBDA, alpha: DEFAULT_ALPHA, mapping: Mapping::Interleaved }
    }
}

/// The flat Sasakian model on R^(2n+1) of index 2q with `K = λη⊗η⊗ν`.
pub fn build_ambient(n: usize, q: usize, lambda: f64) -> Result<Ambient> {
    Ambient::sasakian(n, q, lambda)
}

fn u(k: usize) -> Expr {
    Expr::var(k - 1)
}

/// The 7-parameter example in R¹³₆.
pub fn example_immersion(alpha: f64, mapping: Mapping) -> Result<Immersion> {
    let (ca, sa, ch, sh) = (alpha.cos(), alpha.sin(), alpha.cosh(), alpha.sinh());
    let c = Expr::c;
    let tuple = vec![
        c(0.0),
        u(5) * c(ca),
        -u(5),
        -u(6),
        u(1) * c(ch),
        u(2) * c(ch),
        u(1) * c(sh) - u(2),
        u(1) + u(2) * c(sh),
        u(5) * c(sa),
        u(6) * c(sa),
        u(3).sin() * u(4).sinh(),
        u(3).cos() * u(4).cosh(),
        u(7),
    ];
    let comps = match mapping {
        Mapping::BasisOrder => tuple,
        Mapping::Interleaved => {
            let mut slots = vec![Expr::c(0.0); 13];
            for (i, e) in tuple.into_iter().enumerate() {
                let slot = if i == 12 { 12 } else if i % 2 == 0 { i / 2 } else { 6 + i / 2 };
                slots[slot] = e;
            }
            slots
        }
    };
    Immersion::new("example_3_2", ExprMap::new(7, comps), Domain::cube(7, -1.0, 1.0))
}

pub fn entry(name: &str, p: &EntryParams) -> Result<CatalogEntry> {
    let e = match name {
        "example_3_2" => CatalogEntry {
            name: name.into(),
            ambient: build_ambient(6, 3, p.lambda)?,
            immersion: example_immersion(p.alpha, p.mapping)?,
            expected: Expected { sgl: Some(true), ..Default::default() },
        },
        "null_line" => CatalogEntry {
            name: name.into(),
            ambient: Ambient::flat(vec![-1.0, 1.0]),
            immersion: Immersion::new(name, ExprMap::new(1, vec![u(1), u(1)]), Domain::cube(1, -1.0, 1.0))?,
            expected: Expected { r: Some(1), ..Default::default() },
        },
        "invariant_plane" => CatalogEntry {
            name: name.into(),
            ambient: build_ambient(3, 1, p.lambda)?,
            // (x¹, x², x³, y¹, y², y³, z)
            immersion: Immersion::new(
                name,
                ExprMap::new(5, vec![u(1), u(1), u(3), u(2), u(2), u(4), u(5)]),
                Domain::cube(5, -1.0, 1.0),
            )?,
            expected: Expected { r: Some(2), sgl: Some(true), e_prime: Some(0), ..Default::default() },
        },
        "geodesic_subspace" => CatalogEntry {
            name: name.into(),
            ambient: build_ambient(2, 1, p.lambda)?,
            // (x¹, x², y¹, y², z) on the slice x² = y² = 0
            immersion: Immersion::new(
                name,
                ExprMap::new(3, vec![u(1), Expr::c(0.0), u(2), Expr::c(0.0), u(3)]),
                Domain::cube(3, -0.5, 0.5),
            )?,
            expected: Expected { r: Some(0), e_prime: Some(0), totally_geodesic: true, ..Default::default() },
        },
        _ => {
            return Err(GeomError::Usage(format!("unknown entry '{name}' (known: {})", ENTRY_NAMES.join(", "))));
        }
    };
    Ok(e)
}

/// Parse a custom immersion:
///
/// ```text
/// ambient 2 1 0.3
/// params 2
/// component_1 = u1
/// component_2 = sin(u2)
/// ...
/// domain -1 1
/// ```
///
/// Missing components are zero; the domain defaults to `[-1, 1]^m`.
pub fn parse_config(name: &str, text: &str) -> Result<CatalogEntry> {
    let mut ambient = None;
    let mut params = None;
    let mut domain = None;
    let mut comps: BTreeMap<usize, Expr> = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| GeomError::Usage(format!("config line {}: {msg}", ln + 1));
        if let Some((lhs, rhs)) = line.split_once('=') {
            let k = lhs
                .trim()
                .strip_prefix("component_")
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&k| k >= 1)
                .ok_or_else(|| bad("expected 'component_k = <expression>'"))?;
            let e = Expr::parse(rhs.trim()).map_err(|e| bad(&e.to_string()))?;
            if comps.insert(k, e).is_some() {
                return Err(bad(&format!("component_{k} given twice")));
            }
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let nums = |n: usize| -> Result<Vec<f64>> {
            if words.len() != n + 1 {
                return Err(bad(&format!("'{}' takes {n} values", words[0])));
            }
            words[1..].iter().map(|w| w.parse::<f64>().map_err(|_| bad(&format!("not a number: {w}")))).collect()
        };
        match words[0] {
            "ambient" => {
                let v = nums(3)?;
                if v[0] < 1.0 || v[0].fract() != 0.0 || v[1] < 0.0 || v[1].fract() != 0.0 {
                    return Err(bad("n and q must be non-negative integers, n ≥ 1"));
                }
                ambient = Some(build_ambient(v[0] as usize, v[1] as usize, v[2])?);
            }
            "params" => {
                let v = nums(1)?;
                if v[0] < 1.0 || v[0].fract() != 0.0 {
                    return Err(bad("params must be a positive integer"));
                }
                params = Some(v[0] as usize);
            }
            "domain" => {
                let v = nums(2)?;
                domain = Some((v[0], v[1]));
            }
            w => return Err(bad(&format!("unknown directive '{w}'"))),
        }
    }
    let ambient = ambient.ok_or_else(|| GeomError::Usage("config has no 'ambient' line".into()))?;
    let m = params.ok_or_else(|| GeomError::Usage("config has no 'params' line".into()))?;
    let d = ambient.dim();
    if let Some((&k, _)) = comps.iter().next_back().filter(|(&k, _)| k > d) {
        return Err(GeomError::Usage(format!("component_{k} exceeds the ambient dimension {d}")));
    }
    let exprs = (1..=d).map(|k| comps.remove(&k).unwrap_or(Expr::c(0.0))).collect();
    let (lo, hi) = domain.unwrap_or((-1.0, 1.0));
    let immersion = Immersion::new(name, ExprMap::new(m, exprs), Domain::cube(m, lo, hi))?;
    Ok(CatalogEntry { name: name.into(), ambient, immersion, expected: Expected::default() })
}
