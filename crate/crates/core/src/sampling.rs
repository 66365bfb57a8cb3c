//! Deterministic sampling of parameter boxes.

use crate::error::{GeomError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Axis-aligned box `[lo_i, hi_i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Domain {
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        Domain { lo: vec![lo; dim], hi: vec![hi; dim] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.lo.len() != self.hi.len() || self.lo.is_empty() {
            return Err(GeomError::Usage("domain bounds have mismatched or zero length".into()));
        }
        for (i, (a, b)) in self.lo.iter().zip(&self.hi).enumerate() {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(GeomError::Usage(format!("degenerate domain in coordinate {}: [{a}, {b}]", i + 1)));
            }
        }
        Ok(())
    }
}

/// `n` uniform points in the box from a ChaCha8 stream seeded with `seed`.
pub fn sample_points(domain: &Domain, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    domain.validate()?;
    if n == 0 {
        return Err(GeomError::Usage("sample count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| domain.lo.iter().zip(&domain.hi).map(|(&a, &b)| rng.gen_range(a..b)).collect())
        .collect())
}

/// Independent stream for auxiliary random choices tied to one sample.
pub fn point_rng(seed: u64, index: usize, salt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(index as u64 + 1);
    rng
}

/// Evaluate `f` at every point in parallel; results keep point order and
/// the first error (in point order) wins.
pub fn map_points<T, F>(points: &[Vec<f64>], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &[f64]) -> Result<T> + Sync,
{
    let results: Vec<Result<T>> = points.par_iter().enumerate().map(|(i, p)| f(i, p)).collect();
    results.into_iter().collect()
}
