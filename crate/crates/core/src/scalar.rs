//! Scalars with exact forward-mode derivatives.
//!
//! Every geometric object in the crate is evaluated through the [`Scalar`]
//! trait, so the same code path yields plain values (`f64`), first
//! directional derivatives (`Dual<f64>`), and second derivatives
//! (`Dual<Dual<f64>>`). Nesting duals is how mixed second derivatives are
//! obtained: the outer infinitesimal carries one direction, the inner one
//! carries another.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Numeric carrier for all field evaluations.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn cst(v: f64) -> Self;
    /// The real (non-infinitesimal) part.
    fn re(&self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;

    fn zero() -> Self {
        Self::cst(0.0)
    }
    fn one() -> Self {
        Self::cst(1.0)
    }
    fn scale(self, k: f64) -> Self {
        self * Self::cst(k)
    }
    fn powi(self, n: i32) -> Self {
        if n < 0 {
            return Self::one() / self.powi(-n);
        }
        let mut acc = Self::one();
        for _ in 0..n {
            acc *= self;
        }
        acc
    }
}

impl Scalar for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn re(&self) -> f64 {
        *self
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

/// `re + eps·ε` with `ε² = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<S> {
    pub re: S,
    pub eps: S,
}

/// First-order dual over `f64`.
pub type D1 = Dual<f64>;
/// Second-order (nested) dual over `f64`.
pub type D2 = Dual<D1>;

impl<S: Scalar> Dual<S> {
    #[inline]
    pub fn new(re: S, eps: S) -> Self {
        Dual { re, eps }
    }

    /// A value seeded with unit derivative along the tracked direction.
    pub fn variable(re: S) -> Self {
        Dual { re, eps: S::one() }
    }

    pub fn constant(re: S) -> Self {
        Dual { re, eps: S::zero() }
    }
}

/// Lift a point `p` to duals moving along `dir`.
pub fn seed<S: Scalar>(p: &[S], dir: &[S]) -> Vec<Dual<S>> {
    debug_assert_eq!(p.len(), dir.len());
    p.iter().zip(dir).map(|(&a, &b)| Dual::new(a, b)).collect()
}

/// Lift a point to duals with zero derivative.
pub fn lift<S: Scalar>(p: &[S]) -> Vec<Dual<S>> {
    p.iter().map(|&a| Dual::constant(a)).collect()
}

pub fn real_parts<S: Scalar>(v: &[Dual<S>]) -> Vec<S> {
    v.iter().map(|d| d.re).collect()
}

pub fn eps_parts<S: Scalar>(v: &[Dual<S>]) -> Vec<S> {
    v.iter().map(|d| d.eps).collect()
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Dual::new(self.re + o.re, self.eps + o.eps)
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Dual::new(self.re - o.re, self.eps - o.eps)
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Dual::new(self.re * o.re, self.re * o.eps + self.eps * o.re)
    }
}

impl<S: Scalar> Div for Dual<S> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let inv = S::one() / o.re;
        let q = self.re * inv;
        Dual::new(q, (self.eps - q * o.eps) * inv)
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.eps)
    }
}

impl<S: Scalar> AddAssign for Dual<S> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<S: Scalar> SubAssign for Dual<S> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<S: Scalar> MulAssign for Dual<S> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<S: Scalar> Scalar for Dual<S> {
    #[inline]
    fn cst(v: f64) -> Self {
        Dual::constant(S::cst(v))
    }
    #[inline]
    fn re(&self) -> f64 {
        self.re.re()
    }
    fn sin(self) -> Self {
        Dual::new(self.re.sin(), self.eps * self.re.cos())
    }
    fn cos(self) -> Self {
        Dual::new(self.re.cos(), -(self.eps * self.re.sin()))
    }
    fn sinh(self) -> Self {
        Dual::new(self.re.sinh(), self.eps * self.re.cosh())
    }
    fn cosh(self) -> Self {
        Dual::new(self.re.cosh(), self.eps * self.re.sinh())
    }
    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual::new(e, self.eps * e)
    }
    fn ln(self) -> Self {
        Dual::new(self.re.ln(), self.eps / self.re)
    }
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        Dual::new(s, self.eps / (s + s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let x = Dual::variable(3.0);
        let f = x * x + Dual::cst(2.0) * x;
        assert_eq!(f.re, 15.0);
        assert_eq!(f.eps, 8.0);
    }

    #[test]
    fn quotient_and_transcendentals() {
        let x = Dual::variable(0.7_f64);
        let f = x.sin() / x.cosh();
        let d = (0.7f64.cos() * 0.7f64.cosh() - 0.7f64.sin() * 0.7f64.sinh()) / 0.7f64.cosh().powi(2);
        assert!((f.eps - d).abs() < 1e-14);
    }

    #[test]
    fn nested_dual_gives_second_derivative() {
        // f(x) = x^3 sin x, f'' = 6x sin x + 6x^2 cos x - x^3 sin x
        let x0 = 0.4_f64;
        let inner = Dual::new(x0, 1.0);
        let x: D2 = Dual::new(inner, Dual::new(1.0, 0.0));
        let f = x * x * x * x.sin();
        let want = 6.0 * x0 * x0.sin() + 6.0 * x0 * x0 * x0.cos() - x0.powi(3) * x0.sin();
        assert!((f.eps.eps - want).abs() < 1e-13);
    }

    #[test]
    fn powi_negative() {
        let x = Dual::variable(2.0_f64);
        let f = x.powi(-2);
        assert!((f.re - 0.25).abs() < 1e-15);
        assert!((f.eps + 0.25).abs() < 1e-15);
    }
}
