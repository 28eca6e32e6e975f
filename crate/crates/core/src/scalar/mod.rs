//! Coefficient rings and truncated power series in the formal parameter h.

mod bigcomplex;
mod gaussian;
mod poly;
mod qnum;
mod series;

pub use bigcomplex::{bits_for_digits, BigComplex, Float, DEFAULT_DIGITS};
pub use gaussian::GaussianRational;
pub use poly::{lagrange_interpolate, Poly};
pub use qnum::{exp_scaled, q_dim, q_factorial, q_integer, q_pow};
pub use series::Series;

use num_rational::BigRational;
use std::fmt::Debug;

/// Commutative ring with unit. Methods take references and return fresh values.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(n: i64) -> Self;
    /// Multiply by an exact rational number.
    fn scale_q(&self, r: &BigRational) -> Self;

    fn add_assign(&mut self, rhs: &Self) {
        *self = self.add(rhs);
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// Ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }
}

/// Coefficients that exact Gaussian rationals can be embedded into.
pub trait FromGaussian: Ring {
    type Ctx: Copy + Send + Sync + Debug;
    fn from_gaussian(g: &GaussianRational, ctx: Self::Ctx) -> Self;
}
