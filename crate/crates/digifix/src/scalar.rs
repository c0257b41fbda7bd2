//! Scalar abstraction for distance values.
//!
//! Every distance-valued computation in this crate is generic over [`Real`],
//! implemented for `f32` and `f64`. Lattice coordinates are always exact
//! `i64`; only derived quantities (distances, coefficients, margins) live in
//! the scalar type.

use core::fmt;

/// Floating point scalar used for distances, coefficients and margins.
pub trait Real: num_traits::Float + num_traits::FromPrimitive + fmt::Debug + fmt::Display {}

impl Real for f32 {}
impl Real for f64 {}

/// Widens an `f64` constant into the scalar type.
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must convert into the scalar type")
}

/// Widens an unsigned integer into the scalar type.
///
/// Exact for values below the mantissa width of `T` (2^53 for `f64`).
pub fn real_u64<T: Real>(x: u64) -> T {
    T::from_u64(x).expect("u64 value must convert into the scalar type")
}

/// Absolute tolerance applied to every inequality check on distances.
///
/// Non-strict inequalities `lhs <= rhs` are accepted when `lhs <= rhs + tol`;
/// strict inequalities `lhs < rhs` require `lhs < rhs - tol`. Reports always
/// carry raw margins, the tolerance only affects verdicts.
pub fn default_tolerance<T: Real>() -> T {
    real(1e-9)
}
