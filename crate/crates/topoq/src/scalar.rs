//! Real scalar abstraction for the numerical core.
//!
//! Everything numeric in this crate is dense complex linear algebra over a
//! real floating-point type. The [`Scalar`] trait bundles the num-traits
//! bounds the core needs and attaches the per-precision tolerances used as
//! defaults by verification routines. `f64` is the intended precision for
//! all the shipped checks; `f32` is supported for callers that want it,
//! with correspondingly looser default tolerances.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign};

/// Real scalar type underlying all complex matrices in this crate.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Default absolute tolerance for verification identities.
    fn default_tol() -> Self;

    /// Tight tolerance for identities that hold to machine precision.
    fn strict_tol() -> Self;

    /// Magnitude below which a negative probability is treated as rounding
    /// noise and clamped to zero. Anything more negative is an internal error.
    fn prob_floor() -> Self;

    /// Lossy conversion from `f64`, for tolerance and weight literals.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }

    /// Lossy conversion from `usize`, for dimension-derived factors.
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize conversion")
    }
}

impl Scalar for f64 {
    fn default_tol() -> Self {
        1e-9
    }

    fn strict_tol() -> Self {
        1e-12
    }

    fn prob_floor() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn default_tol() -> Self {
        1e-4
    }

    fn strict_tol() -> Self {
        1e-5
    }

    fn prob_floor() -> Self {
        1e-6
    }
}
