//! Scalar abstraction shared by every module.
//!
//! All geometry is written against [`Scalar`], which is implemented for `f32`
//! and `f64`. Complex-valued quantities (conjugate Darboux data, isotropic
//! points) use [`nalgebra::Complex`] over the same scalar.

use std::fmt::{Debug, Display, LowerExp};
use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

pub use nalgebra::Complex;

/// Real floating point type usable by the toolkit.
pub trait Scalar:
    RealField + Copy + FromPrimitive + ToPrimitive + LowerExp + Debug + Display + Send + Sync + 'static
{
    /// Relative tolerance used by residual predicates when nothing overrides it.
    const DEFAULT_TOL: f64;

    /// Converts a literal into the scalar type.
    fn lit(x: f64) -> Self;

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const DEFAULT_TOL: f64 = 1e-9;

    #[inline]
    fn lit(x: f64) -> Self {
        x
    }
}

impl Scalar for f32 {
    const DEFAULT_TOL: f64 = 1e-4;

    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }
}

// f64 bit pattern; zero means "no override".
static TOLERANCE_OVERRIDE: AtomicU64 = AtomicU64::new(0);

/// Overrides the process-wide residual tolerance (`None` restores the default).
pub fn set_global_tolerance(tol: Option<f64>) {
    let bits = match tol {
        Some(t) if t > 0.0 && t.is_finite() => t.to_bits(),
        _ => 0,
    };
    TOLERANCE_OVERRIDE.store(bits, Ordering::Relaxed);
}

/// The active residual tolerance for scalar type `S`.
pub fn tolerance<S: Scalar>() -> S {
    match TOLERANCE_OVERRIDE.load(Ordering::Relaxed) {
        0 => S::lit(S::DEFAULT_TOL),
        bits => S::lit(f64::from_bits(bits).max(S::DEFAULT_TOL * 1e-6)),
    }
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn approx_eq<S: Scalar>(a: S, b: S, tol: S) -> bool {
    let scale = S::one().max(a.abs()).max(b.abs());
    (a - b).abs() <= tol * scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tolerances() {
        assert_eq!(f64::DEFAULT_TOL, 1e-9);
        assert!(f32::DEFAULT_TOL > f64::from(f32::EPSILON));
    }

    #[test]
    fn relative_comparison() {
        assert!(approx_eq(1.0e6_f64, 1.0e6 + 1e-4, 1e-9));
        assert!(!approx_eq(1.0_f64, 1.0 + 1e-6, 1e-9));
    }
}
